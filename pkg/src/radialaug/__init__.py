"""radialaug: deterministic image augmentation built on polar-coordinate
radial resampling, with an affine baseline, seeded dataset expansion, and
a small evaluation harness."""

from .raster import (
    FILL_CLAMP,
    FILL_MODES,
    FILL_ZERO,
    Pole,
    get_pixel,
    nn_resize,
    require_image,
    resolve_sample,
    round_half_away,
)
from .radial import (
    RadialOutput,
    RadialParams,
    enumerate_pole_transforms,
    radial_offsets,
    radial_transform,
    radial_transform_batch,
    radial_transform_naive,
    ray_angle,
)
from .affine import (
    AffineParams,
    AffineSampler,
    affine_transform,
    compose_matrix,
    draw_params,
    resolve_center,
)
from .dataset_io import (
    DatasetError,
    DecodeError,
    LabeledDataset,
    ManifestError,
    ManifestRecord,
    UnsupportedImageError,
    encode_pgm,
    load_dataset,
    read_image,
    read_manifest,
    write_image,
    write_manifest,
)
from .expand import (
    ExpansionError,
    ExpansionPlan,
    derive_item_seed,
    expand,
    pick_pole,
    replay_record,
)
from .evaluate import (
    EvalError,
    EvalReport,
    KnnModel,
    NearestCentroidModel,
    accuracy_per_class,
    build_report,
    confidence_per_class,
    majority_label,
    run_experiment,
    summarize_reports,
    vote_labels,
    write_report,
)
from .synth import SHAPE_CLASSES, make_shapes_dataset, shape_image

__version__ = "0.1.0"
