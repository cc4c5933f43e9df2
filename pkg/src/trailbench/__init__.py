"""trailbench: groundtruth generation, evaluation and statistical
comparison for narrow-path segmentation benchmarks.

The pipeline turns colour-annotated aerial images into soft groundtruth
masks, scores model predictions with confusion-based metrics over a
deterministic k-fold protocol, and compares architecture/encoder
combinations with tie-aware average rankings and the Bayesian correlated
t-test. See the `trailbench` command for the end-to-end driver.
"""

from .colour import DEFAULT_REFERENCE, HsiPixel, ReferenceColour, hsi_distance, hsi_image, rgb_to_hsi
from .extract import DegenerateNormalisationWarning, ExtractionConfig, extract_centreline, preset_threshold_3
from .folds import (
    FoldManifest,
    FoldSplit,
    load_manifest,
    make_folds,
    manifest_from_dict,
    manifest_to_dict,
    save_manifest,
    validate_manifest,
)
from .metrics import (
    METRIC_NAMES,
    ConfusionCounts,
    MetricSet,
    aggregate,
    binarise,
    confusion,
    count_defined,
    metric_set,
)
from .raster import (
    BinaryRaster,
    ImageFormatError,
    ProbRaster,
    RgbRaster,
    load_mask,
    load_prob,
    load_rgb,
    save_mask,
    save_prob,
)
from .report import HeatmapSpec, build_heatmap, render
from .softmask import (
    DistanceField,
    EmptyCentrelineWarning,
    SoftMaskConfig,
    distance_transform,
    downscale,
    gaussian_mask,
    soft_mask_from_centreline,
)
from .stats import (
    BayesResult,
    PairwiseMatrix,
    ScoreGrid,
    average_rankings,
    correlated_bayes_ttest,
    pairwise_matrix,
    rank_with_ties,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # raster
    "RgbRaster",
    "BinaryRaster",
    "ProbRaster",
    "ImageFormatError",
    "load_rgb",
    "load_prob",
    "save_prob",
    "load_mask",
    "save_mask",
    # colour
    "HsiPixel",
    "ReferenceColour",
    "DEFAULT_REFERENCE",
    "rgb_to_hsi",
    "hsi_image",
    "hsi_distance",
    # extract
    "ExtractionConfig",
    "extract_centreline",
    "preset_threshold_3",
    "DegenerateNormalisationWarning",
    # softmask
    "DistanceField",
    "SoftMaskConfig",
    "distance_transform",
    "gaussian_mask",
    "downscale",
    "soft_mask_from_centreline",
    "EmptyCentrelineWarning",
    # metrics
    "ConfusionCounts",
    "MetricSet",
    "METRIC_NAMES",
    "binarise",
    "confusion",
    "metric_set",
    "aggregate",
    "count_defined",
    # folds
    "FoldSplit",
    "FoldManifest",
    "make_folds",
    "validate_manifest",
    "manifest_to_dict",
    "manifest_from_dict",
    "save_manifest",
    "load_manifest",
    # stats
    "rank_with_ties",
    "ScoreGrid",
    "average_rankings",
    "BayesResult",
    "correlated_bayes_ttest",
    "PairwiseMatrix",
    "pairwise_matrix",
    # report
    "HeatmapSpec",
    "build_heatmap",
    "render",
]
