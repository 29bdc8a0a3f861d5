"""Single-frame infrared small-target detection.

Pipeline: multilayer gray difference saliency over concentric ring means,
an Otsu gate on the saliency map, per-candidate Gaussian scale estimation,
and a Hessian-eigenvalue isotropy constraint that suppresses ridge- and
edge-like clutter while keeping bright isotropic caps. Ships with classical
baselines (Top-Hat, Max-Median, DoG), a ground-truthed synthetic scene
generator, and an SCR/SCRG/ROC evaluation harness.
"""

__version__ = "0.1.0"

from .baselines import dog, max_median, tophat
from .detector import (
    CandidateDebug,
    DetectorConfig,
    Detection,
    DetectionSet,
    PipelineResult,
    apply_isotropic_constraint,
    detect,
    otsu_threshold,
    run_pipeline,
    segment_and_extract,
)
from .evaluation import (
    EvalReport,
    GroundTruth,
    RocPoint,
    detection_rate_at,
    match_detections,
    roc_curve,
    scr,
    scrg,
)
from .frames import PgmError, as_frame, convolve, load_frame, save_frame
from .hessian import (
    DerivativeKernelSet,
    HessianSample,
    derivative_kernels,
    eigenvalues,
    hessian_at,
    isotropy_ratio,
)
from .mgd import mgd_map, step_gate
from .rings import RingFamily, RingKernel, ring_family, ring_kernel, ring_means, ring_members
from .scale import RadialProfile, ScaleEstimate, estimate_sigma, radial_profile
from .synth import (
    ClutterSpec,
    GaussianTargetSpec,
    SceneSpec,
    clutter_field,
    load_scene_spec,
    parse_scene_text,
    render_scene,
    render_sequence,
    render_target,
)

__all__ = [
    "__version__",
    "as_frame", "convolve", "load_frame", "save_frame", "PgmError",
    "ring_members", "ring_kernel", "ring_family", "ring_means",
    "RingKernel", "RingFamily",
    "mgd_map", "step_gate",
    "radial_profile", "estimate_sigma", "RadialProfile", "ScaleEstimate",
    "derivative_kernels", "hessian_at", "eigenvalues", "isotropy_ratio",
    "DerivativeKernelSet", "HessianSample",
    "DetectorConfig", "Detection", "DetectionSet", "PipelineResult", "CandidateDebug",
    "otsu_threshold", "apply_isotropic_constraint", "segment_and_extract",
    "detect", "run_pipeline",
    "tophat", "max_median", "dog",
    "scr", "scrg", "match_detections", "roc_curve", "detection_rate_at",
    "GroundTruth", "EvalReport", "RocPoint",
    "GaussianTargetSpec", "ClutterSpec", "SceneSpec", "clutter_field",
    "render_target", "render_scene", "render_sequence",
    "parse_scene_text", "load_scene_spec",
]
