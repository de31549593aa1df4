"""Complex-valued parallel-beam Radon transforms and their regularized inversion."""

from .grids import (ANGULAR_MEASURE_NORM, AngularRange, GridGeometry, HybridField,
                    ImageGrid2D, Provenance, Sinogram, TauGrid, VolumeStack,
                    bilinear_sample)
from .container import (ContainerError, MagicMismatchError, MalformedHeaderError,
                        TruncatedPayloadError, read_container, write_container)
from .phantoms import (CompositeScene, GaussianBlob, RegionMask, SceneFormatError,
                       SeparableScene3D, UnsupportedOracleError, analytic_fourier,
                       analytic_radon, load_scene, rasterize, save_scene,
                       scene_from_text, scene_to_text)
from .forward import default_ray_step, direction, radon_point, radon_transform
from .slice_theorem import FstReport, SpectralSlice, fst_check, fst_lhs, fst_passed, fst_rhs
from .inversion import (Backend, Reconstruction, RegParams, delta_plus,
                        epsilon_lambda_reconstruct, finite_part_filtered,
                        invert_fa, invert_fs, invert_universal, l2_norm,
                        lambda_kernel, lambda_kernel_filtered, ramp_filtered,
                        reconstruction_metrics, tau_derivative)
from .holonomy import (HolonomyReport, PathEvaluation, Probe, ShiftPath, StepRecord,
                       UnsupportedSceneError, boundary_jump, check_holonomy,
                       classify_defect_scene, evaluate_path, extract_defect,
                       leak_tolerance, radon_masked)
from .hybrid import (VolumeReconstruction, dual_k_grid, hybrid_forward,
                     hybrid_from_scene, hybrid_inverse_series, hybrid_radon,
                     make_slices, reconstruct_volume)

__version__ = "0.1.0"

__all__ = [
    "ANGULAR_MEASURE_NORM", "AngularRange", "Backend", "CompositeScene",
    "ContainerError", "FstReport", "GaussianBlob", "GridGeometry", "HolonomyReport",
    "HybridField", "ImageGrid2D", "MagicMismatchError", "MalformedHeaderError",
    "PathEvaluation", "Probe", "Provenance", "Reconstruction", "RegParams",
    "RegionMask", "SceneFormatError", "SeparableScene3D", "ShiftPath", "Sinogram",
    "SpectralSlice", "StepRecord", "TauGrid", "TruncatedPayloadError",
    "UnsupportedOracleError", "UnsupportedSceneError", "VolumeReconstruction",
    "VolumeStack", "analytic_fourier", "analytic_radon", "bilinear_sample",
    "boundary_jump", "check_holonomy", "classify_defect_scene", "default_ray_step",
    "delta_plus", "direction", "dual_k_grid", "epsilon_lambda_reconstruct",
    "evaluate_path", "extract_defect", "finite_part_filtered", "fst_check",
    "fst_lhs", "fst_passed", "fst_rhs", "hybrid_forward", "hybrid_from_scene", "hybrid_inverse_series",
    "hybrid_radon", "invert_fa", "invert_fs", "invert_universal", "l2_norm",
    "lambda_kernel", "lambda_kernel_filtered", "leak_tolerance", "load_scene",
    "make_slices", "radon_masked", "radon_point", "radon_transform",
    "ramp_filtered", "rasterize", "read_container", "reconstruct_volume",
    "reconstruction_metrics", "save_scene", "scene_from_text", "scene_to_text",
    "tau_derivative", "write_container",
]
