"""Biomechanics refinement stack: reference skeleton, bone-length
enforcement, joint-limited IK, smoothing, and symmetry constraints."""

from .bones import bone_length_deviation, enforce_bone_lengths
from .ik import IkResult, JointAngles, fk, fk_sequence, ik_fit, solve_sequence
from .pipeline import RefineConfig, RefineResult, refine_pipeline
from .skeleton import (
    BONES,
    N_DOF,
    PAIRED_BONES,
    SkeletonModel,
    load_skeleton_config,
    reference_skeleton,
    skeleton_from_pose,
)
from .smoothing import savgol_series, smooth_sequence
from .symmetry import enforce_symmetry, pelvis_centering_error

__all__ = [
    "BONES",
    "N_DOF",
    "PAIRED_BONES",
    "IkResult",
    "JointAngles",
    "RefineConfig",
    "RefineResult",
    "SkeletonModel",
    "bone_length_deviation",
    "enforce_bone_lengths",
    "enforce_symmetry",
    "fk",
    "fk_sequence",
    "ik_fit",
    "load_skeleton_config",
    "pelvis_centering_error",
    "reference_skeleton",
    "refine_pipeline",
    "savgol_series",
    "skeleton_from_pose",
    "smooth_sequence",
    "solve_sequence",
]
