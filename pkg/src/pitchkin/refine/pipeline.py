"""The full refinement stack: bone lengths -> joint-limited IK -> smoothing
-> symmetry -> final length re-projection."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ..backend import BACKEND
from ..core import JointId as J, PoseSequence
from .bones import bone_length_deviation, enforce_bone_lengths
from .ik import fk_sequence, solve_sequence
from .skeleton import SkeletonModel, reference_skeleton
from .smoothing import check_filter_params, savgol_series, smooth_sequence
from .symmetry import enforce_symmetry, pelvis_centering_error


@dataclass
class RefineConfig:
    """Stage toggles and solver parameters for :func:`refine_pipeline`."""

    passes: int = 3
    reference_frames: int = 30
    ik: bool = True
    ik_max_iter: int = 50
    ik_tol_deg: float = 1e-4
    ik_damping: float = 1e-3
    smooth: bool = True
    smooth_window: int = 15
    smooth_order: int = 3
    symmetry: bool = True
    skeleton: SkeletonModel | None = None
    limit_table: dict | None = None
    weight_table: dict | None = None


@dataclass
class RefineResult:
    sequence: PoseSequence
    skeleton: SkeletonModel
    angles: np.ndarray | None  # (T, 22) when the IK stage ran
    report: dict = field(default_factory=dict)


def refine_pipeline(seq: PoseSequence, config: RefineConfig | None = None) -> RefineResult:
    """Run the refinement stack on a global-space sequence.

    Smoothing operates on the IK joint-angle trajectories (clamped back to
    the limit box, so lengths and limits survive the filter exactly); with
    the IK stage disabled it falls back to position-space filtering.  The
    last stage re-projects bone lengths once so every edge matches the
    final (symmetrised) skeleton.
    """
    cfg = config or RefineConfig()
    report: dict = {"backend": BACKEND}

    skeleton = cfg.skeleton
    if skeleton is None:
        skeleton = reference_skeleton(
            seq, cfg.reference_frames, cfg.limit_table, cfg.weight_table
        )
        report["skeleton"] = {
            "estimated": True,
            "reference_frames": cfg.reference_frames,
            "max_pair_gap_ft": skeleton.max_pair_gap(),
        }
    else:
        report["skeleton"] = {"estimated": False,
                              "max_pair_gap_ft": skeleton.max_pair_gap()}

    dev_before = bone_length_deviation(seq.xyz, skeleton)
    current = enforce_bone_lengths(seq, skeleton, cfg.passes)
    report["bones"] = {
        "passes": cfg.passes,
        "max_deviation_before_ft": dev_before,
        "max_deviation_after_ft": bone_length_deviation(current.xyz, skeleton),
        "degenerate_bones": current.flags.get("degenerate_bones", 0),
    }

    angles = None
    if cfg.ik:
        qs, costs, ok = solve_sequence(
            current.xyz, skeleton, max_iter=cfg.ik_max_iter,
            tol_deg=cfg.ik_tol_deg, damping=cfg.ik_damping,
        )
        root_track = current.xyz[:, int(J.PELVIS)].copy()
        angles = qs
        report["ik"] = {
            "enabled": True,
            "mean_cost": float(np.mean(costs)),
            "max_cost": float(np.max(costs)),
            "frames_nonconverged": int(np.count_nonzero(~ok)),
        }
        if cfg.smooth:
            check_filter_params(cfg.smooth_window, cfg.smooth_order)
            if len(current) >= cfg.smooth_window:
                angles = savgol_series(qs, cfg.smooth_window, cfg.smooth_order, axis=0)
                angles = np.clip(angles, skeleton.limits_lo, skeleton.limits_hi)
                root_track = savgol_series(root_track, cfg.smooth_window,
                                           cfg.smooth_order, axis=0)
                report["smoothing"] = {"enabled": True, "channel": "angles"}
            else:
                warnings.warn("sequence shorter than smoothing window; "
                              "smoothing skipped", stacklevel=2)
                report["smoothing"] = {"enabled": False, "channel": "too_short"}
        else:
            report["smoothing"] = {"enabled": False, "channel": "disabled"}
        current = current.with_xyz(fk_sequence(angles, root_track, skeleton))
        margin = float(np.max(np.maximum(angles - skeleton.limits_hi,
                                         skeleton.limits_lo - angles)))
        report["ik"]["limit_margin_deg"] = margin  # <= 0 means inside the box
    else:
        report["ik"] = {"enabled": False}
        if cfg.smooth:
            current = smooth_sequence(current, cfg.smooth_window, cfg.smooth_order)
            report["smoothing"] = {"enabled": True, "channel": "positions"}
        else:
            report["smoothing"] = {"enabled": False, "channel": "disabled"}

    if cfg.symmetry:
        recentre = pelvis_centering_error(current.xyz)
        current, skeleton = enforce_symmetry(current, skeleton)
        report["symmetry"] = {
            "enabled": True,
            "pelvis_recentre_max_ft": recentre,
            "max_pair_gap_ft": skeleton.max_pair_gap(),
        }
    else:
        report["symmetry"] = {"enabled": False}

    current = enforce_bone_lengths(current, skeleton, passes=1)
    report["final"] = {
        "max_deviation_ft": bone_length_deviation(current.xyz, skeleton),
    }
    return RefineResult(sequence=current, skeleton=skeleton, angles=angles,
                        report=report)
