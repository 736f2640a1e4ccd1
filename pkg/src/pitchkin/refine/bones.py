"""Bone-length enforcement: root-outward projection of every bone onto the
reference length, iterated a fixed number of passes (forward-reaching
FABRIK-style correction)."""

from __future__ import annotations

import numpy as np

from .. import backend
from ..core import PoseSequence
from .skeleton import TOPO, SkeletonModel


def enforce_bone_lengths(seq: PoseSequence, skeleton: SkeletonModel,
                         passes: int = 3) -> PoseSequence:
    """Rescale every bone to its reference length, traversing root-outward.

    The pelvis is never moved.  Each child is placed at the reference
    length from its (already corrected) parent along the current predicted
    direction; a near-zero predicted bone (< 1e-6 ft) reuses the direction
    used at the previous frame (reference-skeleton direction at frame 0).
    """
    out_xyz, n_degenerate = backend.bone_pass(
        seq.xyz, TOPO, skeleton.lengths, skeleton.rest_dirs, int(passes)
    )
    out = seq.with_xyz(out_xyz)
    if n_degenerate:
        out.flags["degenerate_bones"] = int(n_degenerate)
    return out


def bone_length_deviation(xyz, skeleton: SkeletonModel) -> float:
    """Max |bone length - reference length| over all frames and edges, ft."""
    xyz = np.asarray(xyz, dtype=np.float64)
    if xyz.ndim == 2:
        xyz = xyz[None]
    worst = 0.0
    for p, c in TOPO:
        d = np.linalg.norm(xyz[:, c] - xyz[:, p], axis=1) - skeleton.lengths[c]
        worst = max(worst, float(np.abs(d).max()))
    return worst
