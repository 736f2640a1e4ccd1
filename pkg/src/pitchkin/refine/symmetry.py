"""Bilateral symmetry: shared left/right bone lengths and a hip-centred
pelvis."""

from __future__ import annotations

import numpy as np

from ..core import JointId as J, PoseSequence
from .bones import enforce_bone_lengths
from .skeleton import SkeletonModel


def enforce_symmetry(seq: PoseSequence, skeleton: SkeletonModel):
    """Tie paired bone lengths to their means and centre the pelvis.

    The pelvis is moved to the left/right hip midpoint in every frame and
    the sequence is re-projected onto the symmetrised skeleton.  Returns
    ``(sequence, skeleton)``.  Idempotent: once centred, the hip directions
    from the pelvis are exactly opposite, so a second application is a
    no-op.
    """
    sym = skeleton.symmetrized()
    xyz = seq.xyz.copy()
    xyz[:, int(J.PELVIS)] = 0.5 * (xyz[:, int(J.L_HIP)] + xyz[:, int(J.R_HIP)])
    out = enforce_bone_lengths(seq.with_xyz(xyz), sym, passes=1)
    return out, sym


def pelvis_centering_error(xyz) -> float:
    """Max distance between the pelvis and the hip midpoint, ft."""
    xyz = np.asarray(xyz, dtype=np.float64)
    if xyz.ndim == 2:
        xyz = xyz[None]
    mid = 0.5 * (xyz[:, int(J.L_HIP)] + xyz[:, int(J.R_HIP)])
    return float(np.linalg.norm(xyz[:, int(J.PELVIS)] - mid, axis=1).max())
