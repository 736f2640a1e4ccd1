"""Kinematic tree model: topology constants, reference-skeleton estimation,
default joint limits and IK weights.

The tree is rooted at the pelvis.  All joint local frames coincide with the
world frame in the rest pose, so rest bone directions and hinge axes are
stored as world-frame vectors of the rest pose.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace

import numpy as np

from ..core import N_JOINTS, JointId as J
from ..errors import DegenerateSkeleton, LengthError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

#: (parent, child) bone list in root-outward order.
BONES = (
    (J.PELVIS, J.L_HIP),
    (J.PELVIS, J.R_HIP),
    (J.PELVIS, J.NECK),
    (J.L_HIP, J.L_KNEE),
    (J.L_KNEE, J.L_ANKLE),
    (J.R_HIP, J.R_KNEE),
    (J.R_KNEE, J.R_ANKLE),
    (J.NECK, J.L_SHOULDER),
    (J.NECK, J.R_SHOULDER),
    (J.NECK, J.NOSE),
    (J.L_SHOULDER, J.L_ELBOW),
    (J.L_ELBOW, J.L_WRIST),
    (J.R_SHOULDER, J.R_ELBOW),
    (J.R_ELBOW, J.R_WRIST),
    (J.NOSE, J.L_EYE),
    (J.NOSE, J.R_EYE),
)

TOPO = np.array([(int(p), int(c)) for p, c in BONES], dtype=np.int64)

PARENTS = np.full(N_JOINTS, -1, dtype=np.int64)
for _p, _c in BONES:
    PARENTS[int(_c)] = int(_p)

BALL_JOINTS = (J.NECK, J.L_SHOULDER, J.R_SHOULDER, J.L_HIP, J.R_HIP)
HINGE_JOINTS = (J.L_ELBOW, J.R_ELBOW, J.L_KNEE, J.R_KNEE)

# dof_kind: 0 fixed, 1 hinge, 2 ball, 3 root
DOF_KIND = np.zeros(N_JOINTS, dtype=np.int64)
DOF_KIND[int(J.PELVIS)] = 3
for _j in BALL_JOINTS:
    DOF_KIND[int(_j)] = 2
for _j in HINGE_JOINTS:
    DOF_KIND[int(_j)] = 1

_DOF_ORDER = (
    J.NECK, J.L_SHOULDER, J.R_SHOULDER, J.L_ELBOW, J.R_ELBOW,
    J.L_HIP, J.R_HIP, J.L_KNEE, J.R_KNEE,
)

DOF_START = np.full(N_JOINTS, -1, dtype=np.int64)
DOF_START[int(J.PELVIS)] = 0
_k = 3
DOF_NAMES = ["root_z", "root_x", "root_y"]
for _j in _DOF_ORDER:
    DOF_START[int(_j)] = _k
    if DOF_KIND[int(_j)] == 2:
        DOF_NAMES += [f"{_j.name.lower()}_{ax}" for ax in ("z", "x", "y")]
        _k += 3
    else:
        DOF_NAMES.append(f"{_j.name.lower()}_flex")
        _k += 1
N_DOF = _k  # 22

#: descendants[a, j] == 1 when j is a strict descendant of a.
DESCENDANTS = np.zeros((N_JOINTS, N_JOINTS), dtype=np.uint8)
for _p, _c in BONES:
    DESCENDANTS[int(_p), int(_c)] = 1
for _ in range(N_JOINTS):
    DESCENDANTS = ((DESCENDANTS + DESCENDANTS @ DESCENDANTS) > 0).astype(np.uint8)

#: left/right bone pairs (child-indexed): hip offsets, thighs, shanks,
#: shoulder offsets, upper arms, forearms, eyes.
PAIRED_BONES = (
    (J.L_HIP, J.R_HIP),
    (J.L_KNEE, J.R_KNEE),
    (J.L_ANKLE, J.R_ANKLE),
    (J.L_SHOULDER, J.R_SHOULDER),
    (J.L_ELBOW, J.R_ELBOW),
    (J.L_WRIST, J.R_WRIST),
    (J.L_EYE, J.R_EYE),
)

DEFAULT_LIMIT_TABLE = {
    "root": 360.0,
    "neck": [45.0, 45.0, 45.0],
    "shoulder": [180.0, 90.0, 150.0],
    "hip": [120.0, 60.0, 60.0],
    "knee_flexion": [0.0, 150.0],
    "elbow_flexion": [0.0, 150.0],
}

DEFAULT_WEIGHT_TABLE = {"default": 1.0, "wrists": 3.0, "ankles": 3.0}

_MIN_BONE = 1e-6
_AXIS_EPS = 1e-8


@dataclass
class SkeletonModel:
    """Bone lengths, rest geometry, per-dof limits, and IK weights.

    ``lengths`` and ``rest_dirs`` are child-indexed (root slot unused).
    ``limits_lo/hi`` are per entry of the 22-dof angle vector; hinge limits
    are stored on the hinge angle itself, converted from flexion bounds
    using the rest flexion of each hinge.
    """

    lengths: np.ndarray
    rest_dirs: np.ndarray
    hinge_axes: np.ndarray
    rest_flexion: np.ndarray  # degrees, per joint; nonzero only for hinges
    limits_lo: np.ndarray
    limits_hi: np.ndarray
    weights: np.ndarray
    flags: dict = field(default_factory=dict)

    @property
    def offsets(self) -> np.ndarray:
        """Child-indexed rest bone vectors (17, 3)."""
        out = self.lengths[:, None] * self.rest_dirs
        out[int(J.PELVIS)] = 0.0
        return out

    def rest_pose(self, root_pos=(0.0, 0.0, 0.0)) -> np.ndarray:
        """Joint positions at all-zero angles."""
        pose = np.zeros((N_JOINTS, 3))
        pose[int(J.PELVIS)] = root_pos
        off = self.offsets
        for p, c in TOPO:
            pose[c] = pose[p] + off[c]
        return pose

    def symmetrized(self) -> "SkeletonModel":
        """Tie each left/right bone pair to the mean of the two lengths."""
        lengths = self.lengths.copy()
        for left, right in PAIRED_BONES:
            mean = 0.5 * (lengths[int(left)] + lengths[int(right)])
            lengths[int(left)] = mean
            lengths[int(right)] = mean
        return replace(self, lengths=lengths)

    def max_pair_gap(self) -> float:
        return max(
            abs(self.lengths[int(l)] - self.lengths[int(r)]) for l, r in PAIRED_BONES
        )


def _fallback_axis(direction):
    axis = np.cross(direction, [0.0, 0.0, 1.0])
    if np.linalg.norm(axis) < _AXIS_EPS:
        axis = np.cross(direction, [1.0, 0.0, 0.0])
    return axis / np.linalg.norm(axis)


def skeleton_from_pose(pose, limit_table=None, weight_table=None) -> SkeletonModel:
    """Build a SkeletonModel whose rest pose is ``pose`` (17, 3).

    Hinge axes are the normals of each rest bend plane, oriented so a
    positive hinge angle increases flexion; straight limbs fall back to an
    arbitrary perpendicular axis.
    """
    pose = np.asarray(pose, dtype=np.float64)
    lengths = np.zeros(N_JOINTS)
    rest_dirs = np.zeros((N_JOINTS, 3))
    for p, c in TOPO:
        v = pose[c] - pose[p]
        n = np.linalg.norm(v)
        if n < _MIN_BONE:
            raise DegenerateSkeleton(
                f"bone {J(p).name}->{J(c).name} has length {n:.3g} ft"
            )
        lengths[c] = n
        rest_dirs[c] = v / n

    hinge_axes = np.zeros((N_JOINTS, 3))
    rest_flexion = np.zeros(N_JOINTS)
    for j in HINGE_JOINTS:
        jj = int(j)
        child = int(TOPO[TOPO[:, 0] == jj][0, 1])
        u_in = rest_dirs[jj]
        u_out = rest_dirs[child]
        cross = np.cross(u_in, u_out)
        norm = np.linalg.norm(cross)
        if norm < _AXIS_EPS:
            hinge_axes[jj] = _fallback_axis(u_in)
            rest_flexion[jj] = 0.0
        else:
            hinge_axes[jj] = cross / norm
            rest_flexion[jj] = np.degrees(
                np.arccos(np.clip(np.dot(u_in, u_out), -1.0, 1.0))
            )

    lo, hi = _limits_arrays(limit_table or DEFAULT_LIMIT_TABLE, rest_flexion)
    weights = _weights_array(weight_table or DEFAULT_WEIGHT_TABLE)
    return SkeletonModel(
        lengths=lengths,
        rest_dirs=rest_dirs,
        hinge_axes=hinge_axes,
        rest_flexion=rest_flexion,
        limits_lo=lo,
        limits_hi=hi,
        weights=weights,
    )


def _limits_arrays(table, rest_flexion):
    lo = np.zeros(N_DOF)
    hi = np.zeros(N_DOF)
    root = float(table.get("root", DEFAULT_LIMIT_TABLE["root"]))
    lo[0:3], hi[0:3] = -root, root
    for j in _DOF_ORDER:
        jj = int(j)
        s = DOF_START[jj]
        if DOF_KIND[jj] == 2:
            if j is J.NECK:
                band = table.get("neck", DEFAULT_LIMIT_TABLE["neck"])
            elif j in (J.L_SHOULDER, J.R_SHOULDER):
                band = table.get("shoulder", DEFAULT_LIMIT_TABLE["shoulder"])
            else:
                band = table.get("hip", DEFAULT_LIMIT_TABLE["hip"])
            band = np.broadcast_to(np.asarray(band, dtype=np.float64), (3,))
            lo[s:s + 3], hi[s:s + 3] = -band, band
        else:
            key = "elbow_flexion" if j in (J.L_ELBOW, J.R_ELBOW) else "knee_flexion"
            fmin, fmax = table.get(key, DEFAULT_LIMIT_TABLE[key])
            # flexion(theta) = rest_flexion + theta
            lo[s] = fmin - rest_flexion[jj]
            hi[s] = fmax - rest_flexion[jj]
    return lo, hi


def _weights_array(table):
    w = np.full(N_JOINTS, float(table.get("default", 1.0)))
    w[[int(J.L_WRIST), int(J.R_WRIST)]] = float(table.get("wrists", 3.0))
    w[[int(J.L_ANKLE), int(J.R_ANKLE)]] = float(table.get("ankles", 3.0))
    return w


def reference_skeleton(seq, n_frames: int = 30, limit_table=None,
                       weight_table=None) -> SkeletonModel:
    """Estimate the reference skeleton from the first ``n_frames`` frames.

    Takes the coordinate-wise median pose over frames 1..n and measures
    bone lengths (and rest geometry) from it.
    """
    if n_frames < 1:
        raise LengthError("reference window must be >= 1 frame")
    if len(seq) < n_frames:
        raise LengthError(
            f"sequence has {len(seq)} frames, reference window needs {n_frames}"
        )
    median_pose = np.median(seq.xyz[:n_frames], axis=0)
    return skeleton_from_pose(median_pose, limit_table, weight_table)


def load_skeleton_config(path):
    """Read a TOML limits/weights override file.

    Schema: ``[limits]`` with keys root, neck, shoulder, hip (symmetric
    bands) and knee_flexion / elbow_flexion ([min, max] on the flexion
    metric); ``[weights]`` with default / wrists / ankles.
    """
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    limit_table = dict(DEFAULT_LIMIT_TABLE)
    limit_table.update(doc.get("limits", {}))
    weight_table = dict(DEFAULT_WEIGHT_TABLE)
    weight_table.update(doc.get("weights", {}))
    return limit_table, weight_table
