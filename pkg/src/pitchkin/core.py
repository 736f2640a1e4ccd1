"""Coordinate conventions, joint topology, and geometric primitives.

World frame (right-handed, canonical unit = feet):
    x: rubber toward home plate
    z: vertical up
    y: z cross x (toward first base)

Frontal plane = y-z, sagittal plane = x-z, horizontal plane = x-y.
Angles are degrees everywhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, IntEnum

import numpy as np

from .errors import DegenerateVector, LengthError, RangeError

DEGENERATE_NORM = 1e-9
M_TO_FT = 3.28084
ROOTED_TOL = 1e-9


class JointId(IntEnum):
    """The 17 joints, OpenPose-style topology. Pelvis (index 8) is the root."""

    NOSE = 0
    NECK = 1
    L_SHOULDER = 2
    R_SHOULDER = 3
    L_ELBOW = 4
    R_ELBOW = 5
    L_WRIST = 6
    R_WRIST = 7
    PELVIS = 8
    L_HIP = 9
    R_HIP = 10
    L_KNEE = 11
    R_KNEE = 12
    L_ANKLE = 13
    R_ANKLE = 14
    L_EYE = 15
    R_EYE = 16


N_JOINTS = 17

#: left joint -> right joint counterpart (and vice versa)
MIRROR_PAIRS = (
    (JointId.L_SHOULDER, JointId.R_SHOULDER),
    (JointId.L_ELBOW, JointId.R_ELBOW),
    (JointId.L_WRIST, JointId.R_WRIST),
    (JointId.L_HIP, JointId.R_HIP),
    (JointId.L_KNEE, JointId.R_KNEE),
    (JointId.L_ANKLE, JointId.R_ANKLE),
    (JointId.L_EYE, JointId.R_EYE),
)


class Space(str, Enum):
    PELVIS_ROOTED = "pelvis_rooted"
    GLOBAL = "global"


class Plane(str, Enum):
    FRONTAL_YZ = "frontal_yz"
    SAGITTAL_XZ = "sagittal_xz"
    HORIZONTAL_XY = "horizontal_xy"


@dataclass(frozen=True)
class Frame:
    """One pose frame: 17 joints as (x, y, z, c) rows plus a timestamp in ms."""

    joints: np.ndarray  # (17, 4)
    t_ms: float

    @property
    def xyz(self) -> np.ndarray:
        return self.joints[:, :3]

    @property
    def confidence(self) -> np.ndarray:
        return self.joints[:, 3]


@dataclass
class PoseSequence:
    """A fixed-rate sequence of 17-joint poses.

    Internally array-based: ``xyz`` is (T, 17, 3) feet, ``conf`` is (T, 17)
    in [0, 1], ``t_ms`` is (T,).  ``space`` records whether the pelvis is
    pinned to the origin (pelvis-rooted) or carries global translation.
    """

    xyz: np.ndarray
    conf: np.ndarray
    t_ms: np.ndarray
    fps: float
    space: Space
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        self.xyz = np.asarray(self.xyz, dtype=np.float64)
        self.conf = np.asarray(self.conf, dtype=np.float64)
        self.t_ms = np.asarray(self.t_ms, dtype=np.float64)
        self.space = Space(self.space)

    def __len__(self) -> int:
        return self.xyz.shape[0]

    def validate(self) -> "PoseSequence":
        """Check all type invariants; raise on violation, return self."""
        if self.xyz.ndim != 3 or self.xyz.shape[1:] != (N_JOINTS, 3):
            raise RangeError(f"xyz must be (T, 17, 3), got {self.xyz.shape}")
        if len(self) < 2:
            raise LengthError(f"sequence needs >= 2 frames, got {len(self)}")
        if not np.all(np.isfinite(self.xyz)):
            raise RangeError("non-finite coordinate in sequence")
        if np.any(self.conf < 0.0) or np.any(self.conf > 1.0):
            raise RangeError("confidence outside [0, 1]")
        if self.fps < 30.0:
            raise RangeError(f"fps must be >= 30, got {self.fps}")
        dt = np.diff(self.t_ms)
        expected = 1000.0 / self.fps
        if np.any(np.abs(dt - expected) > 0.02 * expected):
            raise RangeError("frame timestamps are not uniform at the declared fps")
        if self.space is Space.PELVIS_ROOTED:
            worst = np.abs(self.xyz[:, JointId.PELVIS]).max()
            if worst >= ROOTED_TOL:
                raise RangeError(
                    f"pelvis-rooted sequence has pelvis {worst:.3g} ft from origin"
                )
        return self

    def frame(self, t: int) -> Frame:
        joints = np.concatenate([self.xyz[t], self.conf[t, :, None]], axis=1)
        return Frame(joints=joints, t_ms=float(self.t_ms[t]))

    @property
    def frames(self) -> list:
        return [self.frame(t) for t in range(len(self))]

    def joint(self, jid: JointId) -> np.ndarray:
        """Per-frame positions of one joint, shape (T, 3)."""
        return self.xyz[:, int(jid)]

    def copy(self) -> "PoseSequence":
        return PoseSequence(
            xyz=self.xyz.copy(),
            conf=self.conf.copy(),
            t_ms=self.t_ms.copy(),
            fps=self.fps,
            space=self.space,
            flags=dict(self.flags),
        )

    def with_xyz(self, xyz: np.ndarray, space: Space | None = None) -> "PoseSequence":
        out = self.copy()
        out.xyz = np.asarray(xyz, dtype=np.float64)
        if space is not None:
            out.space = Space(space)
        return out


def angle_between(u, v) -> float:
    """Unsigned angle between two 3-vectors in degrees, in [0, 180].

    The cosine is clamped to [-1, 1] before arccos.  Accepts broadcastable
    (..., 3) stacks.  Raises DegenerateVector if any norm is below 1e-9.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu = np.linalg.norm(u, axis=-1)
    nv = np.linalg.norm(v, axis=-1)
    if np.any(nu <= DEGENERATE_NORM) or np.any(nv <= DEGENERATE_NORM):
        raise DegenerateVector("cannot take an angle with a near-zero vector")
    cosang = np.sum(u * v, axis=-1) / (nu * nv)
    ang = np.degrees(np.arccos(np.clip(cosang, -1.0, 1.0)))
    return float(ang) if ang.ndim == 0 else ang


def project_to_plane(v, plane: Plane | str) -> np.ndarray:
    """Drop the coordinate orthogonal to ``plane``.

    frontal_yz -> (y, z), sagittal_xz -> (x, z), horizontal_xy -> (x, y).
    """
    v = np.asarray(v, dtype=np.float64)
    plane = Plane(plane)
    if plane is Plane.FRONTAL_YZ:
        idx = (1, 2)
    elif plane is Plane.SAGITTAL_XZ:
        idx = (0, 2)
    else:
        idx = (0, 1)
    return v[..., list(idx)]


def signed_horizontal_angle(v) -> float:
    """atan2(v_y, v_x) in degrees, range (-180, 180].

    Raises DegenerateVector when the horizontal part is below 1e-9.
    """
    v = np.asarray(v, dtype=np.float64)
    horiz = np.hypot(v[..., 0], v[..., 1])
    if np.any(horiz <= DEGENERATE_NORM):
        raise DegenerateVector("vector has no usable horizontal component")
    ang = wrap_degrees(np.degrees(np.arctan2(v[..., 1], v[..., 0])))
    return float(ang) if np.ndim(ang) == 0 else ang


def wrap_degrees(a):
    """Wrap angle(s) into (-180, 180]."""
    a = np.asarray(a, dtype=np.float64)
    out = -(np.mod(-a + 180.0, 360.0) - 180.0)
    return float(out) if out.ndim == 0 else out


def rotation_z(deg: float) -> np.ndarray:
    """Rotation matrix about +z by ``deg`` degrees."""
    r = np.radians(deg)
    c, s = np.cos(r), np.sin(r)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
