"""Throwing-side classification from ankle heights and the pelvis line.

Two full-sequence signals must agree: the mean left-minus-right ankle
height and the circular-mean horizontal angle of the left-hip-minus-
right-hip vector.  Right-handers show a negative ankle differential with
the pelvis line near -90 degrees; left-handers the mirrored signs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEGENERATE_NORM, JointId as J, PoseSequence
from .errors import DegenerateVector, Disagreement

RIGHT_BAND = (-108.0, -76.0)
LEFT_BAND = (76.0, 108.0)


@dataclass
class HandednessResult:
    side: str              # "right" | "left"
    delta_ankle: float     # ft
    pelvis_angle: float    # degrees
    agree: bool = True


def handedness_signals(seq: PoseSequence) -> tuple[float, float]:
    """(mean ankle height differential, circular-mean pelvis-line angle)."""
    delta = float(np.mean(seq.joint(J.L_ANKLE)[:, 2] - seq.joint(J.R_ANKLE)[:, 2]))
    v = seq.joint(J.L_HIP) - seq.joint(J.R_HIP)
    horiz = np.hypot(v[:, 0], v[:, 1])
    if np.any(horiz <= DEGENERATE_NORM):
        raise DegenerateVector("hips coincide in at least one frame")
    ang = np.arctan2(v[:, 1], v[:, 0])
    pelvis = float(np.degrees(np.arctan2(np.mean(np.sin(ang)), np.mean(np.cos(ang)))))
    return delta, pelvis


def classify_handedness(seq: PoseSequence) -> HandednessResult:
    """Classify throwing side; both signals must agree or Disagreement is raised."""
    delta, pelvis = handedness_signals(seq)
    if delta < 0.0 and RIGHT_BAND[0] <= pelvis <= RIGHT_BAND[1]:
        return HandednessResult("right", delta, pelvis)
    if delta > 0.0 and LEFT_BAND[0] <= pelvis <= LEFT_BAND[1]:
        return HandednessResult("left", delta, pelvis)
    raise Disagreement(
        f"handedness signals conflict: delta_ankle={delta:+.4f} ft, "
        f"pelvis_angle={pelvis:+.2f} deg"
    )


def assign_roles(side: str) -> dict:
    """Map limb roles to body sides for a given throwing side."""
    if side == "right":
        return {"side": "right", "throw_arm": "right", "glove_arm": "left",
                "lead_leg": "left", "trail_leg": "right"}
    if side == "left":
        return {"side": "left", "throw_arm": "left", "glove_arm": "right",
                "lead_leg": "right", "trail_leg": "left"}
    raise ValueError(f"side must be 'right' or 'left', got {side!r}")


_SIDED = {
    ("left", "hip"): J.L_HIP, ("right", "hip"): J.R_HIP,
    ("left", "knee"): J.L_KNEE, ("right", "knee"): J.R_KNEE,
    ("left", "ankle"): J.L_ANKLE, ("right", "ankle"): J.R_ANKLE,
    ("left", "shoulder"): J.L_SHOULDER, ("right", "shoulder"): J.R_SHOULDER,
    ("left", "elbow"): J.L_ELBOW, ("right", "elbow"): J.R_ELBOW,
    ("left", "wrist"): J.L_WRIST, ("right", "wrist"): J.R_WRIST,
}


def sided_joint(side: str, name: str) -> J:
    """Joint id for e.g. ('left', 'knee')."""
    return _SIDED[(side, name)]
