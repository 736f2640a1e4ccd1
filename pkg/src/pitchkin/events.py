"""Delivery event detection: foot plant, maximum external rotation, ball
release.

Heuristics on the refined global sequence: foot plant is the first frame
where the lead ankle is settled near its height minimum, ball release is
the throwing-wrist speed peak, and MER maximises the angle between the
throwing forearm and the trunk-forward direction between the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import JointId as J, PoseSequence
from .errors import EventOrderViolation, TooShort
from .handedness import sided_joint

PLANT_HEIGHT_TOL_FT = 0.05
PLANT_SPEED_MAX_FPS = 2.0
LOW_WRIST_SPEED_FPS = 10.0
MIN_FRAMES = 10


@dataclass
class DeliveryEvents:
    foot_plant: int
    mer: int
    ball_release: int
    flags: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"foot_plant": self.foot_plant, "mer": self.mer,
                "ball_release": self.ball_release,
                "confidence_flags": list(self.flags)}

    def frame_of(self, event: str) -> int:
        return {"foot_plant": self.foot_plant, "mer": self.mer,
                "ball_release": self.ball_release}[event]


def _speeds(track, fps):
    """Per-frame 3D speed via central differences, one-sided at the ends."""
    v = np.gradient(track, axis=0) * fps
    return np.linalg.norm(v, axis=1)


def detect_events(seq: PoseSequence, roles: dict, *,
                  plant_height_tol: float = PLANT_HEIGHT_TOL_FT,
                  plant_speed_max: float = PLANT_SPEED_MAX_FPS) -> DeliveryEvents:
    """Locate the three delivery events on a refined global sequence."""
    if len(seq) < MIN_FRAMES:
        raise TooShort(f"need >= {MIN_FRAMES} frames, got {len(seq)}")
    flags: list = []

    lead_ankle = seq.joint(sided_joint(roles["lead_leg"], "ankle"))
    ankle_z = lead_ankle[:, 2]
    ankle_speed = _speeds(lead_ankle, seq.fps)
    near_min = ankle_z - ankle_z.min() <= plant_height_tol
    settled = ankle_speed < plant_speed_max
    candidates = np.flatnonzero(near_min & settled)
    if candidates.size:
        foot_plant = int(candidates[0])
    else:
        foot_plant = int(np.argmin(ankle_z))
        flags.append("foot_plant_fallback")

    wrist = seq.joint(sided_joint(roles["throw_arm"], "wrist"))
    wrist_speed = _speeds(wrist, seq.fps)
    ball_release = int(np.argmax(wrist_speed))
    if wrist_speed[ball_release] < LOW_WRIST_SPEED_FPS:
        flags.append("low_wrist_speed")

    if ball_release <= foot_plant:
        raise EventOrderViolation(
            f"ball release (frame {ball_release}) not after foot plant "
            f"(frame {foot_plant})"
        )

    elbow = seq.joint(sided_joint(roles["throw_arm"], "elbow"))
    forearm = wrist - elbow
    shoulder_line = seq.joint(J.L_SHOULDER) - seq.joint(J.R_SHOULDER)
    forward = np.cross(np.array([0.0, 0.0, 1.0]), shoulder_line)
    proxy = _angle_series(forearm, forward)
    window = slice(foot_plant + 1, ball_release + 1)
    mer = foot_plant + 1 + int(np.argmax(proxy[window]))

    events = DeliveryEvents(foot_plant, mer, ball_release, flags)
    if not events.foot_plant <= events.mer <= events.ball_release:
        raise EventOrderViolation(f"events out of order: {events.as_dict()}")
    return events


def _angle_series(u, v):
    nu = np.linalg.norm(u, axis=1)
    nv = np.linalg.norm(v, axis=1)
    denom = np.where((nu > 0) & (nv > 0), nu * nv, 1.0)
    cosang = np.clip(np.sum(u * v, axis=1) / denom, -1.0, 1.0)
    return np.degrees(np.arccos(cosang))
