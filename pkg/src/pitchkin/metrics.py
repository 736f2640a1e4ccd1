"""The 18 biomechanical metrics and their temporal derivatives.

Sign conventions (fixed by the package's world frame and handedness
geometry):

* shin angle X: frontal-plane lean of the shin from vertical, positive
  toward +y; shin angle Y: sagittal-plane lean, positive toward +x.
* pelvis/torso rotation: horizontal line angle relative to the square-to-
  home reference of the detected side (-90 deg for right-handers, +90 for
  left-handers, sign mirrored so values compare across sides).
* trunk forward tilt: positive toward the throwing direction; lateral
  tilt: positive toward -y, the glove side for every classifiable
  delivery.

Frames where a metric's defining vectors degenerate carry the previous
valid value and are listed in the series' ``flagged`` indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import DEGENERATE_NORM, JointId as J, PoseSequence, wrap_degrees
from .errors import TooShort
from .events import DeliveryEvents, detect_events
from .handedness import sided_joint
from .refine.smoothing import savgol_series
from .registry import DERIVATIVE_METRICS, EVENTS, METRIC_BY_NAME, METRIC_NAMES

COG_PELVIS_WEIGHT = 0.6
COG_SHOULDER_WEIGHT = 0.4


@dataclass
class MetricSeries:
    name: str
    values: np.ndarray
    unit: str
    flagged: list = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)

    def __len__(self):
        return self.values.shape[0]


@dataclass
class MetricsResult:
    series: dict            # name -> MetricSeries (18 + 3 derivative series)
    events: DeliveryEvents
    samples: dict           # name -> {event -> value at that event frame}
    fps: float

    def matrix(self):
        """(T, 21) value matrix and its column names (18 metrics + 3 rates)."""
        names = list(METRIC_NAMES) + [f"{m}_vel" for m in DERIVATIVE_METRICS]
        cols = [self.series[n].values for n in names]
        return np.stack(cols, axis=1), names


def _carry_forward(values, bad):
    """Replace flagged frames with the previous valid value (0 before any)."""
    bad = np.asarray(bad, dtype=bool)
    if not bad.any():
        return values, []
    idx = np.where(~bad, np.arange(values.shape[0]), -1)
    np.maximum.accumulate(idx, out=idx)
    out = np.where(idx >= 0, values[np.maximum(idx, 0)], 0.0)
    return out, np.flatnonzero(bad).tolist()


def _safe_angle(u, v):
    """Unsigned angle series between (T,3) stacks plus a degeneracy mask."""
    nu = np.linalg.norm(u, axis=-1)
    nv = np.linalg.norm(v, axis=-1)
    bad = (nu <= DEGENERATE_NORM) | (nv <= DEGENERATE_NORM)
    denom = np.where(bad, 1.0, nu * nv)
    cosang = np.clip(np.sum(u * v, axis=-1) / denom, -1.0, 1.0)
    return np.degrees(np.arccos(cosang)), bad


def joint_flexion(seq: PoseSequence, chain, name="flexion", unit="deg") -> MetricSeries:
    """Flexion of a three-joint chain (a, b, c): 0 deg when straight."""
    a, b, c = (seq.joint(j) for j in chain)
    ang, bad = _safe_angle(a - b, c - b)
    values, flagged = _carry_forward(180.0 - ang, bad)
    return MetricSeries(name, values, unit, flagged)


def shin_angles(seq: PoseSequence, side: str, label: str):
    """Frontal (X) and sagittal (Y) shin lean from vertical for one leg."""
    s = seq.joint(sided_joint(side, "knee")) - seq.joint(sided_joint(side, "ankle"))
    bad_x = np.hypot(s[:, 1], s[:, 2]) <= DEGENERATE_NORM
    bad_y = np.hypot(s[:, 0], s[:, 2]) <= DEGENERATE_NORM
    x_vals, x_flags = _carry_forward(
        np.degrees(np.arctan2(s[:, 1], s[:, 2])), bad_x)
    y_vals, y_flags = _carry_forward(
        np.degrees(np.arctan2(s[:, 0], s[:, 2])), bad_y)
    return (MetricSeries(f"shin_angle_x_{label}", x_vals, "deg", x_flags),
            MetricSeries(f"shin_angle_y_{label}", y_vals, "deg", y_flags))


def _line_angle(line):
    bad = np.hypot(line[:, 0], line[:, 1]) <= DEGENERATE_NORM
    return np.degrees(np.arctan2(line[:, 1], line[:, 0])), bad


def trunk_orientation(seq: PoseSequence, side: str):
    """pelvis_rotation, torso_rotation, hip_shoulder_separation,
    trunk_forward_tilt, trunk_lateral_tilt."""
    ref, sgn = (-90.0, 1.0) if side == "right" else (90.0, -1.0)
    fwd = 1.0 if side == "right" else -1.0

    hip_angle, hip_bad = _line_angle(seq.joint(J.L_HIP) - seq.joint(J.R_HIP))
    sho_angle, sho_bad = _line_angle(seq.joint(J.L_SHOULDER) - seq.joint(J.R_SHOULDER))
    pelvis_rot, pelvis_flags = _carry_forward(
        wrap_degrees(sgn * (hip_angle - ref)), hip_bad)
    torso_rot, torso_flags = _carry_forward(
        wrap_degrees(sgn * (sho_angle - ref)), sho_bad)
    separation = wrap_degrees(torso_rot - pelvis_rot)

    mid_sho = 0.5 * (seq.joint(J.L_SHOULDER) + seq.joint(J.R_SHOULDER))
    mid_hip = 0.5 * (seq.joint(J.L_HIP) + seq.joint(J.R_HIP))
    trunk = mid_sho - mid_hip
    bad_fwd = np.hypot(trunk[:, 0], trunk[:, 2]) <= DEGENERATE_NORM
    bad_lat = np.hypot(trunk[:, 1], trunk[:, 2]) <= DEGENERATE_NORM
    forward, fwd_flags = _carry_forward(
        fwd * np.degrees(np.arctan2(trunk[:, 0], trunk[:, 2])), bad_fwd)
    lateral, lat_flags = _carry_forward(
        np.degrees(np.arctan2(-trunk[:, 1], trunk[:, 2])), bad_lat)

    return (
        MetricSeries("pelvis_rotation", pelvis_rot, "deg", pelvis_flags),
        MetricSeries("torso_rotation", torso_rot, "deg", torso_flags),
        MetricSeries("hip_shoulder_separation", separation, "deg",
                     sorted(set(pelvis_flags) | set(torso_flags))),
        MetricSeries("trunk_forward_tilt", forward, "deg", fwd_flags),
        MetricSeries("trunk_lateral_tilt", lateral, "deg", lat_flags),
    )


def shoulder_abduction(seq: PoseSequence, side: str, name: str) -> MetricSeries:
    """3D angle of the upper-arm vector from vertical-down (0 = arm at side)."""
    upper = seq.joint(sided_joint(side, "elbow")) - seq.joint(sided_joint(side, "shoulder"))
    down = np.broadcast_to(np.array([0.0, 0.0, -1.0]), upper.shape)
    ang, bad = _safe_angle(upper, down)
    values, flagged = _carry_forward(ang, bad)
    return MetricSeries(name, values, "deg", flagged)


def center_of_gravity(seq: PoseSequence, w_pelvis: float = COG_PELVIS_WEIGHT,
                      w_shoulder: float = COG_SHOULDER_WEIGHT, anchor=None):
    """COG proxy relative to the origin anchor (frame-1 pelvis ground point).

    Pass ``anchor`` explicitly to hold the reference fixed across
    transformed copies of a sequence.
    """
    mid_sho = 0.5 * (seq.joint(J.L_SHOULDER) + seq.joint(J.R_SHOULDER))
    cog = w_pelvis * seq.joint(J.PELVIS) + w_shoulder * mid_sho
    if anchor is None:
        pelvis0 = seq.joint(J.PELVIS)[0]
        anchor = np.array([pelvis0[0], pelvis0[1], 0.0])
    rel = cog - np.asarray(anchor, dtype=np.float64)
    return tuple(
        MetricSeries(f"cog_{ax}", rel[:, i], "ft")
        for i, ax in enumerate("xyz")
    )


def temporal_derivative(series: MetricSeries, fps: float,
                        window: int = 15, order: int = 3) -> MetricSeries:
    """Central-difference rate smoothed with Savitzky-Golay, units/s."""
    if len(series) < window:
        raise TooShort(
            f"derivative needs >= {window} frames, got {len(series)}"
        )
    raw = np.gradient(series.values) * fps
    smoothed = savgol_series(raw, window, order)
    return MetricSeries(f"{series.name}_vel", smoothed, f"{series.unit}/s",
                        list(series.flagged))


def compute_all(seq: PoseSequence, roles: dict,
                events: DeliveryEvents | None = None, *,
                cog_weights=(COG_PELVIS_WEIGHT, COG_SHOULDER_WEIGHT),
                cog_anchor=None) -> MetricsResult:
    """All 18 metric series, the 3 derivative series, and the event table."""
    if events is None:
        events = detect_events(seq, roles)

    lead, trail = roles["lead_leg"], roles["trail_leg"]
    throw, glove = roles["throw_arm"], roles["glove_arm"]
    series: dict[str, MetricSeries] = {}

    def leg_chain(side):
        return (sided_joint(side, "hip"), sided_joint(side, "knee"),
                sided_joint(side, "ankle"))

    def arm_chain(side):
        return (sided_joint(side, "shoulder"), sided_joint(side, "elbow"),
                sided_joint(side, "wrist"))

    series["knee_flexion_lead"] = joint_flexion(seq, leg_chain(lead), "knee_flexion_lead")
    series["knee_flexion_trail"] = joint_flexion(seq, leg_chain(trail), "knee_flexion_trail")
    for s in shin_angles(seq, lead, "lead") + shin_angles(seq, trail, "trail"):
        series[s.name] = s
    series["elbow_flexion_throw"] = joint_flexion(seq, arm_chain(throw), "elbow_flexion_throw")
    series["elbow_flexion_glove"] = joint_flexion(seq, arm_chain(glove), "elbow_flexion_glove")
    for s in trunk_orientation(seq, roles["side"]):
        series[s.name] = s
    series["shoulder_abduction_throw"] = shoulder_abduction(seq, throw, "shoulder_abduction_throw")
    series["shoulder_abduction_glove"] = shoulder_abduction(seq, glove, "shoulder_abduction_glove")
    for s in center_of_gravity(seq, cog_weights[0], cog_weights[1], cog_anchor):
        series[s.name] = s

    for name in DERIVATIVE_METRICS:
        deriv = temporal_derivative(series[name], seq.fps)
        series[deriv.name] = deriv

    samples = {
        name: {ev: float(series[name].values[events.frame_of(ev)]) for ev in EVENTS}
        for name in METRIC_NAMES
    }
    assert all(name in series for name in METRIC_NAMES)
    assert all(METRIC_BY_NAME[n].unit == series[n].unit for n in METRIC_NAMES)
    return MetricsResult(series=series, events=events, samples=samples, fps=seq.fps)
