"""Registries: the 18 biomechanical metrics, their per-pitcher statistic
names, workload feature keys, and the ordered 114-slot feature registry.

The feature registry and the metric-to-event designation ship as TOML
files under ``pitchkin/data`` and are the source of truth for feature
ordering.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from importlib import resources

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import UnknownMetric

EVENTS = ("foot_plant", "mer", "ball_release")


@dataclass(frozen=True)
class MetricSpec:
    name: str
    unit: str          # "deg" or "ft"
    positional: bool   # validated with the ft threshold instead of degrees


METRICS = (
    MetricSpec("knee_flexion_lead", "deg", False),
    MetricSpec("knee_flexion_trail", "deg", False),
    MetricSpec("shin_angle_x_lead", "deg", False),
    MetricSpec("shin_angle_x_trail", "deg", False),
    MetricSpec("shin_angle_y_lead", "deg", False),
    MetricSpec("shin_angle_y_trail", "deg", False),
    MetricSpec("elbow_flexion_throw", "deg", False),
    MetricSpec("elbow_flexion_glove", "deg", False),
    MetricSpec("pelvis_rotation", "deg", False),
    MetricSpec("torso_rotation", "deg", False),
    MetricSpec("hip_shoulder_separation", "deg", False),
    MetricSpec("trunk_forward_tilt", "deg", False),
    MetricSpec("trunk_lateral_tilt", "deg", False),
    MetricSpec("shoulder_abduction_throw", "deg", False),
    MetricSpec("shoulder_abduction_glove", "deg", False),
    MetricSpec("cog_x", "ft", True),
    MetricSpec("cog_y", "ft", True),
    MetricSpec("cog_z", "ft", True),
)

METRIC_NAMES = tuple(m.name for m in METRICS)
METRIC_BY_NAME = {m.name: m for m in METRICS}

#: metrics whose angular velocities are reported alongside the series
DERIVATIVE_METRICS = (
    "elbow_flexion_throw",
    "knee_flexion_lead",
    "hip_shoulder_separation",
)

STAT_NAMES = ("mean", "std", "p90", "range", "cv")

WORKLOAD_KEYS = tuple(f"w{i:02d}" for i in range(1, 25))

HISTORY_KEYS = ("prior_tj", "prior_injuries", "il_years")


def require_metric(name: str) -> MetricSpec:
    try:
        return METRIC_BY_NAME[name]
    except KeyError:
        raise UnknownMetric(f"unknown metric {name!r}") from None


def _read_toml(filename: str) -> dict:
    ref = resources.files("pitchkin.data").joinpath(filename)
    with ref.open("rb") as fh:
        return tomllib.load(fh)


def load_metric_events() -> dict:
    """Metric name -> the delivery event its per-pitcher stats sample."""
    table = _read_toml("metric_events.toml")["events"]
    for name, event in table.items():
        require_metric(name)
        if event not in EVENTS:
            raise UnknownMetric(f"metric {name} designates unknown event {event!r}")
    missing = set(METRIC_NAMES) - set(table)
    if missing:
        raise UnknownMetric(f"metrics missing an event designation: {sorted(missing)}")
    return dict(table)


def load_feature_registry() -> list[str]:
    """The ordered 114 feature names."""
    names = _read_toml("feature_registry.toml")["features"]
    if len(names) != 114:
        raise UnknownMetric(f"feature registry must hold 114 names, got {len(names)}")
    return list(names)


def load_risk_rules(path=None) -> list[dict]:
    """Static-threshold flag rules (the shipped defaults unless a path is given)."""
    if path is None:
        doc = _read_toml("risk_rules.toml")
    else:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    rules = doc.get("rules", [])
    for rule in rules:
        if rule.get("op") not in (">", "<", ">=", "<="):
            raise UnknownMetric(f"rule has invalid comparator: {rule}")
    return list(rules)


def kinematic_stat_names() -> list[str]:
    """All 90 per-pitcher kinematic statistic names (18 metrics x 5 stats)."""
    return [f"{m}_{s}" for m in METRIC_NAMES for s in STAT_NAMES]
