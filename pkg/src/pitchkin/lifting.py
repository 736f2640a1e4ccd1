"""Pelvis-to-global lifting: velocity-based trajectory parameterization and
predict-commit-recompute sliding-window inference.

A trajectory over n frames is held as an anchor (first position), a seam
velocity v0 (first per-frame step), and per-step velocity increments.  A
predictor sees a window of pelvis-rooted poses and returns the increments;
the harness owns the seam state (anchor and velocity carried across
windows), commits only the first K steps of each window, then advances.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from .core import JointId as J, PoseSequence, Space
from .errors import LengthError, PredictorError


@dataclass
class TrajectoryWindow:
    """Predictor input: pelvis-rooted poses plus harness-side context."""

    poses: np.ndarray      # (n, 17, 3) pelvis-rooted
    n: int                 # window length actually provided (may be < nominal)
    anchor: np.ndarray     # global pelvis position at the window's first frame
    start: int             # index of the first frame in the full sequence
    fps: float


@dataclass
class VelocityParam:
    """Per-step velocity increments, ft/frame.

    ``dv[i]`` is the change from step i to step i+1; for a window the first
    entry is the change from the incoming seam velocity to the window's
    first step.
    """

    dv: np.ndarray

    def __post_init__(self):
        self.dv = np.atleast_2d(np.asarray(self.dv, dtype=np.float64)).reshape(-1, 3)


class TrajectoryPredictor(Protocol):
    def predict(self, window: TrajectoryWindow) -> VelocityParam: ...


def reconstruct_trajectory(param: VelocityParam, anchor, v0) -> np.ndarray:
    """Integrate increments into positions.

    With m increments the result has m + 2 positions: the anchor, then one
    step per velocity u_i = v0 + sum(dv[:i+1]) ... starting from u_0 = v0
    when the increment list is empty.
    """
    anchor = np.asarray(anchor, dtype=np.float64)
    v0 = np.asarray(v0, dtype=np.float64)
    dv = param.dv
    u = v0[None, :] + np.concatenate([np.zeros((1, 3)), np.cumsum(dv, axis=0)])
    return anchor[None, :] + np.concatenate(
        [np.zeros((1, 3)), np.cumsum(u, axis=0)]
    )


def encode_trajectory(traj) -> tuple[np.ndarray, np.ndarray, VelocityParam]:
    """Exact inverse of :func:`reconstruct_trajectory`.

    Returns ``(anchor, v0, param)`` where v0 is the first per-frame step
    and the increments are the second differences of the trajectory (empty
    for a 2-frame trajectory).
    """
    traj = np.asarray(traj, dtype=np.float64)
    if traj.ndim != 2 or traj.shape[0] < 2:
        raise LengthError("trajectory must have at least 2 positions")
    steps = np.diff(traj, axis=0)
    return traj[0].copy(), steps[0].copy(), VelocityParam(np.diff(steps, axis=0))


class OraclePredictor:
    """Reads the ground-truth global pelvis trajectory (test harness aid).

    Returns the true velocity increments for each window, including the
    seam-straddling first increment, so the committed path reproduces the
    truth exactly for any commit stride.  Assumes the lift starts from the
    trajectory's own anchor and a zero seam velocity (the first increment
    absorbs the true initial step).
    """

    def __init__(self, trajectory):
        self.trajectory = np.asarray(trajectory, dtype=np.float64)
        self.steps = np.diff(self.trajectory, axis=0)

    @classmethod
    def from_truth_file(cls, path):
        with open(path) as fh:
            doc = json.load(fh)
        return cls(np.asarray(doc["trajectory"], dtype=np.float64))

    @property
    def start_anchor(self):
        return self.trajectory[0].copy()

    def predict(self, window: TrajectoryWindow) -> VelocityParam:
        s, m = window.start, window.n - 1
        if s + m > self.steps.shape[0]:
            raise PredictorError(
                f"oracle trajectory too short for window at frame {s}"
            )
        dv = np.empty((m, 3))
        dv[0] = self.steps[s] - (self.steps[s - 1] if s > 0 else 0.0)
        dv[1:] = self.steps[s + 1:s + m] - self.steps[s:s + m - 1]
        return VelocityParam(dv)


class ConstantVelocityPredictor:
    """No increments: each window continues the incoming seam velocity."""

    def predict(self, window: TrajectoryWindow) -> VelocityParam:
        return VelocityParam(np.zeros((window.n - 1, 3)))


class ZeroPredictor(ConstantVelocityPredictor):
    """Like constant-velocity, but pins the initial seam velocity to zero
    (the pelvis never leaves the anchor)."""

    start_velocity = np.zeros(3)


def make_predictor(spec: str) -> TrajectoryPredictor:
    """Build a predictor from its CLI spec string.

    ``oracle:<truth.json>`` | ``constant_velocity`` | ``zero``.
    """
    if spec.startswith("oracle:"):
        return OraclePredictor.from_truth_file(spec.split(":", 1)[1])
    if spec == "constant_velocity":
        return ConstantVelocityPredictor()
    if spec == "zero":
        return ZeroPredictor()
    raise PredictorError(f"unknown predictor spec {spec!r}")


def lift_sequence(seq: PoseSequence, predictor: TrajectoryPredictor,
                  n: int = 30, commit: int = 10, anchor=None, v0=None):
    """Lift a pelvis-rooted sequence to global space.

    Windows advance by the commit stride: the predictor runs on up to
    ``n`` frames but only the first ``commit`` predicted steps are kept;
    the next window is anchored at the last committed position with the
    last committed per-frame velocity as its seam.  The tail shorter than
    a full window is committed from the last window.  Returns the global
    sequence and the committed pelvis trajectory (T, 3).
    """
    seq.validate()
    if seq.space is not Space.PELVIS_ROOTED:
        raise LengthError("lift_sequence expects a pelvis-rooted sequence")
    if not 1 <= commit <= n:
        raise PredictorError(f"commit stride {commit} must be in [1, n={n}]")

    n_frames = len(seq)
    if anchor is None:
        anchor = getattr(predictor, "start_anchor", np.zeros(3))
    if v0 is None:
        v0 = getattr(predictor, "start_velocity", np.zeros(3))

    traj = np.zeros((n_frames, 3))
    traj[0] = np.asarray(anchor, dtype=np.float64)
    seam_v = np.asarray(v0, dtype=np.float64)

    s = 0
    w = 0
    while s < n_frames - 1:
        nw = min(n, n_frames - s)
        window = TrajectoryWindow(
            poses=seq.xyz[s:s + nw], n=nw, anchor=traj[s].copy(),
            start=s, fps=seq.fps,
        )
        try:
            dv = predictor.predict(window).dv
        except PredictorError:
            raise
        except Exception as exc:  # noqa: BLE001 - tagged and re-raised
            raise PredictorError(f"predictor failed on window {w} "
                                 f"(frame {s}): {exc}") from exc
        if dv.shape != (nw - 1, 3):
            raise PredictorError(
                f"predictor returned {dv.shape} increments for window {w}; "
                f"expected ({nw - 1}, 3)"
            )
        u = seam_v[None, :] + np.cumsum(dv, axis=0)
        positions = traj[s] + np.cumsum(u, axis=0)
        c = min(commit, nw - 1)
        traj[s + 1:s + 1 + c] = positions[:c]
        seam_v = u[c - 1]
        s += c
        w += 1

    lifted = seq.with_xyz(seq.xyz + traj[:, None, :], space=Space.GLOBAL)
    return lifted, traj


def root_sequence(seq: PoseSequence) -> PoseSequence:
    """Re-express a global sequence relative to its pelvis (inverse lift)."""
    pelvis = seq.xyz[:, int(J.PELVIS)]
    return seq.with_xyz(seq.xyz - pelvis[:, None, :], space=Space.PELVIS_ROOTED)
