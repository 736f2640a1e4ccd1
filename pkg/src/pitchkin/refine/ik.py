"""Forward kinematics and joint-limited inverse kinematics.

The IK solve is a projected damped Gauss-Newton on the weighted position
residual: analytic Jacobian, fixed damping, box projection after every
step, and backtracking so the cost never increases between iterations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import backend
from ..core import N_JOINTS, JointId as J
from ..errors import NonConvergence
from .skeleton import DESCENDANTS, DOF_KIND, DOF_START, N_DOF, TOPO, SkeletonModel


@dataclass
class JointAngles:
    """Root position/orientation plus the 19 articulated joint angles.

    ``root_orient`` is the intrinsic Z-X-Y pelvis orientation (degrees);
    ``theta`` holds the ball and hinge angles in dof order.
    """

    root_pos: np.ndarray
    root_orient: np.ndarray
    theta: np.ndarray

    @property
    def q(self) -> np.ndarray:
        return np.concatenate([np.asarray(self.root_orient, dtype=np.float64),
                               np.asarray(self.theta, dtype=np.float64)])

    @classmethod
    def from_q(cls, q, root_pos) -> "JointAngles":
        q = np.asarray(q, dtype=np.float64)
        return cls(root_pos=np.asarray(root_pos, dtype=np.float64),
                   root_orient=q[:3].copy(), theta=q[3:].copy())

    @classmethod
    def zero(cls, root_pos=(0.0, 0.0, 0.0)) -> "JointAngles":
        return cls(root_pos=np.asarray(root_pos, dtype=np.float64),
                   root_orient=np.zeros(3), theta=np.zeros(N_DOF - 3))


@dataclass
class IkResult:
    angles: JointAngles
    cost: float          # sum_j w_j ||FK_j - target_j||^2, ft^2
    residual: float      # weighted RMS position error, ft
    iterations: int
    converged: bool
    history: np.ndarray  # cost after each accepted iteration


def fk(angles: JointAngles, skeleton: SkeletonModel) -> np.ndarray:
    """Joint positions (17, 3) for the given angles."""
    return backend.fk_frame(
        angles.q, angles.root_pos, skeleton.offsets, TOPO,
        DOF_KIND, DOF_START, skeleton.hinge_axes,
    )


def fk_q(q, root_pos, skeleton: SkeletonModel) -> np.ndarray:
    return backend.fk_frame(q, root_pos, skeleton.offsets, TOPO,
                            DOF_KIND, DOF_START, skeleton.hinge_axes)


def _cost(pos, target, w):
    d = pos - target
    return float(np.sum(w * np.sum(d * d, axis=1)))


def ik_fit(frame_xyz, skeleton: SkeletonModel, init: JointAngles | None = None, *,
           max_iter: int = 50, tol_deg: float = 1e-4, damping: float = 1e-3,
           strict: bool = False) -> IkResult:
    """Fit joint angles to one bone-length-consistent frame.

    The root position is pinned to the frame's pelvis; the init (rest pose
    when omitted) is clamped into the limit box before solving.  Returns
    the best iterate; with ``strict=True`` raises NonConvergence when the
    step tolerance was not met within ``max_iter`` iterations.
    """
    target = np.asarray(frame_xyz, dtype=np.float64)
    root_pos = target[int(J.PELVIS)].copy()
    lo, hi = skeleton.limits_lo, skeleton.limits_hi
    q = JointAngles.zero(root_pos).q if init is None else init.q.copy()
    q = np.clip(q, lo, hi)

    offsets = skeleton.offsets
    axes = skeleton.hinge_axes
    w = skeleton.weights
    sqrtw = np.sqrt(w)

    pos = backend.fk_frame(q, root_pos, offsets, TOPO, DOF_KIND, DOF_START, axes)
    cost = _cost(pos, target, w)
    history = [cost]
    converged = False
    iterations = 0

    for _ in range(max_iter):
        pos, jac = backend.fk_jac_frame(
            q, root_pos, offsets, TOPO, DOF_KIND, DOF_START, axes,
            DESCENDANTS, N_DOF,
        )
        r = ((pos - target) * sqrtw[:, None]).ravel()
        jw = (jac * sqrtw[:, None, None]).reshape(3 * N_JOINTS, N_DOF)
        h = jw.T @ jw + damping * np.eye(N_DOF)
        g = jw.T @ r
        delta = -np.linalg.solve(h, g)

        trial = q
        trial_cost = cost
        improved = False
        for _half in range(9):
            cand = np.clip(q + delta, lo, hi)
            cand_pos = backend.fk_frame(cand, root_pos, offsets, TOPO,
                                        DOF_KIND, DOF_START, axes)
            cand_cost = _cost(cand_pos, target, w)
            if cand_cost <= cost:
                trial, trial_cost, improved = cand, cand_cost, True
                break
            delta = 0.5 * delta
        if not improved:
            converged = True  # projected stationary point: no descent step
            break
        step = float(np.max(np.abs(trial - q)))
        q, cost = trial, trial_cost
        iterations += 1
        history.append(cost)
        if step < tol_deg:
            converged = True
            break

    result = IkResult(
        angles=JointAngles.from_q(q, root_pos),
        cost=cost,
        residual=float(np.sqrt(cost / np.sum(w))),
        iterations=iterations,
        converged=converged,
        history=np.asarray(history),
    )
    if strict and not converged:
        raise NonConvergence(
            f"IK stopped after {iterations} iterations with cost {cost:.3g}"
        )
    return result


def solve_sequence(xyz, skeleton: SkeletonModel, *, max_iter: int = 50,
                   tol_deg: float = 1e-4, damping: float = 1e-3):
    """Warm-started IK over a whole sequence.

    Frame 0 starts from the rest pose; every later frame starts from the
    previous solution.  Returns (q (T, 22), cost (T,), converged (T,)).
    """
    xyz = np.asarray(xyz, dtype=np.float64)
    n = xyz.shape[0]
    qs = np.zeros((n, N_DOF))
    costs = np.zeros(n)
    ok = np.zeros(n, dtype=bool)
    prev: JointAngles | None = None
    for t in range(n):
        res = ik_fit(xyz[t], skeleton, init=prev, max_iter=max_iter,
                     tol_deg=tol_deg, damping=damping)
        prev = res.angles
        qs[t] = res.angles.q
        costs[t] = res.cost
        ok[t] = res.converged
    return qs, costs, ok


def fk_sequence(qs, root_pos, skeleton: SkeletonModel) -> np.ndarray:
    """FK for a (T, 22) angle trajectory with per-frame root positions."""
    qs = np.asarray(qs, dtype=np.float64)
    root_pos = np.asarray(root_pos, dtype=np.float64)
    out = np.zeros((qs.shape[0], N_JOINTS, 3))
    offsets = skeleton.offsets
    for t in range(qs.shape[0]):
        out[t] = backend.fk_frame(qs[t], root_pos[t], offsets, TOPO,
                                  DOF_KIND, DOF_START, skeleton.hinge_axes)
    return out
