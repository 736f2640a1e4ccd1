"""Pure-numpy kernel implementations.

Same call signatures as the compiled ``pitchkin._native`` extension; the
active implementation is chosen in :mod:`pitchkin.backend`.

Conventions shared by both backends:

* ``q`` is the per-frame angle vector in degrees.  Entries 0..2 are the
  root orientation (intrinsic Z-X-Y); each articulated joint owns a slice
  starting at ``dof_start[j]`` (3 entries for ball joints, 1 for hinges).
* ``offsets`` are child-indexed rest bone vectors (parent frame = world
  frame at rest), ``topo`` lists (parent, child) pairs in tree order.
* ``dof_kind``: 0 = fixed, 1 = hinge, 2 = ball, 3 = root.
"""

from __future__ import annotations

import numpy as np

DEG = np.pi / 180.0
_EDGE_EPS = 1e-6


def _rot_z(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _rot_x(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def _rot_y(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def _rot_zxy(a_deg, b_deg, c_deg):
    return _rot_z(a_deg * DEG) @ _rot_x(b_deg * DEG) @ _rot_y(c_deg * DEG)


def _rot_axis(axis, a_deg):
    a = a_deg * DEG
    c, s = np.cos(a), np.sin(a)
    x, y, z = axis
    k = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    return np.eye(3) + s * k + (1.0 - c) * (k @ k)


def fk_frame(q, root_pos, offsets, topo, dof_kind, dof_start, hinge_axes):
    """Forward kinematics for one frame. Returns (17, 3) joint positions."""
    pos, _ = _fk_core(q, root_pos, offsets, topo, dof_kind, dof_start, hinge_axes)
    return pos


def _fk_core(q, root_pos, offsets, topo, dof_kind, dof_start, hinge_axes):
    n = offsets.shape[0]
    pos = np.zeros((n, 3))
    rot = np.zeros((n, 3, 3))
    root = int(topo[0, 0])
    pos[root] = root_pos
    rot[root] = _rot_zxy(q[0], q[1], q[2])
    for p, c in topo:
        pos[c] = pos[p] + rot[p] @ offsets[c]
        kind = dof_kind[c]
        if kind == 0:
            rot[c] = rot[p]
        elif kind == 1:
            rot[c] = rot[p] @ _rot_axis(hinge_axes[c], q[dof_start[c]])
        else:
            s = dof_start[c]
            rot[c] = rot[p] @ _rot_zxy(q[s], q[s + 1], q[s + 2])
    return pos, rot


def fk_jac_frame(q, root_pos, offsets, topo, dof_kind, dof_start, hinge_axes,
                 descendants, n_dof):
    """FK plus the analytic position Jacobian.

    Returns ``(pos (17,3), jac (17,3,n_dof))`` with jac in ft/degree: the
    derivative of joint j's position w.r.t. angle k is w_k x (x_j - p_k)
    for joints below the dof's owner, where w_k is the dof's world axis.
    """
    n = offsets.shape[0]
    pos = np.zeros((n, 3))
    rot = np.zeros((n, 3, 3))
    axes = np.zeros((n_dof, 3))
    pivots = np.zeros((n_dof, 3))
    owners = np.zeros(n_dof, dtype=np.int64)

    root = int(topo[0, 0])
    pos[root] = root_pos
    rz = _rot_z(q[0] * DEG)
    rzx = rz @ _rot_x(q[1] * DEG)
    rot[root] = rzx @ _rot_y(q[2] * DEG)
    axes[0] = (0.0, 0.0, 1.0)
    axes[1] = rz[:, 0]
    axes[2] = rzx[:, 1]
    pivots[0:3] = root_pos
    owners[0:3] = root

    for p, c in topo:
        pos[c] = pos[p] + rot[p] @ offsets[c]
        kind = dof_kind[c]
        if kind == 0:
            rot[c] = rot[p]
        elif kind == 1:
            k = dof_start[c]
            axes[k] = rot[p] @ hinge_axes[c]
            pivots[k] = pos[c]
            owners[k] = c
            rot[c] = rot[p] @ _rot_axis(hinge_axes[c], q[k])
        else:
            s = dof_start[c]
            rz = _rot_z(q[s] * DEG)
            rzx = rz @ _rot_x(q[s + 1] * DEG)
            axes[s] = rot[p][:, 2]
            axes[s + 1] = rot[p] @ rz[:, 0]
            axes[s + 2] = rot[p] @ rzx[:, 1]
            pivots[s:s + 3] = pos[c]
            owners[s:s + 3] = c
            rot[c] = rot[p] @ rzx @ _rot_y(q[s + 2] * DEG)

    jac = np.zeros((n, 3, n_dof))
    for k in range(n_dof):
        mask = descendants[owners[k]].astype(bool)
        lever = pos[mask] - pivots[k]
        jac[mask, :, k] = DEG * np.cross(axes[k], lever)
    return pos, jac


def bone_pass(xyz, topo, lengths, init_dirs, passes):
    """Project every bone onto its reference length, root outward.

    ``xyz`` is (T, 17, 3) and is not modified; a corrected copy is
    returned together with the count of degenerate bone instances that
    fell back to a previous frame's (or the reference) direction.
    Frames are processed in order: a bone whose predicted direction is
    shorter than 1e-6 ft reuses the direction used at the previous frame.
    """
    out = np.array(xyz, dtype=np.float64, copy=True)
    n_frames = out.shape[0]
    n_degenerate = 0
    for _ in range(passes):
        for p, c in topo:
            v = out[:, c] - out[:, p]
            norms = np.linalg.norm(v, axis=1)
            good = norms >= _EDGE_EPS
            dirs = np.empty((n_frames, 3))
            dirs[good] = v[good] / norms[good, None]
            if not good.all():
                bad = np.flatnonzero(~good)
                n_degenerate += bad.size
                for t in bad:
                    dirs[t] = dirs[t - 1] if t > 0 else init_dirs[c]
            out[:, c] = out[:, p] + lengths[c] * dirs
    return out, n_degenerate
