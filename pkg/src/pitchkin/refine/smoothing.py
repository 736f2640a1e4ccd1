"""Savitzky-Golay temporal smoothing of pose sequences and series."""

from __future__ import annotations

import warnings

import numpy as np
from scipy.signal import savgol_filter

from ..core import PoseSequence
from ..errors import BadFilterParams


def check_filter_params(window: int, order: int):
    if window < 3 or window % 2 == 0:
        raise BadFilterParams(f"window must be odd and >= 3, got {window}")
    if order < 0 or order >= window:
        raise BadFilterParams(f"order must satisfy 0 <= order < window, got {order}")


def savgol_series(values, window: int = 15, order: int = 3, axis: int = 0):
    """Savitzky-Golay smoothing along ``axis``.

    Endpoints use scipy's polynomial edge fit, which keeps the filter exact
    on polynomials up to ``order`` over the whole support.
    """
    check_filter_params(window, order)
    values = np.asarray(values, dtype=np.float64)
    if values.shape[axis] < window:
        raise BadFilterParams(
            f"series length {values.shape[axis]} shorter than window {window}"
        )
    return savgol_filter(values, window, order, axis=axis, mode="interp")


def smooth_sequence(seq: PoseSequence, window: int = 15, order: int = 3) -> PoseSequence:
    """Filter each joint coordinate independently along time.

    Sequences shorter than the window are returned unchanged with a
    warning, per the filter's minimum-support requirement.
    """
    check_filter_params(window, order)
    if len(seq) < window:
        warnings.warn(
            f"sequence of {len(seq)} frames is shorter than the smoothing "
            f"window {window}; returning it unchanged",
            stacklevel=2,
        )
        return seq.copy()
    return seq.with_xyz(savgol_series(seq.xyz, window, order, axis=0))
