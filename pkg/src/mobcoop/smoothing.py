"""Savitzky-Golay smoothing for exported series."""
from __future__ import annotations

import numpy as np

from .exceptions import DomainError


def savgol_coefficients(window, order, pos=None):
    """Weights that evaluate the local least-squares polynomial at offset ``pos``.

    ``pos`` is measured from the start of the window and defaults to its
    centre. Dotting the weights with ``window`` consecutive samples gives the
    fitted value there.
    """
    half = window // 2
    if pos is None:
        pos = half
    x = np.arange(window, dtype=float) - pos
    V = np.vander(x, order + 1, increasing=True)
    # row 0 of the pseudo-inverse picks the constant term of the fit
    return np.linalg.pinv(V)[0]


def _check(series, window, order):
    y = np.asarray(series, dtype=float)
    if y.ndim != 1:
        raise DomainError("series must be one-dimensional", "series")
    if int(window) != window or window < 3 or window % 2 == 0:
        raise DomainError(f"window must be an odd integer >= 3, got {window!r}", "window")
    if int(order) != order or order < 0 or order >= window:
        raise DomainError(f"order must be an integer in [0, window), got {order!r}", "order")
    if y.size < window:
        raise DomainError(f"series of length {y.size} is shorter than the window {window}", "series")
    return y, int(window), int(order)


def savitzky_golay(series, window=11, order=3, mode="interp"):
    """Replace each point by the value of a local least-squares polynomial.

    Parameters
    ----------
    series : array_like
        Samples on a uniform grid.
    window : int
        Odd window length.
    order : int
        Polynomial degree, below ``window``.
    mode : {"interp", "mirror"}
        Edge handling. ``"interp"`` evaluates the polynomial fitted to the
        first (last) full window at the edge points, so polynomials up to
        ``order`` pass through unchanged everywhere. ``"mirror"`` reflects
        the series about its end samples before filtering.

    Returns
    -------
    numpy.ndarray
        Smoothed series of the same length.
    """
    y, window, order = _check(series, window, order)
    half = window // 2
    h = savgol_coefficients(window, order)
    if mode == "mirror":
        padded = np.concatenate([y[half:0:-1], y, y[-2:-half - 2:-1]])
        return np.correlate(padded, h, mode="valid")
    if mode != "interp":
        raise DomainError(f"unknown edge mode {mode!r}", "mode")
    out = np.correlate(y, h, mode="valid")
    head = [savgol_coefficients(window, order, pos=p) @ y[:window] for p in range(half)]
    tail = [savgol_coefficients(window, order, pos=p) @ y[-window:] for p in range(half + 1, window)]
    return np.concatenate([head, out, tail])
