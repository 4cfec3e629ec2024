r"""Bessel and Hankel functions of integer order and real argument.

Everything here is computed from scratch:

* :math:`J_m` by the ascending power series for ``x <= 1`` and by Miller's
  backward recurrence, normalised with :math:`J_0 + 2\sum_k J_{2k} = 1`,
  for larger arguments;
* :math:`Y_0` and :math:`Y_1` from the Neumann series in the even/odd
  :math:`J_k` values, then :math:`Y_m` by forward recurrence (which is the
  stable direction for the second kind);
* :math:`H^{(1)}_m = J_m + i Y_m`.

The public scalar-style functions accept numpy arrays for ``x`` and check
the supported envelope ``0 <= m <= 60``, ``1e-8 <= x <= 100``.  The
``*_table`` helpers skip the upper argument cap; the operators use them
for kernel evaluations at large distances.
"""

import math

import numpy as np

EULER_GAMMA = 0.57721566490153286061

MAX_ORDER = 60
MIN_ARG = 1e-8
MAX_ARG = 100.0

_SERIES_SWITCH = 1.0
_SERIES_TERMS = 24
_OVERFLOW_LIMIT = 1e300
_RESCALE_AT = 1e250


class BesselEnvelopeError(ValueError):
    """Order or argument outside the supported envelope."""


class BesselOverflowError(OverflowError):
    """|Y_m(x)| exceeded the representable range (treated as infinite)."""


def _check_envelope(m, x, cap=True):
    if int(m) != m or m < 0 or m > MAX_ORDER:
        raise BesselEnvelopeError(f"order {m} outside 0..{MAX_ORDER}")
    x = np.asarray(x, dtype=float)
    if x.size and (np.min(x) < MIN_ARG or not np.all(np.isfinite(x))):
        raise BesselEnvelopeError(f"argument below {MIN_ARG} or not finite")
    if cap and x.size and np.max(x) > MAX_ARG:
        raise BesselEnvelopeError(f"argument above {MAX_ARG}")
    return x


def _miller_start(mmax, xmax):
    big = max(mmax, xmax, 1.0)
    start = int(big + 20 + math.sqrt(40.0 * big))
    return start + (start % 2)


def _j_series(x, top):
    """Rows J_0..J_top from the power series (intended for x <= 1)."""
    out = np.empty((top + 1,) + x.shape)
    half = 0.5 * x
    quarter_sq = -half * half
    lead = np.ones_like(x)
    for m in range(top + 1):
        term = lead.copy()
        total = lead.copy()
        for k in range(1, _SERIES_TERMS):
            term = term * quarter_sq / (k * (m + k))
            total += term
        out[m] = total
        lead = lead * half / (m + 1)
    return out


def _j_miller(x, top):
    """Rows J_0..J_top by backward recurrence from order ``top`` + margin."""
    start = _miller_start(top, float(np.max(x)))
    out = np.zeros((top + 1,) + x.shape)
    j_next = np.zeros_like(x)
    j_cur = np.full_like(x, 1e-30)
    even_sum = np.zeros_like(x)
    for order in range(start, 0, -1):
        j_prev = (2.0 * order / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        # j_cur now holds the unnormalised J_{order-1}
        if order - 1 <= top:
            out[order - 1] = j_cur
        if (order - 1) % 2 == 0 and order - 1 > 0:
            even_sum += j_cur
        big = np.abs(j_cur) > _RESCALE_AT
        if np.any(big):
            scale = np.where(big, 1.0 / _RESCALE_AT, 1.0)
            j_cur *= scale
            j_next *= scale
            even_sum *= scale
            out[order - 1:] *= scale
    norm = j_cur + 2.0 * even_sum
    return out / norm


def _j_rows(x, top):
    out = np.empty((top + 1,) + x.shape)
    small = x <= _SERIES_SWITCH
    if np.any(small):
        out[:, small] = _j_series(x[small], top)
    if np.any(~small):
        out[:, ~small] = _j_miller(x[~small], top)
    return out


def _neumann_top(x):
    # J_k(x) is negligible once k exceeds the Miller margin for max(x)
    return _miller_start(0, float(np.max(x))) if x.size else 2


def bessel_table(mmax, x):
    """Return ``(J, Y)`` arrays of shape ``(mmax + 1,) + x.shape``.

    No upper cap is placed on ``x`` (cost grows linearly with ``max(x)``);
    ``x`` must be positive.  Raises :class:`BesselOverflowError` if any
    ``|Y_m|`` leaves the representable range.
    """
    x = np.asarray(x, dtype=float)
    if x.size and np.min(x) <= 0.0:
        raise BesselEnvelopeError("Bessel table needs positive arguments")
    top = max(mmax + 1, _neumann_top(x))
    J = _j_rows(x, top)

    log_term = np.log(0.5 * x) + EULER_GAMMA
    even = np.zeros_like(x)
    odd = np.zeros_like(x)
    for k in range(1, top // 2 + 1):
        sign = -1.0 if k % 2 else 1.0
        even += sign * J[2 * k] / k
        if 2 * k + 1 <= top:
            odd += sign * (J[2 * k - 1] - J[2 * k + 1]) / k
        else:
            odd += sign * J[2 * k - 1] / k
    y0 = (2.0 / np.pi) * (log_term * J[0] - 2.0 * even)
    # Y_1 = -Y_0', differentiating the Neumann series term by term
    y1 = -(2.0 / np.pi) * (J[0] / x - log_term * J[1] - odd)

    Y = np.empty((mmax + 1,) + x.shape)
    Y[0] = y0
    if mmax >= 1:
        Y[1] = y1
    with np.errstate(over="ignore", invalid="ignore"):
        for m in range(1, mmax):
            Y[m + 1] = (2.0 * m / x) * Y[m] - Y[m - 1]
    if not np.all(np.isfinite(Y)) or np.max(np.abs(Y), initial=0.0) > _OVERFLOW_LIMIT:
        raise BesselOverflowError(
            f"|Y_m(x)| overflows for some m <= {mmax}, min x = {np.min(x):.3g}"
        )
    return J[: mmax + 1], Y


def hankel1_table(mmax, x):
    """Rows H^(1)_0 .. H^(1)_mmax at ``x`` (no upper cap on ``x``)."""
    J, Y = bessel_table(mmax, x)
    return J + 1j * Y


def bessel_j(m, x):
    """Bessel function of the first kind J_m(x)."""
    x = _check_envelope(m, x)
    xa = np.atleast_1d(x)
    J = _j_rows(xa, max(int(m) + 1, 2))[int(m)]
    return J.reshape(x.shape)[()]


def bessel_y(m, x):
    """Bessel function of the second kind Y_m(x)."""
    x = _check_envelope(m, x)
    _, Y = bessel_table(int(m), np.atleast_1d(x))
    return Y[int(m)].reshape(x.shape)[()]


def hankel1(m, x):
    """Hankel function of the first kind H^(1)_m(x) = J_m(x) + i Y_m(x)."""
    x = _check_envelope(m, x)
    J, Y = bessel_table(int(m), np.atleast_1d(x))
    return (J[int(m)] + 1j * Y[int(m)]).reshape(x.shape)[()]


def bessel_j_deriv(m, x):
    """Derivative J'_m(x); uses J'_0 = -J_1 and (J_{m-1} - J_{m+1})/2."""
    x = _check_envelope(m, x)
    J = _j_rows(np.atleast_1d(x), int(m) + 1)
    d = -J[1] if m == 0 else 0.5 * (J[m - 1] - J[m + 1])
    return d.reshape(x.shape)[()]


def bessel_y_deriv(m, x):
    """Derivative Y'_m(x)."""
    x = _check_envelope(m, x)
    _, Y = bessel_table(int(m) + 1, np.atleast_1d(x))
    d = -Y[1] if m == 0 else 0.5 * (Y[m - 1] - Y[m + 1])
    return d.reshape(x.shape)[()]
