"""Hot numeric kernels: derivatives of polynomial-times-bump profiles on point arrays.

The profile is f(t) = P(t) * B(t) with B(t) = exp(-1/(1-t^2)) for |t| < 1 and 0
otherwise.  Derivatives are evaluated by truncated-Taylor (jet) arithmetic:
jets of 1-t^2, its reciprocal, exp, and the polynomial are combined and the
d-th Taylor coefficient is read off.  This is the inner loop of quadrature and
of grid sup estimation, so it carries a numba @njit implementation with a pure
numpy fallback selected by the EPSNETS_DISABLE_NUMBA environment variable.
"""

import math
import os

import numpy as np

__all__ = [
    "BACKEND",
    "bump_poly_deriv",
    "bump_poly_deriv_numpy",
    "bump_poly_deriv_numba",
]

# Jet order cap; RepNet kernel orders plus sup derivative orders stay below this.
MAX_ORDER = 10


def bump_poly_deriv_numpy(coeffs, ts, d):
    """d-th derivative of P(t)*B(t) at each t, vectorized across points."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    ts = np.asarray(ts, dtype=np.float64)
    out = np.zeros(ts.shape[0])
    inside = np.abs(ts) < 1.0
    if not inside.any():
        return out
    t = ts[inside]
    m = d
    w0 = 1.0 - t * t
    # jet of 1/(1-t^2); the base jet 1-t^2 has coefficients [w0, -2t, -1, 0, ...]
    r = np.zeros((t.size, m + 1))
    r[:, 0] = 1.0 / w0
    for k in range(1, m + 1):
        s = (-2.0 * t) * r[:, k - 1]
        if k >= 2:
            s -= r[:, k - 2]
        r[:, k] = -s / w0
    g = -r
    b = np.zeros_like(r)
    b[:, 0] = np.exp(g[:, 0])
    for k in range(1, m + 1):
        s = np.zeros(t.size)
        for j in range(1, k + 1):
            s += j * g[:, j] * b[:, k - j]
        b[:, k] = s / k
    # polynomial jet by Horner in (t + h)
    p = np.zeros_like(r)
    for c in coeffs[::-1]:
        pn = np.empty_like(p)
        pn[:, 0] = p[:, 0] * t + c
        for k in range(1, m + 1):
            pn[:, k] = p[:, k] * t + p[:, k - 1]
        p = pn
    fd = np.zeros(t.size)
    for j in range(m + 1):
        fd += p[:, j] * b[:, m - j]
    out[inside] = fd * math.factorial(m)
    return out


def _make_numba_impl():
    from numba import njit

    @njit(cache=True)
    def _deriv(coeffs, ts, d, out):  # pragma: no cover - exercised via wrapper
        m = d
        nc = coeffs.shape[0]
        fact = 1.0
        for i in range(2, m + 1):
            fact *= i
        r = np.empty(m + 1)
        g = np.empty(m + 1)
        b = np.empty(m + 1)
        p = np.empty(m + 1)
        pn = np.empty(m + 1)
        for idx in range(ts.shape[0]):
            t = ts[idx]
            if t <= -1.0 or t >= 1.0:
                out[idx] = 0.0
                continue
            w0 = 1.0 - t * t
            if w0 <= 0.0:
                out[idx] = 0.0
                continue
            r[0] = 1.0 / w0
            for k in range(1, m + 1):
                s = -2.0 * t * r[k - 1]
                if k >= 2:
                    s -= r[k - 2]
                r[k] = -s / w0
            for k in range(m + 1):
                g[k] = -r[k]
            b[0] = np.exp(g[0])
            for k in range(1, m + 1):
                s = 0.0
                for j in range(1, k + 1):
                    s += j * g[j] * b[k - j]
                b[k] = s / k
            for k in range(m + 1):
                p[k] = 0.0
            for ci in range(nc - 1, -1, -1):
                pn[0] = p[0] * t + coeffs[ci]
                for k in range(1, m + 1):
                    pn[k] = p[k] * t + p[k - 1]
                for k in range(m + 1):
                    p[k] = pn[k]
            s = 0.0
            for j in range(m + 1):
                s += p[j] * b[m - j]
            out[idx] = s * fact

    def wrapper(coeffs, ts, d):
        coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
        ts = np.ascontiguousarray(ts, dtype=np.float64)
        out = np.empty(ts.shape[0])
        _deriv(coeffs, ts, d, out)
        return out

    return wrapper


bump_poly_deriv_numba = None
if not os.environ.get("EPSNETS_DISABLE_NUMBA"):
    try:
        bump_poly_deriv_numba = _make_numba_impl()
        BACKEND = "numba"
    except ImportError:
        BACKEND = "numpy"
else:
    BACKEND = "numpy"

bump_poly_deriv = bump_poly_deriv_numba if BACKEND == "numba" else bump_poly_deriv_numpy
