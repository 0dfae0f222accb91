"""Chebyshev grids and refined sup estimation on closed intervals."""

import numpy as np


def cheb_points(lo, hi, n=257):
    """Chebyshev points of the second kind mapped to [lo, hi], endpoints included."""
    if n < 2:
        return np.array([0.5 * (lo + hi)])
    j = np.arange(n)
    x = np.cos(np.pi * j / (n - 1))[::-1]
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * x


def refine_sup(f, lo, hi, n=257, focus=None, rounds=6, factor=4, rel_tol=1e-4):
    """Sup of |f| on [lo, hi] by Chebyshev sampling refined near the running max.

    ``focus`` lists extra windows that get their own grids (kernel supports
    much narrower than the interval would otherwise fall between grid points).
    Returns (sup, argmax, stable); ``stable`` reports whether the last
    refinement round moved the sup by less than ``rel_tol`` relatively.
    """
    pts = [cheb_points(lo, hi, n)]
    for wlo, whi in focus or ():
        wlo, whi = max(lo, wlo), min(hi, whi)
        if wlo < whi:
            pts.append(cheb_points(wlo, whi, max(65, n // 4)))
    xs = np.unique(np.concatenate(pts))
    vals = np.abs(f(xs))
    sup = float(vals.max())
    arg = float(xs[int(vals.argmax())])
    stable = False
    for _ in range(rounds):
        i = int(vals.argmax())
        a = xs[max(0, i - 1)]
        b = xs[min(len(xs) - 1, i + 1)]
        if b <= a:
            stable = True
            break
        extra = np.linspace(a, b, 2 * factor + 3)[1:-1]
        xs = np.unique(np.concatenate([xs, extra]))
        vals = np.abs(f(xs))
        new_sup = float(vals.max())
        arg = float(xs[int(vals.argmax())])
        if new_sup <= sup * (1 + rel_tol) and new_sup >= sup * (1 - rel_tol):
            sup = max(sup, new_sup)
            stable = True
            break
        sup = max(sup, new_sup)
    return sup, arg, stable
