"""Closed-form calculus of compactly supported smooth 1-D test functions.

A test function is P((y-c)/rho) * B((y-c)/rho) where B(t) = exp(-1/(1-t^2))
inside (-1, 1) and exactly 0 outside.  The class is closed under the scaling
action r (.) phi = (1/r) phi(./r) and the translation action x (+) phi =
phi(. - x), which makes support bookkeeping, moments and unit-mass mollifier
construction exact enough for desk-scale verification.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels

STRUCT_TOL = 1e-12
QUAD_TOL = 1e-12
DEFAULT_MAX_Q = 6
DEFAULT_MAX_DERIV = 4


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach its tolerance."""

    def __init__(self, achieved):
        self.achieved = achieved
        super().__init__(f"quadrature did not converge; achieved tolerance {achieved:.3e}")


class ConstructionError(ValueError):
    """Mollifier moment system too ill-conditioned to trust."""

    def __init__(self, cond):
        self.cond = cond
        super().__init__(f"moment matrix condition estimate {cond:.3e} beyond tolerance")


_GL_CACHE = {}


def _gl(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _panel(f, a, b, n):
    x, w = _gl(n)
    ys = 0.5 * (b - a) * x + 0.5 * (a + b)
    return 0.5 * (b - a) * float(np.sum(w * f(ys)))


def adaptive_quad(f, a, b, tol=QUAD_TOL, n=64, max_depth=14, _depth=0):
    """Integrate a vectorized f on [a, b] by bisected Gauss-Legendre panels."""
    if a >= b:
        return 0.0
    whole = _panel(f, a, b, n)
    m = 0.5 * (a + b)
    halves = _panel(f, a, m, n) + _panel(f, m, b, n)
    err = abs(whole - halves)
    if err <= tol:
        return halves
    if _depth >= max_depth:
        raise QuadratureError(err)
    return adaptive_quad(f, a, m, tol / 2, n, max_depth, _depth + 1) + adaptive_quad(
        f, m, b, tol / 2, n, max_depth, _depth + 1
    )


@dataclass
class TestFunction:
    """phi(y) = P((y-c)/rho) * B((y-c)/rho) with polynomial coefficients in ascending order."""

    __test__ = False  # keep pytest from collecting the class

    center: float
    radius: float
    coeffs: tuple
    _mass: float = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        self.coeffs = tuple(float(c) for c in self.coeffs)

    def __hash__(self):
        # consistent with eq, which ignores the cached mass
        return hash((self.center, self.radius, self.coeffs))

    @property
    def is_zero(self):
        return all(c == 0.0 for c in self.coeffs) or not self.coeffs

    def support(self):
        return (self.center - self.radius, self.center + self.radius)

    def eval_array(self, ys, d=0, max_order=None):
        """d-th derivative values at the points ys; exactly 0 outside the support."""
        cap = _kernels.MAX_ORDER if max_order is None else max_order
        if d < 0 or d > cap:
            raise ValueError(f"derivative order {d} outside supported range 0..{cap}")
        ys = np.asarray(ys, dtype=np.float64)
        ts = (ys - self.center) / self.radius
        vals = _kernels.bump_poly_deriv(np.array(self.coeffs), ts, d)
        return vals / self.radius**d

    def eval(self, y, d=0, max_order=DEFAULT_MAX_DERIV):
        return float(self.eval_array(np.array([y]), d, max_order=max_order)[0])

    def __call__(self, y):
        return self.eval(y)

    def mass(self):
        """Cached integral of phi over its support."""
        if self._mass is None:
            lo, hi = self.support()
            if self.is_zero:
                self._mass = 0.0
            else:
                self._mass = adaptive_quad(lambda ys: self.eval_array(ys), lo, hi)
        return self._mass

    def cumulative(self, ys):
        """Values of the antiderivative Phi(y) = integral of phi up to y."""
        ys = np.asarray(ys, dtype=np.float64)
        lo, hi = self.support()
        clipped = np.clip(ys, lo, hi)
        order = np.argsort(clipped)
        out = np.empty_like(clipped)
        acc = 0.0
        prev = lo
        for idx in order:
            y = clipped[idx]
            if y > prev:
                acc += adaptive_quad(lambda t: self.eval_array(t), prev, y, tol=1e-13)
                prev = y
            out[idx] = acc
        return out


def base_bump(center=0.0, radius=1.0):
    return TestFunction(center, radius, (1.0,))


def zero_function():
    return TestFunction(0.0, 1.0, (0.0,))


def scale(r, phi):
    """The scaling action: (1/r) phi(./r); center and radius scale, coefficients divide by r."""
    if r <= 0:
        raise ValueError("scaling factor must be positive")
    return TestFunction(r * phi.center, r * phi.radius, tuple(c / r for c in phi.coeffs))


def translate(x, phi):
    """The translation action phi(. - x)."""
    return TestFunction(phi.center + x, phi.radius, phi.coeffs)


def diam_supp(phi):
    """Support diameter: 2*radius unless the polynomial factor vanishes identically."""
    return 0.0 if phi.is_zero else 2.0 * phi.radius


def structurally_equal(phi, psi, tol=STRUCT_TOL):
    """Closed-form equality on (center, radius, coefficients) up to tol."""
    if abs(phi.center - psi.center) > tol or abs(phi.radius - psi.radius) > tol:
        return False
    n = max(len(phi.coeffs), len(psi.coeffs))
    a = list(phi.coeffs) + [0.0] * (n - len(phi.coeffs))
    b = list(psi.coeffs) + [0.0] * (n - len(psi.coeffs))
    return all(abs(x - y) <= tol for x, y in zip(a, b))


def moment(phi, j, tol=QUAD_TOL, n=64):
    """Integral of y^j phi(y) dy by adaptive Gauss-Legendre on the support."""
    if j < 0:
        raise ValueError("moment order must be nonnegative")
    if phi.is_zero:
        return 0.0
    lo, hi = phi.support()
    return adaptive_quad(lambda ys: ys**j * phi.eval_array(ys), lo, hi, tol=tol, n=n)


def format_testfn(phi):
    """Textual form bump(center, radius; c0, c1, ...), round-trippable."""
    coeffs = ", ".join(repr(c) for c in phi.coeffs)
    return f"bump({phi.center!r}, {phi.radius!r}; {coeffs})"


def parse_testfn(text):
    """Parse the bump(center, radius; c0, c1, ...) textual form."""
    body = text.strip()
    if not (body.startswith("bump(") and body.endswith(")")):
        raise ValueError(f"not a bump literal: {text!r}")
    inner = body[len("bump(") : -1]
    try:
        head, coeff_part = inner.split(";")
        center_s, radius_s = head.split(",")
        coeffs = tuple(float(c) for c in coeff_part.split(",") if c.strip())
    except ValueError as exc:
        raise ValueError(f"malformed bump literal {text!r}: {exc}") from None
    return TestFunction(float(center_s), float(radius_s), coeffs)


_BASE_MOMENTS = {}


def _base_moment(k):
    # monomial moments of the base bump on [-1, 1]; odd ones vanish by symmetry
    if k not in _BASE_MOMENTS:
        if k % 2 == 1:
            _BASE_MOMENTS[k] = 0.0
        else:
            _BASE_MOMENTS[k] = adaptive_quad(
                lambda ts: ts**k * _kernels.bump_poly_deriv(np.array([1.0]), ts, 0),
                -1.0,
                1.0,
                tol=1e-14,
            )
    return _BASE_MOMENTS[k]


def make_Aq(q, rho=1.0, max_q=DEFAULT_MAX_Q, cond_limit=1e12):
    """Unit-mass mollifier with vanishing moments of orders 1..q.

    Solves the (q+1)x(q+1) linear system pairing polynomial coefficients
    against the base bump's monomial moments.
    """
    if q < 0 or q > max_q:
        raise ValueError(f"moment order {q} outside supported range 0..{max_q}")
    if rho <= 0:
        raise ValueError("radius must be positive")
    m = np.array([[_base_moment(i + j) for i in range(q + 1)] for j in range(q + 1)])
    cond = np.linalg.cond(m)
    if cond > cond_limit:
        raise ConstructionError(cond)
    rhs = np.array([1.0 / rho ** (j + 1) if j == 0 else 0.0 for j in range(q + 1)])
    sol = np.linalg.solve(m, rhs)
    # one step of iterative refinement keeps residual moments near machine precision
    sol += np.linalg.solve(m, rhs - m @ sol)
    return TestFunction(0.0, rho, tuple(sol))
