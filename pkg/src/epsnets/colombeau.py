"""Desk-scale generalized functions: moderate and negligible nets of smooth
functions, quotient equality, canonical embeddings, and point values.

Representatives live in a closed symbolic class: finite sums of atoms

    gauge^p * P(x) * prod_i  k_i^(j_i)((x - a_i) / gauge^(s_i))

where each k_i is a compactly supported profile (j = -1 denotes its
antiderivative).  The class is closed under +, * and d/dx with exact rational
bookkeeping, so quotient identities like d(heaviside) = delta hold at the
normal-form level, while moderateness and negligibility are decided by a
symbolic exponent track cross-checked against slope fits of grid sups.
"""

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import bigo, indexsets
from .bigo import Counterexample, SampledNet, SymbolicNet, bigo_pointwise, lift
from .grids import refine_sup
from .indexsets import PreconditionError, UnsupportedInstanceError
from .testfn import TestFunction

REAL_LINE = (-math.inf, math.inf)
SLOPE_BAND = 0.25
DEFAULT_ALPHA_MAX = 3
DEFAULT_M_MAX = 4
FIT_KMIN, FIT_KMAX = 8, 20
CERT_KMAX = 32
UNIT_MASS_TOL = 1e-7


class DomainMismatchError(ValueError):
    """Operands live on different host domains."""


class DomainShrinkError(ValueError):
    """K is not compactly contained in the shrunken domain of some index point."""

    def __init__(self, point, domain):
        self.point = point
        super().__init__(f"compact set escapes the domain {domain} at index point {point}")


class RejectionError(ValueError):
    """A candidate net fails moderateness or domain containment."""

    def __init__(self, message, counterexample=None):
        self.counterexample = counterexample
        super().__init__(message)


class IndeterminateError(ArithmeticError):
    """A finite probe could not settle the verdict."""


# ---------------------------------------------------------------------------
# the representative class


@dataclass(frozen=True)
class KernelFactor:
    kernel: TestFunction
    j: int  # derivative order; -1 is the antiderivative
    shift: float
    s: Fraction  # gauge scale exponent, >= 0

    def sort_key(self):
        return (self.kernel.center, self.kernel.radius, self.kernel.coeffs, self.j, self.shift, self.s)

    def window(self, g):
        """Interval of x where this factor varies at gauge g."""
        scale = g ** float(self.s)
        lo, hi = self.kernel.support()
        return (self.shift + scale * lo, self.shift + scale * hi)


@dataclass(frozen=True)
class Atom:
    p: Fraction
    poly: tuple  # Fraction coefficients, ascending
    factors: tuple


def _poly(coeffs):
    out = tuple(Fraction(c) for c in coeffs)
    while out and out[-1] == 0:
        out = out[:-1]
    return out


def _poly_add(a, b):
    n = max(len(a), len(b))
    return _poly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _poly_mul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _poly(out)


def _poly_deriv(a):
    return _poly([i * a[i] for i in range(1, len(a))])


def _poly_eval(a, xs):
    out = np.zeros_like(xs, dtype=np.float64)
    for c in reversed(a):
        out = out * xs + float(c)
    return out


@dataclass(frozen=True)
class RepNet:
    """Normalized sum of atoms over a host open interval."""

    atoms: tuple
    omega: tuple = REAL_LINE

    @staticmethod
    def from_atoms(atoms, omega=REAL_LINE):
        acc = {}
        for a in atoms:
            poly = _poly(a.poly)
            if not poly:
                continue
            factors = tuple(sorted(a.factors, key=KernelFactor.sort_key))
            key = (a.p, factors)
            acc[key] = _poly_add(acc[key], poly) if key in acc else poly
        cleaned = [Atom(p, poly, factors) for (p, factors), poly in acc.items() if poly]
        cleaned.sort(key=lambda a: (a.p, tuple(f.sort_key() for f in a.factors), a.poly))
        return RepNet(tuple(cleaned), omega)

    @property
    def is_zero(self):
        return not self.atoms

    def worst_power(self):
        """Most negative gauge exponent across atoms (0 for the zero net)."""
        return min((a.p for a in self.atoms), default=Fraction(0))

    def eval(self, g, xs):
        """Values of the representative at gauge g on the points xs."""
        xs = np.asarray(xs, dtype=np.float64)
        total = np.zeros_like(xs)
        for a in self.atoms:
            vals = g ** float(a.p) * _poly_eval(a.poly, xs)
            for f in a.factors:
                scale = g ** float(f.s)
                args = (xs - f.shift) / scale
                if f.j >= 0:
                    vals = vals * f.kernel.eval_array(args, f.j)
                else:
                    vals = vals * f.kernel.cumulative(args)
            total += vals
        return total

    def at_gauge(self, g):
        """Curried view: the smooth function this net takes at one index."""
        return lambda xs: self.eval(g, xs)

    def uncurried(self):
        """The (index, position) -> value view of the same net."""
        return lambda g, xs: self.eval(g, xs)

    def focus_windows(self, g):
        return [f.window(g) for a in self.atoms for f in a.factors]

    def __str__(self):
        if self.is_zero:
            return "0"
        return " + ".join(
            f"u^{a.p}*poly{tuple(map(str, a.poly))}*" + "*".join(f"K[{f.j}]@{f.shift:g}/u^{f.s}" for f in a.factors)
            if a.factors
            else f"u^{a.p}*poly{tuple(map(str, a.poly))}"
            for a in self.atoms
        )


def _require_same_domain(u, v):
    if u.omega != v.omega:
        raise DomainMismatchError(f"host domains differ: {u.omega} vs {v.omega}")


def rep_add(u, v):
    _require_same_domain(u, v)
    return RepNet.from_atoms(u.atoms + v.atoms, u.omega)


def rep_scale(c, u):
    c = Fraction(c)
    return RepNet.from_atoms(
        (Atom(a.p, tuple(c * x for x in a.poly), a.factors) for a in u.atoms), u.omega
    )


def rep_neg(u):
    return rep_scale(-1, u)


def rep_sub(u, v):
    return rep_add(u, rep_neg(v))


def rep_mul(u, v):
    _require_same_domain(u, v)
    out = []
    for a in u.atoms:
        for b in v.atoms:
            out.append(Atom(a.p + b.p, _poly_mul(a.poly, b.poly), a.factors + b.factors))
    return RepNet.from_atoms(out, u.omega)


def rep_derive(u, order=1):
    atoms = u.atoms
    for _ in range(order):
        out = []
        for a in atoms:
            dp = _poly_deriv(a.poly)
            if dp:
                out.append(Atom(a.p, dp, a.factors))
            for i, f in enumerate(a.factors):
                raised = KernelFactor(f.kernel, f.j + 1, f.shift, f.s)
                out.append(Atom(a.p - f.s, a.poly, a.factors[:i] + (raised,) + a.factors[i + 1 :]))
        atoms = RepNet.from_atoms(out, u.omega).atoms
    return RepNet(atoms, u.omega)


# ---------------------------------------------------------------------------
# embeddings


def embed_smooth(coeffs, omega=REAL_LINE):
    """The polynomial sum(c_i x^i) as a gauge-independent representative."""
    return RepNet.from_atoms([Atom(Fraction(0), _poly(coeffs), ())], omega)


def _require_unit_mass(phi):
    if abs(phi.mass() - 1.0) > UNIT_MASS_TOL:
        raise PreconditionError(f"kernel mass {phi.mass():.12f} is not 1 within {UNIT_MASS_TOL:g}")


def embed_delta(phi, omega=REAL_LINE):
    """u_eps(x) = phi(x/gauge)/gauge, the scaled unit-mass kernel."""
    _require_unit_mass(phi)
    return RepNet.from_atoms(
        [Atom(Fraction(-1), (Fraction(1),), (KernelFactor(phi, 0, 0.0, Fraction(1)),))], omega
    )


def embed_heaviside(phi, omega=REAL_LINE):
    """u_eps(x) = antiderivative of phi evaluated at x/gauge."""
    _require_unit_mass(phi)
    return RepNet.from_atoms(
        [Atom(Fraction(0), (Fraction(1),), (KernelFactor(phi, -1, 0.0, Fraction(1)),))], omega
    )


# ---------------------------------------------------------------------------
# sups on compacts


def interval_inside(k, omega):
    return omega[0] < k[0] and k[1] < omega[1] and k[0] <= k[1]


def omega_eps(omega, point, S):
    """Shrunken domain of a full-instance index point; omega itself elsewhere."""
    if S is None or S.kind != "full":
        return omega
    lo, hi = point.profile.support()
    return (omega[0] - point.r * lo, omega[1] - point.r * hi)


def exhaustion(omega, count=2):
    """Compact exhaustion K_m = [-m, m] clipped into omega with margin 1/(m+2)."""
    out = []
    for m in range(1, count + 1):
        lo = max(-float(m), omega[0] + 1.0 / (m + 2))
        hi = min(float(m), omega[1] - 1.0 / (m + 2))
        if lo < hi:
            out.append((lo, hi))
    if not out:
        mid = 0.5 * (omega[0] + omega[1])
        w = (omega[1] - omega[0]) / 4
        out.append((mid - w, mid + w))
    return out


def exhaustion_for(u):
    """The default exhaustion, extended to cover kernel shifts that fall outside it.

    A kernel localized beyond the probed compacts would otherwise look
    negligible while carrying non-negligible mass elsewhere.
    """
    ks = exhaustion(u.omega)
    lo = min(k[0] for k in ks)
    hi = max(k[1] for k in ks)
    for a in sorted({f.shift for atom in u.atoms for f in atom.factors}):
        if not lo <= a <= hi:
            wlo = max(a - 1.0, u.omega[0] + 1.0 / 3)
            whi = min(a + 1.0, u.omega[1] - 1.0 / 3)
            if wlo < whi:
                ks.append((wlo, whi))
    return ks


_DERIV_CACHE = {}
_SUP_CACHE = {}


def _derived(u, alpha):
    key = (u, alpha)
    if key not in _DERIV_CACHE:
        _DERIV_CACHE[key] = rep_derive(u, alpha)
    return _DERIV_CACHE[key]


def sup_on_K(u, K, alpha, point, S=None, check_domain=True):
    """Grid sup of |d^alpha u_eps| on K with Chebyshev refinement near the max."""
    if not interval_inside(K, u.omega):
        raise DomainShrinkError(point, u.omega)
    if check_domain and S is not None and S.kind == "full":
        dom = omega_eps(u.omega, point, S)
        if not interval_inside(K, dom):
            raise DomainShrinkError(point, dom)
    g = S.underline(point) if S is not None else float(point)
    key = (u, K, alpha, g)
    if key in _SUP_CACHE:
        return _SUP_CACHE[key]
    du = _derived(u, alpha)
    sup, _, _ = refine_sup(lambda xs: du.eval(g, xs), K[0], K[1], focus=du.focus_windows(g))
    _SUP_CACHE[key] = sup
    return sup


def _sup_net(u, K, alpha, S):
    return SampledNet(
        fn=lambda pt: sup_on_K(u, K, alpha, pt, S),
        domain=S,
        gauge_functional=True,
        label=f"sup|d^{alpha}u| on {K}",
    )


def _fit_slope(ks, sups):
    pts = [(-k, math.log2(s)) for k, s in zip(ks, sups) if s > 0.0]
    if len(pts) < 3:
        return None
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    return float(np.polyfit(xs, ys, 1)[0])


# ---------------------------------------------------------------------------
# moderateness


@dataclass
class ProbeRow:
    K: tuple
    alpha: int
    k: float
    gauge: float
    sup: float


@dataclass
class ModeratenessVerdict:
    moderate: bool
    N: int
    indeterminate: bool = False
    per: dict = field(default_factory=dict)  # (K, alpha) -> {"N_sym", "slope", "N_fit"}
    rows: list = field(default_factory=list)
    forms: dict = None
    note: str = ""

    def __str__(self):
        if self.indeterminate:
            return f"moderateness indeterminate ({self.note})"
        return f"{'moderate' if self.moderate else 'not moderate'} with N={self.N}"


def _symbolic_N(u, alpha):
    du = _derived(u, alpha)
    return max(0, math.ceil(-du.worst_power()))


def is_moderate(u, S, J=bigo.WHOLE_BASE, alpha_max=DEFAULT_ALPHA_MAX, kmin=FIT_KMIN, kmax=FIT_KMAX, band=SLOPE_BAND):
    """Two-track moderateness: exponent bookkeeping against slope fits of grid sups.

    The symbolic track bounds each derivative's sup by a gauge power; the
    numeric track fits the sup decay along a geometric probe.  The fitted
    growth may not exceed the symbolic bound beyond the band, otherwise the
    verdict is flagged indeterminate.  On the full instance the joint
    (exists N, q) and diagonal (N = q) quantifier forms are both evaluated
    and compared.
    """
    if u.is_zero:
        forms = {"joint": (True, 0, 0), "diagonal": (True, 0)} if S.kind == "full" else None
        return ModeratenessVerdict(moderate=True, N=0, forms=forms, note="zero normal form")
    per = {}
    rows = []
    agree = True
    pts = S.probe(kmin=kmin, kmax=kmax)
    gauges = [S.underline(p) for p in pts]
    ks = [-math.log2(g) for g in gauges]
    for K in exhaustion_for(u):
        for alpha in range(alpha_max + 1):
            n_sym = _symbolic_N(u, alpha)
            sups = [sup_on_K(u, K, alpha, p, S) for p in pts]
            rows.extend(ProbeRow(K, alpha, k, g, s) for k, g, s in zip(ks, gauges, sups))
            slope = _fit_slope(ks, sups)
            if slope is None:
                per[(K, alpha)] = {"N_sym": n_sym, "slope": None, "N_fit": 0.0}
                continue
            n_fit = -slope
            per[(K, alpha)] = {"N_sym": n_sym, "slope": slope, "N_fit": n_fit}
            if n_fit > n_sym + band:
                agree = False
    n_cert = max(_symbolic_N(u, a) for a in range(alpha_max + 1))
    verdict = ModeratenessVerdict(moderate=agree, N=n_cert, indeterminate=not agree, per=per, rows=rows)
    if not agree:
        verdict.note = "numeric growth exceeds the symbolic certificate"
    if S.kind == "full":
        verdict.forms = _full_quantifier_forms(u, S, kmin=kmin, kmax=kmax, band=band)
        joint, diagonal = verdict.forms["joint"], verdict.forms["diagonal"]
        if joint[0] != diagonal[0] or (joint[0] and joint[1] != diagonal[1]):
            verdict.indeterminate = True
            verdict.note = "quantifier forms disagree"
    return verdict


def _full_quantifier_forms(u, S, q_up=4, kmin=FIT_KMIN, kmax=FIT_KMAX, band=SLOPE_BAND, alpha=0):
    """The joint (exists N, q) and diagonal (N = q) moderateness forms.

    Both reduce to the minimal N whose gauge power bounds the sup decay along
    rays, uniformly over sampled class mollifiers; the two searches must land
    on the same N.
    """
    rng = random.Random(17)
    K = exhaustion(u.omega)[0]
    required = {}

    def required_N(profile):
        if profile not in required:
            anchor = indexsets.FullPoint(0.5, profile)
            pts = [S.scale_point(2.0**-k, anchor) for k in range(kmin, kmax + 1)]
            rs = [anchor.r * 2.0**-k for k in range(kmin, kmax + 1)]
            sups = [sup_on_K(u, K, alpha, p, S) for p in pts]
            slope = _fit_slope([-math.log2(r) for r in rs], sups)
            required[profile] = 0 if slope is None else max(0, math.ceil(-slope - band))
        return required[profile]

    def samples(q):
        out = [p for p in S.pool if S.contains(indexsets.MomentClass(q), indexsets.FullPoint(1.0, p))]
        rng.shuffle(out)
        return out[:2]

    diagonal = None
    for n in range(q_up + 1):
        if all(required_N(phi) <= n for phi in samples(n)):
            diagonal = n
            break
    joint = None
    for n in range(q_up + 1):
        for q in range(q_up + 1):
            if all(required_N(phi) <= n for phi in samples(q)):
                joint = (n, q)
                break
        if joint is not None:
            break
    return {
        "joint": (joint is not None, joint[0] if joint else None, joint[1] if joint else None),
        "diagonal": (diagonal is not None, diagonal),
    }


# ---------------------------------------------------------------------------
# negligibility and quotient equality


@dataclass
class NegligibilityVerdict:
    negligible: bool
    indeterminate: bool = False
    per: dict = field(default_factory=dict)  # (K, m) -> Verdict
    counterexample: Counterexample = None
    first_failure: tuple = None  # (K, m) that produced the counterexample
    derivative_decay: dict = field(default_factory=dict)
    note: str = ""

    def __str__(self):
        if self.indeterminate:
            return f"negligibility indeterminate ({self.note})"
        return "negligible" if self.negligible else "not negligible"


def is_negligible(u, S, m_max=DEFAULT_M_MAX, kmax=CERT_KMAX, moderate=None):
    """Order-zero sup decay beyond every probed gauge power.

    Moderateness is a hypothesis, not part of the test: only plain sups are
    probed (no derivatives), and for negligible nets the decay of the
    first-derivative sups is recorded as a cross-check.
    """
    mv = moderate if moderate is not None else is_moderate(u, S)
    if not mv.moderate or mv.indeterminate:
        raise PreconditionError("negligibility requires a verified moderateness certificate")
    if u.is_zero:
        return NegligibilityVerdict(negligible=True, note="zero normal form")
    per = {}
    a = S.default_anchor()
    A = S.carrier_class()
    probe = S.probe(kmin=0, kmax=kmax)
    cex = None
    first = None
    note = ""
    for K in exhaustion_for(u):
        xnet = _sup_net(u, K, 0, S)
        for m in range(m_max + 1):
            ynet = lift(SymbolicNet.monomial(1.0, p=m), S)
            v = bigo_pointwise(xnet, ynet, A, a, probe)
            per[(K, m)] = v
            if v.indeterminate:
                note = f"probe could not settle m={m} on K={K}"
            elif not v.holds and cex is None:
                cex = v.counterexample
                first = (K, m)
    negligible = all(v.holds and not v.indeterminate for v in per.values())
    out = NegligibilityVerdict(negligible=negligible, per=per, counterexample=cex, first_failure=first)
    if not negligible and cex is None:
        out.indeterminate = True
        out.note = note or "no certificate found"
    if negligible:
        pts = S.probe(kmin=FIT_KMIN, kmax=FIT_KMAX)
        for K in exhaustion_for(u):
            sups = [sup_on_K(u, K, 1, p, S) for p in pts]
            out.derivative_decay[K] = _fit_slope([-math.log2(S.underline(p)) for p in pts], sups)
    return out


def gen_equal(u, v, S, m_max=DEFAULT_M_MAX):
    """Quotient equality: the difference is negligible."""
    d = rep_sub(u, v)
    if d.is_zero:
        return True
    return is_negligible(d, S, m_max=m_max).negligible


# ---------------------------------------------------------------------------
# generalized numbers and points


@dataclass
class GenNumber:
    """A moderate net of reals modulo negligible perturbations."""

    fn: object  # gauge -> value
    S: object
    N: int
    label: str = ""

    def value(self, point):
        return float(self.fn(self.S.underline(point)))

    def sampled(self):
        return SampledNet(fn=self.value, domain=self.S, gauge_functional=True, label=self.label)

    def zero_verdicts(self, m_max=DEFAULT_M_MAX, kmax=CERT_KMAX):
        probe = self.S.probe(kmin=0, kmax=kmax)
        x = self.sampled()
        return {
            m: bigo_pointwise(
                x,
                lift(SymbolicNet.monomial(1.0, p=m), self.S),
                self.S.carrier_class(),
                self.S.default_anchor(),
                probe,
            )
            for m in range(m_max + 1)
        }

    def is_zero(self, m_max=DEFAULT_M_MAX):
        return all(v.holds and not v.indeterminate for v in self.zero_verdicts(m_max).values())

    def probe_table(self, kmin=0, kmax=20):
        pts = self.S.probe(kmin=kmin, kmax=kmax)
        return [(self.S.underline(p), self.value(p)) for p in pts]


@dataclass
class GenPoint:
    """A moderate, domain-confined net of points; K certifies compact support."""

    fn: object  # gauge -> position
    omega: tuple
    S: object
    N: int
    K: tuple = None

    def value(self, point):
        return float(self.fn(self.S.underline(point)))

    def perturbed(self, order=10):
        return GenPoint(
            fn=lambda g: self.fn(g) + g**order,
            omega=self.omega,
            S=self.S,
            N=self.N,
            K=self.K,
        )


def forall_small(P, S, J=bigo.WHOLE_BASE, kmax=40, tail=20):
    """Instance-reduced 'for all sufficiently fine indices P holds'.

    Evaluates P on geometric probes; on the full instance the tail must be
    uniform over sampled class mollifiers.  Oscillation on the probe raises
    IndeterminateError.
    """

    def tail_verdict(points):
        vals = [bool(P(p)) for p in points]
        t = vals[-tail:] if len(vals) >= tail else vals
        if all(t):
            return True
        if not any(t):
            return False
        raise IndeterminateError("predicate oscillates on the probe tail")

    if S.kind != "full":
        return tail_verdict(S.probe(kmin=0, kmax=kmax))
    rng = random.Random(23)
    for q in range(S.q_max + 1):
        A = indexsets.MomentClass(q)
        verdicts = []
        for _ in range(2):
            anchor = S.sample_member(A, rng)
            verdicts.append(tail_verdict(S.probe(kmin=0, kmax=kmax, anchor=anchor)))
        if all(verdicts):
            return True
    return False


def make_gen_point(fn, omega, S, K=None, N_max=6, kmax=CERT_KMAX):
    """Certify a gauge-functional net as a generalized point of the domain.

    Checks moderateness, containment in the host domain for fine indices, and
    (when a candidate K is supplied or inferable from the tail range) compact
    support; rejects with a counterexample when moderateness fails.
    """
    probe = S.probe(kmin=0, kmax=kmax)
    x = SampledNet(fn=lambda pt: fn(S.underline(pt)), domain=S, gauge_functional=True)
    cert_N = None
    last = None
    for n in range(N_max + 1):
        v = bigo_pointwise(
            x, lift(SymbolicNet.monomial(1.0, p=-n), S), S.carrier_class(), S.default_anchor(), probe
        )
        last = v
        if v.holds and not v.indeterminate:
            cert_N = n
            break
    if cert_N is None:
        raise RejectionError(
            f"net is not moderate up to gauge^-{N_max}",
            counterexample=last.counterexample if last else None,
        )
    if omega != REAL_LINE and not forall_small(lambda pt: omega[0] < fn(S.underline(pt)) < omega[1], S):
        raise RejectionError(f"net values leave the host domain {omega}; no compact set inside it can hold them")
    if K is None and omega != REAL_LINE:
        tail = [fn(S.underline(p)) for p in probe[-16:]]
        width = omega[1] - omega[0]
        margin = 0.05 * width if math.isfinite(width) else 0.05
        K = (min(tail) - margin, max(tail) + margin)
    if K is not None:
        if not interval_inside(K, omega):
            raise RejectionError(f"candidate compact set {K} is not inside the domain {omega}")
        if not forall_small(lambda pt: K[0] <= fn(S.underline(pt)) <= K[1], S):
            K = None
    return GenPoint(fn=fn, omega=omega, S=S, N=cert_N, K=K)


def points_equiv(x, y, m_max=DEFAULT_M_MAX, kmax=CERT_KMAX):
    """The point-quotient relation: the difference decays beyond every probed power."""
    S = x.S
    probe = S.probe(kmin=0, kmax=kmax)
    d = SampledNet(fn=lambda pt: x.value(pt) - y.value(pt), domain=S, gauge_functional=True)
    for m in range(m_max + 1):
        v = bigo_pointwise(
            d, lift(SymbolicNet.monomial(1.0, p=m), S), S.carrier_class(), S.default_anchor(), probe
        )
        if not (v.holds and not v.indeterminate):
            return False
    return True


def eval_at(u, x, S, moderate=None, check=True, perturbation_order=10):
    """The point value [u_eps(x_eps)] as a generalized number.

    Requires a compact-support certificate on the point; optionally spot
    checks that perturbing the point representative by a high gauge power
    moves the value only negligibly.
    """
    mv = moderate if moderate is not None else is_moderate(u, S)
    if not mv.moderate or mv.indeterminate:
        raise PreconditionError("eval_at requires a verified moderateness certificate")
    if x.K is None:
        raise PreconditionError("the point lacks a compact-support certificate")

    def value(g):
        return float(u.eval(g, np.array([x.fn(g)]))[0])

    out = GenNumber(fn=value, S=S, N=mv.N, label="point value")
    if check:
        xp = x.perturbed(perturbation_order)
        diff = GenNumber(
            fn=lambda g: value(g) - float(u.eval(g, np.array([xp.fn(g)]))[0]),
            S=S,
            N=mv.N,
        )
        if not diff.is_zero():
            raise PreconditionError("point value is not stable under negligible point perturbations")
    return out


@dataclass
class ZeroTestVerdict:
    zero: bool
    indeterminate: bool = False
    witness: GenPoint = None
    value: GenNumber = None
    negligible_agrees: bool = True
    note: str = ""


def zero_test_by_points(u, S, strategy="argmax", kmax=CERT_KMAX, m_max=DEFAULT_M_MAX, moderate=None):
    """Decide u = 0 in the quotient by hunting for a witness generalized point.

    The witness candidate tracks the per-gauge argmax of |u_eps| over the
    exhaustion; its value class is nonzero exactly when the net is not
    negligible, which is cross-checked.  Scoped to the instances whose
    point-value characterization applies (not the trivial one).
    """
    if S.kind == "trivial":
        raise UnsupportedInstanceError("point-value characterization is not available on the trivial instance")
    if strategy != "argmax":
        raise ValueError(f"unknown strategy {strategy!r}")
    mv = moderate if moderate is not None else is_moderate(u, S)
    if not mv.moderate or mv.indeterminate:
        raise PreconditionError("zero test requires a verified moderateness certificate")
    nv = is_negligible(u, S, m_max=m_max, kmax=kmax, moderate=mv)
    if nv.negligible:
        return ZeroTestVerdict(zero=True, negligible_agrees=True, note="value class vanishes at every probed point")
    if nv.indeterminate:
        return ZeroTestVerdict(zero=False, indeterminate=True, negligible_agrees=True, note=nv.note)

    # hunt the witness on the compact where negligibility actually failed
    K = nv.first_failure[0]
    cache = {}

    def argmax_at(g):
        if g not in cache:
            du0 = _derived(u, 0)
            _, arg, _ = refine_sup(lambda xs: du0.eval(g, xs), K[0], K[1], focus=du0.focus_windows(g))
            cache[g] = arg
        return cache[g]

    witness = GenPoint(fn=argmax_at, omega=u.omega, S=S, N=0, K=K)
    value = GenNumber(fn=lambda g: float(u.eval(g, np.array([argmax_at(g)]))[0]), S=S, N=mv.N, label="witness value")
    nonzero = not value.is_zero(m_max=m_max)
    return ZeroTestVerdict(
        zero=not nonzero,
        indeterminate=not nonzero,  # non-negligible net whose witness vanished: leave it open
        witness=witness,
        value=value,
        negligible_agrees=(not nonzero) == nv.negligible,
        note="" if nonzero else "witness value class vanished although the net is not negligible",
    )
