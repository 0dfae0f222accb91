"""Pre-ordered index carriers with filter bases of accuracy classes.

An index set bundles a carrier of index points, a pre-order, and a filter
base of classes whose down-sets are strictly downward directed.  Four
concrete instances are provided:

* ``special``  - gauges in (0, 1] with tail classes (0, eps0];
* ``full``     - pairs (scale, mollifier handle) ordered by scaling along a
  common profile, with classes of vanishing-moment order q;
* ``nsa-base`` - test functions pre-ordered by support diameter, with the
  countable class base D_n = {phi : diam supp phi <= 1/n};
* ``trivial``  - pairs (scale, opaque tag) ordered only along equal tags.

Membership, refinement and down-witness construction are all decidable on
the represented fragments, which is what the sampling validator checks.
"""

import random
from dataclasses import dataclass, field

from . import testfn
from .testfn import TestFunction, diam_supp, make_Aq, scale, structurally_equal

GAUGE_FLOOR = 1e-12
MOMENT_MEMBERSHIP_TOL = 1e-7
DEFAULT_PREFIX = 40


class KindMismatchError(TypeError):
    """An index point does not belong to this index set's carrier type."""


class PreconditionError(ValueError):
    """Operation inputs violate a documented precondition."""


class UnsupportedInstanceError(ValueError):
    """The instance lacks the structure (e.g. totality) the operation needs."""


# ---------------------------------------------------------------------------
# point and class payloads


@dataclass(frozen=True)
class FullPoint:
    """The scaled mollifier r (.) profile, stored as (scale, handle)."""

    r: float
    profile: TestFunction


@dataclass(frozen=True)
class TrivialPoint:
    r: float
    tag: str


@dataclass(frozen=True)
class TailClass:
    eps0: float


@dataclass(frozen=True)
class MomentClass:
    q: int


@dataclass(frozen=True)
class DiamClass:
    n: int


@dataclass(frozen=True)
class LevelClass:
    q: int


@dataclass
class NullSequence:
    """A finite prefix of a sequence living in the down-set of ``anchor`` within ``cls``."""

    points: list
    cls: object
    anchor: object

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


# ---------------------------------------------------------------------------
# instances


class IndexSet:
    kind = "abstract"

    # the shared surface; concrete instances fill in the primitives below
    def check_point(self, i):
        raise NotImplementedError

    def leq(self, i, j):
        raise NotImplementedError

    def points_equal(self, i, j):
        raise NotImplementedError

    def lt(self, i, j):
        return self.leq(i, j) and not self.points_equal(i, j)

    def underline(self, i):
        raise NotImplementedError

    def carrier_class(self):
        raise NotImplementedError

    def contains(self, A, i):
        raise NotImplementedError

    def refine(self, A, B):
        raise NotImplementedError

    def down_witness(self, b, c, A, e):
        raise NotImplementedError

    def default_anchor(self):
        raise NotImplementedError

    def gauge_point(self, g, anchor=None):
        """An index point whose gauge is g (used to realize thresholds)."""
        raise NotImplementedError

    def sample_point(self, rng):
        raise NotImplementedError

    def sample_class(self, rng):
        raise NotImplementedError

    def sample_member(self, A, rng):
        raise NotImplementedError

    def sample_below(self, e, A, rng):
        """A point of A strictly below e; None when the instance cannot build one."""
        raise NotImplementedError

    def probe(self, kmin=0, kmax=DEFAULT_PREFIX, anchor=None):
        """Geometric gauge probe below the anchor: gauge(z_k) = gauge(anchor) * 2^-k."""
        a = self.default_anchor() if anchor is None else anchor
        return [self.scale_point(2.0**-k, a) for k in range(kmin, kmax + 1)]

    def scale_point(self, t, i):
        raise NotImplementedError


class SpecialIndexSet(IndexSet):
    kind = "special"

    def check_point(self, i):
        if not isinstance(i, (int, float)):
            raise KindMismatchError(f"special index points are reals in (0,1], got {type(i).__name__}")
        if not 0 < i <= 1:
            raise PreconditionError(f"gauge {i} outside (0,1]")

    def leq(self, i, j):
        return i <= j

    def points_equal(self, i, j):
        return i == j

    def underline(self, i):
        return float(i)

    def carrier_class(self):
        return TailClass(1.0)

    def contains(self, A, i):
        return 0 < i <= A.eps0

    def refine(self, A, B):
        return TailClass(min(A.eps0, B.eps0))

    def down_witness(self, b, c, A, e):
        for p in (b, c):
            if not (self.contains(A, p) and self.leq(p, e)):
                raise PreconditionError("down_witness inputs must lie in the down-set of e within A")
        return min(b, c) / 2.0

    def default_anchor(self):
        return 1.0

    def gauge_point(self, g, anchor=None):
        return float(min(1.0, g))

    def scale_point(self, t, i):
        return i * t

    def sample_point(self, rng):
        return 2.0 ** (-15.0 * rng.random())

    def sample_class(self, rng):
        return TailClass(2.0 ** (-6.0 * rng.random()))

    def sample_member(self, A, rng):
        if A.eps0 <= 0:
            return None
        return A.eps0 * 2.0 ** (-8.0 * rng.random())

    def sample_below(self, e, A, rng):
        top = min(e, A.eps0)
        if top <= 0:
            return None
        return top * 2.0 ** (-6.0 * rng.random() - 1e-3)


_MOMENT_CACHE = {}


def _profile_moment(phi, j):
    key = (phi.center, phi.radius, phi.coeffs, j)
    if key not in _MOMENT_CACHE:
        _MOMENT_CACHE[key] = testfn.moment(phi, j)
    return _MOMENT_CACHE[key]


class FullIndexSet(IndexSet):
    """Scaled mollifiers over a fixed 1-D profile pool, classes by vanishing-moment order."""

    kind = "full"

    def __init__(self, q_max=4, profile="std-bump", dim=1):
        if dim != 1:
            raise UnsupportedInstanceError("only 1-D mollifier profiles are represented")
        if profile != "std-bump":
            raise UnsupportedInstanceError(f"unknown profile family {profile!r}")
        self.q_max = q_max
        self.pool = [make_Aq(q, 1.0) for q in range(q_max + 1)]
        self.pool.append(make_Aq(0, 0.5))

    def check_point(self, i):
        if not isinstance(i, FullPoint):
            raise KindMismatchError(f"full index points are (scale, profile) pairs, got {type(i).__name__}")
        if i.r <= 0:
            raise PreconditionError("scale must be positive")
        if abs(i.profile.mass() - 1.0) > MOMENT_MEMBERSHIP_TOL:
            raise PreconditionError("profile must have unit mass")

    def scaling_factor(self, i, j):
        """t with i.profile equal to t (.) j.profile as closed forms, else None."""
        t = i.profile.radius / j.profile.radius
        if structurally_equal(scale(t, j.profile), i.profile):
            return t
        return None

    def leq(self, i, j):
        t = self.scaling_factor(i, j)
        return t is not None and i.r * t <= j.r

    def points_equal(self, i, j):
        t = self.scaling_factor(i, j)
        return t is not None and abs(i.r * t - j.r) <= 1e-12 * max(1.0, j.r)

    def underline(self, i):
        return min(1.0, i.r * diam_supp(i.profile))

    def carrier_class(self):
        return MomentClass(0)

    def contains(self, A, i):
        if abs(_profile_moment(i.profile, 0) - 1.0) > MOMENT_MEMBERSHIP_TOL:
            return False
        return all(abs(_profile_moment(i.profile, j)) <= MOMENT_MEMBERSHIP_TOL for j in range(1, A.q + 1))

    def refine(self, A, B):
        return MomentClass(max(A.q, B.q))

    def ray_factor(self, i, e):
        """r with i = r (.) e when i lies on the ray below e, else None."""
        t = self.scaling_factor(i, e)
        if t is None:
            return None
        return i.r * t / e.r

    def down_witness(self, b, c, A, e):
        rb, rc = self.ray_factor(b, e), self.ray_factor(c, e)
        if rb is None or rc is None or rb > 1 or rc > 1 or not (self.contains(A, b) and self.contains(A, c)):
            raise PreconditionError("down_witness inputs must lie in the down-set of e within A")
        t = min(rb, rc) / 2.0
        return FullPoint(t * e.r, e.profile)

    def default_anchor(self):
        return FullPoint(0.5, self.pool[0])

    def gauge_point(self, g, anchor=None):
        profile = (anchor.profile if anchor is not None else self.pool[0])
        return FullPoint(g / diam_supp(profile), profile)

    def scale_point(self, t, i):
        return FullPoint(i.r * t, i.profile)

    def sample_point(self, rng):
        return FullPoint(2.0 ** (-10.0 * rng.random()), rng.choice(self.pool))

    def sample_class(self, rng):
        return MomentClass(rng.randrange(0, self.q_max + 1))

    def sample_member(self, A, rng):
        candidates = [p for p in self.pool if self.contains(A, FullPoint(1.0, p))]
        if not candidates:
            return None
        return FullPoint(2.0 ** (-8.0 * rng.random()), rng.choice(candidates))

    def sample_below(self, e, A, rng):
        return FullPoint(e.r * 2.0 ** (-5.0 * rng.random() - 1e-3), e.profile)


class NsaBaseIndexSet(IndexSet):
    """Test functions pre-ordered by support diameter, with the countable D_n base."""

    kind = "nsa-base"

    def __init__(self, n_max=64):
        self.n_max = n_max

    def check_point(self, i):
        if not isinstance(i, TestFunction):
            raise KindMismatchError(f"nsa-base index points are test functions, got {type(i).__name__}")

    def leq(self, i, j):
        return self.underline(i) <= self.underline(j)

    def points_equal(self, i, j):
        return structurally_equal(i, j)

    def underline(self, i):
        if i.is_zero:
            return 1.0
        return min(1.0, diam_supp(i))

    def carrier_class(self):
        return DiamClass(0)

    def contains(self, A, i):
        if A.n == 0:
            return True
        return (not i.is_zero) and diam_supp(i) <= 1.0 / A.n + 1e-12

    def refine(self, A, B):
        return DiamClass(max(A.n, B.n))

    def down_witness(self, b, c, A, e):
        for p in (b, c):
            if not (self.contains(A, p) and self.leq(p, e)):
                raise PreconditionError("down_witness inputs must lie in the down-set of e within A")
        d = min(self.underline(b), self.underline(c))
        if A.n > 0:
            d = min(d, 1.0 / A.n)
        return TestFunction(0.0, d / 4.0, (1.0,))

    def default_anchor(self):
        return TestFunction(0.0, 0.5, (1.0,))

    def gauge_point(self, g, anchor=None):
        return TestFunction(0.0, g / 2.0, (1.0,))

    def scale_point(self, t, i):
        return scale(t, i)

    def sample_point(self, rng):
        if rng.random() < 0.02:
            return testfn.zero_function()
        radius = 2.0 ** (-8.0 * rng.random())
        coeffs = [rng.uniform(-2, 2) for _ in range(rng.randrange(1, 4))]
        if all(c == 0 for c in coeffs):
            coeffs = [1.0]
        return TestFunction(rng.uniform(-2, 2), radius, tuple(coeffs))

    def sample_class(self, rng):
        return DiamClass(rng.randrange(0, 16))

    def sample_member(self, A, rng):
        top = 1.0 if A.n == 0 else 1.0 / A.n
        return TestFunction(rng.uniform(-1, 1), top * rng.uniform(0.1, 0.5) / 2.0, (1.0,))

    def sample_below(self, e, A, rng):
        top = self.underline(e)
        if A.n > 0:
            top = min(top, 1.0 / A.n)
        return TestFunction(0.0, top * rng.uniform(0.05, 0.45) / 2.0, (1.0,))


class TrivialIndexSet(IndexSet):
    """Pairs (scale, tag); tags are opaque, comparable only to themselves."""

    kind = "trivial"

    def __init__(self, levels=None):
        # level of a tag = largest class order it belongs to
        self.levels = dict(levels) if levels else {f"tau{q}": q for q in range(7)}
        self.q_top = max(self.levels.values())

    def check_point(self, i):
        if not isinstance(i, TrivialPoint):
            raise KindMismatchError(f"trivial index points are (scale, tag) pairs, got {type(i).__name__}")
        if not 0 < i.r <= 1:
            raise PreconditionError(f"scale {i.r} outside (0,1]")
        if i.tag not in self.levels:
            raise PreconditionError(f"unknown tag {i.tag!r}")

    def leq(self, i, j):
        return i.tag == j.tag and i.r <= j.r

    def points_equal(self, i, j):
        return i.tag == j.tag and i.r == j.r

    def underline(self, i):
        return i.r

    def carrier_class(self):
        return LevelClass(0)

    def contains(self, A, i):
        return self.levels.get(i.tag, -1) >= A.q and 0 < i.r <= 1

    def refine(self, A, B):
        return LevelClass(max(A.q, B.q))

    def down_witness(self, b, c, A, e):
        if b.tag != e.tag or c.tag != e.tag or not (self.contains(A, b) and self.contains(A, c)):
            raise PreconditionError("down_witness inputs must lie in the down-set of e within A")
        if not (b.r <= e.r and c.r <= e.r):
            raise PreconditionError("down_witness inputs must lie in the down-set of e within A")
        return TrivialPoint(min(b.r, c.r) / 2.0, e.tag)

    def default_anchor(self):
        top = max(self.levels, key=lambda t: self.levels[t])
        return TrivialPoint(1.0, top)

    def gauge_point(self, g, anchor=None):
        tag = anchor.tag if anchor is not None else self.default_anchor().tag
        return TrivialPoint(min(1.0, g), tag)

    def scale_point(self, t, i):
        return TrivialPoint(i.r * t, i.tag)

    def sample_point(self, rng):
        return TrivialPoint(2.0 ** (-10.0 * rng.random()), rng.choice(sorted(self.levels)))

    def sample_class(self, rng):
        return LevelClass(rng.randrange(0, self.q_top + 1))

    def sample_member(self, A, rng):
        tags = [t for t, lv in sorted(self.levels.items()) if lv >= A.q]
        if not tags:
            return None
        return TrivialPoint(2.0 ** (-8.0 * rng.random()), rng.choice(tags))

    def sample_below(self, e, A, rng):
        if self.levels.get(e.tag, -1) < A.q:
            return None
        return TrivialPoint(e.r * 2.0 ** (-5.0 * rng.random() - 1e-3), e.tag)


_KINDS = {
    "special": SpecialIndexSet,
    "full": FullIndexSet,
    "nsa-base": NsaBaseIndexSet,
    "trivial": TrivialIndexSet,
}


def make_index_set(kind, **params):
    if kind not in _KINDS:
        raise ValueError(f"unknown index set kind {kind!r}; expected one of {sorted(_KINDS)}")
    return _KINDS[kind](**params)


# ---------------------------------------------------------------------------
# operations on top of the instance surface


def leq(i, j, S):
    S.check_point(i)
    S.check_point(j)
    return S.leq(i, j)


def refine(A, B, S):
    return S.refine(A, B)


def underline(i, S):
    S.check_point(i)
    return S.underline(i)


def down_witness(b, c, A, e, S):
    return S.down_witness(b, c, A, e)


def tends_to_emptyset(seq, A, a, S, floor=GAUGE_FLOOR, decay=16.0):
    """Finite-prefix verdict for 'the sequence tends to the empty set in A below a'.

    Every first-half gauge must eventually be strictly beaten (values at or
    below ``floor`` count as beaten), and the prefix must span a genuine decay
    factor so that plateaus above the floor are rejected.
    """
    pts = list(seq)
    if not pts:
        return False
    for z in pts:
        S.check_point(z)
        if not (S.contains(A, z) and S.leq(z, a)):
            raise PreconditionError("sequence entries must lie in the down-set of a within A")
    g = [S.underline(z) for z in pts]
    if len(g) < 2:
        return False
    for thr in g[: max(1, len(g) // 2)]:
        ok = any(all(x < thr or x <= floor for x in g[k:]) for k in range(1, len(g)))
        if not ok:
            return False
    return min(g) <= max(floor, g[0] / decay)


def extract_decreasing(seq, S):
    """Strictly decreasing subsequence via the minimal-index recursion.

    Requires the sampled host down-set to be totally pre-ordered; raises
    UnsupportedInstanceError when a sampled pair violates totality.
    """
    pts = list(seq.points)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            b, c = pts[i], pts[j]
            if not (S.lt(b, c) or S.leq(c, b)):
                raise UnsupportedInstanceError("down-set is not totally pre-ordered on sampled pairs")
    out = []
    if pts:
        out.append(pts[0])
        k = 1
        while k < len(pts):
            if S.lt(pts[k], out[-1]):
                out.append(pts[k])
            k += 1
    return NullSequence(points=out, cls=seq.cls, anchor=seq.anchor)


# ---------------------------------------------------------------------------
# sampling validator


@dataclass
class ClauseResult:
    name: str
    description: str
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def record(self, ok, detail):
        self.checks += 1
        if not ok:
            self.failures.append(detail)


@dataclass
class ValidationReport:
    kind: str
    budget: int
    seed: int
    clauses: dict

    @property
    def passed(self):
        return all(c.passed for c in self.clauses.values())

    def lines(self):
        out = [f"index set {self.kind}: budget={self.budget} seed={self.seed}"]
        for c in self.clauses.values():
            status = "pass" if c.passed else "FAIL"
            out.append(f"  clause {c.name} [{status}] {c.description}: {c.checks} checks, {len(c.failures)} failures")
            for f in c.failures[:3]:
                out.append(f"    counterexample: {f}")
        return out


def validate_index_set(S, budget=500, seed=0):
    """Seeded sampling check of the four defining clauses; failures land in the report."""
    if budget < 1:
        raise PreconditionError("budget must be at least 1")
    rng = random.Random(seed)
    clauses = {
        "i": ClauseResult("i", "pre-order: reflexive and transitive"),
        "ii": ClauseResult("ii", "filter base: no empty class, carrier representable"),
        "iii": ClauseResult("iii", "refinement: refine(A,B) inside A and B"),
        "iv": ClauseResult("iv", "down-sets nonempty and strictly downward directed"),
    }
    carrier = S.carrier_class()
    for _ in range(budget):
        # (i) reflexivity on a random point, transitivity along a constructed chain
        p = S.sample_point(rng)
        clauses["i"].record(S.leq(p, p), f"leq({p},{p}) is false")
        x = S.sample_below(p, carrier, rng)
        y = None if x is None else S.sample_below(x, carrier, rng)
        if x is not None and y is not None and S.leq(y, x) and S.leq(x, p):
            clauses["i"].record(S.leq(y, p), f"transitivity failed on chain {y} <= {x} <= {p}")

        # (ii) sampled classes have constructible members; carrier holds sampled points
        A = S.sample_class(rng)
        w = S.sample_member(A, rng)
        clauses["ii"].record(
            w is not None and S.contains(A, w),
            f"class {A} produced no verified member",
        )
        clauses["ii"].record(S.contains(carrier, p), f"carrier class rejects sampled point {p}")

        # (iii) refinement
        B = S.sample_class(rng)
        C = S.refine(A, B)
        mc = S.sample_member(C, rng)
        if mc is not None:
            clauses["iii"].record(
                S.contains(A, mc) and S.contains(B, mc),
                f"member {mc} of refine({A},{B})={C} escapes the intersection",
            )
        else:
            clauses["iii"].record(False, f"refine({A},{B})={C} produced no member")

        # (iv) strict down-directedness below e <= a in A
        a = S.sample_member(A, rng)
        if a is None:
            continue
        e = S.sample_below(a, A, rng)
        if e is None:
            clauses["iv"].record(False, f"down-set of {a} in {A} has no constructible point")
            continue
        b = S.sample_below(e, A, rng)
        c = S.sample_below(e, A, rng)
        if b is None or c is None:
            clauses["iv"].record(False, f"down-set of {e} in {A} has no constructible point")
            continue
        try:
            d = S.down_witness(b, c, A, e)
        except PreconditionError as exc:
            clauses["iv"].record(False, f"down_witness rejected sampled inputs: {exc}")
            continue
        ok = S.contains(A, d) and S.leq(d, e) and S.lt(d, b) and S.lt(d, c)
        clauses["iv"].record(ok, f"witness {d} not strictly below {b},{c} inside {A}")
    return ValidationReport(kind=S.kind, budget=budget, seed=seed, clauses=clauses)
