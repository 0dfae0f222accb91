"""Generalized big-O: decidable symbolic nets, sampled verdicts with
witnesses and counterexamples, class-quantified and uniform variants, and
the executable law suites.

The decidable fragment is the class of finite sums c * u^p * L^k where u is
the gauge, L = log(1/u), p is an exact rational and k an integer.  Ordering
by leading exponents decides boundedness as the gauge tends to 0; everything
else goes through the sampled engine, which either produces a witness pair
(H, eps0), a strictly decreasing counterexample sequence, or an explicit
indeterminate flag.
"""

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import indexsets
from .grids import refine_sup
from .indexsets import NullSequence, PreconditionError

LN2 = math.log(2.0)
H_DECADES = tuple(10.0**i for i in range(7))
WHOLE_BASE = "whole-base"
DEFAULT_KMAX = 40


# ---------------------------------------------------------------------------
# symbolic nets


@dataclass(frozen=True)
class SymbolicNet:
    """Normalized sum of monomials (p, k, c): c * u^p * log(1/u)^k, leading term first."""

    terms: tuple

    @staticmethod
    def from_terms(items):
        acc = {}
        for p, k, c in items:
            p = Fraction(p)
            k = int(k)
            acc[(p, k)] = acc.get((p, k), 0.0) + float(c)
        cleaned = [(p, k, c) for (p, k), c in acc.items() if c != 0.0]
        cleaned.sort(key=lambda t: (t[0], -t[1]))
        return SymbolicNet(tuple(cleaned))

    @staticmethod
    def monomial(c, p=0, k=0):
        return SymbolicNet.from_terms([(p, k, c)])

    @staticmethod
    def zero():
        return SymbolicNet(())

    @property
    def is_zero(self):
        return not self.terms

    def leading(self):
        return self.terms[0] if self.terms else None

    def growth_key(self):
        """Lexicographic key that increases as the net gets smaller near 0."""
        if self.is_zero:
            return None
        p, k, _ = self.terms[0]
        return (p, -k)

    def __add__(self, other):
        return SymbolicNet.from_terms(self.terms + other.terms)

    def __neg__(self):
        return SymbolicNet(tuple((p, k, -c) for p, k, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        items = [
            (p1 + p2, k1 + k2, c1 * c2)
            for p1, k1, c1 in self.terms
            for p2, k2, c2 in other.terms
        ]
        return SymbolicNet.from_terms(items)

    def scale(self, k):
        return SymbolicNet.from_terms((p, q, k * c) for p, q, c in self.terms)

    def abs_(self):
        """|net| as a net: the sign of the leading term eventually decides the sign."""
        if self.is_zero:
            return self
        return self if self.terms[0][2] > 0 else -self

    def max_(self, other):
        """max of two nets, resolved by which one eventually dominates."""
        d = self - other
        if d.is_zero or d.terms[0][2] > 0:
            return self
        return other

    def eval_log2(self, l2u):
        """(sign, log2|value|) at gauge u = 2^l2u; robust far beyond float range."""
        if not self.terms:
            return (0, -math.inf)
        entries = []
        for p, k, c in self.terms:
            s = 1 if c > 0 else -1
            lc = math.log2(abs(c))
            if l2u == 0.0:
                if k > 0:
                    continue
                if k < 0:
                    return (s, math.inf)
                entries.append((s, lc))
            else:
                lL = math.log2(-l2u * LN2)
                entries.append((s, lc + float(p) * l2u + k * lL))
        if not entries:
            return (0, -math.inf)
        m = max(e[1] for e in entries)
        if m == -math.inf:
            return (0, -math.inf)
        ssum = sum(s * 2.0 ** (l - m) for s, l in entries)
        if ssum == 0.0:
            return (0, -math.inf)
        return (1 if ssum > 0 else -1, m + math.log2(abs(ssum)))

    def eval(self, u):
        """Value at gauge u in (0, 1]; saturates to +-inf outside float range."""
        s, l2 = self.eval_log2(math.log2(u))
        if s == 0:
            return 0.0
        if l2 > 1023:
            return s * math.inf
        return s * 2.0**l2

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for p, k, c in self.terms:
            bits = []
            if c != 1 or (p == 0 and k == 0):
                bits.append(f"{c:g}")
            if p != 0:
                bits.append("u" if p == 1 else f"u^{p}")
            if k != 0:
                bits.append("L" if k == 1 else f"L^{k}")
            parts.append("*".join(bits) or "1")
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# parser for the net grammar


class ParseError(ValueError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self._skip_ws()
        if self.pos >= len(self.text):
            return None, self.pos
        ch = self.text[self.pos]
        if ch.isdigit():
            j = self.pos
            seen_dot = False
            while j < len(self.text) and (self.text[j].isdigit() or (self.text[j] == "." and not seen_dot)):
                seen_dot = seen_dot or self.text[j] == "."
                j += 1
            return self.text[self.pos : j], self.pos
        if ch.isalpha():
            j = self.pos
            while j < len(self.text) and self.text[j].isalpha():
                j += 1
            return self.text[self.pos : j], self.pos
        return ch, self.pos

    def next(self):
        tok, pos = self.peek()
        if tok is not None:
            self.pos = pos + len(tok)
        return tok, pos

    def expect(self, what):
        tok, pos = self.next()
        if tok != what:
            raise ParseError(f"expected {what!r}, found {tok!r}", pos)


def _parse_integer(toks):
    sign = 1
    tok, pos = toks.peek()
    if tok == "-":
        toks.next()
        sign = -1
    tok, pos = toks.next()
    if tok is None or not tok.isdigit():
        raise ParseError(f"expected integer, found {tok!r}", pos)
    return sign * int(tok)


def _parse_rational(toks):
    tok, _ = toks.peek()
    parens = tok == "("
    if parens:
        toks.next()
    num = _parse_integer(toks)
    den = 1
    tok, _ = toks.peek()
    if tok == "/":
        toks.next()
        den = _parse_integer(toks)
    if parens:
        toks.expect(")")
    return Fraction(num, den)


def _parse_factor(toks):
    tok, pos = toks.peek()
    if tok is None:
        raise ParseError("unexpected end of input", pos)
    if tok == "(":
        toks.next()
        net = _parse_expr(toks)
        toks.expect(")")
        return net
    if tok == "u":
        toks.next()
        p = Fraction(1)
        nxt, _ = toks.peek()
        if nxt == "^":
            toks.next()
            p = _parse_rational(toks)
        return SymbolicNet.monomial(1.0, p=p)
    if tok == "L":
        toks.next()
        k = 1
        nxt, _ = toks.peek()
        if nxt == "^":
            toks.next()
            nxt, pos2 = toks.peek()
            if nxt == "(":
                k_frac = _parse_rational(toks)
            else:
                k_frac = Fraction(_parse_integer(toks))
            if k_frac.denominator != 1:
                raise ParseError("log exponents must be integers", pos2)
            k = int(k_frac)
        return SymbolicNet.monomial(1.0, k=k)
    if tok == "abs":
        toks.next()
        toks.expect("(")
        net = _parse_expr(toks)
        toks.expect(")")
        return net.abs_()
    if tok == "max":
        toks.next()
        toks.expect("(")
        a = _parse_expr(toks)
        toks.expect(",")
        b = _parse_expr(toks)
        toks.expect(")")
        return a.max_(b)
    if tok[0].isdigit():
        toks.next()
        nxt, pos2 = toks.peek()
        if nxt == "^":
            raise ParseError("numeric bases cannot carry exponents; only u and L can", pos2)
        return SymbolicNet.monomial(float(tok))
    raise ParseError(f"unexpected token {tok!r}", pos)


def _parse_term(toks):
    net = _parse_factor(toks)
    while True:
        tok, _ = toks.peek()
        if tok != "*":
            return net
        toks.next()
        net = net * _parse_factor(toks)


def _parse_expr(toks):
    tok, _ = toks.peek()
    negate = False
    if tok in ("+", "-"):
        toks.next()
        negate = tok == "-"
    net = _parse_term(toks)
    if negate:
        net = -net
    while True:
        tok, _ = toks.peek()
        if tok not in ("+", "-"):
            return net
        toks.next()
        rhs = _parse_term(toks)
        net = net - rhs if tok == "-" else net + rhs


def parse_net(text):
    """Parse the net grammar into a normalized SymbolicNet."""
    toks = _Tokens(text)
    net = _parse_expr(toks)
    tok, pos = toks.peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok!r}", pos)
    return net


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class Witness:
    H: float
    gauge: float
    eps0: object = None

    def __str__(self):
        return f"H={self.H:g}, eps0 gauge={self.gauge:g}"


@dataclass
class Counterexample:
    """A decreasing tail along which |x| exceeds H*|y| term by term."""

    H: float
    log2_gauges: list
    log2_lhs: list
    log2_rhs: list
    points: list = None

    def margins_log2(self):
        return [
            lx - (math.log2(self.H) + ly) if ly != -math.inf else math.inf
            for lx, ly in zip(self.log2_lhs, self.log2_rhs)
        ]

    def __len__(self):
        return len(self.log2_gauges)


@dataclass
class Verdict:
    holds: bool
    mode: str
    witness: Witness = None
    counterexample: Counterexample = None
    indeterminate: bool = False
    j_class: object = None
    note: str = ""

    def __str__(self):
        if self.indeterminate:
            return f"indeterminate ({self.note})"
        if self.holds:
            return f"holds [{self.mode}] with {self.witness}"
        return f"fails [{self.mode}] with counterexample of {len(self.counterexample)} terms at H={self.counterexample.H:g}"


@dataclass
class SampledNet:
    """A net given by an evaluation procedure on index points of a fixed instance."""

    fn: object
    domain: object
    gauge_functional: bool = True
    label: str = ""

    def value(self, point):
        return float(self.fn(point))


def lift(net, S):
    """View a symbolic net as a sampled net on the instance S (gauge evaluation)."""
    return SampledNet(
        fn=lambda pt: net.eval(S.underline(pt)),
        domain=S,
        gauge_functional=True,
        label=str(net),
    )


# ---------------------------------------------------------------------------
# symbolic decision


def _log2_at(net, k):
    return net.eval_log2(-float(k))


def symbolic_holds(x, y):
    """The bare relation: x = O(y) near 0 iff x's growth does not exceed y's."""
    if x.is_zero:
        return True
    if y.is_zero:
        return False
    return x.growth_key() >= y.growth_key()


def bigo_symbolic(x, y, S=None):
    """Decide |x| <= H|y| near 0 by leading-exponent comparison.

    The verdict depends only on the gauge, hence is uniform in the anchor and
    class choices; witnesses carry H = 2 * |leading coefficient ratio| and a
    numerically solved gauge threshold.
    """
    if x.is_zero:
        w = Witness(H=1.0, gauge=1.0, eps0=S.gauge_point(1.0) if S else None)
        return Verdict(holds=True, mode="symbolic", witness=w)
    if y.is_zero:
        ks = list(range(1, 9))
        cex = Counterexample(
            H=H_DECADES[-1],
            log2_gauges=[-float(k) for k in ks],
            log2_lhs=[_log2_at(x, k)[1] for k in ks],
            log2_rhs=[-math.inf] * len(ks),
        )
        return Verdict(holds=False, mode="symbolic", counterexample=cex)
    cx, cy = x.terms[0][2], y.terms[0][2]
    if symbolic_holds(x, y):
        H = 2.0 * abs(cx / cy)
        l2H = math.log2(H)
        kstar = None
        for k in range(1, 121):
            sx, lx = _log2_at(x, k)
            sy, ly = _log2_at(y, k)
            if lx <= l2H + ly:
                if kstar is None:
                    kstar = k
            else:
                kstar = None
        if kstar is None:
            # the asymptotic regime starts beyond the scan; bound it from the exponents
            kstar = 256
        gauge = 2.0**-kstar if kstar < 1074 else 0.0
        w = Witness(H=H, gauge=gauge, eps0=S.gauge_point(gauge) if S and gauge > 0 else None)
        return Verdict(holds=True, mode="symbolic", witness=w)
    # failure: ratio grows without bound; find a window beating the largest decade
    H = H_DECADES[-1]
    l2H = math.log2(H)
    k = 1
    while k < 10**15:
        ks = [k + i for i in range(8)]
        ok = all(_log2_at(x, kk)[1] > l2H + _log2_at(y, kk)[1] for kk in ks)
        if ok:
            cex = Counterexample(
                H=H,
                log2_gauges=[-float(kk) for kk in ks],
                log2_lhs=[_log2_at(x, kk)[1] for kk in ks],
                log2_rhs=[_log2_at(y, kk)[1] for kk in ks],
            )
            return Verdict(holds=False, mode="symbolic", counterexample=cex)
        k = k + 1 if k < 8 else k * 2
    return Verdict(holds=False, mode="symbolic", indeterminate=True, note="no certificate window found")


# ---------------------------------------------------------------------------
# sampled decision


def _tail_trend_increasing(diffs, band=0.25):
    # the log-ratio must not keep climbing across the probe; window maxima
    # tolerate bounded oscillation, and the pre-asymptotic head is skipped
    # so that transients cannot mask slow divergence
    finite = [d for d in diffs if d not in (math.inf, -math.inf) and not math.isnan(d)]
    if len(finite) < 12:
        return False
    n = len(finite)
    w1 = max(finite[n // 4 : n // 2])
    w3 = max(finite[3 * n // 4 :])
    return w3 > w1 + band


def _log_abs(v):
    av = abs(v)
    if av == 0.0:
        return -math.inf
    if math.isinf(av):
        return math.inf
    return math.log2(av)


def bigo_pointwise(x, y, A, a, probe, H_decades=H_DECADES, resample=True):
    """Search (H, eps0) over decades and probe prefixes; negate with a decreasing tail.

    The probe must tend to the empty set in the down-set of ``a`` within ``A``.
    """
    S = x.domain
    pts = list(probe.points if isinstance(probe, NullSequence) else probe)
    if not indexsets.tends_to_emptyset(pts, A, a, S):
        raise PreconditionError("probe must tend to the empty set in the down-set of a within A")
    lx = [_log_abs(x.value(p)) for p in pts]
    ly = [_log_abs(y.value(p)) for p in pts]
    diffs = [vx - vy if vy != -math.inf else (math.inf if vx > -math.inf else -math.inf) for vx, vy in zip(lx, ly)]

    for H in H_decades:
        l2H = math.log2(H)
        for start in range(len(pts) - 8):
            tail_ok = all(
                lx[k] <= l2H + ly[k] or lx[k] == -math.inf
                for k in range(start, len(pts))
            )
            if not tail_ok:
                continue
            if _tail_trend_increasing(diffs[start:]):
                break  # ratio still climbing: a larger H may cover it, or it diverges
            if resample:
                g0 = S.underline(pts[start])
                fresh = [S.gauge_point(g0 * (2.0 / 3.0) ** j, anchor=a if S.kind != "special" else None) for j in range(1, 13)]
                bad = any(
                    _log_abs(x.value(q)) > l2H + _log_abs(y.value(q)) and _log_abs(x.value(q)) > -math.inf
                    for q in fresh
                )
                if bad:
                    continue
            w = Witness(H=H, gauge=S.underline(pts[start]), eps0=pts[start])
            return Verdict(holds=True, mode="sampled", witness=w)

    # no decade covers a tail: look for a certified violating subsequence
    H = H_decades[-1]
    l2H = math.log2(H)
    bad = [k for k in range(len(pts)) if lx[k] > l2H + ly[k] and lx[k] > -math.inf]
    if len(bad) >= 3 and bad[-1] >= 3 * len(pts) // 4:
        seq = NullSequence(points=[pts[k] for k in bad], cls=A, anchor=a)
        seq = indexsets.extract_decreasing(seq, S)
        cex = Counterexample(
            H=H,
            log2_gauges=[math.log2(S.underline(p)) for p in seq.points],
            log2_lhs=[_log_abs(x.value(p)) for p in seq.points],
            log2_rhs=[_log_abs(y.value(p)) for p in seq.points],
            points=list(seq.points),
        )
        return Verdict(holds=False, mode="sampled", counterexample=cex)
    return Verdict(
        holds=False,
        mode="sampled",
        indeterminate=True,
        note="no covering decade and no certified violating tail on the probe",
    )


def _as_sampled(net, S):
    return lift(net, S) if isinstance(net, SymbolicNet) else net


def _check_refine_closed(J, S):
    if J == WHOLE_BASE:
        return
    classes = list(J)
    if not classes:
        raise PreconditionError("J must be non-empty")
    for A in classes:
        for B in classes:
            if S.refine(A, B) not in classes:
                raise PreconditionError(f"J is not closed under refinement: refine({A},{B}) missing")


def _class_candidates(S, J):
    if J != WHOLE_BASE:
        return list(J)
    if S.kind == "special":
        return [S.carrier_class()]
    if S.kind == "full":
        return [indexsets.MomentClass(q) for q in range(S.q_max + 1)]
    if S.kind == "nsa-base":
        return [indexsets.DiamClass(n) for n in (1, 2, 4, 8)]
    return [indexsets.LevelClass(q) for q in range(S.q_top + 1)]


def bigo_OJ(x, y, J, S, kmax=DEFAULT_KMAX, anchors_per_class=3, seed=0):
    """The class-quantified big-O: some class works for every anchor in it.

    Symbolic inputs are decided in the gauge (all quantifier combinations
    coincide there); sampled inputs search the class base per instance and
    require the sampled-anchor verdicts to be uniform.
    """
    _check_refine_closed(J, S)
    if isinstance(x, SymbolicNet) and isinstance(y, SymbolicNet):
        v = bigo_symbolic(x, y, S)
        v.j_class = _class_candidates(S, J)[0]
        return v
    xs, ys = _as_sampled(x, S), _as_sampled(y, S)
    if S.kind == "nsa-base" and not (xs.gauge_functional and ys.gauge_functional):
        return Verdict(
            holds=False,
            mode="sampled",
            indeterminate=True,
            note="anchor-dependent nets on the nsa-base instance are outside the decidable fragment",
        )
    rng = random.Random(seed)
    last = None
    for A in _class_candidates(S, J):
        verdicts = []
        for _ in range(anchors_per_class):
            a = S.sample_member(A, rng)
            if a is None:
                break
            probe = S.probe(kmin=0, kmax=kmax, anchor=a)
            verdicts.append(bigo_pointwise(xs, ys, A, a, probe))
        if not verdicts:
            continue
        if any(v.indeterminate for v in verdicts):
            last = next(v for v in verdicts if v.indeterminate)
            continue
        if all(v.holds for v in verdicts):
            out = verdicts[0]
            out.j_class = A
            return out
        if all(not v.holds for v in verdicts):
            out = verdicts[0]
            out.j_class = A
            return out
        last = Verdict(holds=False, mode="sampled", indeterminate=True, note=f"anchor verdicts disagree in {A}")
    return last or Verdict(holds=False, mode="sampled", indeterminate=True, note="no class yielded a uniform verdict")


@dataclass
class ParamNet:
    """A net of functions on a parameter interval: evaluation (point, ts) -> values."""

    fn: object
    domain: object
    focus: object = None
    label: str = ""


def bigo_uniform(x, y, K, A, a, S=None, kmax=20, H_decades=H_DECADES):
    """Uniform big-O over the parameter interval K: one (H, eps0) for all parameters.

    Realized through the sup reformulation: sup_K |x_eps| against |y_eps|,
    with grid instability surfacing as an indeterminate flag.
    """
    S = S or x.domain
    lo, hi = K
    unstable = []

    def sup_at(pt):
        focus = x.focus(pt) if x.focus else None
        sup, _, stable = refine_sup(lambda ts: x.fn(pt, ts), lo, hi, focus=focus)
        if not stable:
            unstable.append(pt)
        return sup

    sup_net = SampledNet(fn=sup_at, domain=S, gauge_functional=True, label=f"sup[{x.label}]")
    probe = S.probe(kmin=0, kmax=kmax, anchor=a)
    v = bigo_pointwise(sup_net, _as_sampled(y, S), A, a, probe, H_decades=H_decades)
    if unstable:
        v.indeterminate = True
        v.note = (v.note + "; " if v.note else "") + f"grid refinement unstable at {len(unstable)} probe points"
    v.mode = "sampled-uniform"
    return v


# ---------------------------------------------------------------------------
# random nets and the law suite


def random_net(rng, max_terms=3, p_range=(-5, 5), p_denominators=(1,), log_weights=(0.7, 0.2, 0.1)):
    terms = []
    for _ in range(rng.randrange(1, max_terms + 1)):
        den = rng.choice(p_denominators)
        p = Fraction(rng.randrange(p_range[0] * den, p_range[1] * den + 1), den)
        k = rng.choices((0, 1, 2), weights=log_weights)[0]
        c = rng.choice((-1, 1)) * 10.0 ** rng.uniform(-1, 1)
        terms.append((p, k, c))
    return SymbolicNet.from_terms(terms)


def random_nonneg_net(rng, **kw):
    net = random_net(rng, **kw)
    return SymbolicNet(tuple((p, k, abs(c)) for p, k, c in net.terms))


def _bounded_multiplier(rng):
    # leading growth at least (0, 0): a net that is O(1) near the gauge origin
    terms = [(Fraction(0), -rng.randrange(0, 3), rng.choice((-1, 1)) * 10.0 ** rng.uniform(-1, 1))]
    if rng.random() < 0.5:
        terms.append((Fraction(rng.randrange(1, 4)), rng.randrange(-1, 3), rng.uniform(-3, 3)))
    return SymbolicNet.from_terms(terms)


def member_of_O(x, rng):
    """A net that is O(x) by construction: x times an O(1) multiplier."""
    m = _bounded_multiplier(rng)
    if rng.random() < 0.4:
        m = m + _bounded_multiplier(rng)
    return x * m


@dataclass
class LawResult:
    law: str
    description: str
    trials: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def record(self, ok, detail):
        self.trials += 1
        if not ok:
            self.failures.append(detail)


@dataclass
class LawReport:
    kind: str
    seed: int
    laws: dict
    controls: dict

    @property
    def passed(self):
        return all(r.passed for r in self.laws.values()) and all(self.controls.values())

    def lines(self):
        out = [f"law suite on {self.kind} (seed {self.seed})"]
        for r in self.laws.values():
            status = "pass" if r.passed else "FAIL"
            out.append(f"  {r.law:12s} [{status}] {r.description}: {r.trials} trials, {len(r.failures)} failures")
            for f in r.failures[:3]:
                out.append(f"    counterexample: {f}")
        for name, ok in self.controls.items():
            out.append(f"  control {name}: {'failed as expected' if ok else 'UNEXPECTEDLY PASSED'}")
        return out


def law_suite(seed, trials, S, realization_stride=25, uniform_stride=200):
    """Randomized checks of the anchored, class-quantified and uniform big-O laws.

    All laws are theorems; a failure indicates an implementation bug.  The
    symbolic reduction decides each trial, and every ``realization_stride``-th
    trial is re-run through the instance machinery (sampled anchors and, on
    the full instance, the class-restriction law).
    """
    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    rng = random.Random(seed)
    laws = {
        "i": LawResult("i", "reflexivity"),
        "ii": LawResult("ii", "transitivity"),
        "iii": LawResult("iii", "product of O-terms"),
        "iv": LawResult("iv", "sum bounded by |x|+|y|"),
        "v": LawResult("v", "external product"),
        "vi": LawResult("vi", "idempotent sum"),
        "vii": LawResult("vii", "nonnegative external sum"),
        "viii": LawResult("viii", "scalar inside O"),
        "ix": LawResult("ix", "scalar outside O"),
        "J-i": LawResult("J-i", "class-quantified reflexivity"),
        "J-iii": LawResult("J-iii", "class-quantified product"),
        "J-viii": LawResult("J-viii", "class-quantified scalar"),
        "J-sampled": LawResult("J-sampled", "class search on lifted sampled nets"),
        "K-iii": LawResult("K-iii", "uniform product over a parameter interval"),
    }
    if S.kind == "full":
        laws["x"] = LawResult("x", "restriction to a finer class containing the anchor")

    def ok(v):
        return v.holds and not v.indeterminate

    def oj_holds(xn, yn):
        # quantifier collapse for gauge-only nets: the class-quantified verdict
        # is the symbolic one, over any refine-closed family
        _check_refine_closed(WHOLE_BASE, S)
        return symbolic_holds(xn, yn)

    for t in range(trials):
        x = random_net(rng)
        y = random_net(rng)
        z = random_net(rng)
        xo = member_of_O(x, rng)
        yo = member_of_O(y, rng)

        laws["i"].record(symbolic_holds(x, x), f"x={x}")
        ym = member_of_O(z, rng)
        xm = member_of_O(ym, rng)
        laws["ii"].record(symbolic_holds(xm, z), f"x={xm}, z={z}")
        laws["iii"].record(symbolic_holds(xo * yo, x * y), f"x={x}, y={y}")
        laws["iv"].record(symbolic_holds(xo + yo, x.abs_() + y.abs_()), f"x={x}, y={y}")
        laws["v"].record(symbolic_holds(x * yo, x * y), f"x={x}, y={y}")
        xo2 = member_of_O(x, rng)
        laws["vi"].record(symbolic_holds(xo + xo2, x), f"x={x}")
        xp = random_nonneg_net(rng)
        yp = random_nonneg_net(rng)
        ypo = member_of_O(yp, rng)
        laws["vii"].record(symbolic_holds(xp + ypo, xp + yp), f"x={xp}, y={yp}")
        kval = rng.choice((0.0, 1.0, -1.0, rng.uniform(-9, 9)))
        xko = member_of_O(x.scale(kval), rng)
        laws["viii"].record(symbolic_holds(xko, x), f"k={kval:g}, x={x}")
        laws["ix"].record(symbolic_holds(xo.scale(kval), x), f"k={kval:g}, x={x}")

        laws["J-i"].record(oj_holds(x, x), f"x={x}")
        laws["J-iii"].record(oj_holds(xo * yo, x * y), f"x={x}, y={y}")
        laws["J-viii"].record(oj_holds(xko, x), f"k={kval:g}, x={x}")

        if t % realization_stride == 0:
            v = bigo_OJ(lift(x, S), lift(x, S), WHOLE_BASE, S, kmax=25)
            laws["J-sampled"].record(ok(v), f"sampled class search failed reflexivity on x={x}")
            vx = bigo_OJ(x, x, WHOLE_BASE, S)
            laws["J-i"].record(ok(vx), f"full verdict path failed reflexivity on x={x}")
            if S.kind == "full":
                laws["x"].record(_law_restriction_full(S, rng), "class restriction witness search failed")
        if t % uniform_stride == 0:
            laws["K-iii"].record(_law_uniform_product(S, rng), "uniform product law failed")

    controls = {"vii-nonneg-dropped": _control_law_vii(rng)}
    return LawReport(kind=S.kind, seed=seed, laws=laws, controls=controls)


def _law_restriction_full(S, rng):
    # x = O_{a,A}(y) with a in B subset A forces x = O_{a,B}(y); down-sets coincide on the ray
    q = rng.randrange(0, 3)
    qp = rng.randrange(q + 1, 5)
    A, B = indexsets.MomentClass(q), indexsets.MomentClass(qp)
    profile = next(p for p in S.pool if S.contains(B, indexsets.FullPoint(1.0, p)))
    a = indexsets.FullPoint(2.0 ** -rng.uniform(0, 4), profile)
    x = SymbolicNet.monomial(rng.uniform(0.5, 2), p=rng.randrange(1, 4))
    y = SymbolicNet.monomial(1.0, p=rng.randrange(0, 2))
    xa, ya = lift(x, S), lift(y, S)
    probe = S.probe(kmin=0, kmax=30, anchor=a)
    va = bigo_pointwise(xa, ya, A, a, probe)
    vb = bigo_pointwise(xa, ya, B, a, probe)
    return va.holds and vb.holds and not va.indeterminate and not vb.indeterminate


def _law_uniform_product(S, rng):
    # product law for the uniform variant on K = [0, 1] with bounded parameter weights
    f1, f2 = random_net(rng), random_net(rng)
    g1, g2 = member_of_O(f1, rng), member_of_O(f2, rng)

    def weighted(net):
        return ParamNet(
            fn=lambda pt, ts, n=net: n.eval(S.underline(pt)) * (1.0 + 0.5 * np.sin(3.0 * ts)),
            domain=S,
            label=str(net),
        )

    a = S.default_anchor()
    A = S.carrier_class()
    prod = weighted(g1 * g2)
    v = bigo_uniform(prod, f1 * f2, (0.0, 1.0), A, a, S)
    return v.holds and not v.indeterminate


def _control_law_vii(rng):
    """Dropping the nonnegativity hypothesis breaks the external-sum law."""
    y = SymbolicNet.monomial(1.0, p=1)
    x = -y
    yo = y.scale(0.5)
    v = bigo_symbolic(x + yo, x + y)
    return not v.holds
