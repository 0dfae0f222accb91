"""Acceptance suite: one test per criterion, tolerances pinned.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion.  Everything is seeded; the whole suite is single-threaded.
"""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from epsnets import colombeau as co
from epsnets.bigo import (
    H_DECADES,
    SymbolicNet,
    bigo_pointwise,
    bigo_symbolic,
    law_suite,
    lift,
    random_net,
)
from epsnets.colombeau import (
    Atom,
    embed_delta,
    embed_heaviside,
    embed_smooth,
    eval_at,
    gen_equal,
    is_moderate,
    is_negligible,
    make_gen_point,
    rep_derive,
    rep_mul,
    rep_sub,
    sup_on_K,
    zero_test_by_points,
)
from epsnets.indexsets import (
    FullPoint,
    TailClass,
    make_index_set,
    validate_index_set,
)
from epsnets.testfn import diam_supp, make_Aq, moment, scale, structurally_equal, translate

SPECIAL = make_index_set("special")
FULL = make_index_set("full")
NSA = make_index_set("nsa-base")
TRIVIAL = make_index_set("trivial")
PHI = make_Aq(0)


def _report(n, text):
    print(f"ACCEPTANCE {n}: PASS - {text}")


# ---------------------------------------------------------------------------


def test_criterion_01_index_set_validation():
    for S in (SPECIAL, FULL, NSA, TRIVIAL):
        report = validate_index_set(S, budget=500, seed=7)
        assert report.passed, "\n".join(report.lines())

    from epsnets.indexsets import SpecialIndexSet

    class Broken(SpecialIndexSet):
        def sample_class(self, rng):
            return TailClass(-1.0)

        def sample_member(self, A, rng):
            return None if A.eps0 <= 0 else super().sample_member(A, rng)

    bad = validate_index_set(Broken(), budget=500, seed=7)
    assert not bad.clauses["ii"].passed
    assert bad.clauses["i"].passed
    _report(1, "all four instances pass the defining clauses at budget 500; the broken control fails clause (ii)")


def test_criterion_02_law_suites():
    for S in (SPECIAL, FULL):
        report = law_suite(seed=7, trials=1000, S=S)
        core = [r for law, r in report.laws.items() if not law.startswith(("J-", "K-"))]
        assert all(r.passed for r in core), "\n".join(report.lines())
        assert all(r.passed for r in report.laws.values()), "\n".join(report.lines())
        assert report.controls["vii-nonneg-dropped"], "negative control unexpectedly passed"
        if S.kind == "full":
            assert report.laws["x"].trials >= 40
    _report(2, "anchored and class-quantified law suites pass 1000 seeded trials on special and full; control fails as expected")


def test_criterion_03_differential_oracle():
    rng = random.Random(7)
    probe = SPECIAL.probe(kmin=0, kmax=40)
    decided = 0
    indeterminate = 0
    for _ in range(200):
        x, y = random_net(rng), random_net(rng)
        sym = bigo_symbolic(x, y)
        v = bigo_pointwise(lift(x, SPECIAL), lift(y, SPECIAL), TailClass(1.0), 1.0, probe)
        if v.indeterminate:
            indeterminate += 1
            continue
        decided += 1
        assert v.holds == sym.holds, f"disagreement on x={x}, y={y}"
    assert indeterminate <= 10, f"indeterminate rate {indeterminate}/200 exceeds 5%"
    _report(3, f"sampled verdicts agree with symbolic on all {decided} decided pairs; {indeterminate}/200 indeterminate")


def test_criterion_04_action_laws_and_freeness():
    phi = co.RepNet  # noqa: F841  (quiet the linter about unused import shims)
    base = make_Aq(2)
    f = translate(0.4, base)
    # the five action laws, exact on closed forms
    assert scale(1.0, f) == f
    assert translate(0.0, f) == f
    assert structurally_equal(scale(2.0, scale(3.0, f)), scale(6.0, f), tol=1e-12)
    assert structurally_equal(translate(1.0, translate(2.0, f)), translate(3.0, f), tol=1e-12)
    assert structurally_equal(scale(2.0, translate(0.7, f)), translate(1.4, scale(2.0, f)), tol=1e-12)
    for r in np.linspace(0.5, 2.0, 31):
        assert abs(diam_supp(scale(r, f)) - r * diam_supp(f)) <= 1e-12
        fixed = structurally_equal(scale(r, f), f, tol=1e-12)
        assert fixed == (r == 1.0), f"scaling fixed point detected at r={r}"
    for x in np.linspace(-1.0, 1.0, 21):
        fixed = structurally_equal(translate(x, f), f, tol=1e-12)
        assert fixed == (x == 0.0), f"translation fixed point detected at x={x}"
    _report(4, "action laws exact; support diameter scales to 1e-12; actions are free on the sampled grids")


def test_criterion_05_mollifier_moments():
    for q in range(7):
        phi = make_Aq(q, 1.0)
        assert abs(moment(phi, 0) - 1.0) <= 1e-9
        assert abs(moment(phi, 0, n=128) - 1.0) <= 1e-9
        for j in range(1, q + 1):
            assert abs(moment(phi, j)) <= 1e-9
            assert abs(moment(phi, j, n=128)) <= 1e-9
    _report(5, "vanishing-moment mollifiers meet 1e-9 for q <= 6, re-verified at doubled node count")


def test_criterion_06_canonical_moderateness():
    delta = embed_delta(PHI)
    v = is_moderate(delta, SPECIAL, alpha_max=2)
    assert v.moderate and not v.indeterminate
    for (K, alpha), row in v.per.items():
        assert row["N_sym"] == 1 + alpha
        assert row["N_fit"] == pytest.approx(1 + alpha, abs=0.25)

    dsq = rep_mul(delta, delta)
    v2 = is_moderate(dsq, SPECIAL, alpha_max=0)
    assert v2.moderate
    for row in v2.per.values():
        assert row["N_sym"] == 2 and row["N_fit"] == pytest.approx(2.0, abs=0.25)

    sm = embed_smooth((1, 0, 2))
    v3 = is_moderate(sm, SPECIAL)
    assert v3.moderate and v3.N == 0
    for row in v3.per.values():
        assert abs(row["N_fit"]) <= 0.25
    _report(6, "slope fits give N=1+alpha for the delta embedding, N=2 for its square, N=0 for smooth; tracks agree")


def test_criterion_07_non_negligibility_certificates():
    for u, label in ((embed_delta(PHI), "delta"), (rep_mul(embed_smooth((0, 1)), embed_delta(PHI)), "x*delta")):
        v = is_negligible(u, SPECIAL)
        assert not v.negligible and not v.indeterminate, label
        cex = v.counterexample
        assert cex is not None and cex.points is not None
        K, m = v.first_failure
        gauges = [SPECIAL.underline(p) for p in cex.points]
        assert all(a > b for a, b in zip(gauges, gauges[1:])), "certificate sequence must strictly decrease"
        for H in H_DECADES:
            assert H <= 1e6
            for p in cex.points:
                sup = sup_on_K(u, K, 0, p, SPECIAL)
                assert sup > H * SPECIAL.underline(p) ** m, f"{label}: H={H} not beaten at {p}"
    _report(7, "delta and x*delta produce strictly decreasing certificates beating every probed H up to 1e6")


def test_criterion_08_full_instance_quantifier_reduction():
    delta = embed_delta(PHI)
    x = embed_smooth((0, 1))
    corpus = [
        delta,
        embed_smooth((1, 0, 2)),
        rep_mul(delta, delta),
        rep_mul(x, delta),
        embed_heaviside(PHI),
        rep_derive(delta),
        co.RepNet.from_atoms([Atom(Fraction(10), (Fraction(0), Fraction(1)), ())]),
        co.rep_add(delta, embed_smooth((3,))),
        co.rep_add(rep_mul(x, delta), co.RepNet.from_atoms([Atom(Fraction(6), (Fraction(1),), ())])),
        rep_sub(rep_derive(embed_heaviside(PHI)), delta),
    ]
    for u in corpus:
        v = is_moderate(u, FULL, alpha_max=1)
        assert v.moderate and not v.indeterminate, str(u)
        joint_ok, joint_n, joint_q = v.forms["joint"]
        diag_ok, diag_n = v.forms["diagonal"]
        assert joint_ok and diag_ok
        assert joint_n == diag_n, f"forms disagree on {u}: joint N={joint_n}, diagonal N={diag_n}"
        assert joint_q is not None and joint_q <= 4
    _report(8, "joint and diagonal moderateness forms return identical verdicts and identical N on the 10-net corpus")


def test_criterion_09_point_value_characterization():
    delta = embed_delta(PHI)
    x = embed_smooth((0, 1))
    eps10x = co.RepNet.from_atoms([Atom(Fraction(10), (Fraction(0), Fraction(1)), ())])
    corpus = [
        delta,
        embed_smooth((1, 0, 2)),
        rep_mul(x, delta),
        eps10x,
        rep_sub(rep_derive(embed_heaviside(PHI)), delta),
        co.rep_add(delta, embed_smooth((3,))),
        rep_mul(delta, delta),
        co.rep_add(eps10x, rep_mul(eps10x, x)),
        embed_heaviside(PHI),
        rep_derive(delta),
    ]
    for u in corpus:
        zt = zero_test_by_points(u, SPECIAL)
        nv = is_negligible(u, SPECIAL)
        assert not zt.indeterminate
        assert zt.zero == nv.negligible, f"characterization mismatch on {u}"
        assert zt.negligible_agrees

    # stability of point values under high-order representative perturbation
    pt = make_gen_point(lambda g: 0.3 + g, (0.0, 1.0), SPECIAL)
    for u in (embed_smooth((0, 0, 1), omega=(0.0, 1.0)), embed_delta(PHI, omega=(0.0, 1.0))):
        a = eval_at(u, pt, SPECIAL)
        b = eval_at(u, pt.perturbed(10), SPECIAL, check=False)
        diff = co.GenNumber(fn=lambda g: a.fn(g) - b.fn(g), S=SPECIAL, N=a.N)
        assert diff.is_zero()
    _report(9, "zero-test matches negligibility on the 10-net corpus; point values invariant under gauge^10 perturbations")


def test_criterion_10_order_isomorphism():
    rng = random.Random(7)
    e = FullPoint(1.0, PHI)
    for _ in range(500):
        r = rng.uniform(0.0, 1.0) or 0.5
        s = rng.uniform(0.0, 1.0) or 0.5
        left = FULL.scale_point(r, e)
        right = FULL.scale_point(s, e)
        assert FULL.leq(left, right) == (r <= s), f"isomorphism broken at r={r!r}, s={s!r}"
    _report(10, "scaling along a fixed mollifier is an order isomorphism on 500 sampled pairs with zero exceptions")
