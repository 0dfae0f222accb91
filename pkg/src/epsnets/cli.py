"""Command-line front end: asymptotic queries, law suites, and generalized
function verdicts with table, CSV and json-lines output.

Exit codes: 0 affirmative, 1 negative, 2 indeterminate, 64 usage errors,
65 data or domain errors.
"""

import argparse
import json
import math
import sys
from fractions import Fraction

from . import bigo, colombeau, indexsets, testfn
from .bigo import ParseError, parse_net
from .colombeau import (
    Atom,
    KernelFactor,
    RepNet,
    embed_delta,
    embed_heaviside,
    rep_add,
    rep_derive,
    rep_mul,
    rep_neg,
)
from .indexsets import KindMismatchError, PreconditionError, UnsupportedInstanceError
from .testfn import make_Aq

EXIT_OK = 0
EXIT_NO = 1
EXIT_INDETERMINATE = 2
EXIT_USAGE = 64
EXIT_DATA = 65

DEFAULTS = {
    "index": "special",
    "q": 4,
    "kmin": 0,
    "kmax": 40,
    "tol": colombeau.SLOPE_BAND,
    "csv": None,
    "seed": 0,
    "json": False,
    "omega": None,
    "trials": 1000,
}


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# RepNet expression grammar


_KERNELS = {}


def _kernel(name):
    if name not in _KERNELS:
        if name == "std":
            _KERNELS[name] = make_Aq(0)
        elif name.startswith("aq") and name[2:].isdigit():
            _KERNELS[name] = make_Aq(int(name[2:]))
        else:
            raise ParseError(f"unknown kernel id {name!r} (use std or aq0..aq6)", 0)
    return _KERNELS[name]


def _consume_bump_literal(toks, pos):
    """Read a bump(center, radius; c0, ...) literal as raw text from the stream."""
    text = toks.text
    i = text.index("(", pos)
    depth = 0
    for j in range(i, len(text)):
        if text[j] == "(":
            depth += 1
        elif text[j] == ")":
            depth -= 1
            if depth == 0:
                toks.pos = j + 1
                try:
                    return testfn.parse_testfn("bump" + text[i : j + 1])
                except ValueError as exc:
                    raise ParseError(str(exc), pos) from None
    raise ParseError("unterminated bump literal", pos)


def _gauge_monomial(p, omega):
    return RepNet.from_atoms([Atom(Fraction(p), (Fraction(1),), ())], omega)


def _x_monomial(n, omega):
    return colombeau.embed_smooth([0] * n + [1], omega)


def _parse_kernel_arg(toks):
    shift = 0.0
    tok, _ = toks.peek()
    parens = tok == "("
    if parens:
        toks.next()
    toks.expect("x")
    tok, _ = toks.peek()
    if tok in ("-", "+"):
        sign = 1.0 if tok == "-" else -1.0
        toks.next()
        num, pos = toks.next()
        if num is None or not num[0].isdigit():
            raise ParseError(f"expected a shift value, found {num!r}", pos)
        shift = sign * float(num)
    if parens:
        toks.expect(")")
    s = Fraction(0)
    tok, _ = toks.peek()
    if tok == "/":
        toks.next()
        toks.expect("u")
        s = Fraction(1)
        tok, _ = toks.peek()
        if tok == "^":
            toks.next()
            s = bigo._parse_rational(toks)
    return shift, s


def _parse_rep_factor(toks, omega):
    tok, pos = toks.peek()
    if tok is None:
        raise ParseError("unexpected end of input", pos)
    if tok == "(":
        toks.next()
        net = _parse_rep_expr(toks, omega)
        toks.expect(")")
        return net
    if tok == "u":
        toks.next()
        p = Fraction(1)
        nxt, _ = toks.peek()
        if nxt == "^":
            toks.next()
            p = bigo._parse_rational(toks)
        return _gauge_monomial(p, omega)
    if tok == "x":
        toks.next()
        n = 1
        nxt, _ = toks.peek()
        if nxt == "^":
            toks.next()
            n = bigo._parse_integer(toks)
            if n < 0:
                raise ParseError("negative powers of x are not polynomial", pos)
        return _x_monomial(n, omega)
    if tok == "K":
        toks.next()
        toks.expect("[")
        name, npos = toks.next()
        if name is None or not name[0].isalpha():
            raise ParseError(f"expected a kernel id, found {name!r}", npos)
        if name == "bump":
            kernel = _consume_bump_literal(toks, npos)
        else:
            kernel = _kernel(name)
        j = 0
        nxt, _ = toks.peek()
        if nxt == ",":
            toks.next()
            j = bigo._parse_integer(toks)
            if j < -1:
                raise ParseError("kernel orders below -1 are not represented", npos)
        toks.expect("]")
        toks.expect("(")
        shift, s = _parse_kernel_arg(toks)
        toks.expect(")")
        return RepNet.from_atoms(
            [Atom(Fraction(0), (Fraction(1),), (KernelFactor(kernel, j, shift, s),))], omega
        )
    if tok == "delta":
        toks.next()
        toks.expect("(")
        toks.expect(")")
        return embed_delta(_kernel("std"), omega)
    if tok == "heaviside":
        toks.next()
        toks.expect("(")
        toks.expect(")")
        return embed_heaviside(_kernel("std"), omega)
    if tok == "dH":
        toks.next()
        toks.expect("(")
        toks.expect(")")
        return rep_derive(embed_heaviside(_kernel("std"), omega))
    if tok == "smooth":
        toks.next()
        toks.expect("(")
        inner = _parse_rep_expr(toks, omega)
        toks.expect(")")
        for a in inner.atoms:
            if a.factors or a.p != 0:
                raise ParseError("smooth(...) takes a polynomial in x", pos)
        return inner
    if tok == "scale":
        toks.next()
        toks.expect("-")
        toks.expect("embed")
        toks.expect("(")
        qv = bigo._parse_integer(toks)
        toks.expect(")")
        return embed_delta(make_Aq(qv), omega)
    if tok[0].isdigit():
        toks.next()
        return colombeau.embed_smooth([Fraction(tok)], omega)
    raise ParseError(f"unexpected token {tok!r}", pos)


def _parse_rep_term(toks, omega):
    net = _parse_rep_factor(toks, omega)
    while True:
        tok, _ = toks.peek()
        if tok != "*":
            return net
        toks.next()
        net = rep_mul(net, _parse_rep_factor(toks, omega))


def _parse_rep_expr(toks, omega):
    tok, _ = toks.peek()
    negate = False
    if tok in ("+", "-"):
        toks.next()
        negate = tok == "-"
    net = _parse_rep_term(toks, omega)
    if negate:
        net = rep_neg(net)
    while True:
        tok, _ = toks.peek()
        if tok not in ("+", "-"):
            return net
        toks.next()
        rhs = _parse_rep_term(toks, omega)
        net = rep_add(net, rep_neg(rhs)) if tok == "-" else rep_add(net, rhs)


def parse_repnet(text, omega=colombeau.REAL_LINE):
    """Parse a representative-net expression (builtins, atoms, +, -, *)."""
    toks = bigo._Tokens(text)
    net = _parse_rep_expr(toks, omega)
    tok, pos = toks.peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok!r}", pos)
    return net


# ---------------------------------------------------------------------------
# session plumbing


def _parse_omega(text):
    lo_s, hi_s = text.split(",")
    return (float(lo_s), float(hi_s))


def _index_set(opts):
    kind = opts["index"]
    if kind == "full":
        return indexsets.make_index_set("full", q_max=opts["q"])
    return indexsets.make_index_set(kind)


def _emit(lines, opts, payload=None):
    if opts["json"]:
        print(json.dumps(payload if payload is not None else {"lines": lines}, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" if isinstance(v, float) else str(v) for v in row) + "\n")


def _counterexample_rows(cex):
    rows = []
    for lg, lx, ly in zip(cex.log2_gauges, cex.log2_lhs, cex.log2_rhs):
        k = -lg
        gauge = 2.0**lg if lg > -1074 else 0.0
        absx = 2.0**lx if lx < 1023 else math.inf
        hy = cex.H * (2.0**ly if ly < 1023 else math.inf) if ly != -math.inf else 0.0
        rows.append((k, gauge, absx, hy, lg, lx, ly))
    return rows


def _pow2(l2):
    """Human form of 2^l2, readable far outside float range."""
    if l2 == -math.inf:
        return "0"
    if abs(l2) < 512:
        return f"{2.0**l2:.6g}"
    return f"2^{l2:.6g}"


def _verdict_exit(v):
    if v.indeterminate:
        return EXIT_INDETERMINATE
    return EXIT_OK if v.holds else EXIT_NO


# ---------------------------------------------------------------------------
# commands


def cmd_bigo(opts):
    S = _index_set(opts)
    x = parse_net(opts["lhs"])
    y = parse_net(opts["rhs"])
    v = bigo.bigo_OJ(x, y, bigo.WHOLE_BASE, S, kmax=opts["kmax"])
    lines = [f"bigo: {opts['lhs']}  vs  {opts['rhs']}  on index set {S.kind}", f"verdict: {v}"]
    payload = {"command": "bigo", "index": S.kind, "holds": v.holds, "indeterminate": v.indeterminate}
    rows = []
    if v.holds and v.witness:
        payload["H"] = v.witness.H
        payload["eps0_gauge"] = v.witness.gauge
    if v.counterexample:
        rows = _counterexample_rows(v.counterexample)
        l2H = math.log2(v.counterexample.H)
        lines.append(f"counterexample terms (H={v.counterexample.H:g}):")
        lines.append(f"  {'k':>12} {'gauge':>13} {'|x|':>13} {'H*|y|':>13}")
        for k, _, _, _, lg, lx, ly in rows:
            lines.append(f"  {k:>12.6g} {_pow2(lg):>13} {_pow2(lx):>13} {_pow2(ly + l2H) if ly != -math.inf else '0':>13}")
        payload["counterexample_terms"] = len(rows)
    _emit(lines, opts, payload)
    if opts["csv"] and rows:
        _write_csv(opts["csv"], ("k", "gauge", "abs_lhs", "H_times_abs_rhs", "log2_gauge", "log2_abs_lhs", "log2_abs_rhs"), rows)
    return _verdict_exit(v)


def cmd_laws(opts):
    if opts["trials"] < 1:
        raise UsageError("--trials must be at least 1")
    S = _index_set(opts)
    report = bigo.law_suite(seed=opts["seed"], trials=opts["trials"], S=S)
    payload = {
        "command": "laws",
        "index": S.kind,
        "seed": opts["seed"],
        "trials": opts["trials"],
        "passed": report.passed,
        "laws": {law: r.passed for law, r in report.laws.items()},
        "controls": report.controls,
    }
    _emit(report.lines(), opts, payload)
    return EXIT_OK if report.passed else EXIT_NO


def _moderate_rows(verdict):
    rows = []
    for r in verdict.rows:
        fit = verdict.per[(r.K, r.alpha)]
        slope = fit["slope"] if fit["slope"] is not None else math.nan
        rows.append((r.K[0], r.K[1], r.alpha, r.k, r.gauge, r.sup, slope))
    return rows


def cmd_genfun(opts):
    if opts["index"] == "trivial":
        raise UsageError("genfun queries take --index special, full or nsa-base")
    S = _index_set(opts)
    omega = _parse_omega(opts["omega"]) if opts["omega"] else colombeau.REAL_LINE
    query = opts["query"]
    exprs = opts["exprs"]

    if query == "moderate":
        u = parse_repnet(exprs[0], omega)
        v = colombeau.is_moderate(u, S, band=opts["tol"])
        lines = [f"moderate? {exprs[0]} on {S.kind}", f"verdict: {v}"]
        for (K, alpha), row in sorted(v.per.items()):
            slope = "n/a" if row["slope"] is None else f"{row['slope']:+.3f}"
            lines.append(f"  K={K} alpha={alpha}: N_sym={row['N_sym']} slope={slope} N_fit={row['N_fit']:.3f}")
        if v.forms:
            lines.append(f"  quantifier forms: joint={v.forms['joint']} diagonal={v.forms['diagonal']}")
        payload = {"command": "moderate", "moderate": v.moderate, "N": v.N, "indeterminate": v.indeterminate}
        _emit(lines, opts, payload)
        if opts["csv"]:
            _write_csv(opts["csv"], ("K_lo", "K_hi", "alpha", "k", "gauge", "sup", "slope"), _moderate_rows(v))
        return EXIT_OK if v.moderate else (EXIT_INDETERMINATE if v.indeterminate else EXIT_NO)

    if query == "negligible":
        u = parse_repnet(exprs[0], omega)
        v = colombeau.is_negligible(u, S, kmax=opts["kmax"])
        lines = [f"negligible? {exprs[0]} on {S.kind}", f"verdict: {v}"]
        rows = []
        if v.counterexample:
            rows = _counterexample_rows(v.counterexample)
            K, m = v.first_failure
            lines.append(f"counterexample against gauge^{m} on K={K}:")
            for k, g, ax, hy, *_ in rows:
                lines.append(f"  k={k:.6g} gauge={g:.6g} sup={ax:.6g} H*gauge^m={hy:.6g}")
        payload = {"command": "negligible", "negligible": v.negligible, "indeterminate": v.indeterminate}
        _emit(lines, opts, payload)
        if opts["csv"] and rows:
            _write_csv(opts["csv"], ("k", "gauge", "abs_lhs", "H_times_abs_rhs", "log2_gauge", "log2_abs_lhs", "log2_abs_rhs"), rows)
        return EXIT_OK if v.negligible else (EXIT_INDETERMINATE if v.indeterminate else EXIT_NO)

    if query == "equal":
        u = parse_repnet(exprs[0], omega)
        w = parse_repnet(exprs[1], omega)
        eq = colombeau.gen_equal(u, w, S)
        _emit([f"equal? {exprs[0]} == {exprs[1]} on {S.kind}", f"verdict: {eq}"], opts, {"command": "equal", "equal": eq})
        return EXIT_OK if eq else EXIT_NO

    if query == "point-eval":
        u = parse_repnet(exprs[0], omega)
        point_net = parse_net(exprs[1])
        x = colombeau.make_gen_point(lambda g: point_net.eval(g), omega, S)
        val = colombeau.eval_at(u, x, S)
        table = val.probe_table(kmin=opts["kmin"], kmax=min(opts["kmax"], 20))
        tail = table[-10:]
        ks = [-math.log2(g) for g, _ in tail]
        slope = colombeau._fit_slope(ks, [abs(v) for _, v in tail])
        lines = [f"point value of {exprs[0]} at [{exprs[1]}] on {S.kind}"]
        lines.append(f"  compact certificate K={x.K}")
        for g, value in table[-6:]:
            lines.append(f"  gauge={g:.6g} value={value:.10g}")
        if slope is None:
            lines.append("  leading behavior: identically zero on the probe")
        else:
            g_fin, v_fin = tail[-1]
            const = abs(v_fin) / g_fin**slope
            lines.append(f"  leading behavior: |value| ~ {const:.6g} * gauge^{slope:.3f}")
        lines.append(f"  zero in the quotient: {val.is_zero()}")
        payload = {"command": "point-eval", "zero": val.is_zero(), "slope": slope}
        _emit(lines, opts, payload)
        if opts["csv"]:
            _write_csv(opts["csv"], ("gauge", "value"), table)
        return EXIT_OK

    if query == "zero-test":
        u = parse_repnet(exprs[0], omega)
        v = colombeau.zero_test_by_points(u, S, kmax=opts["kmax"])
        lines = [f"zero-test {exprs[0]} on {S.kind}"]
        if v.indeterminate:
            lines.append(f"verdict: indeterminate ({v.note})")
        elif v.zero:
            lines.append("verdict: zero in the quotient")
        else:
            g = 2.0 ** -min(opts["kmax"], 16)
            lines.append("verdict: nonzero")
            lines.append(f"  witness point at gauge {g:.3g}: x={v.witness.fn(g):.6g}, value={v.value.fn(g):.6g}")
        lines.append(f"  negligibility cross-check agrees: {v.negligible_agrees}")
        payload = {"command": "zero-test", "zero": v.zero, "indeterminate": v.indeterminate}
        _emit(lines, opts, payload)
        if v.indeterminate:
            return EXIT_INDETERMINATE
        return EXIT_OK if v.zero else EXIT_NO

    raise UsageError(f"unknown genfun query {query!r}")


# ---------------------------------------------------------------------------
# argument handling


def _add_common(sp):
    sp.add_argument("--index", choices=("special", "full", "nsa-base", "trivial"), default=argparse.SUPPRESS)
    sp.add_argument("--q", type=int, default=argparse.SUPPRESS, help="full-instance moment-class order bound")
    sp.add_argument("--kmin", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--kmax", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="slope agreement band override")
    sp.add_argument("--csv", default=argparse.SUPPRESS, help="write the probe table to this path")
    sp.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sp.add_argument("--omega", default=argparse.SUPPRESS, help="host interval as LO,HI")
    sp.add_argument("--config", default=argparse.SUPPRESS, help="json file with flag defaults; flags win")


def build_parser():
    p = _Parser(prog="epsnets", description="asymptotic calculus of indexed nets")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bigo", help="decide lhs = O(rhs) as the gauge shrinks")
    b.add_argument("lhs")
    b.add_argument("rhs")
    _add_common(b)

    l = sub.add_parser("laws", help="run the randomized big-O law suite")
    l.add_argument("--trials", type=int, default=argparse.SUPPRESS)
    _add_common(l)

    g = sub.add_parser("genfun", help="generalized-function verdicts")
    g.add_argument("query", choices=("moderate", "negligible", "equal", "point-eval", "zero-test"))
    g.add_argument("exprs", nargs="+")
    _add_common(g)
    return p


def _merge_options(args):
    opts = dict(DEFAULTS)
    provided = vars(args)
    if "config" in provided:
        with open(provided["config"]) as fh:
            cfg = json.load(fh)
        unknown = set(cfg) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        opts.update(cfg)
    opts.update(provided)
    return opts


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        opts = _merge_options(args)
        if args.command == "bigo":
            return cmd_bigo(opts)
        if args.command == "laws":
            return cmd_laws(opts)
        if args.command == "genfun":
            n_expr = 2 if opts["query"] in ("equal", "point-eval") else 1
            if len(opts["exprs"]) != n_expr:
                raise UsageError(f"genfun {opts['query']} takes {n_expr} expression(s)")
            return cmd_genfun(opts)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KindMismatchError, PreconditionError, UnsupportedInstanceError, colombeau.DomainMismatchError,
            colombeau.DomainShrinkError, colombeau.RejectionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except colombeau.IndeterminateError as exc:
        print(f"indeterminate: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE


if __name__ == "__main__":
    sys.exit(main())
