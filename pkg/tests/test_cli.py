import json

import pytest

from epsnets import cli
from epsnets.cli import EXIT_DATA, EXIT_INDETERMINATE, EXIT_NO, EXIT_OK, EXIT_USAGE, main, parse_repnet
from epsnets.colombeau import embed_delta, embed_heaviside, rep_derive, rep_mul, embed_smooth
from epsnets.testfn import make_Aq


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bigo_holds(capsys):
    code, out, _ = run(capsys, "bigo", "u^2", "u")
    assert code == EXIT_OK
    assert "holds" in out


def test_bigo_fails_with_counterexample_csv(tmp_path, capsys):
    path = tmp_path / "cex.csv"
    code, out, _ = run(capsys, "bigo", "1", "u", "--index", "special", "--csv", str(path))
    assert code == EXIT_NO
    lines = path.read_text().splitlines()
    assert lines[0].startswith("k,gauge,abs_lhs,H_times_abs_rhs")
    assert len(lines) > 3


def test_bigo_log_factor_fails(capsys):
    code, out, _ = run(capsys, "bigo", "u*L", "u")
    assert code == EXIT_NO


def test_bigo_parse_error_is_usage(capsys):
    code, _, err = run(capsys, "bigo", "u^", "u")
    assert code == EXIT_USAGE
    assert "position" in err


def test_laws_all_pass(capsys):
    code, out, _ = run(capsys, "laws", "--trials", "25", "--seed", "7", "--index", "special")
    assert code == EXIT_OK
    assert "failed as expected" in out


def test_laws_zero_trials_usage_error(capsys):
    code, _, err = run(capsys, "laws", "--trials", "0")
    assert code == EXIT_USAGE


def test_genfun_moderate_delta(capsys):
    code, out, _ = run(capsys, "genfun", "moderate", "delta()")
    assert code == EXIT_OK
    assert "N_sym=1" in out


def test_genfun_equal_dH_delta(capsys):
    code, out, _ = run(capsys, "genfun", "equal", "dH()", "delta()")
    assert code == EXIT_OK


def test_genfun_zero_test_x_delta(capsys):
    code, out, _ = run(capsys, "genfun", "zero-test", "x*delta()", "--kmax", "32")
    assert code == EXIT_NO
    assert "witness" in out


def test_genfun_point_eval(capsys):
    code, out, _ = run(capsys, "genfun", "point-eval", "smooth(x^2)", "0.3 + u", "--omega", "0,1")
    assert code == EXIT_OK
    assert "0.0900" in out


def test_genfun_rejects_escaping_point(capsys):
    code, _, err = run(capsys, "genfun", "point-eval", "smooth(x)", "u^-1", "--omega", "0,1")
    assert code == EXIT_DATA


def test_genfun_rejects_trivial_index(capsys):
    code, _, err = run(capsys, "genfun", "moderate", "delta()", "--index", "trivial")
    assert code == EXIT_USAGE


def test_json_output_is_json(capsys):
    code, out, _ = run(capsys, "bigo", "u^2", "u", "--json")
    payload = json.loads(out)
    assert payload["holds"] is True


def test_reports_are_deterministic(capsys):
    _, out1, _ = run(capsys, "laws", "--trials", "20", "--seed", "3", "--index", "special")
    _, out2, _ = run(capsys, "laws", "--trials", "20", "--seed", "3", "--index", "special")
    assert out1 == out2


def test_config_file_defaults_flags_win(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"trials": 10, "seed": 3, "index": "special"}))
    _, out1, _ = run(capsys, "laws", "--config", str(cfg))
    assert "10 trials" in out1
    _, out2, _ = run(capsys, "laws", "--config", str(cfg), "--trials", "15")
    assert "15 trials" in out2


def test_config_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"nonsense": 1}))
    code, _, err = run(capsys, "laws", "--config", str(cfg))
    assert code == EXIT_USAGE


def test_moderate_csv_schema(tmp_path, capsys):
    path = tmp_path / "mod.csv"
    code, _, _ = run(capsys, "genfun", "moderate", "delta()", "--csv", str(path))
    assert code == EXIT_OK
    lines = path.read_text().splitlines()
    assert lines[0] == "K_lo,K_hi,alpha,k,gauge,sup,slope"
    assert len(lines) > 10


# ---------------------------------------------------------------------------
# the RepNet expression grammar


def test_parse_repnet_builtins_match_library():
    phi = make_Aq(0)
    assert parse_repnet("delta()") == embed_delta(phi)
    assert parse_repnet("heaviside()") == embed_heaviside(phi)
    assert parse_repnet("dH()") == rep_derive(embed_heaviside(phi))
    assert parse_repnet("scale-embed(2)") == embed_delta(make_Aq(2))


def test_parse_repnet_atom_syntax():
    net = parse_repnet("u^-1 * K[std, 0]((x - 0.5)/u)")
    (atom,) = net.atoms
    assert atom.p == -1
    (f,) = atom.factors
    assert f.shift == 0.5 and f.j == 0 and f.s == 1


def test_parse_repnet_products_and_sums():
    assert parse_repnet("x*delta()") == rep_mul(embed_smooth((0, 1)), embed_delta(make_Aq(0)))
    combined = parse_repnet("smooth(1 + 2*x^2) - delta()")
    assert len(combined.atoms) == 2


def test_parse_repnet_rejects_gauge_inside_smooth():
    with pytest.raises(cli.ParseError):
        parse_repnet("smooth(u)")


def test_parse_repnet_unknown_kernel():
    with pytest.raises(cli.ParseError):
        parse_repnet("K[mystery](x/u)")


def test_parse_repnet_bump_literal():
    from epsnets.testfn import TestFunction, format_testfn

    phi = TestFunction(0.0, 1.0, (1.0,))
    net = parse_repnet(f"K[{format_testfn(phi)}, 0](x/u)")
    (atom,) = net.atoms
    assert atom.factors[0].kernel == phi
    with pytest.raises(cli.ParseError):
        parse_repnet("K[bump(1, 2), 0](x/u)")
