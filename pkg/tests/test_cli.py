"""Command-line driver: formats, workflows, exit codes."""

from fractions import Fraction

import pytest

from ringload import GuaranteeViolated, skutella8, tight3
from ringload.cli import load_input, main, parse_input_text


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_round_trips_through_the_parser(tmp_path, capsys):
    path = tmp_path / "probe.txt"
    code, out, err = run(capsys, "gen", "skutella8", "--eps", "1/2", "--out", str(path))
    assert code == 0 and err == ""
    data = load_input(str(path))
    assert data.kind == "split"
    assert data.routing == skutella8(Fraction(1, 2))


def test_round_brute_reports_the_enumerated_optimum(tmp_path, capsys):
    path = tmp_path / "probe.txt"
    run(capsys, "gen", "skutella8", "--out", str(path))
    code, out, err = run(capsys, "round", str(path), "--method", "brute")
    assert code == 0
    assert "realized load increase: 11 (≈ 11)" in out
    assert "method: brute-force" in out
    assert "max edge load: 35" in out


def test_round_main_report_structure(tmp_path, capsys):
    path = tmp_path / "t6.txt"
    run(capsys, "gen", "tight6", "--out", str(path))
    code, out, err = run(capsys, "round", str(path))
    assert code == 0
    assert "demands: 6, largest value D = 2" in out
    assert out.count("demand ") == 6
    assert "certified bound:" in out


def test_round_ssw_method(tmp_path, capsys):
    path = tmp_path / "t3.txt"
    run(capsys, "gen", "tight3", "--out", str(path))
    code, out, _ = run(capsys, "round", str(path), "--method", "ssw")
    assert code == 0
    assert "method: ssw" in out


def test_round_reduces_ring_input(tmp_path, capsys):
    path = tmp_path / "ring.txt"
    path.write_text(
        "# two crossing split demands, one frozen\n"
        "ring 8\n"
        "demand 1 5 2 1\n"
        "demand 2 6 2 1\n"
        "demand 3 4 1 0\n"
    )
    code, out, _ = run(capsys, "round", str(path))
    assert code == 0
    assert "reduced to 2 crossing demands" in out
    assert "routing on the original ring:" in out
    assert "demand 3 (3 -> 4, value 1): counter-clockwise" in out


def test_round_single_split_demand(tmp_path, capsys):
    path = tmp_path / "one.txt"
    path.write_text("ring 6\ndemand 2 5 4 3\ndemand 1 3 1 1\n")
    code, out, _ = run(capsys, "round", str(path))
    assert code == 0
    assert "one split demand after reduction" in out
    assert "demand 1 (2 -> 5, value 4): clockwise" in out


def test_round_trivial_ring(tmp_path, capsys):
    path = tmp_path / "flat.txt"
    path.write_text("ring 5\ndemand 1 3 2 2\ndemand 2 4 3 0\n")
    code, out, _ = run(capsys, "round", str(path))
    assert code == 0
    assert "nothing left to round" in out


def test_verify_reports(tmp_path, capsys):
    path = tmp_path / "s.txt"
    run(capsys, "gen", "seven18", "--out", str(path))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0
    assert "split routing with 7 crossing demands on a 14-node ring" in out
    assert "largest demand D = 18" in out

    ring = tmp_path / "r.txt"
    ring.write_text("ring 4\ndemand 1 3 1\ndemand 2 4 1\n")
    code, out, _ = run(capsys, "verify", str(ring))
    assert code == 0
    assert "ring with 4 nodes and 2 demands" in out
    assert "split demands: 2, one-sided: 0" in out


def test_boost_output_equalizes(tmp_path, capsys):
    src = tmp_path / "t3.txt"
    out_path = tmp_path / "boosted.txt"
    run(capsys, "gen", "tight3", "--out", str(src))
    code, out, _ = run(capsys, "boost", str(src), "--check", "--out", str(out_path))
    assert code == 0
    assert "gap: 4 (≈ 4) (certified >= source performance)" in out
    boosted = load_input(str(out_path))
    assert boosted.kind == "ring"
    loads = boosted.general.loads()
    assert set(loads) == {Fraction(8)}


def test_export_milp(tmp_path, capsys):
    out_path = tmp_path / "m2.lp"
    code, out, _ = run(capsys, "export-milp", "2", str(out_path))
    assert code == 0
    assert "14 binary" in out
    from ringload import parse_lp

    model = parse_lp(out_path.read_text())
    assert model.m == 2 and model.reduce_vars and model.symmetry_break


def test_search_is_deterministic(tmp_path, capsys):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    code, out, _ = run(capsys, "search", "1", "--seed", "pin", "--budget", "2", "--out", str(a))
    assert code == 0
    assert "best minimum performance over D: 1/2" in out
    run(capsys, "search", "1", "--seed", "pin", "--budget", "2", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_comments_and_blanks_are_ignored():
    data = parse_input_text("# header\n\nsplit 2 # demand count\npair 1 2\n\npair 3 4 # tail\n")
    assert data.routing.u == (1, 3) and data.routing.v == (2, 4)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "circle 4\n",
        "split 2\npair 1 2\n",
        "split 1\npair 1.5 2\n",
        "split 1\npair 1 -2\n",
        "split x\npair 1 2\n",
        "ring 4\ndemand 1 9 2\n",
        "ring 4\ndemand 1 3 2 5\n",
        "ring 4\nedge 1 3 2\n",
    ],
)
def test_parse_rejects(tmp_path, capsys, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    code, out, err = run(capsys, "verify", str(path))
    assert code == 2
    assert err.startswith("error:")


def test_missing_file_and_unknown_name(tmp_path, capsys):
    code, _, err = run(capsys, "round", str(tmp_path / "absent.txt"))
    assert code == 2 and "cannot read" in err
    code, _, err = run(capsys, "gen", "nonesuch")
    assert code == 2 and "unknown instance" in err
    code, _, err = run(capsys, "gen", "tight_even")
    assert code == 2 and "--m" in err


def test_method_domain_error_exits_2(tmp_path, capsys):
    path = tmp_path / "s.txt"
    run(capsys, "gen", "seven18", "--out", str(path))
    code, _, err = run(capsys, "round", str(path), "--method", "upper")
    assert code == 2
    assert "use round_medium" in err


def test_guarantee_failure_exits_3(tmp_path, capsys, monkeypatch):
    path = tmp_path / "t3.txt"
    run(capsys, "gen", "tight3", "--out", str(path))

    def explode(r):
        raise GuaranteeViolated("forced for the exit-code contract")

    monkeypatch.setattr("ringload.cli.round_main", explode)
    code, _, err = run(capsys, "round", str(path))
    assert code == 3
    assert "guarantee violated: forced" in err
    assert "broken certified invariant" in err


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["round"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["gen", "skutella8", "--eps", "0.5"])
    assert info.value.code == 2
    capsys.readouterr()
