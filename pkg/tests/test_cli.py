import subprocess
import sys

import pytest

from rwb.cli import EXIT_INPUT, EXIT_NO, EXIT_OK, EXIT_UNKNOWN, main
from rwb.sexpr import read_all

ASM = """
(assembly A (elems a b) (real (a 0) (b 1)))
(assembly B (elems x y z) (real (x 0) (y 1) (z 0)))
(assembly F (elems u) (real (u full)))
(morphism f B A (map (x a) (y b) (z a)) (tracker (app (app S K) K)))
(morphism g A A (map (a a) (b b)) (tracker (app (app S K) K)))
(morphism k A A (map (a a) (b b)) (tracker K))
(morphism h B A (map (x a) (y a) (z a)) (tracker (app K (num 0))))
"""

FRAG = "(fragment v (s (vtree (0 (vtree)))) (p (vtree (0 (vtree)) (1 (vtree (0 (vtree)))))))"


@pytest.fixture
def files(tmp_path):
    asm = tmp_path / "ex.asm"
    asm.write_text(ASM)
    frag = tmp_path / "std.frag"
    frag.write_text(FRAG)
    return str(asm), str(frag)


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


# reduce


def test_reduce_value(capsys):
    code, out, _ = run(capsys, "reduce", "(app (app K (num 5)) (num 7))")
    assert code == EXIT_OK
    assert out.strip() == "value (num 5), steps=2"


def test_reduce_undefined(capsys):
    code, out, _ = run(capsys, "reduce", "(app p0 (num 7))")
    assert code == EXIT_NO
    assert out.startswith("undefined")


def test_reduce_timeout(capsys):
    code, out, _ = run(capsys, "reduce", "--budget", "10", "(app (fix (app S K)) (num 0))")
    assert code == EXIT_UNKNOWN
    assert out.strip() == "timeout, steps=10"


def test_reduce_parse_error_has_position(capsys):
    code, _, err = run(capsys, "reduce", "(app (num 1)")
    assert code == EXIT_INPUT
    assert "position" in err


def test_reduce_from_file(capsys, tmp_path):
    p = tmp_path / "t.term"
    p.write_text("(app succ (num 4))")
    code, out, _ = run(capsys, "reduce", "-f", str(p))
    assert code == EXIT_OK and out.startswith("value (num 5)")


def test_reduce_records(capsys):
    code, out, _ = run(capsys, "reduce", "--format", "records", "(app succ (num 1))")
    (rec,) = read_all(out)
    assert str(rec[0]) == "reduce"
    assert {str(f[0]): str(f[1]) for f in rec[1:]}["term"] == "(num 2)"


def test_budget_from_environment():
    import os

    env = dict(os.environ, RWB_BUDGET="3")
    out = subprocess.run(
        [sys.executable, "-m", "rwb.cli", "reduce", "--format", "records", "(num 1)"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert out.returncode == 0
    assert "(budget 3)" in out.stdout


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["reduce", "--budget", "0", "(num 1)"],
        ["reduce", "--budget", "x", "(num 1)"],
        ["reduce", "--format", "json", "(num 1)"],
        ["check", "force", "--term", "(num 0)"],
        ["nope"],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == EXIT_INPUT


@pytest.mark.parametrize(
    "argv",
    [["--help"], ["reduce", "--help"], ["check", "square", "--help"], ["frag", "gen", "--help"], ["suite", "--help"]]
    + [["asm", op, "--help"] for op in ("pullback", "image", "forall", "exp", "wtype", "power", "partition")],
)
def test_help_pages(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 0
    assert "usage: rwb" in capsys.readouterr().out


def test_library_names_in_terms(capsys):
    code, out, _ = run(capsys, "check", "force", "--term", "refl", "--formula", "(forall x (eq x x))", "--frag-depth", "2")
    assert code == EXIT_OK and out.startswith("verdict=realized")
    code, _, err = run(capsys, "reduce", "(app nope (num 1))")
    assert code == EXIT_INPUT and "nope" in err


def test_reduce_without_term(capsys):
    code, _, err = run(capsys, "reduce")
    assert code == EXIT_INPUT and "term" in err


# check


def test_check_track(capsys, files):
    asm, _ = files
    code, out, _ = run(capsys, "check", "track", asm, "--morphism", "g")
    assert code == EXIT_OK and out.startswith("track: verified")
    code, out, _ = run(capsys, "check", "track", asm, "--morphism", "k")
    assert code == EXIT_NO and "counterexample" in out


def test_check_track_unknown_morphism(capsys, files):
    asm, _ = files
    code, _, err = run(capsys, "check", "track", asm, "--morphism", "zz")
    assert code == EXIT_INPUT and "zz" in err


def test_check_track_needs_name_when_ambiguous(capsys, files):
    asm, _ = files
    code, _, err = run(capsys, "check", "track", asm)
    assert code == EXIT_INPUT


def test_check_cover(capsys, files):
    asm, _ = files
    code, out, _ = run(capsys, "check", "cover", asm, "--morphism", "f", "--witness", "(app (app S K) K)")
    assert code == EXIT_OK
    # h misses b, so its fibre over b is empty
    code, out, _ = run(capsys, "check", "cover", asm, "--morphism", "h", "--witness", "(app (app S K) K)")
    assert code == EXIT_NO and "empty fibre" in out


def test_check_square(capsys, files):
    asm, _ = files
    code, out, _ = run(capsys, "check", "square", asm, "--partitioned", "f")
    assert code == EXIT_OK and out.startswith("square: verified")
    code, _, err = run(capsys, "check", "square", asm, "--top", "g")
    assert code == EXIT_INPUT


def test_check_square_explicit(capsys, files):
    asm, _ = files
    # identity square on A: the pullback has realizers ⟨n, n⟩, covered back by p0
    sides = ["--top", "g", "--left", "g", "--right", "g", "--bottom", "g"]
    code, out, _ = run(capsys, "check", "square", asm, *sides, "--witnesses", "p0", "(app (app S K) K)")
    assert code == EXIT_OK, out
    code, out, _ = run(capsys, "check", "square", asm, *sides, "--witnesses", "p1", "(num 0)")
    assert code == EXIT_NO


def test_check_force(capsys, files):
    _, frag = files
    code, out, _ = run(capsys, "check", "force", "--model", "v", "--frag", frag, "--term", "(num 0)",
                       "--formula", "(eq #empty #empty)")
    assert code == EXIT_OK
    assert "verdict=realized" in out and "frag=std.frag" in out and "pool=" in out
    code, out, _ = run(capsys, "check", "force", "--frag", frag, "--term", "(num 3)", "--formula", "(in #empty #empty)")
    assert code == EXIT_NO and "verdict=refuted" in out


def test_check_force_generated_fragment(capsys):
    code, out, _ = run(capsys, "check", "force", "--frag-depth", "1", "--model", "u", "--term", "(pair (num 0) (num 0))",
                       "--formula", "(in #empty #sempty)")
    assert code == EXIT_OK and "frag=depth1 model=u" in out


def test_check_force_pool_relative(capsys, files):
    _, frag = files
    code, out, _ = run(capsys, "check", "force", "--frag", frag, "--pool-size", "1", "--term", "(num 0)",
                       "--formula", "(not (in #empty #empty))")
    assert code == EXIT_OK and "pool=size<=1" in out


def test_check_force_input_errors(capsys, files):
    _, frag = files
    assert run(capsys, "check", "force", "--frag", frag, "--term", "(num 0)", "--formula", "(eq #nope #empty)")[0] == EXIT_INPUT
    assert run(capsys, "check", "force", "--frag", frag, "--term", "(num 0)", "--formula", "(eq x #empty)")[0] == EXIT_INPUT
    assert run(capsys, "check", "force", "--frag", frag, "--term", "(num", "--formula", "false")[0] == EXIT_INPUT
    assert run(capsys, "check", "force", "--frag", frag, "--model", "u", "--term", "(num 0)", "--formula", "false")[0] == EXIT_INPUT
    assert run(capsys, "check", "force", "--frag", "/no/such.frag", "--term", "(num 0)", "--formula", "false")[0] == EXIT_INPUT


def test_check_malformed_asm(capsys, tmp_path):
    p = tmp_path / "bad.asm"
    p.write_text("(assembly A (elems a) (real (a)))")
    code, _, err = run(capsys, "check", "track", str(p))
    assert code == EXIT_INPUT and "position" in err


# search, frag


def test_search(capsys, files):
    _, frag = files
    code, out, _ = run(capsys, "search", "--frag", frag, "--pool-size", "5", "--formula", "(in #empty #s)")
    assert code == EXIT_OK and "verdict=realized" in out and "witness=" in out
    code, out, _ = run(capsys, "search", "--frag", frag, "--pool-size", "1", "--formula", "(in #s #empty)")
    assert code == EXIT_UNKNOWN and "verdict=not-found" in out and "pool=size<=1" in out


def test_search_reports_smallest_pool(capsys, files):
    _, frag = files
    code, out, _ = run(capsys, "search", "--frag", frag, "--pool-size", "5", "--formula", "(eq #empty #empty)")
    assert code == EXIT_OK and "pool=size<=1+" in out and "index=0" in out


def test_frag_gen(capsys):
    code, out, _ = run(capsys, "frag", "gen", "--frag-depth", "2", "--frag-width", "2")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "fragment model=v frag=depth2 size=91"
    code, out, _ = run(capsys, "frag", "gen", "--model", "u", "--frag-depth", "1", "--frag-width", "2", "--format", "records")
    from rwb.universe import parse_fragment

    frag = parse_fragment(out)
    assert frag.kind == "u" and len(frag) == 4


# asm


def test_asm_pullback(capsys, files):
    asm, _ = files
    code, out, _ = run(capsys, "asm", "pullback", asm, "f", "g")
    assert code == EXIT_OK
    assert "assembly pullback: 3 elements" in out
    assert "first: verified" in out and "second: verified" in out


def test_asm_pullback_needs_common_target(capsys, tmp_path):
    p = tmp_path / "x.asm"
    p.write_text(ASM + "(morphism q A B (map (a x) (b y)) (tracker (app (app S K) K)))")
    code, _, err = run(capsys, "asm", "pullback", str(p), "f", "q")
    assert code == EXIT_INPUT


def test_asm_image(capsys, files):
    asm, _ = files
    code, out, _ = run(capsys, "asm", "image", asm, "h")
    assert code == EXIT_OK
    assert "assembly image: 1 elements" in out and "cover-witness: verified" in out


def test_asm_forall(capsys, files):
    asm, _ = files
    code, out, _ = run(capsys, "asm", "forall", asm, "B", "f")
    assert code == EXIT_OK and "classical carrier: a b" in out
    code, _, _ = run(capsys, "asm", "forall", asm, "F", "f")
    assert code == EXIT_INPUT


def test_asm_exp(capsys, files):
    asm, _ = files
    code, out, _ = run(capsys, "asm", "exp", asm, "f", "g")
    assert code == EXIT_OK
    assert "evaluation: verified" in out and "missing=0" in out


def test_asm_wtype(capsys, files):
    asm, _ = files
    code, out, _ = run(capsys, "asm", "wtype", asm, "f", "--depth", "2")
    assert code == EXIT_OK
    # no fibre of f is empty, so there are no well-founded trees
    assert "assembly wtype-depth2: 0 elements" in out


def test_asm_wtype_requires_finite_realizers(capsys, tmp_path):
    p = tmp_path / "w.asm"
    p.write_text("(assembly A (elems a) (real (a 0))) (assembly F (elems u) (real (u full)))"
                 "(morphism d F A (map (u a)) (tracker (app K (num 0))))")
    code, _, err = run(capsys, "asm", "wtype", str(p), "d")
    assert code == EXIT_INPUT and "finite" in err


def test_asm_power(capsys, files):
    asm, _ = files
    code, out, _ = run(capsys, "asm", "power", asm, "A", "--realizers", "0")
    assert "assembly power" in out and "assembly membership" in out
    assert code in (EXIT_OK, EXIT_UNKNOWN)
    code, _, err = run(capsys, "asm", "power", asm, "B", "--realizers", "0", "1", "2", "3", "4")
    assert code == EXIT_INPUT


def test_asm_partition(capsys, files):
    asm, _ = files
    code, out, _ = run(capsys, "asm", "partition", asm, "B")
    assert code == EXIT_OK and "assembly partitioned: 3 elements" in out
    code, _, err = run(capsys, "asm", "partition", asm, "F")
    assert code == EXIT_INPUT


# suite


def test_suite_bundled(capsys):
    code, out, _ = run(capsys, "suite", "axioms-v")
    assert code == EXIT_OK
    assert out.strip().endswith("= 5/0/0")
    assert "pool=size<=5" in out and "frag=depth1" in out


def test_suite_mismatch(capsys, tmp_path):
    p = tmp_path / "m.suite"
    p.write_text('(suite m (fragment (generate 1 1)) (pool 1) (case c (formula "(eq #empty #empty)") (expect refuted)))')
    code, out, _ = run(capsys, "suite", str(p))
    assert code != EXIT_OK and "MISMATCH" in out and out.strip().endswith("= 0/1/0")


def test_suite_empty(capsys, tmp_path):
    p = tmp_path / "e.suite"
    p.write_text("")
    code, out, _ = run(capsys, "suite", str(p))
    assert code == EXIT_OK and out.strip().endswith("0/0/0")


def test_suite_errors(capsys, tmp_path):
    p = tmp_path / "bad.suite"
    p.write_text("(suite m (case c))")
    assert run(capsys, "suite", str(p))[0] == EXIT_INPUT
    assert run(capsys, "suite", "no-such-suite")[0] == EXIT_INPUT


def test_suite_budget_override(capsys, tmp_path):
    p = tmp_path / "m.suite"
    p.write_text('(suite m (fragment (generate 1 1)) (pool 1) (budget 50) (case c (formula "(eq #empty #empty)")))')
    _, out, _ = run(capsys, "suite", str(p))
    assert "budget=50" in out
    _, out, _ = run(capsys, "suite", str(p), "--budget", "60")
    assert "budget=60" in out


# records


@pytest.mark.parametrize(
    "argv",
    [
        ["search", "--frag-depth", "1", "--pool-size", "3", "--formula", "(in #empty #sempty)"],
        ["check", "force", "--frag-depth", "1", "--term", "(num 0)", "--formula", "(eq #sempty #sempty)"],
        ["suite", "principles-v", "--pool-size", "1"],
    ],
)
def test_records_deterministic_and_reparse(capsys, argv):
    first = run(capsys, *argv, "--format", "records")[1]
    second = run(capsys, *argv, "--format", "records", "--seed", "0")[1]
    assert first == second
    for form in read_all(first):
        assert form and all(len(f) == 2 for f in form[1:])


def test_records_carry_rerun_fields(capsys):
    _, out, _ = run(capsys, "search", "--frag-depth", "1", "--pool-size", "3", "--formula", "(in #empty #sempty)",
                    "--format", "records")
    (rec,) = read_all(out)
    keys = {str(f[0]) for f in rec[1:]}
    assert {"verdict", "formula", "pool", "frag", "model", "budget", "seed", "witness"} <= keys


def test_console_script_entry():
    out = subprocess.run(
        [sys.executable, "-m", "rwb.cli", "reduce", "(app (app K (num 5)) (num 7))"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0 and out.stdout.strip() == "value (num 5), steps=2"
