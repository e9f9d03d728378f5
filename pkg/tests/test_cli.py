import json

import pytest

from ltlsep.automata import load_dfa
from ltlsep.proof import load_tree, verify_tree
from ltlsep.cli import EXIT_BUDGET, EXIT_IO, EXIT_OK, EXIT_UNSEPARABLE, EXIT_USAGE, main
from ltlsep.traces import load_traces


@pytest.fixture
def worked(tmp_path):
    (tmp_path / "A.txt").write_text("p;-;p;p\np;p;p;p\n")
    (tmp_path / "B.txt").write_text("# the negative side\np;p;p;-\n")
    return tmp_path


def run(capsys, *argv):
    code = main([str(x) for x in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_find_worked_example(worked, capsys):
    code, out, _ = run(capsys, "sep", "find", "--a", worked / "A.txt", "--b", worked / "B.txt")
    assert code == EXIT_OK
    assert out == "size=3 formula=F G p\n"
    # repeat runs are byte-identical
    assert run(capsys, "sep", "find", "--a", worked / "A.txt", "--b", worked / "B.txt")[1] == out


def test_find_parallel_and_unpruned(worked, capsys):
    for extra in (["--mode", "parallel", "--workers", "2"], ["--no-prune"], ["--fragment", "XF"]):
        code, out, _ = run(capsys, "sep", "find", "--a", worked / "A.txt", "--b", worked / "B.txt", *extra)
        assert code == EXIT_OK and out.startswith("size=")


def test_find_exit_codes(worked, capsys):
    a, b = worked / "A.txt", worked / "B.txt"
    code, out, _ = run(capsys, "sep", "find", "--a", a, "--b", b, "--fragment", "prop")
    assert code == EXIT_UNSEPARABLE and out.startswith("unseparable:")
    code, out, _ = run(capsys, "sep", "find", "--a", a, "--b", b, "--max-size", "2")
    assert code == EXIT_BUDGET and out == "budget exceeded: no deduction tree of size <= 2\n"
    code, _, err = run(capsys, "sep", "find", "--a", worked / "missing.txt", "--b", b)
    assert code == EXIT_IO and err.startswith("error:")
    (worked / "bad.txt").write_text("p;;q\n")
    assert run(capsys, "sep", "find", "--a", worked / "bad.txt", "--b", b)[0] == EXIT_IO
    with pytest.raises(SystemExit) as e:
        main(["sep", "find", "--a", str(a)])
    assert e.value.code == EXIT_USAGE


def test_emit_and_verify_tree(worked, capsys):
    tree = worked / "t.json"
    run(capsys, "sep", "find", "--a", worked / "A.txt", "--b", worked / "B.txt", "--emit-tree", tree)
    code, out, _ = run(capsys, "sep", "verify-tree", "--tree", tree)
    assert (code, out) == (EXIT_OK, "valid size=3 formula=F G p\n")
    code, out, _ = run(capsys, "sep", "verify-tree", "--tree", tree, "--fragment", "xf")
    assert (code, out) == (EXIT_UNSEPARABLE, "invalid at 0: operator G not allowed in fragment XF\n")
    (worked / "junk.json").write_text("[1, 2]")
    assert run(capsys, "sep", "verify-tree", "--tree", worked / "junk.json")[0] == EXIT_IO


def test_emit_tree_to_stdout(worked, capsys):
    code, out, _ = run(capsys, "sep", "find", "--a", worked / "A.txt", "--b", worked / "B.txt", "--emit-tree")
    first, rest = out.split("\n", 1)
    assert first == "size=3 formula=F G p"
    tree = load_tree(rest)
    assert verify_tree(tree) and tree.size == 3


def test_check(worked, capsys):
    assert run(capsys, "sep", "check", "--formula", "X !p | G p", "--a", worked / "A.txt", "--b", worked / "B.txt")[1] == "separates\n"
    assert run(capsys, "sep", "check", "--formula", "G p", "--a", worked / "A.txt", "--b", worked / "B.txt")[1] == "does not separate\n"
    assert run(capsys, "sep", "check", "--formula", "X p", "--trace", "p;p")[1] == "sat\n"
    assert run(capsys, "sep", "check", "--formula", "p", "--trace=-;p", "--pos", "1")[1] == "sat\n"
    assert run(capsys, "sep", "check", "--formula", "p", "--trace", "p", "--pos", "3")[0] == EXIT_USAGE
    code, _, err = run(capsys, "sep", "check", "--formula", "p &", "--trace", "p")
    assert code == EXIT_USAGE and "bad formula" in err
    assert run(capsys, "sep", "check", "--formula", "p")[0] == EXIT_USAGE


def test_gen_phi(capsys):
    code, out, _ = run(capsys, "gen", "phi-n", "--n", 1)
    assert code == EXIT_OK and out.startswith("size=16 formula=F (qt & ")
    assert run(capsys, "gen", "phi-n", "--n", 2, "--prime")[1].startswith("size=95 ")


def test_gen_instance(tmp_path, capsys):
    out = tmp_path / "inst"
    code, _, _ = run(capsys, "gen", "instance", "--n", 1, "--out", out, "--prefixes", "0,2")
    assert code == EXIT_OK
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["alpha"] == 36 and manifest["prefixes"] == [0, 2]
    assert manifest["formulas"]["phi_n_prime"]["size"] == 19
    assert len(load_traces(out / "A.txt")) == manifest["sizes"]["A"] == 4
    code, out_text, _ = run(capsys, "sep", "check", "--formula", manifest["formulas"]["phi_n"]["text"],
                            "--a", out / "A.txt", "--b", out / "B.txt")
    assert out_text == "separates\n"
    assert run(capsys, "gen", "instance", "--n", 9, "--out", out)[0] == EXIT_USAGE
    assert run(capsys, "gen", "instance", "--n", 1, "--out", out, "--prefixes", "x")[0] == EXIT_USAGE


def test_gen_random_is_seeded(tmp_path, capsys):
    run(capsys, "gen", "random", "--seed", 3, "--out", tmp_path / "r1")
    run(capsys, "gen", "random", "--seed", 3, "--out", tmp_path / "r2")
    assert (tmp_path / "r1" / "A.txt").read_bytes() == (tmp_path / "r2" / "A.txt").read_bytes()
    assert (tmp_path / "r1" / "B.txt").read_bytes() == (tmp_path / "r2" / "B.txt").read_bytes()


def test_xform(capsys):
    assert run(capsys, "xform", "reverse", "--formula", "O (p & Y q)")[1] == "F (p & X q)\n"
    assert run(capsys, "xform", "dnf", "--formula", "X (p | q)")[1] == "X p | X q\nreducts=2\n"
    assert run(capsys, "xform", "reverse", "--formula", "(p U q)")[0] == EXIT_USAGE
    assert run(capsys, "xform", "dnf", "--formula", "G p")[0] == EXIT_USAGE


def test_aut_pipeline(tmp_path, capsys):
    d = tmp_path / "d.json"
    assert run(capsys, "aut", "build", "--formula", "F p", "--out", d)[0] == EXIT_OK
    assert load_dfa(d).states == 2
    code, out, _ = run(capsys, "aut", "build", "--formula", "F p")
    assert json.loads(out)["accepting"] == [1]
    t = tmp_path / "t.json"
    run(capsys, "aut", "trap", "--in", d, "--out", t)
    g = tmp_path / "g.json"
    run(capsys, "aut", "gfclose", "--in", t, "--out", g)
    assert load_dfa(g).states == 2
    assert run(capsys, "aut", "lasso", "--in", g, "--u=-", "--v=-;p")[1] == "accepted\n"
    assert run(capsys, "aut", "lasso", "--in", g, "--u", "p", "--v=-")[1] == "rejected\n"
    c = tmp_path / "c.json"
    run(capsys, "aut", "chain", "--in", d, "--j", 2, "--out", c)
    assert load_dfa(c).states == 4
    assert run(capsys, "aut", "run", "--in", c, "--trace", "p;p")[1] == "rejected\n"
    assert run(capsys, "aut", "run", "--in", c, "--trace=-;-;p")[1] == "accepted\n"


def test_aut_errors(tmp_path, capsys):
    assert run(capsys, "aut", "build", "--formula", "(p U q)")[0] == EXIT_USAGE
    d = tmp_path / "d.json"
    run(capsys, "aut", "build", "--formula", "wX p", "--out", d)
    assert run(capsys, "aut", "gfclose", "--in", d)[0] == EXIT_USAGE
    assert run(capsys, "aut", "chain", "--in", d, "--j", -1)[0] == EXIT_USAGE
    assert run(capsys, "aut", "run", "--in", d, "--trace", "q")[0] == EXIT_USAGE
    (tmp_path / "bad.json").write_text("{}")
    assert run(capsys, "aut", "trap", "--in", tmp_path / "bad.json")[0] == EXIT_IO
    assert run(capsys, "aut", "trap", "--in", tmp_path / "none.json")[0] == EXIT_IO


def test_measure(tmp_path, capsys):
    assert run(capsys, "measure", "parity", "--k", 3)[1] == "mu=12 bound_v1=9 |A|=4 |B|=4\n"
    (tmp_path / "A.txt").write_text("p\n")
    (tmp_path / "B.txt").write_text("-\n")
    assert run(capsys, "measure", "delta1", "--a", tmp_path / "A.txt", "--b", tmp_path / "B.txt")[1] == "mu=1 bound_v1=1 |A|=1 |B|=1\n"
    (tmp_path / "L.txt").write_text("p;p\n")
    assert run(capsys, "measure", "delta1", "--a", tmp_path / "L.txt", "--b", tmp_path / "B.txt")[0] == EXIT_USAGE
    assert run(capsys, "measure", "parity", "--k", 0)[0] == EXIT_USAGE


def test_help_lists_formats(capsys):
    with pytest.raises(SystemExit) as e:
        main(["sep", "find", "--help"])
    assert e.value.code == 0
    out = capsys.readouterr().out
    assert "formula grammar" in out and "exit codes" in out
