"""Command-line front end: ``ltlsep <group> <command> [options]``."""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import automata, instances, measures, transforms
from .formula import FormulaSyntaxError, fragment_by_name, parse_formula, size
from .proof import (
    RuleError, dump_tree, formula_from_tree, load_tree, verify_tree,
)
from .sampling import random_instance
from .search import BudgetExceeded, SearchConfig, Unseparable, min_search
from .semantics import holds, separates
from .traces import (
    Trace, TraceFileError, format_letter, lasso_letters, load_traces, save_traces,
)

EXIT_OK, EXIT_UNSEPARABLE, EXIT_USAGE, EXIT_BUDGET, EXIT_IO = 0, 1, 2, 3, 4

FORMATS = """\
formula grammar:
  formula := disj ; disj := conj { "|" conj } ; conj := unary { "&" unary }
  unary   := ("X"|"wX"|"F"|"G"|"Y"|"wY"|"O"|"H") unary | atom
  atom    := "(" formula ")" | "(" formula "U" formula ")" | ["!"] ident
  U only appears inside explicit parentheses, e.g. "(a U b)".

trace files:
  one trace per line, letters separated by ";", propositions in a letter
  separated by ",", the empty letter written "-". Blank lines and lines
  starting with "#" are ignored. Example: pt,p1;-;qt,q1
  On the command line, pass values that start with "-" as --trace=-;p

automaton JSON:
  {"letters": [...], "states": N, "initial": i, "accepting": [...],
   "delta": [[target per letter] per state]}

exit codes:
  0 success, 1 unseparable (or a negative verdict), 2 usage error,
  3 size budget exhausted, 4 I/O or file-format error
"""

SEARCH_FRAGMENTS = ("prop", "xf", "xwxfg", "cosafety_u")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _formula(text: str):
    try:
        return parse_formula(text)
    except FormulaSyntaxError as e:
        raise CliError(f"bad formula: {e}", EXIT_USAGE) from None


def _traces(path: str):
    try:
        return load_traces(path)
    except TraceFileError as e:
        raise CliError(f"{path}: {e}", EXIT_IO) from None


def _trace(text: str) -> Trace:
    try:
        return Trace.parse(text)
    except ValueError as e:
        raise CliError(f"bad trace: {e}", EXIT_USAGE) from None


def _letters(text: str):
    try:
        return lasso_letters(text)
    except ValueError as e:
        raise CliError(f"bad letters: {e}", EXIT_USAGE) from None


def _names(text: str | None) -> list[str] | None:
    if text is None:
        return None
    return [x.strip() for x in text.split(",") if x.strip()]


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        print(text)
    else:
        Path(out).write_text(text + "\n")


def _load_dfa(path: str) -> automata.Dfa:
    try:
        return automata.load_dfa(path)
    except automata.AutomatonError as e:
        raise CliError(f"{path}: {e}", EXIT_IO) from None


def _save_dfa(d: automata.Dfa, out: str | None):
    _emit(json.dumps(automata.to_dict(d), indent=1), out)


# ---------------------------------------------------------------- sep


def cmd_sep_find(args) -> int:
    a, b = _traces(args.a), _traces(args.b)
    cfg = SearchConfig(
        fragment=fragment_by_name(args.fragment),
        budget=args.max_size,
        mode=args.mode,
        prune=not args.no_prune,
        workers=args.workers,
        ap=frozenset(_names(args.ap)) if args.ap else None,
    )
    try:
        res = min_search(a, b, cfg)
    except Unseparable as e:
        print(f"unseparable: {e}")
        return EXIT_UNSEPARABLE
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}")
        return EXIT_BUDGET
    print(f"size={res.size} formula={res.formula}")
    if args.emit_tree is not None:
        _emit(dump_tree(res.tree), args.emit_tree)
    return EXIT_OK


def cmd_sep_check(args) -> int:
    f = _formula(args.formula)
    if args.trace is not None:
        t = _trace(args.trace)
        if not 0 <= args.pos < len(t):
            raise CliError(f"position {args.pos} out of range", EXIT_USAGE)
        print("sat" if holds(t, f, args.pos) else "unsat")
        return EXIT_OK
    if args.a is None or args.b is None:
        raise CliError("give --trace, or both --a and --b", EXIT_USAGE)
    a, b = _traces(args.a), _traces(args.b)
    print("separates" if separates(f, a, b) else "does not separate")
    return EXIT_OK


def cmd_sep_verify_tree(args) -> int:
    try:
        tree = load_tree(Path(args.tree).read_text())
    except (ValueError, KeyError, TypeError, RuleError) as e:
        raise CliError(f"{args.tree}: malformed tree: {e}", EXIT_IO) from None
    fragment = fragment_by_name(args.fragment) if args.fragment else None
    v = verify_tree(tree, fragment)
    if not v:
        where = "/".join(map(str, v.path)) or "root"
        print(f"invalid at {where}: {v.reason}")
        return EXIT_UNSEPARABLE
    print(f"valid size={tree.size} formula={formula_from_tree(tree)}")
    return EXIT_OK


# ---------------------------------------------------------------- gen


def cmd_gen_phi_n(args) -> int:
    f = instances.build_phi_n_prime(args.n) if args.prime else instances.build_phi_n(args.n)
    print(f"size={size(f)} formula={f}")
    return EXIT_OK


def cmd_gen_instance(args) -> int:
    try:
        prefixes = [int(x) for x in _names(args.prefixes)]
        fam = instances.build_family(instances.FamilyParams(
            args.n, prefixes=tuple(prefixes), allow_large=args.allow_large,
        ))
    except ValueError as e:
        raise CliError(str(e), EXIT_USAGE) from None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_traces(out / "A.txt", fam.a)
    save_traces(out / "B.txt", fam.b)
    phi, phi_prime = instances.build_phi_n(args.n), instances.build_phi_n_prime(args.n)
    manifest = {
        "n": args.n,
        "alpha": instances.alpha(args.n),
        "order": [format_letter(t) for t in fam.params.resolved_order()],
        "prefixes": prefixes,
        "sizes": {"A": len(fam.a), "B": len(fam.b), "enum": len(fam.enum)},
        "formulas": {
            "phi_n": {"text": str(phi), "size": size(phi)},
            "phi_n_prime": {"text": str(phi_prime), "size": size(phi_prime)},
        },
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")
    print(f"wrote {out / 'A.txt'} {out / 'B.txt'} {out / 'manifest.json'}")
    return EXIT_OK


def cmd_gen_random(args) -> int:
    rng = random.Random(args.seed)
    a, b = random_instance(rng, _names(args.ap), args.max_a, args.max_b, args.max_len)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_traces(out / "A.txt", a)
    save_traces(out / "B.txt", b)
    print(f"wrote {out / 'A.txt'} {out / 'B.txt'}")
    return EXIT_OK


# ---------------------------------------------------------------- xform


def cmd_xform_reverse(args) -> int:
    f = _formula(args.formula)
    try:
        print(transforms.reverse_formula(f))
    except transforms.TransformError as e:
        raise CliError(str(e), EXIT_USAGE) from None
    return EXIT_OK


def cmd_xform_dnf(args) -> int:
    f = _formula(args.formula)
    try:
        reducts = transforms.conjunctive_reducts(f)
    except transforms.TransformError as e:
        raise CliError(str(e), EXIT_USAGE) from None
    print(transforms.dnf(f))
    print(f"reducts={len(reducts)}")
    return EXIT_OK


# ---------------------------------------------------------------- aut


def cmd_aut_build(args) -> int:
    try:
        d = automata.dfa_from_formula(_formula(args.formula), _names(args.ap))
    except automata.AutomatonError as e:
        raise CliError(str(e), EXIT_USAGE) from None
    _save_dfa(d, args.out)
    return EXIT_OK


def cmd_aut_trap(args) -> int:
    _save_dfa(automata.trap_close(_load_dfa(args.input)), args.out)
    return EXIT_OK


def cmd_aut_gfclose(args) -> int:
    try:
        d = automata.gf_close(_load_dfa(args.input))
    except automata.AutomatonError as e:
        raise CliError(str(e), EXIT_USAGE) from None
    _save_dfa(d, args.out)
    return EXIT_OK


def cmd_aut_chain(args) -> int:
    if args.j < 0:
        raise CliError("--j must be nonnegative", EXIT_USAGE)
    _save_dfa(automata.prefix_chain(_load_dfa(args.input), args.j), args.out)
    return EXIT_OK


def cmd_aut_lasso(args) -> int:
    d = _load_dfa(args.input)
    u, v = _letters(args.u), _letters(args.v)
    if not v:
        raise CliError("--v must be nonempty", EXIT_USAGE)
    try:
        ok = automata.lasso_accepts(d, u, v)
    except automata.AutomatonError as e:
        raise CliError(str(e), EXIT_USAGE) from None
    print("accepted" if ok else "rejected")
    return EXIT_OK


def cmd_aut_run(args) -> int:
    d = _load_dfa(args.input)
    try:
        ok = automata.dfa_accepts(d, _trace(args.trace))
    except automata.AutomatonError as e:
        raise CliError(str(e), EXIT_USAGE) from None
    print("accepted" if ok else "rejected")
    return EXIT_OK


# ---------------------------------------------------------------- measure


def _report_measure(a, b) -> None:
    mu = measures.delta1(a, b)
    bound = measures.measure_bound_v1(a, b, measures.delta1)
    print(f"mu={mu} bound_v1={bound} |A|={len(a)} |B|={len(b)}")


def cmd_measure_delta1(args) -> int:
    a, b = _traces(args.a), _traces(args.b)
    try:
        _report_measure(a, b)
    except ValueError as e:
        raise CliError(str(e), EXIT_USAGE) from None
    return EXIT_OK


def cmd_measure_parity(args) -> int:
    if args.k < 1:
        raise CliError("--k must be positive", EXIT_USAGE)
    inst = measures.parity_instance(args.k)
    _report_measure(inst.a, inst.b)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ltlsep",
        description="Minimal LTL separators for finite traces, the hard instance family, and automata tools.",
        epilog=FORMATS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    groups = p.add_subparsers(dest="group", required=True)

    def group(name: str, help_: str):
        g = groups.add_parser(name, help=help_, epilog=FORMATS,
                              formatter_class=argparse.RawDescriptionHelpFormatter)
        return g.add_subparsers(dest="command", required=True)

    def command(sub, name: str, fn, help_: str):
        c = sub.add_parser(name, help=help_, epilog=FORMATS,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        c.set_defaults(fn=fn)
        return c

    sep = group("sep", "search and check separators")
    c = command(sep, "find", cmd_sep_find, "minimal separating formula for two trace files")
    c.add_argument("--a", required=True, help="positive traces file")
    c.add_argument("--b", required=True, help="negative traces file")
    c.add_argument("--fragment", default="xwxfg", type=str.lower, choices=SEARCH_FRAGMENTS)
    c.add_argument("--max-size", type=int, default=12, help="size budget (default 12)")
    c.add_argument("--mode", choices=("sequential", "parallel"), default="sequential")
    c.add_argument("--workers", type=int, default=None)
    c.add_argument("--no-prune", action="store_true", help="disable the measure lower bound")
    c.add_argument("--ap", help="comma-separated propositions (default: those in the files)")
    c.add_argument("--emit-tree", nargs="?", const="-", default=None, metavar="PATH",
                   help="also write the deduction tree JSON (stdout when no path)")

    c = command(sep, "check", cmd_sep_check, "evaluate a formula on a trace or on two trace files")
    c.add_argument("--formula", required=True)
    c.add_argument("--trace", help="single trace in the line format")
    c.add_argument("--pos", type=int, default=0)
    c.add_argument("--a")
    c.add_argument("--b")

    c = command(sep, "verify-tree", cmd_sep_verify_tree, "check a deduction tree JSON file")
    c.add_argument("--tree", required=True)
    c.add_argument("--fragment", type=str.lower, choices=SEARCH_FRAGMENTS)

    gen = group("gen", "generate formulas and instances")
    c = command(gen, "phi-n", cmd_gen_phi_n, "print Φ_n (or its F-only equivalent with --prime)")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--prime", action="store_true")
    c = command(gen, "instance", cmd_gen_instance, "write the A/B sets of the hard family")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--prefixes", default="0", help="comma-separated padding lengths j (default 0)")
    c.add_argument("--allow-large", action="store_true", help=f"permit n > {instances.MAX_N}")
    c = command(gen, "random", cmd_gen_random, "write a random instance")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True)
    c.add_argument("--ap", default="p,q")
    c.add_argument("--max-a", type=int, default=3)
    c.add_argument("--max-b", type=int, default=3)
    c.add_argument("--max-len", type=int, default=4)

    xf = group("xform", "formula transformations")
    c = command(xf, "reverse", cmd_xform_reverse, "mirror past and future operators")
    c.add_argument("--formula", required=True)
    c = command(xf, "dnf", cmd_xform_dnf, "disjunction of conjunctive reducts (X/F fragment)")
    c.add_argument("--formula", required=True)

    aut = group("aut", "automata")
    c = command(aut, "build", cmd_aut_build, "DFA for an X/wX/F/G formula")
    c.add_argument("--formula", required=True)
    c.add_argument("--ap", help="comma-separated propositions (default: those in the formula)")
    c.add_argument("--out")
    for name, fn, help_ in (
        ("trap", cmd_aut_trap, "make accepting states traps"),
        ("gfclose", cmd_aut_gfclose, "route accepting states like the initial state"),
    ):
        c = command(aut, name, fn, help_)
        c.add_argument("--in", dest="input", required=True)
        c.add_argument("--out")
    c = command(aut, "chain", cmd_aut_chain, "prepend a chain of j states")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--j", type=int, required=True)
    c.add_argument("--out")
    c = command(aut, "lasso", cmd_aut_lasso, "Büchi acceptance of u·v^ω")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--u", default="", help="prefix letters (may be empty)")
    c.add_argument("--v", required=True, help="period letters")
    c = command(aut, "run", cmd_aut_run, "finite-word acceptance")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--trace", required=True)

    ms = group("measure", "proof measures")
    c = command(ms, "delta1", cmd_measure_delta1, "δ₁ and its v1 bound for single-letter traces")
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    c = command(ms, "parity", cmd_measure_parity, "δ₁ and its v1 bound on the parity instance")
    c.add_argument("--k", type=int, required=True)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (OSError, TraceFileError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
