"""Command-line interface.

Every command writes deterministic JSON (or CSV / plain text where offered) to
standard output.  Exit status: 0 on success, 1 on bad input, 2 when a
verification command finds a violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import automaton as am
from .arithmetic import DEFAULT_BITS, orbit, parse_vector
from .convergence import balance_report, convergence_trace, frequency_report
from .errors import ArpError
from .factors import (
    DEFAULT_FLOOR,
    DEFAULT_ROUNDS,
    build_language,
    check_bounds,
    classify_bispecial,
    complexity_profile,
)
from .genealogy import alternance_report, bispecial_records
from .sadic import DirectiveSequence, SadicWord, classify_type, directive_from_vector, word_from_labels
from .substitutions import check_word, parse_labels

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# --- input resolution ---------------------------------------------------------------


def _add_source(p: argparse.ArgumentParser, literal: bool = True) -> None:
    g = p.add_argument_group("input (exactly one of --vector, --directive, --word, --input)")
    g.add_argument("--vector", help='point of the simplex, e.g. "1,pi,sqrt(2)"')
    g.add_argument("--directive", help='labels, e.g. "p23 p23 p13 a1"')
    g.add_argument("--word", help="a literal finite word over 1,2,3")
    g.add_argument("--input", help="file holding a literal word ('-' for stdin)")
    p.add_argument("--tail", help="periodic tail repeated after --directive")
    p.add_argument("--seed", type=int, default=1, help="seed letter (default 1)")
    p.add_argument("--window", type=int, default=64, help="orbit labels taken from --vector (default 64)")
    p.add_argument("--trim", type=int, default=0, help="drop this many final orbit labels")
    p.add_argument("--bits", type=int, default=DEFAULT_BITS, help="precision cap for sign decisions")
    if literal:
        p.add_argument("--literal", action="store_true", help="treat the finite image of the directive as the whole word")


def _directive(args) -> DirectiveSequence:
    if args.vector is not None:
        x = parse_vector(args.vector, args.bits)
        d = directive_from_vector(x, args.window, args.bits)
        if args.trim:
            d = DirectiveSequence(d.window[: max(len(d.window) - args.trim, 0)])
        return d
    return DirectiveSequence.parse(args.directive, args.tail)


def _resolve(args):
    """Returns ``(source, directive)``: ``source`` is a str or a :class:`SadicWord`."""
    given = [n for n in ("vector", "directive", "word", "input") if getattr(args, n, None) is not None]
    if len(given) != 1:
        raise InputError("give exactly one of --vector, --directive, --word, --input")
    if args.word is not None:
        return check_word(args.word.strip()), None
    if args.input is not None:
        text = sys.stdin.read() if args.input == "-" else open(args.input, encoding="utf-8").read()
        return check_word("".join(text.split())), None
    d = _directive(args)
    if getattr(args, "literal", False):
        if d.tail is not None:
            raise InputError("--literal needs a finite directive")
        return word_from_labels(d.window, args.seed), d
    return SadicWord(d, args.seed), d


def _language(args, n_max: int):
    source, d = _resolve(args)
    lang = build_language(source, n_max, floor=args.floor, rounds=args.rounds)
    return lang, d


def _add_stabilization(p: argparse.ArgumentParser) -> None:
    p.add_argument("--floor", type=int, default=DEFAULT_FLOOR, help="initial prefix length factor when deepening")
    p.add_argument("--rounds", type=int, default=DEFAULT_ROUNDS, help="maximum deepening rounds")


# --- commands -------------------------------------------------------------------------


def cmd_orbit(args, out) -> int:
    x = parse_vector(args.vector, args.bits)
    o = orbit(x, args.steps, args.bits)
    if args.format == "text":
        out.write(" ".join(o.labels) + "\n")
        return EXIT_OK
    steps = [
        {"step": t + 1, "cell": str(s.cell), "matrix": s.matrix.label, "point": [f"{c:.15f}" for c in s.point.approx()]}
        for t, s in enumerate(o)
    ]
    out.write(_dump({"vector": args.vector, "steps": steps, "terminated": o.terminated}) + "\n")
    return EXIT_OK


def cmd_directive(args) -> dict:
    x = parse_vector(args.vector, args.bits)
    d = directive_from_vector(x, args.length, args.bits)
    g = am.build_G()
    return {
        "labels": list(d.window),
        "type": str(classify_type(d)),
        "accepted": am.accepts(g, d.window),
    }


def cmd_generate(args, out) -> int:
    source, _ = _resolve(args)
    if isinstance(source, str):
        word = source[: args.length]
    else:
        word = source.prefix(args.length)
    out.write(word + "\n")
    return EXIT_OK


def cmd_complexity(args, out) -> int:
    lang, _ = _language(args, args.nmax)
    prof = complexity_profile(lang, args.nmax)
    bounds = check_bounds(prof)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "p", "s", "b"])
        for n in range(prof.N + 1):
            w.writerow([n, prof.p[n], prof.s[n], prof.b[n]])
        out.write(buf.getvalue())
    else:
        payload = {"n_max": args.nmax, **prof.as_dict(), "method": lang.method, "bounds": bounds.as_dict()}
        out.write(_dump(payload) + "\n")
    if args.check_bounds and not bounds.ok:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_bispecial(args, out) -> int:
    lang, d = _language(args, args.nmax)
    if d is None:
        rows = []
        for w, t in lang.bispecials(args.nmax):
            c = classify_bispecial(t)
            rows.append({"word": w, "length": len(w), "m": c.m, "class": c.tag, "age": None, "history": None, "life_lengths": None})
    else:
        rows = [r.as_dict() for r in bispecial_records(lang, args.nmax, d)]
    out.write(_dump(rows) + "\n")
    return EXIT_OK


def cmd_genealogy_verify(args, out) -> int:
    lang, d = _language(args, args.nmax)
    if d is None:
        raise InputError("genealogy verify needs a directive or a vector")
    rep = alternance_report(lang, args.nmax, d)
    mismatches = []
    for r in rep.records:
        if len(r.word) > args.table_max or r.proper_base is False:
            continue
        pred = r.prediction()
        obs = r.observed()
        if pred != obs or not r.verified:
            mismatches.append(
                {
                    "word": r.word,
                    "history": r.history,
                    "predicted": None if pred is None else list(pred.as_tuple()),
                    "observed": list(obs.as_tuple()),
                    "problems": r.problems,
                }
            )
    skipped = [r.word for r in rep.records if r.proper_base is False]
    payload = {
        "n_max": args.nmax,
        "records": len(rep.records),
        "table_mismatches": mismatches,
        "alternance": rep.as_dict(),
        "skipped_non_proper_base": skipped,
        "ok": rep.ok and not mismatches,
    }
    out.write(_dump(payload) + "\n")
    return EXIT_OK if payload["ok"] else EXIT_VIOLATION


def cmd_automaton_check(args, out) -> int:
    g = am.build_G()
    if args.labels is None:
        nfa = am.build_markov_nfa()
        mini = am.minimized_markov()
        payload = {
            "G": {"states": len(g.states), "transitions": len(g.transitions), "deterministic": g.deterministic},
            "markov_nfa": {"states": len(nfa.states), "transitions": len(nfa.transitions)},
            "minimized": {"states": len(mini.states), "transitions": len(mini.transitions)},
            "isomorphic_to_G": am.isomorphic(mini, g),
            "equivalent_to_G": am.equivalent(mini, g),
        }
        out.write(_dump(payload) + "\n")
        ok = payload["isomorphic_to_G"] and payload["equivalent_to_G"]
        return EXIT_OK if ok else EXIT_VIOLATION
    labels = parse_labels(args.labels)
    bad = am.rejection_index(g, labels)
    payload = {"labels": labels, "accepted": bad is None, "rejected_at": bad}
    out.write(_dump(payload) + "\n")
    return EXIT_OK if bad is None else EXIT_VIOLATION


def cmd_convergence(args, out) -> int:
    x = parse_vector(args.vector, args.bits)
    trace = convergence_trace(x, args.steps, args.seed, args.bits)
    payload = {"vector": args.vector, "trace": [s.as_dict() for s in trace]}
    if args.length:
        h = SadicWord(directive_from_vector(x, max(args.steps, args.window), args.bits), args.seed)
        payload["frequency"] = frequency_report(h, args.length, x).as_dict()
        if args.balance:
            payload["balance"] = balance_report(h, args.length, args.balance).as_dict()
    out.write(_dump(payload) + "\n")
    return EXIT_OK


# --- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arpsadic", description="Arnoux-Rauzy-Poincare words and their factors")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", help="cells visited by the continued fraction map")
    p.add_argument("--vector", required=True)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--bits", type=int, default=DEFAULT_BITS)
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("directive", help="substitution labels of an orbit")
    p.add_argument("--vector", required=True)
    p.add_argument("--length", type=int, default=29)
    p.add_argument("--bits", type=int, default=DEFAULT_BITS)

    p = sub.add_parser("generate", help="prefix of the generated word")
    _add_source(p)
    p.add_argument("--length", type=int, default=100)

    p = sub.add_parser("complexity", help="factor complexity, bispecial sums and their differences")
    _add_source(p)
    _add_stabilization(p)
    p.add_argument("--nmax", type=int, default=20)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--check-bounds", action="store_true", help="exit 2 when the complexity bounds fail")

    p = sub.add_parser("bispecial", help="bispecial factors with their lives")
    _add_source(p)
    _add_stabilization(p)
    p.add_argument("--nmax", type=int, default=20)
    p.add_argument("--format", choices=("json",), default="json")

    p = sub.add_parser("genealogy", help="history and alternance checks")
    gsub = p.add_subparsers(dest="action", required=True)
    v = gsub.add_parser("verify")
    _add_source(v)
    _add_stabilization(v)
    v.add_argument("--nmax", type=int, default=60)
    v.add_argument("--table-max", type=int, default=60, help="longest factor checked against its history class")

    p = sub.add_parser("automaton", help="the directive automaton")
    asub = p.add_subparsers(dest="action", required=True)
    c = asub.add_parser("check")
    c.add_argument("labels", nargs="?", help="labels to run; omit to verify the minimization")

    p = sub.add_parser("convergence", help="cone diameters and frequency deviation along an orbit")
    p.add_argument("--vector", required=True)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--length", type=int, default=0, help="also measure letter frequencies on this prefix length")
    p.add_argument("--balance", type=int, default=0, help="also measure balance up to this factor length")
    p.add_argument("--window", type=int, default=128, help="orbit labels used to generate the measured prefix")
    p.add_argument("--bits", type=int, default=DEFAULT_BITS)
    p.add_argument("--format", choices=("json",), default="json")
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.command == "orbit":
            return cmd_orbit(args, out)
        if args.command == "directive":
            out.write(_dump(cmd_directive(args)) + "\n")
            return EXIT_OK
        if args.command == "generate":
            return cmd_generate(args, out)
        if args.command == "complexity":
            return cmd_complexity(args, out)
        if args.command == "bispecial":
            return cmd_bispecial(args, out)
        if args.command == "genealogy":
            return cmd_genealogy_verify(args, out)
        if args.command == "automaton":
            return cmd_automaton_check(args, out)
        if args.command == "convergence":
            return cmd_convergence(args, out)
    except (InputError, ArpError, ValueError, OSError) as exc:
        err.write(f"arpsadic: error: {exc}\n")
        return EXIT_INPUT
    parser.error(f"unknown command {args.command}")
    return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
