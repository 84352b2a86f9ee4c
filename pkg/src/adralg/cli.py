"""Command-line front end: ``adralg <command> ...``.

Exit codes: 0 success, 1 a check failed, 2 an internal invariant was
violated, 64 usage error, 65 malformed or inadmissible input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional

from . import adrcore as ac
from . import endoalg as ea
from . import exactlin as el
from . import fuzz
from . import qhcheck as qh
from .errors import (AdralgError, CapExceeded, EmptyInput, EquivalenceViolation, NonParallelRelation,
                     NonTerminatingLayer, NotAdmissibleWithinCap, NotLocal, ParseError, RelationTooShort,
                     SearchBoundExceeded, LoewyLengthOne)
from .presentation import DEFAULT_CAP, parse_presentation
from .repcat import parse_module_file

EXIT_OK, EXIT_FAIL, EXIT_INVARIANT, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 64, 65

_INPUT_ERRORS = (ParseError, NotAdmissibleWithinCap, NonParallelRelation, RelationTooShort, NotLocal,
                 EmptyInput, LoewyLengthOne)
_INVARIANT_ERRORS = (CapExceeded, EquivalenceViolation, NonTerminatingLayer)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- input helpers --------------------------------------------------------------


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", 0, 0, path) from None


def _load_algebra(args):
    return parse_presentation(_read(args.alg), p=args.prime, cap=args.cap, source=args.alg)


def _load_adr(args):
    pres = _load_algebra(args)
    if getattr(args, "mod", None):
        mods = parse_module_file(_read(args.mod), pres, source=args.mod).modules()
        return pres, ac.build_adr(pres, mods)
    return pres, ac.adr_of_algebra(pres)


def _emit(args, data: Dict, text: str) -> None:
    if args.json:
        data = {"schema": 1, "command": args.command, **data}
        print(json.dumps(data, indent=2, sort_keys=False))
    else:
        print(text)


# -- commands -------------------------------------------------------------------


def cmd_basis(args) -> int:
    pres = _load_algebra(args)
    q = pres.quiver
    basis = [q.path_str(b) for b in pres.basis]
    m = pres.loewy_length()
    text = f"dim A = {pres.dim}, m = {m}\nbasis: " + ", ".join(basis)
    _emit(args, {"dim": pres.dim, "loewy_length": m, "basis": basis}, text)
    return EXIT_OK


def _strat_data(adr, strat) -> Dict:
    return {"catalog": adr.labels, "loewy_lengths": adr.lengths,
            "layers": strat.as_labels(adr), "n": {str(i): v for i, v in strat.n.items()}, "n_M": strat.n_M}


def cmd_stratify(args) -> int:
    _, adr = _load_adr(args)
    strat = ac.stratify(adr)
    lines = [f"F = {{{', '.join(adr.labels)}}}"]
    for key, labels in strat.as_labels(adr).items():
        lines.append(f"  {key} = {{{', '.join(labels)}}}")
    lines.append("n_i: " + ", ".join(f"n_{i} = {v}" for i, v in sorted(strat.n.items())))
    lines.append(f"n_M = {strat.n_M}")
    _emit(args, _strat_data(adr, strat), "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    _, adr = _load_adr(args)
    strat = ac.stratify(adr)
    chain = ac.build_chain(adr, strat)
    if args.mode == "left":
        rep = ac.verify_total_left_rejective_chain(adr, chain)
    else:
        rep = ac.verify_rejective_chain(adr, chain, scope=args.scope)
    data = {"report": rep}
    text = ac.chain_report_text(rep)
    ok = rep["verified"]
    if args.search and not ok:
        found = qh.find_rejective_chain(adr, bound=args.bound)
        if found is None:
            text += "\nsearch: no rejective chain exists"
            data["search"] = None
        else:
            order = qh.chain_order(adr, found)
            srep = ac.verify_rejective_chain(adr, found, scope=args.scope)
            text += f"\nsearch: rejective chain found, order {order.describe()}\n" + ac.chain_report_text(srep)
            data["search"] = {"order": [[adr.labels[x] for x in b] for b in order.blocks], "report": srep}
            ok = srep["verified"]
    _emit(args, data, text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_gldim(args) -> int:
    _, adr = _load_adr(args)
    strat = ac.stratify(adr)
    b = ea.endomorphism_algebra(adr)
    cap = args.resolution_cap if args.resolution_cap is not None else strat.n_M
    pds = ea.simple_pds(b, cap=cap)
    gl = max(pds)
    rep = ea.bound_report(gl, strat.n_M)
    if args.dump_b:
        with open(args.dump_b, "w", encoding="utf-8") as fh:
            fh.write(b.dumps())
    tight = "n_M" if gl == strat.n_M else ("2(n_M - 1)" if gl == 2 * (strat.n_M - 1) else "neither")
    text = f"gl B = {gl}, n_M = {strat.n_M}, classical bound {2 * (strat.n_M - 1)}\n"
    text += f"dim B = {b.dim}, pd of simples: " + ", ".join(f"{l}: {d}" for l, d in zip(b.labels, pds))
    text += f"\ntight bound: {tight}"
    if rep["strictly_better"]:
        text += "; n_M is strictly better than 2(n_M - 1)"
    _emit(args, {**rep, "dim_B": b.dim, "pd": dict(zip(b.labels, pds)), "tight": tight}, text)
    if not rep["within_bound"]:
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_thm2(args) -> int:
    pres = _load_algebra(args)
    rep = qh.theorem2_suite(pres, bound=args.bound)
    lines = [f"(i)   B strongly quasi-hereditary: {rep['i']}",
             f"(ii)  chain is rejective:          {rep['ii']}",
             f"(iii) gl B = 2:                    {rep['iii']} (gl B = {rep['gldim']})",
             f"(iv)  J(A) in add of the catalog:  {rep['iv']}",
             "J(A) = " + " + ".join(rep["J_decomposition"]) + (" + (remainder)" if not rep["iv"] else "")]
    if "failing_steps" in rep:
        lines.append("failing chain steps: " + ", ".join(str(s) for s in rep["failing_steps"]))
    if rep.get("pd2_witness"):
        lines.append(f"pd-2 witness: top Hom(M~, {rep['pd2_witness']})")
    if rep.get("found_order"):
        lines.append(f"strongly quasi-hereditary order: {rep['found_order']}")
    lines.append("all four agree")
    _emit(args, {k: v for k, v in rep.items() if k != "schema"}, "\n".join(lines))
    return EXIT_OK


def cmd_qh(args) -> int:
    _, adr = _load_adr(args)
    order = qh.parse_order(_read(args.order), adr.labels, source=args.order)
    b = ea.endomorphism_algebra(adr)
    left = qh.check_left_strongly_qh(b, order)
    right = qh.check_left_strongly_qh(b.op, order)
    ok = left.holds and (right.holds or args.side == "left")
    text = f"order {order.describe()}\nleft-strongly quasi-hereditary: {left.holds}"
    if left.failing:
        text += f" (fails at {', '.join(left.failing)})"
    text += f"\nright-strongly quasi-hereditary: {right.holds}"
    if right.failing:
        text += f" (fails at {', '.join(right.failing)})"
    text += f"\nstrongly quasi-hereditary: {left.holds and right.holds}"
    _emit(args, {"order": [[adr.labels[x] for x in blk] for blk in order.blocks], "left": left.to_json(),
                 "right": right.to_json(), "strong": left.holds and right.holds}, text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_search_chain(args) -> int:
    _, adr = _load_adr(args)
    found = qh.find_rejective_chain(adr, bound=args.bound)
    if found is None:
        _emit(args, {"found": False}, "no rejective chain exists")
        return EXIT_FAIL
    order = qh.chain_order(adr, found)
    rep = ac.verify_rejective_chain(adr, found)
    strong = qh.check_strongly_qh(ea.endomorphism_algebra(adr), order)
    text = f"rejective chain found: {order.describe()}\nstrongly quasi-hereditary for this order: {strong}"
    _emit(args, {"found": True, "order": [[adr.labels[x] for x in blk] for blk in order.blocks],
                 "report": rep, "strongly_qh": strong}, text)
    return EXIT_OK if rep["verified"] and strong else EXIT_INVARIANT


def cmd_fuzz(args) -> int:
    if args.count < 0:
        raise _UsageError("--count must be nonnegative")
    if args.replay is not None:
        msg = fuzz.run_one(args.suite[0] if args.suite else "four-way", args.seed, args.replay)
        _emit(args, {"instance": args.replay, "message": msg}, msg or "pass")
        return EXIT_OK if msg in (None, fuzz.SKIP) else EXIT_FAIL
    summary = fuzz.run(args.seed, args.count, args.suite)
    lines = [f"seed {args.seed}, {args.count} instances per suite"]
    for name, k in summary.passed.items():
        skip = summary.skipped[name]
        lines.append(f"  {name}: {k}/{args.count} passed" + (f", {skip} not applicable" if skip else ""))
    for f in summary.failures:
        lines.append(f"FAIL {f['suite']} instance {f['instance']} (replay: --seed {f['seed']} fuzz "
                     f"--suite {f['suite']} --replay {f['instance']}): {f['message']}")
    _emit(args, summary.to_json(), "\n".join(lines))
    return EXIT_OK if summary.ok else EXIT_FAIL


class _UsageError(Exception):
    pass


# -- parser ---------------------------------------------------------------------


def _global_options(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--prime", type=int, default=d(el.DEFAULT_PRIME), help="field size (prime)")
    p.add_argument("--cap", type=int, default=d(DEFAULT_CAP), help="rewriting cap on path length")
    p.add_argument("--json", action="store_true", default=d(False), help="emit a JSON report")
    p.add_argument("--seed", type=int, default=d(1), help="seed for the randomized suites")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="adralg", description="ADR algebras of semilocal modules: "
                     "stratification, rejective chains, global dimension and quasi-hereditary checks.")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help_, mod="optional"):
        sp = sub.add_parser(name, help=help_)
        _global_options(sp, suppress=True)
        sp.add_argument("alg", help="algebra file (quiver with relations)")
        if mod == "required":
            sp.add_argument("mod", help="module file (local summands of M)")
        elif mod == "optional":
            sp.add_argument("mod", nargs="?", help="module file; default M = A")
        sp.set_defaults(func=func)
        return sp

    command("basis", cmd_basis, "basis, dimension and Loewy length of A", mod=None)
    command("stratify", cmd_stratify, "catalog F and the layers F_{i,j}")
    sp = command("verify", cmd_verify, "verify the chain of subcategories")
    sp.add_argument("--mode", choices=("left", "rejective"), default="left")
    sp.add_argument("--scope", choices=("relative", "total"), default="relative",
                    help="approximation scope for --mode rejective")
    sp.add_argument("--search", action="store_true", help="on failure, search for a rejective chain")
    sp.add_argument("--bound", type=int, default=12, help="search bound on the catalog size")
    sp = command("gldim", cmd_gldim, "global dimension of the ADR algebra")
    sp.add_argument("--resolution-cap", type=int, default=None, help="default: n_M")
    sp.add_argument("--dump-b", metavar="PATH", help="write the multiplication table of B as JSON")
    sp = command("thm2", cmd_thm2, "the four equivalent conditions for the ADR algebra of A", mod=None)
    sp.add_argument("--bound", type=int, default=40, help="search bound on the catalog size")
    sp = command("qh", cmd_qh, "check (left-)strong quasi-heredity for an order")
    sp.add_argument("--order", required=True, help="order file: 'order: {X, Y} < {Z}'")
    sp.add_argument("--side", choices=("left", "strong"), default="strong")
    sp = command("search-chain", cmd_search_chain, "search for a rejective chain")
    sp.add_argument("--bound", type=int, default=12, help="search bound on the catalog size")

    sp = sub.add_parser("fuzz", help="run the randomized property suites")
    _global_options(sp, suppress=True)
    sp.add_argument("--count", type=int, default=50)
    sp.add_argument("--suite", action="append", choices=sorted(fuzz.SUITES), help="repeatable; default all")
    sp.add_argument("--replay", type=int, default=None, metavar="K", help="rerun instance K of the first suite")
    sp.set_defaults(func=cmd_fuzz)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        el.check_prime(args.prime)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        return args.func(args)
    except _UsageError as exc:
        parser.error(str(exc))
    except _INVARIANT_ERRORS as exc:
        print(f"invariant violation: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except SearchBoundExceeded as exc:
        print(f"error: {exc} (raise --bound)", file=sys.stderr)
        return EXIT_USAGE
    except _INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except AdralgError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
