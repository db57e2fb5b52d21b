"""Command-line driver: ``lieaff verify|deform|retract|search|compat <doc>``.

Output is line-delimited JSON, one record per check followed by a summary
record.  Exit codes: 0 all checks pass, 1 a law failed, 2 malformed
document or arguments, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import engine
from .affgebra import check_associative, derivations, retract_algebra
from .document import load
from .errors import BudgetExceededError, DocumentError, InternalConsistencyError, LawViolation
from .laws import default_tasks, run_task
from .lie import are_isomorphic_small, retract_lie
from .module import AffineMap, CoordinateModule
from .nijenhuis import compatibility_bracket, is_nijenhuis, power_tower, search_nijenhuis
from .selftest import agreement

EXIT_OK, EXIT_FAIL, EXIT_DOCUMENT, EXIT_BUDGET = 0, 1, 2, 3


class Report:
    """Buffered JSONL output plus pass/fail bookkeeping."""

    def __init__(self):
        self.records = []
        self.passed = self.failed = self.errored = 0
        self.budget_hit = False

    def add(self, record: dict, result: str | None = None):
        self.records.append(record)
        result = result or record.get("result")
        if result == engine.PASS:
            self.passed += 1
        elif result == engine.FAIL:
            self.failed += 1
        elif result == engine.ERROR:
            self.errored += 1

    def verdict(self, v: engine.VerdictReport, **extra):
        self.add(dict(v.to_record(), **extra))

    def budget(self, law: str, exc: BudgetExceededError):
        self.budget_hit = True
        self.add({"law": law, "result": engine.ERROR, "message": str(exc)})

    def emit(self, out):
        for rec in self.records:
            out.write(json.dumps(rec, sort_keys=True) + "\n")
        summary = {"total": self.passed + self.failed + self.errored, "passed": self.passed,
                   "failed": self.failed, "errored": self.errored}
        out.write(json.dumps({"summary": summary}, sort_keys=True) + "\n")

    @property
    def code(self):
        if self.failed:
            return EXIT_FAIL
        if self.budget_hit:
            return EXIT_BUDGET
        if self.errored:
            return EXIT_FAIL
        return EXIT_OK


def _lie(inst):
    L = inst.lie(certify=False)
    if L is None:
        raise DocumentError("this command needs a bracket entry", "/bracket")
    return L


def _fmt_map(f: AffineMap):
    return f.to_json()


def _constants(arr, ring):
    return [[[ring.format(x) for x in row] for row in mat] for mat in arr]


def cmd_verify(inst, args, rep: Report):
    tasks = args.law or inst.tasks or default_tasks(inst)
    strategies = [engine.FRAME, engine.EXHAUSTIVE] if args.strategy == "both" else [args.strategy]
    if not isinstance(inst.module, CoordinateModule):
        if args.strategy == engine.FRAME:
            raise DocumentError("frame checks need a coordinate module", "--strategy")
        # table modules have no frame; "both" degrades to enumeration
        strategies = [s for s in strategies if s != engine.FRAME]
    for task in tasks:
        for strategy in strategies:
            try:
                rep.verdict(run_task(inst, task, strategy, args.budget, args.jobs))
            except BudgetExceededError as exc:
                rep.budget(task, exc)
    if args.corruptions:
        if not isinstance(inst.module, CoordinateModule):
            raise DocumentError("corruption self-test needs a coordinate module", "/module")
        for task in tasks:
            a = agreement(inst, task, breaking=args.corruptions, seed=args.seed, budget=args.budget)
            rep.add(dict(a.to_record(), law=f"selftest:{task}"), engine.PASS if a.agree else engine.FAIL)


def _verified_operator(inst, L, name, args, rep):
    N = inst.map(name)
    v = is_nijenhuis(L, N, budget=args.budget)
    rep.verdict(v, operator=name)
    return N if v else None


def cmd_deform(inst, args, rep: Report):
    L = _lie(inst)
    N = _verified_operator(inst, L, args.operator, args, rep)
    if N is None:
        return
    tower = power_tower(L, N, args.kmax, budget=args.budget)
    for k, level in enumerate(tower.levels):
        rep.add({"level": k, "bracket": level.structure_constants(), "result": engine.PASS,
                 "law": f"tower.level[{k}]"})
    for check in tower.checks:
        rep.verdict(check)


def cmd_retract(inst, args, rep: Report):
    o = inst.point(json.loads(args.origin), "--origin")
    K = inst.ring
    if inst.mul is not None:
        G = inst.affgebra
        assoc = check_associative(G, budget=args.budget)
        rep.verdict(assoc)
        R = retract_algebra(G, o)
        rep.verdict(engine.check_all("retract_algebra.axioms", R.laws(), budget=args.budget))
        if isinstance(inst.module, CoordinateModule):
            rep.add({"retract": "algebra", "constants": _constants(R.structure_constants(), K)})
    if inst.bracket is not None:
        V = retract_lie(_lie(inst), o)
        rep.verdict(V.check(budget=args.budget))
        if isinstance(inst.module, CoordinateModule):
            rep.add({"retract": "lie", "constants": _constants(V.structure_constants(), K)})


def cmd_search(inst, args, rep: Report):
    if args.target == "nijenhuis":
        res = search_nijenhuis(_lie(inst), budget=args.budget)
        for c in res:
            rep.add({"nijenhuis": _fmt_map(c.N)})
        rep.add({"search": "nijenhuis", "found": len(res), "examined": res.examined, "truncated": res.truncated})
        if res.truncated:
            rep.budget_hit = True
    elif args.target == "derivations":
        if inst.mul is None:
            raise DocumentError("derivation search needs a mul entry", "/mul")
        sigma = inst.map(args.sigma) if args.sigma else AffineMap.identity(inst.module)
        ders = derivations(inst.affgebra, sigma, budget=args.budget)
        for X in ders:
            rep.add({"derivation": _fmt_map(X)})
        rep.add({"search": "derivations", "found": len(ders)})
    else:
        if not args.against:
            raise DocumentError("isomorphism search needs --against <doc>", "--against")
        other = load(args.against)
        res = are_isomorphic_small(_lie(inst), _lie(other), budget=args.budget)
        rep.add(dict(res.to_record(), search="isomorphism"))


def _triple(text: str, ring):
    parts = text.split(",")
    if len(parts) != 3:
        raise DocumentError(f"pair {text!r} must read k,l,alpha", "--pairs")
    try:
        k, l = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise DocumentError(f"pair {text!r}: k and l must be integers", "--pairs") from exc
    if k < 0 or l < 0:
        raise DocumentError(f"pair {text!r}: k and l must be non-negative", "--pairs")
    return k, l, ring.parse(parts[2])


def cmd_compat(inst, args, rep: Report):
    L = _lie(inst)
    triples = [_triple(p, inst.ring) for p in args.pairs]
    N = _verified_operator(inst, L, args.operator, args, rep)
    if N is None:
        return
    for k, l, alpha in triples:
        C = compatibility_bracket(L, N, k, l, alpha, budget=args.budget)
        rep.add({"law": "compat.bracket", "k": k, "l": l, "alpha": inst.ring.format(alpha),
                 "result": engine.PASS, "bracket": C.structure_constants()})


COMMANDS = {"verify": cmd_verify, "deform": cmd_deform, "retract": cmd_retract, "search": cmd_search,
            "compat": cmd_compat}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lieaff", description="Check laws of heaps, affgebras and Lie affgebras.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("document", help="instance document (JSON)")
    common.add_argument("--budget", type=int, default=engine.DEFAULT_BUDGET, help="enumeration budget")
    common.add_argument("--jobs", type=int, default=1, help="worker threads for enumeration")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run law checks")
    v.add_argument("--law", action="append", help="task name (repeatable); defaults to the document's tasks")
    v.add_argument("--strategy", choices=["auto", "frame", "exhaustive", "both"], default="auto")
    v.add_argument("--corruptions", type=int, default=0,
                   help="also compare strategies on random corruptions until this many break each law")
    v.add_argument("--seed", type=int, default=0, help="seed for the corruption self-test")

    d = sub.add_parser("deform", parents=[common], help="power tower of a Nijenhuis operator")
    d.add_argument("--operator", required=True, help="name of a map in the document")
    d.add_argument("--kmax", type=int, default=2)

    r = sub.add_parser("retract", parents=[common], help="retracted algebra / Lie algebra at an origin")
    r.add_argument("--origin", required=True, help="point as JSON, e.g. '[\"0\",\"1\"]' or 2 for tables")

    s = sub.add_parser("search", parents=[common], help="enumerate witnesses")
    s.add_argument("--target", choices=["nijenhuis", "derivations", "isomorphism"], required=True)
    s.add_argument("--sigma", help="map name for derivation search (default: identity)")
    s.add_argument("--against", help="second document for isomorphism search")

    c = sub.add_parser("compat", parents=[common], help="compatibility brackets of a Nijenhuis operator")
    c.add_argument("--operator", required=True)
    c.add_argument("--pairs", nargs="+", required=True, metavar="K,L,ALPHA")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_DOCUMENT if exc.code else EXIT_OK
    rep = Report()
    try:
        inst = load(args.document)
        COMMANDS[args.command](inst, args, rep)
    except (DocumentError, json.JSONDecodeError) as exc:
        out.write(json.dumps({"error": "document", "message": str(exc),
                              "location": getattr(exc, "location", "")}, sort_keys=True) + "\n")
        return EXIT_DOCUMENT
    except BudgetExceededError as exc:
        rep.budget(args.command, exc)
    except (LawViolation, InternalConsistencyError) as exc:
        rec = {"law": args.command, "result": engine.FAIL, "message": str(exc)}
        if getattr(exc, "verdict", None) is not None:
            rec["witness"] = exc.verdict.failing().witness
        rep.add(rec)
    rep.emit(out)
    return rep.code


def main_entry():
    sys.exit(main())
