"""Command line front end: ``python -m imulip`` or the ``imulip`` script.

Exit codes: 0 success or provable, 1 not provable or a check failed,
2 usage error, 3 internal assertion.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .calculus import backward_apps_g4im
from .formula import IMP, FormulaSyntaxError, Polarity, parse, render
from .interpolation import (BudgetExceeded, Interpolator, NotATheorem, UlipReport,
                            lyndon_interpolant, simplify, uip_exists, uip_forall,
                            verify_ulip, ContextPool)
from .prover import G3Prover, G4Prover, ProofCache, run_deep
from .sequent import FormulaBag, Sequent, SequentSyntaxError, parse_bag, parse_sequent
from .universe import formulas_up_to

CACHE_ENV = "IMULIP_CACHE_DIR"
CONFIG_KEYS = {"recursion_budget": int, "jobs": int, "weight_bound": int,
               "context_bound": int, "atoms": str, "max_context": int}


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _load_config(path):
    out = {}
    if not path:
        return out
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        k, v = (x.strip() for x in line.split("=", 1))
        if k not in CONFIG_KEYS:
            raise UsageError(f"{path}:{n}: unknown key {k!r}")
        try:
            out[k] = CONFIG_KEYS[k](v)
        except ValueError:
            raise UsageError(f"{path}:{n}: bad value for {k}") from None
    return out


# ------------------------------------------------------------ persistent cache

def _cache_file():
    d = os.environ.get(CACHE_ENV)
    return Path(d) / "g4.tsv" if d else None


def _load_known(prover: G4Prover):
    path = _cache_file()
    if path is None or not path.exists():
        return
    for line in path.read_text().splitlines():
        text, _, val = line.rpartition("\t")
        if text:
            s = parse_sequent(text)
            prover.known[(s.ante.items, s.succ)] = val == "1"


def _save_known(prover: G4Prover):
    path = _cache_file()
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = dict(prover.known)
    for k, v in prover.cache.table.items():
        rows[k] = v is not False
    lines = sorted(f"{Sequent(FormulaBag._from_sorted(k[0]), k[1])}\t{int(v)}"
                   for k, v in rows.items())
    path.write_text("\n".join(lines) + "\n")


# ------------------------------------------------------------ parsing helpers

def _sequent(text: str) -> Sequent:
    try:
        return parse_sequent(text) if "=>" in text else Sequent.of((), parse(text))
    except (FormulaSyntaxError, SequentSyntaxError) as exc:
        raise UsageError(str(exc)) from None


def _formula(text: str):
    try:
        return parse(text)
    except FormulaSyntaxError as exc:
        raise UsageError(str(exc)) from None


def _atoms(text: str) -> tuple:
    names = tuple(a.strip() for a in text.split(",") if a.strip())
    if not names:
        raise UsageError("empty atom list")
    for a in names:
        _formula(a)
    return names


def _polarity(text: str) -> Polarity:
    try:
        return Polarity.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ------------------------------------------------------------ commands

def cmd_prove(args, cfg, out):
    s = _sequent(args.sequent)
    if args.calculus == "g3":
        ok = G3Prover().provable(s)
        if args.emit == "json":
            out.write(_dump({"sequent": str(s), "calculus": "g3", "provable": ok}) + "\n")
        else:
            out.write(("provable" if ok else "not provable") + "\n")
        return 0 if ok else 1
    prover = G4Prover()
    _load_known(prover)
    d = prover.prove(s)
    _save_known(prover)
    if args.emit == "json":
        doc = {"sequent": str(s), "calculus": "g4", "provable": d is not None,
               "derivation": None if d is None else d.to_json()}
        if args.explain:
            doc["rules"] = [a.to_json() for a in backward_apps_g4im(s.normalized())]
        out.write(_dump(doc) + "\n")
    else:
        if args.explain:
            for a in backward_apps_g4im(s.normalized()):
                out.write(f"# {a}\n")
        if d is None:
            out.write("not provable\n")
        elif args.emit == "latex":
            out.write(d.to_latex() + "\n")
        else:
            out.write(d.to_text() + "\n")
    return 0 if d is not None else 1


def _interp(cfg):
    return Interpolator(G4Prover(), budget=cfg.get("recursion_budget"))


def cmd_interpolate(args, cfg, out):
    pol = _polarity(args.polarity)
    it = _interp(cfg)
    _formula(args.atom)
    if args.kind == "exists":
        try:
            target = parse_bag(args.target)
        except FormulaSyntaxError as exc:
            raise UsageError(str(exc)) from None
        raw = it.exists(target, args.atom, pol)
    else:
        target = _sequent(args.target)
        raw = it.forall(target, args.atom, pol)
    rep = None
    if args.verify_bound is not None:
        atoms = _atoms(cfg.get("atoms", args.atoms))
        rep = verify_ulip(target if args.kind == "forall" else list(target), args.atom, pol,
                          args.verify_bound, atoms, cfg.get("max_context", 1), it)
    if args.emit == "json":
        if rep is not None:
            doc = rep.to_json()
        else:
            tgt = str(target) if isinstance(target, Sequent) else [render(f) for f in target]
            doc = {"query": {"kind": args.kind, "atom": args.atom, "polarity": str(pol),
                             "target": tgt},
                   "raw": render(raw), "simplified": render(simplify(raw))}
        out.write(_dump(doc) + "\n")
    else:
        out.write(render(simplify(raw) if args.simplify else raw) + "\n")
        if rep is not None:
            out.write(f"var={rep.var} main={rep.main} checked={rep.checked} "
                      f"counterexamples={len(rep.counterexamples)}\n")
    return 1 if rep is not None and not rep.ok else 0


def cmd_uip(args, cfg, out):
    phi = _formula(args.formula)
    _formula(args.atom)
    it = _interp(cfg)
    f = uip_exists(phi, args.atom, it) if args.quantifier == "exists" else uip_forall(phi, args.atom, it)
    if args.emit == "json":
        out.write(_dump({"quantifier": args.quantifier, "atom": args.atom,
                         "formula": render(phi), "raw": render(f),
                         "simplified": render(simplify(f))}) + "\n")
    else:
        out.write(render(simplify(f)) + "\n")
    return 0


def cmd_lyndon(args, cfg, out):
    phi, psi = _formula(args.phi), _formula(args.psi)
    it = _interp(cfg)
    try:
        theta = lyndon_interpolant(phi, psi, it)
    except NotATheorem as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    if args.emit == "json":
        out.write(_dump({"phi": render(phi), "psi": render(psi), "raw": render(theta),
                         "simplified": render(simplify(theta))}) + "\n")
    else:
        out.write(render(simplify(theta)) + "\n")
    return 0


def _corpus_lines(path):
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read corpus {path}: {exc}") from None
    for n, line in enumerate(lines, 1):
        line = line.strip()
        if line and not line.startswith("#"):
            yield n, line


def _corpus_item(suite, text, atoms, args, cfg, g4, g3, it, pool):
    if suite == "equivalence":
        s = parse_sequent(text) if "=>" in text else Sequent.of((), parse(text))
        a, b = g4.provable(s), g3.provable(s)
        return {"sequent": str(s), "g4": a, "g3": b, "ok": a == b}
    if suite == "ulip":
        phi = parse(text)
        reports = []
        for p in atoms:
            for pol in (Polarity.POS, Polarity.NEG):
                for target in ([phi], Sequent.of((), phi)):
                    reports.append(verify_ulip(target, p, pol, args.context_bound, atoms,
                                               cfg.get("max_context", 1), it, pool))
        bad = [r.to_json() for r in reports if not r.ok]
        return {"formula": render(phi), "queries": len(reports), "violations": bad,
                "ok": not bad}
    # admissibility: derived instances of one sequent
    s = parse_sequent(text) if "=>" in text else Sequent.of((), parse(text))
    bad = []
    if g4.provable(s):
        for a in atoms:
            w = Sequent(s.ante.add(parse(a)), s.succ)
            if not g4.provable(w):
                bad.append({"rule": "weakening", "conclusion": str(w)})
    for f in s.ante.distinct():
        dup = Sequent(s.ante.add(f), s.succ)
        if g4.provable(dup) and not g4.provable(s):
            bad.append({"rule": "contraction", "conclusion": str(s)})
        if f.kind == IMP and g4.provable(s):
            inv = Sequent(s.ante.replace_one(f, f.right), s.succ)
            if not g4.provable(inv):
                bad.append({"rule": "inversion", "conclusion": str(inv)})
    return {"sequent": str(s), "violations": bad, "ok": not bad}


def cmd_verify(args, cfg, out):
    from . import suites
    atoms = _atoms(cfg.get("atoms", args.atoms))
    jobs = cfg.get("jobs", args.jobs)
    report = open(args.report, "w") if args.report else None
    try:
        if args.corpus:
            g4, g3 = G4Prover(), G3Prover()
            it = Interpolator(g4, budget=cfg.get("recursion_budget"))
            pool = ContextPool(formulas_up_to(args.context_bound, atoms), g4) \
                if args.suite == "ulip" else None
            failed = 0
            total = 0
            for n, line in _corpus_lines(args.corpus):
                total += 1
                try:
                    row = _corpus_item(args.suite, line, atoms, args, cfg, g4, g3, it, pool)
                except (FormulaSyntaxError, SequentSyntaxError) as exc:
                    row = {"error": str(exc), "ok": False}
                row["line"] = n
                failed += not row["ok"]
                if report:
                    report.write(_dump(row) + "\n")
            summary = {"suite": args.suite, "items": total, "failed": failed}
            out.write(_dump(summary) + "\n")
            if report:
                report.write(_dump(summary) + "\n")
            return 1 if failed else 0
        wb = cfg.get("weight_bound", args.weight_bound)
        if args.suite == "equivalence":
            res = suites.equivalence_suite(wb if wb is not None else 5, atoms, jobs=jobs)
            bad = len(res["disagreements"])
        elif args.suite == "ulip":
            res = suites.ulip_suite(wb if wb is not None else 6,
                                    cfg.get("context_bound", args.context_bound), atoms,
                                    cfg.get("max_context", 1))
            bad = len(res["violations"])
        else:
            res = suites.admissibility_suite(args.samples, wb if wb is not None else 5, atoms)
            bad = sum(len(v["failures"]) for v in res.values() if isinstance(v, dict))
        res.pop("seconds", None)
        out.write(_dump(res) + "\n")
        if report:
            report.write(_dump(res) + "\n")
        return 1 if bad else 0
    finally:
        if report:
            report.close()


def cmd_selftest(args, cfg, out):
    from . import suites
    results = [
        ("equivalence", len(suites.equivalence_suite(3)["disagreements"]) == 0),
        ("admissibility", all(not v["failures"] for v in
                              suites.admissibility_suite(50).values() if isinstance(v, dict))),
        ("monotone", not suites.monotone_suite(10, 4)["axiom_failures"]),
        ("lyndon", not suites.lyndon_suite()["failures"]),
        ("ulip", not suites.ulip_suite(2, 3)["violations"]),
    ]
    for name, ok in results:
        out.write(f"{'PASS' if ok else 'FAIL'} {name}\n")
    return 0 if all(ok for _, ok in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="imulip", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="key=value settings file")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prove", help="decide a sequent")
    p.add_argument("sequent", help="e.g. '[]p, q => []p & q' or a formula")
    p.add_argument("--calculus", choices=["g4", "g3"], default="g4")
    p.add_argument("--emit", choices=["text", "json", "latex"], default="text")
    p.add_argument("--explain", action="store_true", help="list backward rule applications")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("interpolate", help="raw uniform interpolant")
    p.add_argument("target", help="comma separated formulas (exists) or a sequent (forall)")
    p.add_argument("--kind", choices=["exists", "forall"], default="exists")
    p.add_argument("--polarity", default="+")
    p.add_argument("--atom", default="p")
    p.add_argument("--simplify", action="store_true")
    p.add_argument("--verify-bound", type=int)
    p.add_argument("--atoms", default="p,q", help="alphabet for the verification contexts")
    p.add_argument("--emit", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("uip", help="uniform interpolant of a formula")
    p.add_argument("formula")
    p.add_argument("--quantifier", choices=["exists", "forall"], default="exists")
    p.add_argument("--atom", default="p")
    p.add_argument("--emit", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_uip)

    p = sub.add_parser("lyndon", help="Lyndon interpolant of a derivable implication")
    p.add_argument("phi")
    p.add_argument("psi")
    p.add_argument("--emit", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_lyndon)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=["equivalence", "ulip", "admissibility"], required=True)
    p.add_argument("--weight-bound", type=int)
    p.add_argument("--context-bound", type=int, default=4)
    p.add_argument("--atoms", default="p,q")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--corpus", help="file with one sequent or formula per line")
    p.add_argument("--report", help="write JSON lines here")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selftest", help="quick end-to-end check")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _load_config(args.config)
        return run_deep(args.func, args, cfg, out)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except BudgetExceeded as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except AssertionError as exc:
        sys.stderr.write(f"internal error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
