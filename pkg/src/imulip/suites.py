"""Batch checks shared by the command line and the acceptance tests.

Each runner returns a plain dict summary; failing items are listed in full
so a report can be written without re-running anything.
"""
from __future__ import annotations

import random
import time
from typing import Callable, Optional

from .formula import BOT, NEG, POS, And, Box, Formula, Imp, parse, render
from .interpolation import (ContextPool, Interpolator, NotATheorem, SimplifyError,
                            lyndon_interpolant, simplify, verify_ulip)
from .prover import G3Prover, G4Prover
from .sequent import FormulaBag, Sequent, seq_vars
from .universe import formulas_up_to

__all__ = ["equivalence_suite", "ulip_suite", "admissibility_suite", "monotone_suite",
           "lyndon_suite", "LYNDON_CASES", "equivalent_pairs"]


def _sorted_universe(max_weight, atoms):
    fs = formulas_up_to(max_weight, atoms)
    fs.sort(key=lambda f: f.key)
    return fs


def _equivalence_chunk(args):
    fs, i, max_ante = args
    g4 = G4Prover()
    g3 = G3Prover()
    ds = [None] + fs
    if i < 0:
        bags = [()] + [(f,) for f in fs] if max_ante >= 1 else [()]
    elif max_ante >= 2:
        a = fs[i]
        bags = [(a, b) for b in fs[i:]]
    else:
        bags = []
    n = 0
    yes = 0
    bad = []
    for A in bags:
        fa = frozenset(A)
        for d in ds:
            r4 = g4.provable_key(A, d)
            r3 = g3._search(fa, d, {}, 0)[0]
            n += 1
            yes += r4
            if r4 != r3:
                bad.append({"seq": str(Sequent(FormulaBag(A), d)), "g4": r4, "g3": r3})
    return n, yes, bad


def equivalence_suite(max_weight: int = 5, atoms=("p", "q"), max_ante: int = 2,
                      jobs: int = 1, progress: Optional[Callable] = None) -> dict:
    """Compare the two provers on every ``G => D`` with ``|G| <= max_ante`` (at most 2).

    The work is split by the first antecedent formula; each chunk gets fresh
    provers so memory stays bounded.
    """
    if max_ante > 2:
        raise ValueError("max_ante above 2 is not supported")
    fs = _sorted_universe(max_weight, atoms)
    tasks = [(fs, -1, max_ante)] + ([(fs, i, max_ante) for i in range(len(fs))]
                                     if max_ante >= 2 else [])
    t0 = time.time()
    total = provable = 0
    bad = []
    if jobs > 1:
        import multiprocessing as mp
        with mp.Pool(jobs) as pool:
            results = pool.imap(_equivalence_chunk, tasks)
            for k, (n, y, b) in enumerate(results):
                total += n
                provable += y
                bad.extend(b)
                if progress:
                    progress(k + 1, len(tasks), total)
    else:
        for k, task in enumerate(tasks):
            n, y, b = _equivalence_chunk(task)
            total += n
            provable += y
            bad.extend(b)
            if progress:
                progress(k + 1, len(tasks), total)
    return {"suite": "equivalence", "weight_bound": max_weight, "atoms": list(atoms),
            "max_ante": max_ante, "formulas": len(fs), "sequents": total,
            "provable": provable, "disagreements": bad, "seconds": time.time() - t0}


def ulip_suite(max_weight: int = 6, context_bound: int = 4, atoms=("p", "q"),
               max_context: int = 1, reduce_contexts: bool = False,
               simplify_check: bool = False, formulas=None, refresh: int = 40,
               progress: Optional[Callable] = None) -> dict:
    """Interpolant conditions for every formula of the universe, both kinds,
    both polarities and every atom of the alphabet.

    Caches are dropped every ``refresh`` formulas to bound memory.
    """
    fs = formulas if formulas is not None else formulas_up_to(max_weight, atoms)
    ctx = formulas_up_to(context_bound, atoms)
    t0 = time.time()
    queries = 0
    failures = []
    simp_failures = []
    for k, phi in enumerate(fs):
        if k % refresh == 0:
            prover = G4Prover()
            interp = Interpolator(prover)
            pool = ContextPool(ctx, prover, reduce=reduce_contexts)
        for p in atoms:
            for pol in (POS, NEG):
                for target in ([phi], Sequent.of((), phi)):
                    rep = verify_ulip(target, p, pol, context_bound, atoms, max_context,
                                      interp, pool)
                    queries += 1
                    if not rep.ok:
                        failures.append(rep.to_json())
                    if simplify_check:
                        try:
                            simplify(rep.raw, verified=True, prover=prover)
                        except SimplifyError:
                            simp_failures.append(render(rep.raw))
        if progress:
            progress(k + 1, len(fs), queries)
    return {"suite": "ulip", "weight_bound": max_weight, "context_bound": context_bound,
            "atoms": list(atoms), "max_context": max_context,
            "reduced_contexts": reduce_contexts, "formulas": len(fs), "queries": queries,
            "violations": failures, "simplify_failures": simp_failures,
            "seconds": time.time() - t0}


# ------------------------------------------------------------ admissibility

def _random_seq(rng, fs, max_ante=2):
    n = rng.randint(0, max_ante)
    return Sequent(FormulaBag(rng.choices(fs, k=n)), rng.choice(fs + [None]))


def admissibility_suite(samples: int = 500, max_weight: int = 5, atoms=("p", "q"),
                        seed: int = 0, max_tries: int = 200_000) -> dict:
    """Weakening, contraction, implication inversion and cut on sampled instances.

    Only instances whose hypotheses are derivable count towards ``samples``.
    """
    rng = random.Random(seed)
    fs = _sorted_universe(max_weight, atoms)
    imps = [f for f in fs if f.kind == Imp.kind]
    pr = G4Prover()
    t0 = time.time()
    out = {}

    def run(name, draw):
        got = 0
        tries = 0
        bad = []
        while got < samples and tries < max_tries:
            tries += 1
            inst = draw()
            if inst is None:
                continue
            hyps, concl = inst
            if all(pr.provable(h) for h in hyps):
                got += 1
                if not pr.provable(concl):
                    bad.append({"hyps": [str(h) for h in hyps], "concl": str(concl)})
        out[name] = {"instances": got, "tries": tries, "failures": bad}

    def weakening():
        s = _random_seq(rng, fs)
        phi = rng.choice(fs)
        return [s], Sequent(s.ante.add(phi), s.succ)

    def contraction():
        s = _random_seq(rng, fs, 1)
        phi = rng.choice(fs)
        return [Sequent(s.ante.add(phi, phi), s.succ)], Sequent(s.ante.add(phi), s.succ)

    def inversion():
        s = _random_seq(rng, fs, 1)
        f = rng.choice(imps)
        return [Sequent(s.ante.add(f), s.succ)], Sequent(s.ante.add(f.right), s.succ)

    def cut():
        s = _random_seq(rng, fs, 1)
        # Pick the cut formula among consequences of the context.
        for _ in range(50):
            phi = rng.choice(fs)
            if pr.provable(Sequent(s.ante, phi)):
                break
        else:
            return None
        return [Sequent(s.ante, phi), Sequent(s.ante.add(phi), s.succ)], s

    for name, draw in (("weakening", weakening), ("contraction", contraction),
                       ("inversion", inversion), ("cut", cut)):
        run(name, draw)
    out["seconds"] = time.time() - t0
    out["suite"] = "admissibility"
    return out


# ------------------------------------------------------------ monotonicity

def equivalent_pairs(max_weight: int = 5, atoms=("p", "q"), prover: Optional[G4Prover] = None):
    """Distinct provably equivalent pairs from the universe, in canonical order."""
    pr = prover or G4Prover()
    pool = ContextPool(_sorted_universe(max_weight, atoms), pr)
    pairs = []
    for cls in pool.classes():
        for a in cls[1:]:
            pairs.append((cls[0], a))
    return pairs


def monotone_suite(count: int = 50, max_weight: int = 6, atoms=("p", "q"), seed: int = 0) -> dict:
    """Instances of the monotonicity axiom and of the congruence rule for the box."""
    rng = random.Random(seed)
    pr = G4Prover()
    fs = _sorted_universe(max_weight, atoms)
    t0 = time.time()
    axiom_bad = []
    for _ in range(count):
        a, b = rng.choice(fs), rng.choice(fs)
        goal = Sequent.of((), Imp(Box(And(a, b)), And(Box(a), Box(b))))
        if not pr.provable(goal):
            axiom_bad.append(str(goal))
    pairs = equivalent_pairs(min(max_weight, 5), atoms, pr)
    chosen = rng.sample(pairs, min(count, len(pairs)))
    rule_bad = []
    for a, b in chosen:
        assert pr.provable(Sequent.of([a], b)) and pr.provable(Sequent.of([b], a))
        goal = Sequent.of((), Imp(Box(a), Box(b)))
        if not pr.provable(goal):
            rule_bad.append(str(goal))
    return {"suite": "monotone", "axiom_instances": count, "axiom_failures": axiom_bad,
            "rule_instances": len(chosen), "rule_failures": rule_bad,
            "seconds": time.time() - t0}


# ------------------------------------------------------------ Lyndon

LYNDON_CASES = [
    ("p & q", "q | r"),
    ("[](p & q)", "[]p"),
    ("p", "p"),
    ("#f", "q"),
    ("p & (p -> q)", "q"),
    ("q", "p -> q"),
    ("p & ~p", "q"),
    ("(p | q) & ~p", "q | r"),
    ("[](p & q)", "[]p & []q"),
    ("[]p & []q", "[]p | r"),
    ("[](p & ~p)", "[]q -> [](r | ~r) | []#f"),
    ("p -> q", "~q -> ~p"),
    ("p & q & r", "r & (s | q)"),
    ("~~(p -> q)", "~~p -> ~~q"),
    ("[](p & (q | r))", "[](p | s)"),
    ("(p -> q) & (q -> r)", "p -> r"),
    ("[]p & ([]p -> q)", "q | s"),
    ("p | q", "~p -> q"),
    ("[](r & s) & (r -> q)", "[]s & (r -> q | p)"),
    ("~q & (p -> q)", "~p"),
]


def lyndon_suite(cases=None) -> dict:
    """Lyndon interpolants for a list of derivable implications, fully checked."""
    cases = cases if cases is not None else LYNDON_CASES
    pr = G4Prover()
    interp = Interpolator(pr)
    t0 = time.time()
    rows = []
    for a_txt, b_txt in cases:
        a, b = parse(a_txt), parse(b_txt)
        row = {"phi": a_txt, "psi": b_txt}
        try:
            theta = lyndon_interpolant(a, b, interp)
        except NotATheorem:
            row.update(ok=False, error="not derivable")
            rows.append(row)
            continue
        checks = {
            "pos_vars": theta.pos <= (a.pos & b.pos),
            "neg_vars": theta.neg <= (a.neg & b.neg),
            "phi_theta": pr.provable(Sequent.of([a], theta)),
            "theta_psi": pr.provable(Sequent.of([theta], b)),
        }
        row.update(theta=render(simplify(theta)), ok=all(checks.values()), **checks)
        rows.append(row)
    return {"suite": "lyndon", "cases": rows,
            "failures": [r for r in rows if not r["ok"]], "seconds": time.time() - t0}
