"""Uniform Lyndon interpolants for G4iM and the checks that certify them.

``exists(bag, p, pol)`` is the strongest p-pol-free consequence of a
multiset; ``forall(seq, p, pol)`` is the weakest p-pol-free formula that,
added to the antecedent of ``seq``, makes it derivable.  Both are built by
mutual recursion down the weight order and memoized on canonical keys.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .calculus import backward_apps_g4w, backward_left_apps_for_exists
from .formula import (ATOM, AND, BOT, BOX, IMP, NEG, OR, POS, TOP, TOP_K, TOP_N, And, Box,
                      Formula, Imp, Or, Polarity, big_and, big_or, normalize_top, render,
                      vars_of)
from .prover import G4Prover, default_prover
from .sequent import (FormulaBag, Sequent, bag_vars, items_precede, seq_vars,
                      sequent_to_json)

__all__ = [
    "Interpolator", "BudgetExceeded", "NotATheorem", "SimplifyError", "exists_ax",
    "forall_ax", "exists_interp", "forall_interp", "uip_exists", "uip_forall",
    "lyndon_interpolant", "simplify", "default_interpolator", "verify_ulip", "ContextPool",
    "UlipReport",
]


class BudgetExceeded(RuntimeError):
    pass


class NotATheorem(ValueError):
    pass


class SimplifyError(AssertionError):
    pass


class DescentViolation(AssertionError):
    pass


def _imp(a: Formula, b: Formula) -> Formula:
    # An empty hypothesis list is the unit #f -> #f; the implication is then b itself.
    return b if a is TOP_N else Imp(a, b)


def _flat(key):
    A, d = key
    return A if d is None else A + (d,)


def _replace(items: tuple, f: Formula, g: Formula) -> tuple:
    return FormulaBag(items).replace_one(f, g).items


def _distinct(items):
    return tuple(dict.fromkeys(items))


def exists_ax(bag, p: str, pol: Polarity) -> Formula:
    """Conjunction of the p-pol-free members of ``bag``."""
    return big_and(f for f in _distinct(FormulaBag(bag).items) if p not in vars_of(f, pol))


def forall_ax(s: Sequent, p: str, pol: Polarity, prover: Optional[G4Prover] = None) -> Formula:
    prover = prover or default_prover
    if prover.provable(s):
        return TOP_N
    d = s.succ
    if d is not None and p not in vars_of(d, pol):
        return d
    return BOT


class Interpolator:
    """Memoized construction of the four interpolant families.

    ``memo=False`` recomputes every subterm; it exists so tests can compare
    cached and uncached output.  ``budget`` caps the number of fresh
    interpolants computed by one instance.
    """

    def __init__(self, prover: Optional[G4Prover] = None, memo: bool = True,
                 budget: Optional[int] = None, check_descent: bool = True):
        self.prover = prover if prover is not None else default_prover
        self.memo = memo
        self.budget = budget
        self.check_descent = check_descent
        self.ex_cache: dict = {}
        self.fa_cache: dict = {}
        self.steps = 0

    # -- public -------------------------------------------------------------
    def exists(self, bag, p: str, pol: Polarity) -> Formula:
        items = FormulaBag(bag).normalized().items
        return self._ex(items, p, pol)

    def forall(self, s: Sequent, p: str, pol: Polarity) -> Formula:
        s = s.normalized()
        return self._fa((s.ante.items, s.succ), p, pol)

    # -- helpers ------------------------------------------------------------
    def _tick(self):
        self.steps += 1
        if self.budget is not None and self.steps > self.budget:
            raise BudgetExceeded(f"interpolation budget of {self.budget} steps exhausted")

    def _lower(self, arg: tuple, parent: tuple):
        if self.check_descent and not items_precede(arg, parent):
            raise DescentViolation(f"recursive argument {arg} not lower than {parent}")

    def _provable(self, A: tuple, d) -> bool:
        return self.prover.provable_key(A, d)

    def _modal_triples(self, items: tuple) -> list:
        """I_m: (phi, psi, theta) with []phi, []psi -> theta present and phi => psi derivable."""
        boxes = [g.body for g in _distinct(items) if g.kind == BOX]
        out = []
        if not boxes:
            return out
        for f in _distinct(items):
            if f.kind == IMP and f.left.kind == BOX:
                for phi in boxes:
                    if self._provable((phi,), f.left.body):
                        out.append((phi, f))
        return out

    # -- exists -------------------------------------------------------------
    def _ex(self, items: tuple, p: str, pol: Polarity) -> Formula:
        key = (items, p, pol)
        if self.memo:
            hit = self.ex_cache.get(key)
            if hit is not None:
                return hit
        self._tick()
        out = self._ex_build(items, p, pol) if items else TOP_N
        if self.memo:
            self.ex_cache[key] = out
        return out

    def _ex_build(self, items: tuple, p: str, pol: Polarity) -> Formula:
        dual = pol.dual
        parts = []
        for app in backward_left_apps_for_exists(FormulaBag._from_sorted(items),
                                                 self.check_descent):
            hyps = []
            alts = []
            for prem, ctx in zip(app.premises, app.contextual):
                a = prem.ante.items
                self._lower(_flat((a, prem.succ)), items)
                if ctx:
                    alts.append(self._ex(a, p, pol))
                else:
                    hyps.append(_imp(self._ex(a, p, pol), self._fa((a, prem.succ), p, dual)))
            parts.append(_imp(big_and(hyps), big_or(alts)))
        # axioms
        for f in _distinct(items):
            if p not in vars_of(f, pol):
                parts.append(f)
        # atomic implications, indexed with the dual polarity
        for f in _distinct(items):
            if f.kind == IMP and f.left.kind == ATOM and p not in vars_of(f.left, dual):
                sub = _replace(items, f, f.right)
                self._lower(sub, items)
                parts.append(Imp(f.left, self._ex(sub, p, pol)))
        # modal part
        for f in _distinct(items):
            if f.kind == BOX:
                self._lower((f.body,), items)
                parts.append(Box(self._ex((f.body,), p, pol)))
        for f in _distinct(items):
            if f.kind == IMP and f.left.kind == BOX:
                psi = f.left.body
                sub = _replace(items, f, f.right)
                self._lower((psi,), items)
                self._lower(sub, items)
                parts.append(Imp(Box(self._fa(((), psi), p, dual)), self._ex(sub, p, pol)))
        for phi, f in self._modal_triples(items):
            sub = _replace(items, f, f.right)
            parts.append(self._ex(sub, p, pol))
        return big_and(parts)

    # -- forall -------------------------------------------------------------
    def _fa(self, key: tuple, p: str, pol: Polarity) -> Formula:
        ck = (key, p, pol)
        if self.memo:
            hit = self.fa_cache.get(ck)
            if hit is not None:
                return hit
        self._tick()
        A, d = key
        out = TOP_N if self._provable(A, d) else self._fa_build(A, d, p, pol)
        if self.memo:
            self.fa_cache[ck] = out
        return out

    def _fa_build(self, A: tuple, d, p: str, pol: Polarity) -> Formula:
        dual = pol.dual
        me = A if d is None else A + (d,)
        disj = []
        for app in backward_apps_g4w(Sequent(FormulaBag._from_sorted(A), d), self.check_descent):
            conj = []
            for prem in app.premises:
                a = prem.ante.items
                self._lower(_flat((a, prem.succ)), me)
                conj.append(_imp(self._ex(a, p, dual), self._fa((a, prem.succ), p, pol)))
            disj.append(big_and(conj))
        if d is not None and p not in vars_of(d, pol):
            disj.append(d)
        for f in _distinct(A):
            if f.kind == IMP and f.left.kind == ATOM and p not in vars_of(f.left, pol):
                sub = _replace(A, f, f.right)
                self._lower(_flat((sub, d)), me)
                disj.append(And(f.left, _imp(self._ex(sub, p, dual), self._fa((sub, d), p, pol))))
        if not A and d is not None and d.kind == BOX:
            self._lower((d.body,), me)
            disj.append(Box(self._fa(((), d.body), p, pol)))
        else:
            for f in _distinct(A):
                if f.kind == IMP and f.left.kind == BOX:
                    sub = _replace(A, f, f.right)
                    self._lower(_flat((sub, d)), me)
                    self._lower((f.left.body,), me)
                    disj.append(And(self._fa((sub, d), p, pol),
                                    Box(self._fa(((), f.left.body), p, pol))))
            for phi, f in self._modal_triples(A):
                sub = _replace(A, f, f.right)
                disj.append(self._fa((sub, d), p, pol))
        return big_or(disj)


default_interpolator = Interpolator()


def exists_interp(bag, p: str, pol: Polarity, interp: Optional[Interpolator] = None) -> Formula:
    return (interp or default_interpolator).exists(bag, p, pol)


def forall_interp(s: Sequent, p: str, pol: Polarity, interp: Optional[Interpolator] = None) -> Formula:
    return (interp or default_interpolator).forall(s, p, pol)


# ------------------------------------------------------------ derived forms

def uip_forall(phi: Formula, p: str, interp: Optional[Interpolator] = None,
               tidy: bool = True) -> Formula:
    """Weakest p-free formula implying ``phi``: the positive quantifier over the negative one.

    With ``tidy`` the intermediate formula is simplified (and the
    simplification proved sound) before the second elimination.
    """
    it = interp or default_interpolator
    inner = it.forall(Sequent.of((), phi), p, NEG)
    if tidy:
        inner = normalize_top(simplify(inner, verified=True, prover=it.prover))
    return it.forall(Sequent.of((), inner), p, POS)


def uip_exists(phi: Formula, p: str, interp: Optional[Interpolator] = None,
               tidy: bool = True) -> Formula:
    """Strongest p-free consequence of ``phi``."""
    it = interp or default_interpolator
    inner = it.exists([phi], p, NEG)
    if tidy:
        inner = normalize_top(simplify(inner, verified=True, prover=it.prover))
    return it.exists([inner], p, POS)


def lyndon_interpolant(phi: Formula, psi: Formula, interp: Optional[Interpolator] = None,
                       tidy: bool = True) -> Formula:
    """An interpolant for a derivable ``phi -> psi`` respecting polarities.

    Atoms occurring negatively in ``phi`` but not in ``psi`` are eliminated
    first, then the positive ones; each set in sorted order.
    """
    it = interp or default_interpolator
    phi = normalize_top(phi)
    psi = normalize_top(psi)
    if not it.prover.provable(Sequent.of([phi], psi)):
        raise NotATheorem(f"{render(phi)} -> {render(psi)} is not derivable")
    drop_neg = sorted(phi.neg - psi.neg)
    drop_pos = sorted(phi.pos - psi.pos)
    theta = phi
    for pol, names in ((NEG, drop_neg), (POS, drop_pos)):
        for q in names:
            theta = it.exists([theta], q, pol)
            if tidy:
                theta = normalize_top(simplify(theta, verified=True, prover=it.prover))
    return theta


# ------------------------------------------------------------ simplifier

def _is_top(f: Formula) -> bool:
    return f is TOP or f is TOP_N


def simplify(f: Formula, verified: bool = False, prover: Optional[G4Prover] = None) -> Formula:
    """Unit laws, flattening and duplicate removal in conjunction/disjunction chains.

    The result uses ``#t`` for truth.  With ``verified`` both directions of
    the equivalence are proved and :class:`SimplifyError` signals a failure.
    """
    memo: dict = {}
    out = _simp(f, memo)
    if verified:
        pr = prover or default_prover
        a = normalize_top(f)
        b = normalize_top(out)
        if not (pr.provable(Sequent.of([a], b)) and pr.provable(Sequent.of([b], a))):
            raise SimplifyError(f"simplification changed meaning of {render(f)}")
    return out


def _chain(f: Formula, kind: int, out: list):
    stack = [f]
    while stack:
        g = stack.pop()
        if g.kind == kind:
            stack.append(g.right)
            stack.append(g.left)
        else:
            out.append(g)


def _simp(f: Formula, memo: dict) -> Formula:
    hit = memo.get(f)
    if hit is not None:
        return hit
    k = f.kind
    if k == TOP_K or f is TOP_N:
        out = TOP
    elif k == BOX:
        out = Box(_simp(f.body, memo))
    elif k == IMP:
        a = _simp(f.left, memo)
        b = _simp(f.right, memo)
        if _is_top(b) or a is BOT:
            out = TOP
        elif _is_top(a):
            out = b
        else:
            out = Imp(a, b)
    elif k in (AND, OR):
        raw = []
        _chain(f, k, raw)
        unit, zero = (TOP, BOT) if k == AND else (BOT, TOP)
        ops = []
        out = None
        for g in raw:
            g = _simp(g, memo)
            if g is zero:
                out = zero
                break
            if g is unit:
                continue
            ops.append(g)
        if out is None:
            ops = _distinct(ops)
            if not ops:
                out = unit
            else:
                out = ops[-1]
                build = And if k == AND else Or
                for g in reversed(ops[:-1]):
                    out = build(g, out)
    else:
        out = f
    memo[f] = out
    return out


# ------------------------------------------------------------ verification

class ContextPool:
    """Context formulas for the universal conditions, grouped by provable equivalence.

    Replacing a context formula by an equivalent one never changes
    derivability (cut and weakening are admissible), so checking one member
    per class and filter is exhaustive over the pool.
    """

    def __init__(self, formulas, prover: Optional[G4Prover] = None, reduce: bool = True):
        self.formulas = list(formulas)
        self.prover = prover or default_prover
        self.reduce = reduce
        self._classes = None

    def classes(self) -> list:
        if self._classes is None:
            if not self.reduce:
                self._classes = [[f] for f in self.formulas]
            else:
                reps: list = []
                for f in self.formulas:
                    for cls in reps:
                        r = cls[0]
                        if (self.prover.provable(Sequent.of([f], r))
                                and self.prover.provable(Sequent.of([r], f))):
                            cls.append(f)
                            break
                    else:
                        reps.append([f])
                self._classes = reps
        return self._classes

    def representatives(self, keep) -> list:
        """One formula per class among those satisfying ``keep``."""
        out = []
        for cls in self.classes():
            for f in cls:
                if keep(f):
                    out.append(f)
                    break
        return out


def _bags(formulas, max_size: int):
    from itertools import combinations_with_replacement
    for n in range(max_size + 1):
        for combo in combinations_with_replacement(formulas, n):
            yield combo


@dataclass
class UlipReport:
    kind: str
    target: object
    atom: str
    polarity: Polarity
    raw: Formula
    var: bool
    main: bool
    bound: int
    checked: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.var and self.main and not self.counterexamples

    def to_json(self) -> dict:
        main, univ = ("c1", "c2") if self.kind == "exists" else ("c3", "c4")
        target = (sequent_to_json(self.target) if isinstance(self.target, Sequent)
                  else [render(f) for f in self.target])
        return {
            "query": {"kind": self.kind, "atom": self.atom, "polarity": str(self.polarity),
                      "target": target},
            "raw": render(self.raw),
            "simplified": render(simplify(self.raw)),
            "verified": {"var": self.var, main: self.main,
                         univ: {"bound": self.bound, "checked": self.checked,
                                "counterexamples": self.counterexamples}},
        }


def var_condition(raw: Formula, p: str, pol: Polarity, pos_bound, neg_bound) -> bool:
    return (p not in vars_of(raw, pol) and raw.pos <= pos_bound and raw.neg <= neg_bound)


def verify_ulip(target, p: str, pol: Polarity, weight_bound: int = 4, atoms=("p", "q"),
                max_context: int = 1, interp: Optional[Interpolator] = None,
                pool: Optional[ContextPool] = None) -> UlipReport:
    """Check the interpolant conditions for ``target``.

    A :class:`Sequent` target is checked as a universal interpolant, anything
    else is read as a multiset for the existential one.  Context formulas
    range over ``atoms`` and ``#f`` up to ``weight_bound``.
    """
    from .universe import formulas_up_to
    it = interp or default_interpolator
    pr = it.prover
    if pool is None:
        pool = ContextPool(formulas_up_to(weight_bound, atoms), pr)
    dual = pol.dual
    if isinstance(target, Sequent):
        s = target.normalized()
        raw = it.forall(s, p, pol)
        var = var_condition(raw, p, pol, seq_vars(s, POS), seq_vars(s, NEG))
        main = pr.provable(Sequent(s.ante.add(raw), s.succ))
        rep = UlipReport("forall", s, p, pol, raw, var, main, weight_bound)
        ex_a = it.exists(s.ante, p, dual)
        cs = pool.representatives(lambda f: p not in vars_of(f, pol))
        for C in _bags(cs, max_context):
            rep.checked += 1
            if pr.provable(Sequent(s.ante.add(*C), s.succ)):
                if not pr.provable(Sequent.of(C + (ex_a,), raw)):
                    rep.counterexamples.append({"C": [render(f) for f in C]})
        return rep
    bag = FormulaBag(target).normalized()
    raw = it.exists(bag, p, pol)
    var = var_condition(raw, p, pol, bag_vars(bag, POS), bag_vars(bag, NEG))
    main = pr.provable(Sequent(bag, raw))
    rep = UlipReport("exists", bag, p, pol, raw, var, main, weight_bound)
    cs = pool.representatives(lambda f: p not in vars_of(f, dual))
    ds = [None] + pool.representatives(lambda f: p not in vars_of(f, pol))
    for C in _bags(cs, max_context):
        left = bag.add(*C)
        for D in ds:
            rep.checked += 1
            if pr.provable(Sequent(left, D)):
                if not pr.provable(Sequent.of(C + (raw,), D)):
                    rep.counterexamples.append({"C": [render(f) for f in C],
                                                "D": None if D is None else render(D)})
    return rep
