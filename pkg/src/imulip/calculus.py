"""Rule tables for G3iM^w, G4w and G4iM with backward rule enumeration.

Every enumerator returns :class:`RuleApp` values, one per distinct
(rule, premise list).  Premises in G4 calculi are checked to be strictly
lower than the conclusion when the application is built.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .formula import (ATOM, AND, BOT_K, BOX, IMP, OR, And, Box, Formula, Imp, Or,
                      render)
from .sequent import FormulaBag, Sequent, seq_precedes, sequent_to_json

__all__ = [
    "RuleId", "RuleApp", "RuleMismatch", "DescentError", "G3", "G4W", "G4IM",
    "CALCULI", "is_axiom", "backward_apps_g4im", "backward_apps_g4w",
    "backward_left_apps_for_exists", "backward_apps_g3", "forward", "check_step",
]


class RuleId(enum.Enum):
    AX = "Ax"
    LBOT = "LBot"
    LAND = "LAnd"
    RAND = "RAnd"
    LOR = "LOr"
    ROR1 = "ROr1"
    ROR2 = "ROr2"
    LIMP_G3 = "LImpG3"
    RIMP = "RImp"
    MSEQ = "MSeq"
    LP_IMP = "LpImp"
    LAND_IMP = "LAndImp"
    LOR_IMP = "LOrImp"
    LIMP_IMP = "LImpImp"
    LW = "Lw"
    RW = "Rw"
    M = "M"
    LM_IMP = "LMImp"

    def __str__(self):
        return self.value

    @property
    def side(self) -> str:
        return _SIDE[self]


_SIDE = {
    RuleId.AX: "axiom", RuleId.LBOT: "axiom",
    RuleId.LAND: "left", RuleId.LOR: "left", RuleId.LIMP_G3: "left",
    RuleId.LP_IMP: "left", RuleId.LAND_IMP: "left", RuleId.LOR_IMP: "left",
    RuleId.LIMP_IMP: "left",
    RuleId.RAND: "right", RuleId.ROR1: "right", RuleId.ROR2: "right",
    RuleId.RIMP: "right",
    RuleId.LW: "structural", RuleId.RW: "structural",
    RuleId.M: "modal", RuleId.LM_IMP: "modal", RuleId.MSEQ: "modal",
}

_AXIOMS = {RuleId.AX, RuleId.LBOT}
G3 = frozenset(_AXIOMS | {RuleId.LAND, RuleId.RAND, RuleId.LOR, RuleId.ROR1, RuleId.ROR2,
                          RuleId.LIMP_G3, RuleId.RIMP, RuleId.MSEQ})
G4W = frozenset(_AXIOMS | {RuleId.LAND, RuleId.RAND, RuleId.LOR, RuleId.ROR1, RuleId.ROR2,
                           RuleId.LP_IMP, RuleId.LAND_IMP, RuleId.LOR_IMP, RuleId.LIMP_IMP,
                           RuleId.RIMP, RuleId.LW, RuleId.RW})
G4IM = frozenset(G4W | {RuleId.M, RuleId.LM_IMP})
CALCULI = {"g3": G3, "g4w": G4W, "g4": G4IM, "g4im": G4IM}


class DescentError(AssertionError):
    """A premise was not strictly lower than its conclusion."""


class RuleMismatch(ValueError):
    pass


@dataclass(frozen=True)
class RuleApp:
    rule: RuleId
    conclusion: Sequent
    premises: tuple
    contextual: tuple
    principal: Optional[Formula] = None

    def to_json(self) -> dict:
        return {"rule": self.rule.value,
                "conclusion": sequent_to_json(self.conclusion),
                "premises": [sequent_to_json(p) for p in self.premises],
                "contextual": list(self.contextual)}

    def __str__(self):
        prem = " | ".join(str(p) for p in self.premises) or "-"
        return f"{self.rule}: {prem}  /  {self.conclusion}"


def is_axiom(s: Sequent) -> Optional[RuleId]:
    d = s.succ
    if d is not None and d.kind == ATOM and d in s.ante:
        return RuleId.AX
    for f in s.ante:
        if f.kind == BOT_K:
            return RuleId.LBOT
    return None


class _Collector:
    """Builds deduplicated rule applications for one conclusion."""

    def __init__(self, conclusion: Sequent, check_descent: bool):
        self.conclusion = conclusion
        self.check_descent = check_descent
        self.apps = {}

    def add(self, rule, premises, contextual, principal):
        premises = tuple(premises)
        k = (rule, tuple(p.key() for p in premises))
        if k in self.apps:
            return
        if self.check_descent:
            for p in premises:
                if not seq_precedes(p, self.conclusion):
                    raise DescentError(f"{rule}: premise {p} not lower than {self.conclusion}")
        self.apps[k] = RuleApp(rule, self.conclusion, premises, tuple(contextual), principal)

    def result(self) -> list:
        return list(self.apps.values())


def _left_g4(c: _Collector):
    s = c.conclusion
    ante, d = s.ante, s.succ
    for f in ante.distinct():
        k = f.kind
        if k == AND:
            c.add(RuleId.LAND, [Sequent(ante.replace_one(f, f.left, f.right), d)], [True], f)
        elif k == OR:
            c.add(RuleId.LOR, [Sequent(ante.replace_one(f, f.left), d),
                               Sequent(ante.replace_one(f, f.right), d)], [True, True], f)
        elif k == IMP:
            a, b = f.left, f.right
            ak = a.kind
            if ak == ATOM:
                if a in ante:
                    c.add(RuleId.LP_IMP, [Sequent(ante.replace_one(f, b), d)], [True], f)
            elif ak == AND:
                c.add(RuleId.LAND_IMP,
                      [Sequent(ante.replace_one(f, Imp(a.left, Imp(a.right, b))), d)], [True], f)
            elif ak == OR:
                c.add(RuleId.LOR_IMP,
                      [Sequent(ante.replace_one(f, Imp(a.left, b), Imp(a.right, b)), d)],
                      [True], f)
            elif ak == IMP:
                c.add(RuleId.LIMP_IMP,
                      [Sequent(ante.replace_one(f, Imp(a.right, b)), a),
                       Sequent(ante.replace_one(f, b), d)], [False, True], f)


def _lw(c: _Collector):
    s = c.conclusion
    for f in s.ante.distinct():
        c.add(RuleId.LW, [Sequent(s.ante.remove_one(f), s.succ)], [True], f)


def _right_g4(c: _Collector):
    s = c.conclusion
    ante, d = s.ante, s.succ
    if d is None:
        return
    k = d.kind
    if k == AND:
        c.add(RuleId.RAND, [Sequent(ante, d.left), Sequent(ante, d.right)], [False, False], d)
    elif k == OR:
        c.add(RuleId.ROR1, [Sequent(ante, d.left)], [False], d)
        c.add(RuleId.ROR2, [Sequent(ante, d.right)], [False], d)
    elif k == IMP:
        c.add(RuleId.RIMP, [Sequent(ante.add(d.left), d.right)], [False], d)
    c.add(RuleId.RW, [Sequent(ante, None)], [False], d)


def _modal_g4(c: _Collector):
    s = c.conclusion
    ante, d = s.ante, s.succ
    items = ante.items
    if d is not None and d.kind == BOX and len(items) == 1 and items[0].kind == BOX:
        c.add(RuleId.M, [Sequent.of([items[0].body], d.body)], [False], d)
    boxes = [g for g in ante.distinct() if g.kind == BOX]
    if not boxes:
        return
    for f in ante.distinct():
        if f.kind == IMP and f.left.kind == BOX:
            psi, theta = f.left.body, f.right
            rest = Sequent(ante.replace_one(f, theta), d)
            for g in boxes:
                c.add(RuleId.LM_IMP, [Sequent.of([g.body], psi), rest], [False, True], f)


def backward_apps_g4im(s: Sequent, check_descent: bool = True) -> list:
    """Every G4iM rule instance with conclusion ``s`` (axioms excluded)."""
    c = _Collector(s, check_descent)
    _left_g4(c)
    _lw(c)
    _right_g4(c)
    _modal_g4(c)
    return c.result()


def backward_apps_g4w(s: Sequent, check_descent: bool = True) -> list:
    """As :func:`backward_apps_g4im` without M and LM->."""
    c = _Collector(s, check_descent)
    _left_g4(c)
    _lw(c)
    _right_g4(c)
    return c.result()


def backward_left_apps_for_exists(bag: FormulaBag, check_descent: bool = True) -> list:
    """Left G4w rules (Lp-> included) applied backward to ``bag =>``."""
    c = _Collector(Sequent(FormulaBag(bag), None), check_descent)
    _left_g4(c)
    _lw(c)
    return c.result()


def backward_apps_g3(s: Sequent) -> list:
    """G3iM^w rule instances with conclusion ``s``.

    The left rules accept an empty succedent as their context.
    """
    c = _Collector(s, False)
    ante, d = s.ante, s.succ
    for f in ante.distinct():
        k = f.kind
        if k == AND:
            c.add(RuleId.LAND, [Sequent(ante.replace_one(f, f.left, f.right), d)], [True], f)
        elif k == OR:
            c.add(RuleId.LOR, [Sequent(ante.replace_one(f, f.left), d),
                               Sequent(ante.replace_one(f, f.right), d)], [True, True], f)
        elif k == IMP:
            c.add(RuleId.LIMP_G3, [Sequent(ante, f.left), Sequent(ante.replace_one(f, f.right), d)],
                  [False, True], f)
    if d is not None:
        k = d.kind
        if k == AND:
            c.add(RuleId.RAND, [Sequent(ante, d.left), Sequent(ante, d.right)], [False, False], d)
        elif k == OR:
            c.add(RuleId.ROR1, [Sequent(ante, d.left)], [False], d)
            c.add(RuleId.ROR2, [Sequent(ante, d.right)], [False], d)
        elif k == IMP:
            c.add(RuleId.RIMP, [Sequent(ante.add(d.left), d.right)], [False], d)
        elif k == BOX:
            for g in ante.distinct():
                if g.kind == BOX:
                    c.add(RuleId.MSEQ, [Sequent.of([g.body], d.body)], [False], g)
    return c.result()


# ------------------------------------------------------------ forward rules

def _take(bag: FormulaBag, *fs) -> FormulaBag:
    try:
        for f in fs:
            bag = bag.remove_one(f)
    except ValueError:
        raise RuleMismatch("premise lacks an active formula") from None
    return bag


def _one(premises, n):
    if len(premises) != n:
        raise RuleMismatch(f"expected {n} premise(s), got {len(premises)}")


def _single_ante(p: Sequent) -> Formula:
    if len(p.ante) != 1 or p.succ is None:
        raise RuleMismatch("premise must have the form A => B")
    return p.ante.items[0]


def forward(rule: RuleId, premises, principal: Optional[Formula]) -> Sequent:
    """Conclusion of ``rule`` applied forward to ``premises``.

    ``principal`` is the main formula of the conclusion (the weakened formula
    for Lw/Rw, the boxed formula of the antecedent for MSeq).  MSeq absorbs an
    arbitrary context, so its result carries only the boxed formula.
    """
    premises = list(premises)
    P = principal
    if rule in _AXIOMS:
        raise RuleMismatch("axioms have no premises to run forward")
    if rule is RuleId.LW:
        _one(premises, 1)
        return Sequent(premises[0].ante.add(P), premises[0].succ)
    if rule is RuleId.RW:
        _one(premises, 1)
        if premises[0].succ is not None:
            raise RuleMismatch("Rw premise must have an empty succedent")
        return Sequent(premises[0].ante, P)
    if rule is RuleId.M:
        _one(premises, 1)
        a = _single_ante(premises[0])
        return Sequent.of([Box(a)], Box(premises[0].succ))
    if rule is RuleId.MSEQ:
        _one(premises, 1)
        a = _single_ante(premises[0])
        return Sequent.of([Box(a)], Box(premises[0].succ))
    if P is None:
        raise RuleMismatch("rule needs a principal formula")
    k = P.kind
    if rule is RuleId.LAND and k == AND:
        _one(premises, 1)
        p = premises[0]
        return Sequent(_take(p.ante, P.left, P.right).add(P), p.succ)
    if rule is RuleId.LOR and k == OR:
        _one(premises, 2)
        p1, p2 = premises
        c1 = _take(p1.ante, P.left).add(P)
        c2 = _take(p2.ante, P.right).add(P)
        if c1 != c2 or p1.succ != p2.succ:
            raise RuleMismatch("LOr premises disagree on context")
        return Sequent(c1, p1.succ)
    if rule is RuleId.LP_IMP and k == IMP and P.left.kind == ATOM:
        _one(premises, 1)
        p = premises[0]
        rest = _take(p.ante, P.right)
        if P.left not in rest:
            raise RuleMismatch("LpImp needs the atom in the context")
        return Sequent(rest.add(P), p.succ)
    if rule is RuleId.LAND_IMP and k == IMP and P.left.kind == AND:
        _one(premises, 1)
        p = premises[0]
        a = P.left
        return Sequent(_take(p.ante, Imp(a.left, Imp(a.right, P.right))).add(P), p.succ)
    if rule is RuleId.LOR_IMP and k == IMP and P.left.kind == OR:
        _one(premises, 1)
        p = premises[0]
        a = P.left
        return Sequent(_take(p.ante, Imp(a.left, P.right), Imp(a.right, P.right)).add(P), p.succ)
    if rule is RuleId.LIMP_IMP and k == IMP and P.left.kind == IMP:
        _one(premises, 2)
        p1, p2 = premises
        a = P.left
        gamma = _take(p2.ante, P.right)
        if p1.succ is not a or _take(p1.ante, Imp(a.right, P.right)) != gamma:
            raise RuleMismatch("LImpImp left premise does not match")
        return Sequent(gamma.add(P), p2.succ)
    if rule is RuleId.LIMP_G3 and k == IMP:
        _one(premises, 2)
        p1, p2 = premises
        gamma = _take(p2.ante, P.right).add(P)
        if p1.succ is not P.left or p1.ante != gamma:
            raise RuleMismatch("L-> left premise does not match")
        return Sequent(gamma, p2.succ)
    if rule is RuleId.RAND and k == AND:
        _one(premises, 2)
        p1, p2 = premises
        if p1.ante != p2.ante or p1.succ is not P.left or p2.succ is not P.right:
            raise RuleMismatch("RAnd premises do not match")
        return Sequent(p1.ante, P)
    if rule is RuleId.ROR1 and k == OR:
        _one(premises, 1)
        if premises[0].succ is not P.left:
            raise RuleMismatch("ROr1 premise does not match")
        return Sequent(premises[0].ante, P)
    if rule is RuleId.ROR2 and k == OR:
        _one(premises, 1)
        if premises[0].succ is not P.right:
            raise RuleMismatch("ROr2 premise does not match")
        return Sequent(premises[0].ante, P)
    if rule is RuleId.RIMP and k == IMP:
        _one(premises, 1)
        p = premises[0]
        if p.succ is not P.right:
            raise RuleMismatch("RImp premise does not match")
        return Sequent(_take(p.ante, P.left), P)
    if rule is RuleId.LM_IMP and k == IMP and P.left.kind == BOX:
        _one(premises, 2)
        p1, p2 = premises
        phi = _single_ante(p1)
        if p1.succ is not P.left.body:
            raise RuleMismatch("LMImp left premise does not match")
        gamma = _take(p2.ante, P.right)
        if Box(phi) not in gamma:
            raise RuleMismatch("LMImp needs the boxed formula in the context")
        return Sequent(gamma.add(P), p2.succ)
    raise RuleMismatch(f"{rule} does not fit principal {render(P)}")


def check_step(rule: RuleId, conclusion: Sequent, premises, calculus=G4IM) -> bool:
    """True iff ``premises / conclusion`` is an instance of ``rule`` in ``calculus``."""
    if rule not in calculus:
        return False
    premises = list(premises)
    if rule in _AXIOMS:
        return not premises and (
            (rule is RuleId.AX and conclusion.succ is not None
             and conclusion.succ.kind == ATOM and conclusion.succ in conclusion.ante)
            or (rule is RuleId.LBOT and any(f.kind == BOT_K for f in conclusion.ante)))
    if rule is RuleId.MSEQ:
        try:
            pattern = forward(rule, premises, None)
        except RuleMismatch:
            return False
        return conclusion.succ is pattern.succ and pattern.ante.items[0] in conclusion.ante
    if rule is RuleId.M:
        try:
            return forward(rule, premises, None) == conclusion
        except RuleMismatch:
            return False
    candidates = list(conclusion.ante.distinct())
    if conclusion.succ is not None:
        candidates.append(conclusion.succ)
    for P in candidates:
        try:
            if forward(rule, premises, P) == conclusion:
                return True
        except RuleMismatch:
            continue
    return False
