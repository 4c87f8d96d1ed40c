"""Exhaustive generation of formulas and sequents over a small atom alphabet."""
from __future__ import annotations

from itertools import combinations_with_replacement

from .formula import BOT, And, Atom, Box, Imp, Or, Formula
from .sequent import FormulaBag, Sequent

__all__ = ["formulas_by_weight", "formulas_up_to", "bags_up_to", "sequents_up_to"]


def formulas_by_weight(atoms=("p", "q"), max_weight: int = 4, with_bot: bool = True) -> list:
    """``levels[w]`` lists every formula of weight exactly ``w``.

    Leaves are the atoms and (optionally) #f; #t is left out because it is
    sugar for #f -> #f, which the enumeration already contains.
    """
    levels = [[] for _ in range(max_weight + 1)]
    if max_weight >= 1:
        levels[1] = [Atom(a) for a in atoms] + ([BOT] if with_bot else [])
    for w in range(2, max_weight + 1):
        out = [Box(f) for f in levels[w - 1]]
        for wl in range(1, w - 1):
            for a in levels[wl]:
                for b in levels[w - 1 - wl]:
                    out.append(Or(a, b))
                    out.append(Imp(a, b))
        for wl in range(1, w - 2):
            for a in levels[wl]:
                for b in levels[w - 2 - wl]:
                    out.append(And(a, b))
        levels[w] = out
    return levels


def formulas_up_to(max_weight: int, atoms=("p", "q"), with_bot: bool = True) -> list:
    levels = formulas_by_weight(atoms, max_weight, with_bot)
    return [f for level in levels for f in level]


def bags_up_to(formulas, max_size: int) -> list:
    """All multisets of at most ``max_size`` members of ``formulas``."""
    out = []
    for n in range(max_size + 1):
        for combo in combinations_with_replacement(formulas, n):
            out.append(FormulaBag(combo))
    return out


def sequents_up_to(formulas, max_ante: int = 2, empty_succ: bool = True):
    """Yield every ``bag => d`` with ``|bag| <= max_ante`` and ``d`` one formula or empty."""
    succs = ([None] if empty_succ else []) + list(formulas)
    for bag in bags_up_to(formulas, max_ante):
        for d in succs:
            yield Sequent(bag, d)
