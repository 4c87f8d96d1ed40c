"""Formula multisets, single-conclusion sequents and the weight order on them."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

from .formula import Formula, Polarity, POS, normalize_top, parse, render

__all__ = [
    "FormulaBag", "Sequent", "SequentSyntaxError", "bag_precedes", "seq_precedes",
    "items_precede", "multiply", "seq_vars", "bag_vars", "canonical_key",
    "parse_sequent", "parse_bag", "sequent_to_json", "sequent_from_json",
]


def _sort(fs) -> tuple:
    return tuple(sorted(fs, key=_KEY))


def _KEY(f):
    return f.key


class FormulaBag:
    """An immutable finite multiset of formulas.

    ``items`` holds every occurrence, sorted by (weight, structure); two bags
    are equal iff their ``items`` tuples are.
    """

    __slots__ = ("items",)

    def __init__(self, formulas: Iterable[Formula] = ()):
        if isinstance(formulas, FormulaBag):
            self.items = formulas.items
        else:
            self.items = _sort(formulas)

    @classmethod
    def _from_sorted(cls, items: tuple) -> "FormulaBag":
        bag = object.__new__(cls)
        bag.items = items
        return bag

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __bool__(self):
        return bool(self.items)

    def __contains__(self, f):
        return f in self.items

    def __eq__(self, other):
        return isinstance(other, FormulaBag) and self.items == other.items

    def __hash__(self):
        return hash(self.items)

    def __repr__(self):
        return "FormulaBag([" + ", ".join(render(f) for f in self.items) + "])"

    def counts(self) -> dict:
        return dict(Counter(self.items))

    def multiplicity(self, f: Formula) -> int:
        return self.items.count(f)

    def distinct(self) -> tuple:
        """Distinct members in canonical order."""
        return tuple(dict.fromkeys(self.items))

    def add(self, *fs: Formula) -> "FormulaBag":
        return FormulaBag(self.items + fs)

    def union(self, other: "FormulaBag") -> "FormulaBag":
        return FormulaBag(self.items + tuple(other))

    def remove_one(self, f: Formula) -> "FormulaBag":
        i = self.items.index(f)  # ValueError when absent
        return FormulaBag._from_sorted(self.items[:i] + self.items[i + 1:])

    def replace_one(self, f: Formula, *new: Formula) -> "FormulaBag":
        """Remove one occurrence of ``f`` and add ``new``."""
        i = self.items.index(f)
        return FormulaBag(self.items[:i] + self.items[i + 1:] + new)

    def normalized(self) -> "FormulaBag":
        return FormulaBag(normalize_top(f) for f in self.items)

    def render(self) -> str:
        return ", ".join(render(f) for f in self.items)


@dataclass(frozen=True)
class Sequent:
    """``ante => succ`` with at most one succedent formula."""

    ante: FormulaBag
    succ: Optional[Formula] = None

    def __post_init__(self):
        if not isinstance(self.ante, FormulaBag):
            object.__setattr__(self, "ante", FormulaBag(self.ante))
        if self.succ is not None and not isinstance(self.succ, Formula):
            raise TypeError("succedent must be a formula or None")

    @classmethod
    def of(cls, ante=(), succ=None) -> "Sequent":
        return cls(FormulaBag(ante), succ)

    @property
    def succ_bag(self) -> FormulaBag:
        return FormulaBag(() if self.succ is None else (self.succ,))

    def key(self) -> tuple:
        return (self.ante.items, self.succ)

    def normalized(self) -> "Sequent":
        return Sequent(self.ante.normalized(),
                       None if self.succ is None else normalize_top(self.succ))

    def all_formulas(self) -> tuple:
        return self.ante.items if self.succ is None else self.ante.items + (self.succ,)

    def __str__(self):
        right = "" if self.succ is None else render(self.succ)
        return " ".join(x for x in (self.ante.render(), "=>", right) if x)


def canonical_key(s: Sequent) -> tuple:
    """Hashable key; equal sequents (as multisets) get equal keys."""
    return s.key()


def items_precede(g: tuple, d: tuple) -> bool:
    """Multiset extension of the weight order on occurrence tuples.

    True iff, after cancelling common occurrences, the rest of ``d`` is
    nonempty and each leftover of ``g`` weighs less than some leftover of ``d``.
    """
    rest = list(d)
    gmax = 0
    for f in g:
        if f in rest:
            rest.remove(f)
        elif f.weight > gmax:
            gmax = f.weight
    dmax = 0
    for h in rest:
        if h.weight > dmax:
            dmax = h.weight
    return gmax < dmax


def bag_precedes(g, d) -> bool:
    return items_precede(tuple(g), tuple(d))


def seq_precedes(s, t) -> bool:
    """``s`` lower than ``t``; either side may be a bag or a sequent."""
    return items_precede(_flat(s), _flat(t))


def _flat(x) -> tuple:
    if isinstance(x, Sequent):
        return x.all_formulas()
    return tuple(x)


class SingleConclusionError(ValueError):
    pass


def multiply(s: Sequent, t: Sequent) -> Sequent:
    if s.succ is not None and t.succ is not None:
        raise SingleConclusionError("product of two sequents with nonempty succedents")
    return Sequent(s.ante.union(t.ante), s.succ if s.succ is not None else t.succ)


def bag_vars(fs, pol: Polarity) -> frozenset:
    out = frozenset()
    for f in fs:
        out |= f.pos if pol is POS else f.neg
    return out


def seq_vars(s: Sequent, pol: Polarity) -> frozenset:
    """Antecedent counted with the dual polarity, succedent with ``pol``."""
    out = bag_vars(s.ante, pol.dual)
    if s.succ is not None:
        out |= s.succ.pos if pol is POS else s.succ.neg
    return out


# ------------------------------------------------------------- text / json

class SequentSyntaxError(ValueError):
    pass


def parse_bag(text: str) -> FormulaBag:
    """Comma separated formulas; the empty string is the empty bag."""
    text = text.strip()
    if not text:
        return FormulaBag()
    return FormulaBag(parse(part) for part in text.split(","))


def parse_sequent(text: str) -> Sequent:
    """``A, B => C`` or ``A, B =>``."""
    parts = text.split("=>")
    if len(parts) != 2:
        raise SequentSyntaxError(f"expected exactly one '=>' in {text!r}")
    ante = parse_bag(parts[0])
    right = parts[1].strip()
    if "," in right:
        raise SequentSyntaxError("succedent holds at most one formula")
    return Sequent(ante, parse(right) if right else None)


def sequent_to_json(s: Sequent) -> dict:
    return {"ante": [render(f) for f in s.ante],
            "succ": None if s.succ is None else render(s.succ)}


def sequent_from_json(obj) -> Sequent:
    if isinstance(obj, str):
        obj = json.loads(obj)
    succ = obj.get("succ")
    return Sequent(FormulaBag(parse(t) for t in obj.get("ante", [])),
                   None if succ is None else parse(succ))
