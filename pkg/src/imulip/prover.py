"""Decision procedures: a terminating G4iM search and a loop-checked G3iM^w oracle.

The G4 search works on raw keys ``(ante_items, succ)``.  Its cache records,
for every visited sequent, either ``False`` or the rule used to prove it, so a
derivation can be rebuilt on demand.
"""
from __future__ import annotations

import sys
import threading
from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional

from .calculus import DescentError, G3, G4IM, RuleId, check_step
from .formula import ATOM, AND, BOT, BOT_K, BOX, IMP, OR, TOP_K, Formula, Imp, normalize_top, render
from .sequent import FormulaBag, Sequent, items_precede, sequent_to_json

__all__ = ["ProofCache", "G4Prover", "G3Prover", "Derivation", "prove", "provable",
           "provable_g3", "check_derivation", "default_prover", "run_deep"]

_MISSING = object()
_MACRO = "M*"


def _k(f):
    return f.key


def _ins(items: tuple, f: Formula) -> tuple:
    i = bisect_right(items, f.key, key=_k)
    return items[:i] + (f,) + items[i:]


def _ins2(items: tuple, f: Formula, g: Formula) -> tuple:
    return _ins(_ins(items, f), g)


def _norm_key(s: Sequent) -> tuple:
    s = s.normalized()
    return (s.ante.items, s.succ)


class ProofCache:
    """Shared table of G4 results keyed on sequent keys.

    Entries are write-once and every value written for a key is the same, so
    concurrent readers under the interpreter lock never see a torn state.
    Worker processes keep their own caches and :meth:`merge` them afterwards.
    """

    def __init__(self):
        self.table: dict = {}

    def __len__(self):
        return len(self.table)

    def get(self, key, default=None):
        return self.table.get(key, default)

    def merge(self, other: "ProofCache"):
        for k, v in other.table.items():
            self.table.setdefault(k, v)

    def clear(self):
        self.table.clear()


_valid_memo: dict = {}


def _trivially_valid(f: Formula) -> bool:
    """Cheap syntactic check for formulas derivable from nothing."""
    hit = _valid_memo.get(f)
    if hit is not None:
        return hit
    k = f.kind
    if k == IMP:
        out = f.left.kind == BOT_K or _trivially_valid(f.right)
    elif k == AND:
        out = _trivially_valid(f.left) and _trivially_valid(f.right)
    elif k == TOP_K:
        out = True
    else:
        out = False
    _valid_memo[f] = out
    return out


class _Refuter:
    """Classical truth tables used to cut off hopeless branches early.

    Reading the box as the identity, as constantly true or as constantly
    false makes every G4iM rule classically sound, so a sequent falsified by
    a valuation under any of these readings has no derivation.  Tables are
    bitmasks over all valuations of the atoms seen so far.
    """

    def __init__(self):
        self.atoms: dict = {}
        self.memo: dict = {}
        self.full = 1

    def _grow(self, name):
        self.atoms[name] = len(self.atoms)
        n = 1 << len(self.atoms)
        self.full = (1 << n) - 1
        self.memo.clear()

    def _atom(self, i):
        return sum(1 << v for v in range(self.full.bit_length()) if v >> i & 1)

    def table(self, f: Formula) -> tuple:
        hit = self.memo.get(f)
        if hit is not None:
            return hit
        k = f.kind
        full = self.full
        if k == ATOM:
            m = self._atom(self.atoms[f.name])
            out = (m, m, m)
        elif k == BOT_K:
            out = (0, 0, 0)
        elif k == TOP_K:
            out = (full, full, full)
        elif k == BOX:
            out = (self.table(f.body)[0], full, 0)
        else:
            a, b = self.table(f.left), self.table(f.right)
            if k == AND:
                out = tuple(x & y for x, y in zip(a, b))
            elif k == OR:
                out = tuple(x | y for x, y in zip(a, b))
            else:
                out = tuple((full ^ x) | y for x, y in zip(a, b))
        self.memo[f] = out
        return out

    def _register(self, f: Formula):
        for name in f.pos | f.neg:
            if name not in self.atoms:
                self._grow(name)

    def refutes(self, A: tuple, d) -> bool:
        memo = self.memo
        for f in A:
            if f not in memo:
                self._register(f)
        if d is not None and d not in memo:
            self._register(d)
        a0 = a1 = a2 = self.full
        for f in A:
            t = memo.get(f) or self.table(f)
            a0 &= t[0]
            a1 &= t[1]
            a2 &= t[2]
        if d is None:
            return bool(a0 or a1 or a2)
        s = memo.get(d) or self.table(d)
        return bool(a0 & ~s[0] or a1 & ~s[1] or a2 & ~s[2])


class G4Prover:
    """Backward proof search in G4iM.

    Every premise is asserted lower than its conclusion, so the search
    terminates without loop checks.  Invertible steps are applied eagerly.
    """

    def __init__(self, cache: Optional[ProofCache] = None, check_descent: bool = True,
                 refute: bool = True):
        self.cache = cache if cache is not None else ProofCache()
        self.check_descent = check_descent
        self.refuter = _Refuter() if refute else None
        self.calls = 0
        #: Answers loaded from a persistent store; consulted for top-level queries only.
        self.known: dict = {}

    # -- public API -------------------------------------------------------
    def provable(self, s: Sequent) -> bool:
        key = _norm_key(s)
        hit = self.known.get(key)
        if hit is not None:
            return hit
        return self._prove(*key)

    def provable_key(self, ante: tuple, succ) -> bool:
        """As :meth:`provable` for an already normalized key."""
        return self._prove(ante, succ)

    def prove(self, s: Sequent) -> Optional["Derivation"]:
        key = _norm_key(s)
        if not self._prove(*key):
            return None
        return self._rebuild(key)

    # -- search -----------------------------------------------------------
    def _descends(self, prem, concl):
        if self.check_descent:
            a = prem[0] if prem[1] is None else prem[0] + (prem[1],)
            b = concl[0] if concl[1] is None else concl[0] + (concl[1],)
            if not items_precede(a, b):
                raise DescentError(f"premise {prem} not lower than {concl}")

    def _all(self, key, rule, prems, extra=None) -> bool:
        for p in prems:
            self._descends(p, key)
        for p in prems:
            if not self._prove(*p):
                return False
        self.cache.table[key] = (rule, tuple(prems), extra)
        return True

    def _prove(self, A: tuple, d) -> bool:
        key = (A, d)
        tab = self.cache.table
        hit = tab.get(key, _MISSING)
        if hit is not _MISSING:
            return hit is not False
        self.calls += 1
        if self.refuter is not None and self.refuter.refutes(A, d):
            tab[key] = False
            return False
        ok = self._search(key, A, d)
        if not ok:
            tab[key] = False
        return ok

    def _search(self, key, A, d) -> bool:
        tab = self.cache.table
        if d is not None and d.kind == ATOM and d in A:
            tab[key] = (RuleId.AX, (), None)
            return True
        if BOT in A:
            tab[key] = (RuleId.LBOT, (), None)
            return True

        # Invertible left steps with a single interesting premise.  A repeated
        # formula, or an implication whose conclusion is already present, is
        # weakened away: contraction and cut are admissible, so nothing is lost.
        present = set(A)
        for i, f in enumerate(A):
            if (i and A[i - 1] is f) or (f.kind == IMP and f.right in present):
                return self._all(key, RuleId.LW, [(A[:i] + A[i + 1:], d)], f)
        for i, f in enumerate(A):
            k = f.kind
            if k == AND:
                rest = A[:i] + A[i + 1:]
                return self._all(key, RuleId.LAND, [(_ins2(rest, f.left, f.right), d)], f)
            if k != IMP:
                continue
            a = f.left
            ak = a.kind
            rest = A[:i] + A[i + 1:]
            if ak == BOT_K or _trivially_valid(f):
                return self._all(key, RuleId.LW, [(rest, d)], f)
            if ak == ATOM:
                if a in rest:
                    return self._all(key, RuleId.LP_IMP, [(_ins(rest, f.right), d)], f)
            elif ak == AND:
                g = Imp(a.left, Imp(a.right, f.right))
                return self._all(key, RuleId.LAND_IMP, [(_ins(rest, g), d)], f)
            elif ak == OR:
                return self._all(key, RuleId.LOR_IMP,
                                 [(_ins2(rest, Imp(a.left, f.right), Imp(a.right, f.right)), d)], f)
            elif ak == IMP and a.left.kind == BOT_K:
                # (#f -> b) -> c: the left premise is always derivable.
                return self._all(key, RuleId.LIMP_IMP,
                                 [(_ins(rest, Imp(a.right, f.right)), a), (_ins(rest, f.right), d)], f)

        if d is not None:
            dk = d.kind
            if dk == IMP:
                return self._all(key, RuleId.RIMP, [(_ins(A, d.left), d.right)], d)
            if dk == AND:
                return self._all(key, RuleId.RAND, [(A, d.left), (A, d.right)], d)
        for i, f in enumerate(A):
            if f.kind == OR:
                rest = A[:i] + A[i + 1:]
                return self._all(key, RuleId.LOR,
                                 [(_ins(rest, f.left), d), (_ins(rest, f.right), d)], f)

        # Non-invertible choices.
        distinct = tuple(dict.fromkeys(A))
        boxes = [g for g in distinct if g.kind == BOX]
        if d is not None:
            dk = d.kind
            if dk == BOX:
                for g in boxes:
                    prem = ((g.body,), d.body)
                    self._descends(prem, key)
                    if self._prove(*prem):
                        tab[key] = (_MACRO, (prem,), g)
                        return True
            elif dk == OR:
                for rule, side in ((RuleId.ROR1, d.left), (RuleId.ROR2, d.right)):
                    prem = (A, side)
                    self._descends(prem, key)
                    if self._prove(*prem):
                        tab[key] = (rule, (prem,), d)
                        return True
        for i, f in enumerate(A):
            if f.kind != IMP or (i and A[i - 1] is f):
                continue
            a = f.left
            if a.kind == BOX and boxes:
                rest = A[:i] + A[i + 1:]
                right = (_ins(rest, f.right), d)
                for g in boxes:
                    left = ((g.body,), a.body)
                    if self._all(key, RuleId.LM_IMP, [left, right], f):
                        return True
            elif a.kind == IMP:
                rest = A[:i] + A[i + 1:]
                prems = [(_ins(rest, Imp(a.right, f.right)), a), (_ins(rest, f.right), d)]
                if self._all(key, RuleId.LIMP_IMP, prems, f):
                    return True
        return False

    # -- derivations --------------------------------------------------------
    def _rebuild(self, key) -> "Derivation":
        tab = self.cache.table
        w = tab[key]
        rule, prems, extra = w
        seq = Sequent(FormulaBag._from_sorted(key[0]), key[1])
        if rule == _MACRO:
            # Weaken down to the single boxed formula, then apply M.
            g = extra
            node = Derivation(Sequent.of([g], key[1]), RuleId.M, (self._rebuild(prems[0]),))
            cur = list(key[0])
            cur.remove(g)
            ctx = [g]
            for f in cur:
                ctx.append(f)
                node = Derivation(Sequent.of(ctx, key[1]), RuleId.LW, (node,))
            return node
        return Derivation(seq, rule, tuple(self._rebuild(p) for p in prems))


@dataclass(frozen=True)
class Derivation:
    """A finite proof tree; ``rule`` labels the last inference."""

    root: Sequent
    rule: RuleId
    children: tuple = ()

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def height(self) -> int:
        return 1 + max((c.height() for c in self.children), default=0)

    def to_json(self) -> dict:
        return {"seq": sequent_to_json(self.root), "rule": self.rule.value,
                "children": [c.to_json() for c in self.children]}

    def to_text(self, indent: int = 0) -> str:
        lines = [f"{'  ' * indent}{self.root}    [{self.rule}]"]
        for c in self.children:
            lines.append(c.to_text(indent + 1))
        return "\n".join(lines)

    def to_latex(self) -> str:
        """bussproofs source for the tree."""
        out = []
        self._latex(out)
        return "\\begin{prooftree}\n" + "\n".join(out) + "\n\\end{prooftree}"

    def _latex(self, out):
        for c in self.children:
            c._latex(out)
        seq = _latex_seq(self.root)
        n = len(self.children)
        if n == 0:
            out.append(f"\\RightLabel{{\\scriptsize {self.rule}}}")
            out.append(f"\\AxiomC{{}}")
            out.append(f"\\UnaryInfC{{${seq}$}}")
        else:
            out.append(f"\\RightLabel{{\\scriptsize {self.rule}}}")
            out.append(f"\\{['', 'Unary', 'Binary', 'Trinary'][n]}InfC{{${seq}$}}")


_LATEX = [("->", "\\to "), ("[]", "\\Box "), ("#f", "\\bot "), ("#t", "\\top "),
          ("&", "\\wedge "), ("|", "\\vee "), ("=>", "\\Rightarrow ")]


def _latex_seq(s: Sequent) -> str:
    text = str(s)
    for a, b in _LATEX:
        text = text.replace(a, b)
    return text


def check_derivation(d: Derivation, calculus=G4IM) -> bool:
    """Every node is an axiom or a correct instance of a rule of ``calculus``."""
    stack = [d]
    while stack:
        node = stack.pop()
        if not check_step(node.rule, node.root, [c.root for c in node.children], calculus):
            return False
        stack.extend(node.children)
    return True


# ---------------------------------------------------------------- G3 oracle

_INF = float("inf")


class G3Prover:
    """Loop-checked search in the contraction-absorbing calculus G3iM^w.

    Antecedents are sets; L-> keeps its principal formula in the left premise.
    A branch is cut when a sequent repeats on it.  Failures are cached only
    when they did not depend on a repetition of a sequent above them.
    """

    def __init__(self):
        self.success: set = set()
        self.failure: set = set()

    def provable(self, s: Sequent) -> bool:
        s = s.normalized()
        ok, _ = self._search(frozenset(s.ante.items), s.succ, {}, 0)
        return ok

    def _search(self, A: frozenset, d, path: dict, depth: int):
        key = (A, d)
        if key in self.success:
            return True, _INF
        if key in self.failure:
            return False, _INF
        if key in path:
            return False, path[key]
        if BOT in A or (d is not None and d.kind == ATOM and d in A):
            self.success.add(key)
            return True, _INF
        path[key] = depth
        try:
            ok, low = self._expand(A, d, path, depth + 1)
        finally:
            del path[key]
        if ok:
            self.success.add(key)
            return True, _INF
        if low >= depth:
            self.failure.add(key)
            return False, _INF
        return False, low

    def _conj(self, prems, path, depth):
        for A, d in prems:
            ok, low = self._search(A, d, path, depth)
            if not ok:
                return False, low
        return True, _INF

    def _expand(self, A, d, path, depth):
        for f in A:
            k = f.kind
            if k == AND:
                return self._conj([((A - {f}) | {f.left, f.right}, d)], path, depth)
            if k == OR:
                rest = A - {f}
                return self._conj([(rest | {f.left}, d), (rest | {f.right}, d)], path, depth)
        if d is not None:
            dk = d.kind
            if dk == IMP:
                return self._conj([(A | {d.left}, d.right)], path, depth)
            if dk == AND:
                return self._conj([(A, d.left), (A, d.right)], path, depth)
        low = _INF
        alts = []
        if d is not None:
            dk = d.kind
            if dk == OR:
                alts.append([(A, d.left)])
                alts.append([(A, d.right)])
            elif dk == BOX:
                for g in A:
                    if g.kind == BOX:
                        alts.append([(frozenset((g.body,)), d.body)])
        for f in A:
            if f.kind == IMP:
                alts.append([(A, f.left), ((A - {f}) | {f.right}, d)])
        for prems in alts:
            ok, l2 = self._conj(prems, path, depth)
            if ok:
                return True, _INF
            low = min(low, l2)
        return False, low


# ------------------------------------------------------------ module helpers

default_prover = G4Prover()
_g3 = G3Prover()


def provable(s: Sequent) -> bool:
    return default_prover.provable(s)


def prove(s: Sequent) -> Optional[Derivation]:
    return default_prover.prove(s)


def provable_g3(s: Sequent) -> bool:
    return _g3.provable(s)


def run_deep(fn, *args, stack_mb: int = 512, **kwargs):
    """Run ``fn`` in a thread with a large stack and a high recursion limit."""
    box = {}

    def target():
        try:
            box["value"] = fn(*args, **kwargs)
        except BaseException as exc:  # re-raised in the caller
            box["error"] = exc

    old = threading.stack_size()
    limit = sys.getrecursionlimit()
    threading.stack_size(stack_mb * 1024 * 1024)
    try:
        sys.setrecursionlimit(max(limit, 200_000))
        t = threading.Thread(target=target)
        t.start()
        t.join()
    finally:
        threading.stack_size(old)
        sys.setrecursionlimit(limit)
    if "error" in box:
        raise box["error"]
    return box["value"]
