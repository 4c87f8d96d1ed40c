import itertools

import pytest
from hypothesis import given

from conftest import bags, formulas, sequents
from imulip.formula import BOT, NEG, POS, And, Atom, Box, Imp, atoms, parse
from imulip.sequent import (FormulaBag, Sequent, SequentSyntaxError, SingleConclusionError,
                            bag_precedes, canonical_key, multiply, parse_sequent,
                            seq_precedes, seq_vars, sequent_from_json, sequent_to_json)
from imulip.universe import bags_up_to, formulas_up_to

p, q, r = Atom("p"), Atom("q"), Atom("r")


def S(text):
    return parse_sequent(text)


def test_bag_order_examples():
    assert bag_precedes([p, q], [And(p, q)])
    assert bag_precedes([], [p])
    assert not bag_precedes([And(p, q)], [And(p, q)])
    assert not bag_precedes([p, p], [p])


def test_sequent_order_examples():
    assert seq_precedes(S("p => q"), S("p => p -> q"))
    assert not seq_precedes(S("=> p"), S("=> p"))


@given(formulas(), formulas())
def test_modal_rule_premise_is_lower(a, b):
    assert seq_precedes(Sequent.of([a], b), Sequent.of([Box(a)], Box(b)))


@given(bags())
def test_order_irreflexive(b):
    assert not bag_precedes(b, b)


def test_order_transitive_on_small_universe():
    fs = formulas_up_to(3, ("p",))
    universe = bags_up_to(fs, 2)
    below = {i: [j for j, c in enumerate(universe) if bag_precedes(c, b)]
             for i, b in enumerate(universe)}
    for i, lower in below.items():
        for j in lower:
            for k in below[j]:
                assert bag_precedes(universe[k], universe[i])


def test_multiply():
    assert multiply(S("p => q"), S("r =>")) == S("p, r => q")
    assert multiply(S("=>"), S("=> q")) == S("=> q")
    with pytest.raises(SingleConclusionError):
        multiply(S("=> p"), S("=> q"))


@given(sequents(), bags(), bags())
def test_multiply_assoc_comm_unit(s, b1, b2):
    t, u = Sequent(b1), Sequent(b2)
    assert multiply(multiply(s, t), u) == multiply(s, multiply(t, u))
    assert multiply(s, t) == multiply(t, s)
    assert multiply(s, Sequent.of()) == s


def test_seq_vars_examples():
    assert seq_vars(S("p => q"), POS) == {"q"}
    assert seq_vars(S("p -> q =>"), POS) == {"p"}
    assert seq_vars(S("=> [] p"), NEG) == frozenset()


@given(sequents())
def test_seq_vars_within_atoms(s):
    every = frozenset().union(*(atoms(f) for f in s.all_formulas()))
    for pol in (POS, NEG):
        assert seq_vars(s, pol) <= every


def test_canonical_keys():
    assert canonical_key(S("p, q => r")) == canonical_key(S("q, p => r"))
    assert canonical_key(S("p, p => r")) != canonical_key(S("p => r"))
    assert canonical_key(S("=>")) != canonical_key(S("=> #f"))


def test_bag_occurrence_operations():
    b = FormulaBag([p, q, p])
    assert b.multiplicity(p) == 2
    assert b.remove_one(p) == FormulaBag([p, q])
    assert b.replace_one(p, r, r) == FormulaBag([p, q, r, r])
    assert b.distinct() == (p, q)
    with pytest.raises(ValueError):
        b.remove_one(r)


def test_sequent_text():
    assert str(S("q, p => r")) == "p, q => r"
    assert str(S("p =>")) == "p =>"
    assert str(S("=>")) == "=>"
    assert S("=> #f").succ is BOT
    for bad in ["p", "p => q => r", "=> p, q"]:
        with pytest.raises(SequentSyntaxError):
            parse_sequent(bad)


@given(sequents())
def test_json_roundtrip(s):
    assert sequent_from_json(sequent_to_json(s)) == s


def test_json_shape():
    assert sequent_to_json(S("p -> q =>")) == {"ante": ["p -> q"], "succ": None}
