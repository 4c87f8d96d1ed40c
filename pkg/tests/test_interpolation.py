import hypothesis.strategies as st
import pytest
from hypothesis import given

from conftest import bags, formulas, sequents
from imulip.formula import (BOT, NEG, POS, TOP, TOP_N, And, Atom, Box, Imp, Or, atoms,
                            normalize_top, parse, render, vars_of)
from imulip.interpolation import (BudgetExceeded, ContextPool, Interpolator, NotATheorem,
                                  exists_ax, exists_interp, forall_ax, forall_interp,
                                  lyndon_interpolant, simplify, uip_exists, uip_forall,
                                  var_condition, verify_ulip)
from imulip.prover import G3Prover, G4Prover, run_deep
from imulip.sequent import FormulaBag, Sequent, bag_vars, parse_sequent, seq_vars
from imulip.universe import formulas_up_to

S = parse_sequent
F = parse
p, q = Atom("p"), Atom("q")
G3 = G3Prover()
st_atom = st.sampled_from("pq")


def equiv(a, b):
    """Equivalence decided by the G3 oracle."""
    a, b = normalize_top(a), normalize_top(b)
    return G3.provable(Sequent.of([a], b)) and G3.provable(Sequent.of([b], a))


# ------------------------------------------------------------ base cases

def test_exists_ax():
    assert exists_ax([p, q, Imp(p, q)], "p", POS) is And(q, Imp(p, q))
    assert exists_ax([p], "p", POS) is TOP_N
    assert exists_ax([], "p", NEG) is TOP_N


def test_forall_ax():
    assert forall_ax(S("p => p"), "p", POS) is TOP_N
    assert forall_ax(S("=> q"), "p", POS) is q
    assert forall_ax(S("=> p"), "p", POS) is BOT


def test_exists_examples():
    assert exists_interp([], "p", POS) is TOP_N
    assert equiv(exists_interp([p], "p", POS), TOP)
    assert equiv(exists_interp([q], "p", POS), q)


def test_forall_examples():
    assert forall_interp(S("p => p"), "p", POS) is TOP_N
    assert equiv(forall_interp(S("=> p"), "p", POS), BOT)
    assert equiv(forall_interp(S("=> []q"), "p", POS), Box(q))


def _p_free(max_weight=5):
    return [f for f in formulas_up_to(max_weight, ("q",)) if "p" not in atoms(f)]


@pytest.mark.parametrize("bag", [["p"], ["q"], ["p | q"], ["p & q"], ["p -> q", "p"]])
def test_exists_is_strongest_p_pos_free_consequence(bag):
    # Against the oracle: for every p-free target of weight <= 5, the bag
    # derives it iff the interpolant does.
    fs = [F(t) for t in bag]
    theta = normalize_top(exists_interp(fs, "p", POS))
    for d in _p_free():
        assert G3.provable(Sequent.of(fs, d)) == G3.provable(Sequent.of([theta], d)), render(d)


@pytest.mark.parametrize("target", ["p", "[]q", "q | p", "p -> q", "[]p -> q"])
def test_forall_is_weakest_p_pos_free_antecedent(target):
    s = Sequent.of((), F(target))
    theta = normalize_top(forall_interp(s, "p", POS))
    for c in _p_free():
        assert G3.provable(Sequent.of([c], s.succ)) == G3.provable(Sequent.of([c], theta)), render(c)


# ------------------------------------------------------------ derived forms

def test_uip_examples():
    assert equiv(uip_exists(q, "p"), q)
    assert equiv(uip_forall(p, "p"), BOT)
    assert equiv(uip_exists(Or(p, q), "p"), TOP)


@pytest.mark.parametrize("text", ["p | q", "p & (p -> q)", "[](p & q)", "[]p -> q", "q -> p"])
def test_uip_exists_against_oracle(text):
    phi = F(text)
    theta = normalize_top(uip_exists(phi, "p"))
    assert "p" not in atoms(theta)
    for d in _p_free():
        assert G3.provable(Sequent.of([phi], d)) == G3.provable(Sequent.of([theta], d))


@pytest.mark.parametrize("text", ["q -> p", "~p | q", "[]p & (p -> q)", "[]q | p"])
def test_uip_forall_against_oracle(text):
    phi = F(text)
    theta = normalize_top(uip_forall(phi, "p"))
    assert "p" not in atoms(theta)
    for c in _p_free():
        assert G3.provable(Sequent.of([c], phi)) == G3.provable(Sequent.of([c], theta))


def test_lyndon_examples():
    theta = lyndon_interpolant(F("p & q"), F("q | r"))
    assert theta.pos <= {"q"} and theta.neg == frozenset()
    assert equiv(theta, q)
    assert equiv(lyndon_interpolant(p, p), p)
    assert equiv(lyndon_interpolant(BOT, q), BOT)


def test_lyndon_rejects_non_theorems():
    with pytest.raises(NotATheorem):
        lyndon_interpolant(p, q)


def test_budget():
    with pytest.raises(BudgetExceeded):
        Interpolator(G4Prover(), budget=3).exists([F("(p -> q) -> p")], "p", NEG)


# ------------------------------------------------------------ simplifier

def test_simplify_examples():
    assert simplify(F("#t & (q -> #t)")) is TOP
    assert simplify(F("(q & q) | #f")) is q
    assert simplify(F("[]q & #t")) is Box(q)


@given(formulas(max_leaves=6, top=True))
def test_simplify_sound(f):
    g = simplify(f, verified=True)
    assert equiv(f, g)
    nf, ng = normalize_top(f), normalize_top(g)
    assert ng.pos <= nf.pos and ng.neg <= nf.neg


# ------------------------------------------------------------ harness

@pytest.mark.parametrize("target, pol", [
    ([F("q -> p")], POS),
    (S("[]q => []p"), NEG),
    ([p], NEG),
])
def test_verify_examples(target, pol):
    rep = verify_ulip(target, "p", pol, weight_bound=4)
    assert rep.ok
    assert rep.counterexamples == []
    assert rep.checked > 0


def test_report_json_shape():
    doc = verify_ulip([F("q -> p")], "p", POS).to_json()
    assert set(doc) == {"query", "raw", "simplified", "verified"}
    assert set(doc["verified"]) == {"var", "c1", "c2"}
    doc = verify_ulip(S("=> p | q"), "p", POS).to_json()
    assert set(doc["verified"]) == {"var", "c3", "c4"}


def test_context_pool_classes():
    pool = ContextPool(formulas_up_to(4), G4Prover())
    classes = pool.classes()
    assert sum(len(c) for c in classes) == len(formulas_up_to(4))
    assert len(classes) < len(formulas_up_to(4))


def _exists_var_and_main(b, a):
    it = Interpolator(G4Prover())
    for pol in (POS, NEG):
        raw = it.exists(b, a, pol)
        nb = b.normalized()
        assert var_condition(raw, a, pol, bag_vars(nb, POS), bag_vars(nb, NEG))
        assert it.prover.provable(Sequent(nb, raw))


# Raw interpolants nest deeply, so these run on a large stack.
@given(bags(max_size=2, max_leaves=3), st_atom)
def test_exists_var_and_main(b, a):
    run_deep(_exists_var_and_main, b, a)


def _forall_var_and_main(s, a):
    it = Interpolator(G4Prover())
    for pol in (POS, NEG):
        raw = it.forall(s, a, pol)
        ns = s.normalized()
        assert var_condition(raw, a, pol, seq_vars(ns, POS), seq_vars(ns, NEG))
        assert it.prover.provable(Sequent(ns.ante.add(raw), ns.succ))


@given(sequents(max_size=1, max_leaves=4), st_atom)
def test_forall_var_and_main(s, a):
    run_deep(_forall_var_and_main, s, a)


@given(sequents(max_size=1, max_leaves=3), st_atom)
def test_memo_does_not_change_output(s, a):
    for pol in (POS, NEG):
        x = Interpolator(G4Prover()).forall(s, a, pol)
        y = Interpolator(G4Prover(), memo=False).forall(s, a, pol)
        assert x is y
        x = Interpolator(G4Prover()).exists(s.ante, a, pol)
        y = Interpolator(G4Prover(), memo=False).exists(s.ante, a, pol)
        assert x is y


@given(formulas(max_leaves=4))
def test_uip_outputs_are_p_free(f):
    assert "p" not in atoms(uip_exists(f, "p"))
    assert "p" not in atoms(uip_forall(f, "p"))


@given(formulas(max_leaves=4), formulas(max_leaves=3))
def test_lyndon_conditions(a, b):
    psi = Or(a, b)
    theta = lyndon_interpolant(a, psi)
    na, npsi = normalize_top(a), normalize_top(psi)
    assert theta.pos <= na.pos & npsi.pos
    assert theta.neg <= na.neg & npsi.neg
    assert G3.provable(Sequent.of([na], theta))
    assert G3.provable(Sequent.of([theta], npsi))
