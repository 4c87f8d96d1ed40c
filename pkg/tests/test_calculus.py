from collections import Counter

from hypothesis import given

from conftest import bags, sequents
from imulip.calculus import (G3, G4IM, G4W, RuleId, backward_apps_g3, backward_apps_g4im,
                             backward_apps_g4w, backward_left_apps_for_exists, check_step,
                             forward, is_axiom)
from imulip.formula import NEG, POS, parse
from imulip.sequent import FormulaBag, Sequent, parse_sequent, seq_precedes, seq_vars

S = parse_sequent
F = parse


def by_rule(apps, rule):
    return [a for a in apps if a.rule is rule]


def premises_of(apps, rule):
    return [list(a.premises) for a in by_rule(apps, rule)]


def test_axioms():
    assert is_axiom(S("q, p => p")) is RuleId.AX
    assert is_axiom(S("#f => []q")) is RuleId.LBOT
    assert is_axiom(S("#f =>")) is RuleId.LBOT
    assert is_axiom(S("p & q => p & q")) is None
    assert not check_step(RuleId.AX, S("p & q => p & q"), [])


def test_lp_imp():
    apps = backward_apps_g4im(S("p, p -> q => r"))
    assert [S("p, q => r")] in premises_of(apps, RuleId.LP_IMP)


def test_lp_imp_needs_the_atom():
    assert not by_rule(backward_apps_g4im(S("p -> q => r")), RuleId.LP_IMP)


def test_modal_rules():
    apps = backward_apps_g4im(S("[]p => []p"))
    assert premises_of(apps, RuleId.M) == [[S("p => p")]]
    apps = backward_apps_g4im(S("[]p, []q -> r => s"))
    assert [S("p => q"), S("[]p, r => s")] in premises_of(apps, RuleId.LM_IMP)


def test_m_needs_a_bare_box_sequent():
    assert not by_rule(backward_apps_g4im(S("r, []p => []p")), RuleId.M)
    assert not by_rule(backward_apps_g4w(S("[]p => []p")), RuleId.M)


def test_left_apps_for_exists():
    apps = backward_left_apps_for_exists(FormulaBag([F("p | q")]))
    (lor,) = by_rule(apps, RuleId.LOR)
    assert list(lor.premises) == [S("p =>"), S("q =>")]
    assert lor.contextual == (True, True)

    apps = backward_left_apps_for_exists(FormulaBag([F("(p -> q) -> r")]))
    (li,) = by_rule(apps, RuleId.LIMP_IMP)
    assert list(li.premises) == [S("q -> r => p -> q"), S("r =>")]
    assert li.contextual == (False, True)

    apps = backward_left_apps_for_exists(FormulaBag([F("p")]))
    assert len(apps) == 1
    assert apps[0].rule is RuleId.LW
    assert list(apps[0].premises) == [S("=>")]
    assert apps[0].contextual == (True,)


def test_g4w_right_rules():
    assert premises_of(backward_apps_g4w(S("=> p -> q")), RuleId.RIMP) == [[S("p => q")]]
    rules = {a.rule for a in backward_apps_g4w(S("=> p | q"))}
    assert rules == {RuleId.ROR1, RuleId.ROR2, RuleId.RW}
    assert {a.rule for a in backward_apps_g4w(S("p =>"))} == {RuleId.LW}


def test_g3_rules():
    apps = backward_apps_g3(S("p -> q => q"))
    assert [S("p -> q => p"), S("q => q")] in premises_of(apps, RuleId.LIMP_G3)
    apps = backward_apps_g3(S("r, []p => []p"))
    assert premises_of(apps, RuleId.MSEQ) == [[S("p => p")]]
    assert backward_apps_g3(S("=> p")) == []


def test_dedup_over_occurrences():
    apps = backward_apps_g4im(S("p & q, p & q => r"))
    assert len(by_rule(apps, RuleId.LAND)) == 1
    assert len(by_rule(apps, RuleId.LW)) == 1


def test_forward_rejects_bad_shapes():
    assert not check_step(RuleId.M, S("p, []q => []q"), [S("q => q")])
    assert not check_step(RuleId.RIMP, S("=> p -> q"), [S("q => p")])
    assert not check_step(RuleId.MSEQ, S("[]p => []q"), [S("p => q")], G4IM)
    assert check_step(RuleId.MSEQ, S("r, []p => []q"), [S("p => q")], G3)


def _all_apps(s):
    return backward_apps_g4im(s) + backward_left_apps_for_exists(s.ante)


@given(sequents())
def test_premises_are_lower(s):
    for app in _all_apps(s) + backward_apps_g3(s):
        if app.rule is RuleId.LIMP_G3:
            continue  # the G3 left premise keeps the principal formula
        for prem in app.premises:
            assert seq_precedes(prem, app.conclusion)


@given(sequents())
def test_variable_preserving(s):
    for app in _all_apps(s):
        for pol in (POS, NEG):
            for prem in app.premises:
                assert seq_vars(prem, pol) <= seq_vars(app.conclusion, pol)


def _minus(big, small):
    c = Counter(big)
    c.subtract(Counter(small))
    return [f for f, n in c.items() for _ in range(max(n, 0))]


def _vars(fs, pol):
    out = set()
    for f in fs:
        out |= f.pos if pol is POS else f.neg
    return out


@given(sequents())
def test_local_variable_preserving(s):
    for app in backward_apps_g4w(s):
        if app.rule in (RuleId.LW, RuleId.RW):
            continue
        phi = app.principal
        left = app.rule.side == "left"
        context = _minus(s.ante.items, [phi]) if left else list(s.ante.items)
        for pol in (POS, NEG):
            dual = NEG if pol is POS else POS
            bound = phi.pos if pol is POS else phi.neg
            for prem, ctx in zip(app.premises, app.contextual):
                active = _minus(prem.ante.items, context)
                delta = [] if ctx or prem.succ is None else [prem.succ]
                if left:
                    got = _vars(active, pol) | _vars(delta, dual)
                else:
                    got = _vars(active, dual) | _vars(delta, pol)
                assert got <= bound, (app, pol)


@given(sequents())
def test_forward_reproduces_conclusion(s):
    for app in _all_apps(s):
        if app.rule is RuleId.M:
            assert forward(app.rule, app.premises, None) == app.conclusion
        else:
            assert forward(app.rule, app.premises, app.principal) == app.conclusion
        assert check_step(app.rule, app.conclusion, app.premises, G4IM)
    for app in backward_apps_g3(s):
        assert check_step(app.rule, app.conclusion, app.premises, G3)


@given(sequents())
def test_contextual_premises_keep_the_succedent(s):
    for app in _all_apps(s):
        for prem, ctx in zip(app.premises, app.contextual):
            if ctx:
                assert prem.succ is app.conclusion.succ


@given(bags())
def test_exists_apps_are_left_rules(b):
    for app in backward_left_apps_for_exists(b):
        assert app.rule.side in ("left", "structural")
        assert app.conclusion.succ is None
