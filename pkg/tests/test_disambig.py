import random

import pytest

from conftest import DATA, np_label
from stores import random_store
from scopeforge import loads
from scopeforge.disambig import (Directive, brute_force_readings, enumerate_readings,
                                 free_referents, pl_dis, placements, promote_conditionals,
                                 to_dot, undisambiguated_plurals)
from scopeforge.errors import (InconsistentStore, NotUnderspecified, ScaleExceeded,
                               UnresolvedSlot)
from scopeforge.udrs import (GROUP, Cond, Eq, Gen, Implies, Intro, Label, Leq, Lt, Member,
                             Referent,
                             UdrsStore, add_constraint, classify)

L = Label


def np(derivation, phrase):
    return next(loc for loc in derivation.nps if loc.phrase.casefold() == phrase.casefold())


def texts(readings):
    return [r.text for r in readings]


def lawyers_open():
    return loads((DATA / "printed" / "lawyers_open.udrs").read_text())


# -- pl_dis ---------------------------------------------------------------------

def test_collective_adds_only_the_eq_and_resolves_to_the_group():
    u = lawyers_open()
    v = pl_dis(u, Directive(L(1), "collective"))
    assert v.subord == u.subord | {Eq(L(1), L(12))} and v.conds == u.conds
    (slot,) = v.deferred
    assert slot.resolved_to.sort == GROUP and slot.trigger == Eq(L(1), L(12))
    assert len(enumerate_readings(v)) == 1


def test_distributive_builds_the_duplex():
    u = lawyers_open()
    v = pl_dis(u, Directive(L(1), "distributive"))
    new = v.conds - u.conds
    (imp,) = [c for c in new if isinstance(c, Implies)]
    assert imp.label == L(1) and imp.scope == L(12)
    (intro,) = [c for c in new if isinstance(c, Intro)]
    (mem,) = [c for c in new if isinstance(c, Member)]
    assert intro.label == mem.label == imp.restr and mem.elem == intro.ref
    assert {Lt(imp.restr, L(1)), Lt(L(12), L(1))} <= v.subord
    assert u.subord <= v.subord and u.conds <= v.conds
    (slot,) = v.deferred
    assert slot.resolved_to == intro.ref
    assert len(enumerate_readings(v)) == 2


def test_generic_uses_gen():
    v = pl_dis(lawyers_open(), Directive(L(1), "generic"))
    assert any(isinstance(c, Gen) and c.label == L(1) for c in v.conds)
    assert classify(v, L(1)) == "scope_bearing"


def test_none_is_the_identity():
    u = lawyers_open()
    assert pl_dis(u, Directive(L(1), "none")) is u


def test_directive_on_a_resolved_plural_is_rejected():
    v = pl_dis(lawyers_open(), Directive(L(1), "collective"))
    with pytest.raises(NotUnderspecified):
        pl_dis(v, Directive(L(1), "distributive"))
    with pytest.raises(NotUnderspecified):
        pl_dis(lawyers_open(), Directive(L(2), "collective"))


def test_directive_shape_is_checked():
    with pytest.raises(ValueError):
        Directive(L(1), "cumulative")
    with pytest.raises(ValueError):
        Directive(L(1), "sometimes")


def test_cumulative_resolves_both_plurals(derive):
    d = derive("breweries")
    a, b = np_label(d, "Three breweries"), np_label(d, "five inns")
    v = pl_dis(d.udrs, Directive((a, b), "cumulative"))
    assert not v.pending_slots() and undisambiguated_plurals(v) == []
    assert sum(isinstance(c, Implies) for c in v.conds) == 2
    assert len(enumerate_readings(v)) == 1


def test_pl_dis_is_additive_on_every_reading(derive):
    d = derive("lawyers")
    l = np_label(d, "Die Rechtsanwälte")
    for r in ("collective", "distributive", "generic"):
        v = pl_dis(d.udrs, Directive(l, r))
        assert d.udrs.subord <= v.subord and d.udrs.conds <= v.conds


# -- conditionals ----------------------------------------------------------------

def test_distributive_promotes_the_c_command_constraint_of_dat_acc(derive):
    d = derive("dat_acc")
    dat, acc = np(d, "mindestens einer Frau").udrs, np(d, "die Gemälde").udrs
    v = promote_conditionals(pl_dis(d.udrs, Directive(acc.l_max, "distributive")))
    assert v.closure.leq(acc.l_max, dat.l_min)
    assert not v.conditionals()


def test_collective_discards_the_conditional(derive):
    d = derive("dat_acc")
    acc = np(d, "die Gemälde").udrs
    v = pl_dis(d.udrs, Directive(acc.l_max, "collective"))
    w = promote_conditionals(v)
    assert not w.conditionals()
    assert w.subord == v.subord - set(v.conditionals())


def test_double_conditional_keeps_the_inner_one():
    inner = Cond(Lt(L(3), L(4)), Leq(L(5), L(6)))
    u = UdrsStore(subord=frozenset({Lt(L(1), L(2)), Cond(Lt(L(1), L(2)), inner)}))
    v = promote_conditionals(u)
    assert inner in v.subord and not v.closure.leq(L(5), L(6))
    assert promote_conditionals(v) == v


def test_promotion_reports_cycles():
    u = UdrsStore(subord=frozenset({Lt(L(1), L(2)), Cond(Lt(L(1), L(2)), Leq(L(2), L(1)))}))
    with pytest.raises(InconsistentStore):
        promote_conditionals(u)


# -- enumeration --------------------------------------------------------------

def test_everybody_has_two_readings_and_the_wide_store_one():
    u = loads((DATA / "printed" / "everybody_open.udrs").read_text())
    assert len(enumerate_readings(u)) == 2
    assert len(enumerate_readings(add_constraint(u, Leq(L(2), L(12))))) == 1


def test_lawyers_branch_into_three():
    rs = enumerate_readings(lawyers_open(), "branch")
    assert len(rs) == 3
    assert texts(rs) == (DATA / "golden" / "lawyers.readings").read_text().splitlines()


def test_fixed_policy_needs_every_slot_resolved():
    with pytest.raises(UnresolvedSlot):
        enumerate_readings(lawyers_open(), "fixed")
    with pytest.raises(ValueError):
        enumerate_readings(lawyers_open(), "sometimes")


def test_directives_can_be_passed_to_enumeration():
    a = enumerate_readings(lawyers_open(), "fixed", [Directive(L(1), "distributive")])
    b = enumerate_readings(pl_dis(lawyers_open(), Directive(L(1), "distributive")))
    assert texts(a) == texts(b)


@pytest.mark.parametrize("key", ["everybody", "gather", "lawyers", "breweries", "fronted", "in_situ", "dass", "dat_acc", "acc_dat"])
def test_golden_readings(derive, key):
    want = (DATA / "golden" / f"{key}.readings").read_text().splitlines()
    assert texts(enumerate_readings(derive(key).udrs, "branch")) == want


def test_enumeration_is_deterministic(derive):
    u = derive("acc_dat").udrs
    assert texts(enumerate_readings(u, "branch")) == texts(enumerate_readings(u, "branch"))


def test_readings_have_no_free_referents(derive):
    for key in ("everybody", "lawyers", "fronted", "acc_dat"):
        for r in enumerate_readings(derive(key).udrs, "branch"):
            assert free_referents(r.placement) == []


def test_access_check_filters_candidates():
    u = loads((DATA / "printed" / "everybody_open.udrs").read_text())
    u = UdrsStore(u.l_max, u.l_min, u.subord - {Leq(L(3), L(12))}, u.conds, u.deferred)
    all_p = list(placements(u, check_access=False))
    assert any(free_referents(p) for p in all_p)
    assert all(not free_referents(p) for p in placements(u))


def test_collective_plural_never_takes_part_in_scope(derive):
    d = derive("acc_dat")
    acc = np_label(d, "die Gemälde")
    dat = np_label(d, "mindestens einer Frau")
    rs = enumerate_readings(pl_dis(d.udrs, Directive(acc, "collective")))
    assert len(rs) == 1 and not rs[0].outscopes(acc, dat)
    rs = enumerate_readings(pl_dis(d.udrs, Directive(acc, "distributive")))
    assert {r.outscopes(acc, dat) for r in rs} == {True, False}


# -- brute force oracle ---------------------------------------------------------

@pytest.mark.parametrize("key", ["everybody", "lawyers", "fronted", "in_situ", "dat_acc", "acc_dat"])
def test_brute_force_agrees_on_sentences(derive, key):
    u = derive(key).udrs
    assert texts(brute_force_readings(u, "branch")) == texts(enumerate_readings(u, "branch"))


@pytest.mark.parametrize("seed", range(12))
def test_brute_force_agrees_on_random_stores(seed):
    u = random_store(random.Random(seed), max_units=3)
    assert texts(brute_force_readings(u, "branch")) == texts(enumerate_readings(u, "branch"))


def test_brute_force_refuses_large_stores():
    rng = random.Random(0)
    u = random_store(rng)
    extra = [Intro(L(9000 + i), Referent(9000 + i, GROUP)) for i in range(3)]
    with pytest.raises(ScaleExceeded):
        brute_force_readings(UdrsStore(u.l_max, u.l_min, u.subord, u.conds | set(extra),
                                       u.deferred))
    big = UdrsStore(conds=frozenset(Implies(L(10 * i), L(10 * i + 1), L(10 * i + 2))
                                    for i in range(1, 6)))
    with pytest.raises(ScaleExceeded):
        brute_force_readings(big)


# -- DOT ----------------------------------------------------------------------------

def test_dot_output(derive):
    d = derive("dat_acc")
    text = to_dot(d.udrs, "before")
    assert text.startswith("digraph before {") and text.rstrip().endswith("}")
    assert "style=solid" in text and "// conditional:" in text
    after = to_dot(promote_conditionals(pl_dis(d.udrs, Directive(
        np_label(d, "die Gemälde"), "collective"))), "after")
    assert "// conditional:" not in after
    assert to_dot(d.udrs, "before") == text
