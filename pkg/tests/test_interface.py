import pytest

from conftest import SENTENCES, np_label
from scopeforge import interface
from scopeforge.interface import (ScopeItem, closed_formula, complement_scope,
                                  quantifier_scope, wire_argument_slot)
from scopeforge.lexicon import combine_np, instantiate
from scopeforge.signs import Node
from scopeforge.syntax import head_comp, head_filler, vip
from scopeforge.udrs import (TOP, Atom, Cond, Eq, Fresh, Label, Leq, Lt, Neg, Slot,
                             UdrsStore)


def np(lexicon, fresh, det, noun):
    (d,) = lexicon.lookup(det)
    (n,) = lexicon.lookup(noun)
    return combine_np(d, n, fresh, tuple(det.split()) + (noun,))


def verb(lexicon, fresh, form):
    (e,) = lexicon.lookup(form)
    return vip(instantiate(e, fresh))


def tagged(u, tag):
    return {c for t, c in u.audit if t == tag}


def test_closed_formula_uses_minimal_labels():
    v, q, i = (None, Label(3)), (Label(1), Label(12)), (Label(2), Label(2))
    assert closed_formula(v, q) == Leq(Label(3), Label(12))
    assert closed_formula(v, i) == Leq(Label(3), Label(2))
    assert closed_formula(v, (TOP, TOP)) == Leq(Label(3), TOP)


def test_quantifier_scope_by_type():
    d = Label(9)
    assert quantifier_scope(ScopeItem("quant", Label(1), Label(12)), d) == Leq(Label(1), d)
    assert quantifier_scope(ScopeItem("plural", Label(1), Label(12)), d) == \
        Cond(Lt(Label(12), Label(1)), Leq(Label(1), d))
    assert quantifier_scope(ScopeItem("name", Label(1), Label(1)), d) is None


def test_verb_plus_indefinite(lexicon):
    f = Fresh()
    (e,) = lexicon.lookup("stellten")
    v = vip(instantiate(e, f))
    obj = np(lexicon, f, "eine", "Sekretärin")
    out = head_comp(v, obj.loc, obj.tree)
    assert out.udrs.conds == v.udrs.conds | obj.udrs.conds
    assert Leq(v.udrs.l_min, obj.udrs.l_min) in tagged(out.udrs, "IV")
    (atom,) = [c for c in out.udrs.conds if isinstance(c, Atom) and c.rel == "einstellen"]
    slot = out.udrs.slot(atom.args[1].id)
    assert slot.resolved_to in obj.udrs.referents()
    assert slot.trigger == Eq(*obj.udrs.ls)


def test_wiring_a_plural_stays_pending(lexicon):
    f = Fresh()
    (e,) = lexicon.lookup("stellten")
    v = vip(instantiate(e, f))
    subj = np(lexicon, f, "die", "Rechtsanwälte")
    u = UdrsStore(conds=v.udrs.conds | subj.udrs.conds, subord=subj.udrs.subord,
                  deferred=v.udrs.deferred)
    u, extra = wire_argument_slot(u, v.slots[0], subj.loc, collective=False)
    assert u.slot(v.slots[0]).pending and extra == []


def test_collective_verb_resolves_its_subject_at_once(lexicon):
    f = Fresh()
    (e,) = lexicon.lookup("gathered")
    v = vip(instantiate(e, f))
    subj = np(lexicon, f, "die", "Mädchen")
    u = UdrsStore(conds=v.udrs.conds | subj.udrs.conds, subord=subj.udrs.subord,
                  deferred=v.udrs.deferred)
    u, extra = wire_argument_slot(u, v.slots[0], subj.loc, collective=True)
    s = u.slot(v.slots[0])
    assert s.resolved_to.is_group
    assert extra == [("lex", Eq(*subj.udrs.ls))]


def test_head_filler_adds_nothing(lexicon):
    f = Fresh()
    v = verb(lexicon, f, "vorgestellt")
    acc = np(lexicon, f, "mindestens einen", "Bewerber")
    s = head_comp(v, acc.loc, Node("trace", index=1), trace=True)
    out = head_filler(s, acc.loc, acc.tree)
    assert out.udrs.conds == s.udrs.conds and out.udrs.subord == s.udrs.subord
    assert interface.compose(s, acc.loc, "head_filler") is s.udrs


def test_complementizer_installs_the_domain(derive):
    d = derive("dass")
    u = d.udrs
    glauben = next(c for c in u.conds if isinstance(c, Atom) and c.rel == "glauben")
    dom = u.slot(glauben.args[1].id).resolved_to
    assert isinstance(dom, Label) and u.closure.lt(dom, glauben.label)
    kinder = np_label(d, "die Kinder")
    assert any(isinstance(c, Cond) and c.consequent == Leq(kinder, dom) for c in tagged(u, "V"))


def test_complement_scope_respects_slash(derive):
    u_in_situ, u_fronted = derive("in_situ").udrs, derive("fronted").udrs
    assert len(tagged(u_in_situ, "VI")) == 1
    assert tagged(u_fronted, "VI") == set()


def test_22_puts_the_accusative_under_the_dative(derive):
    d = derive("in_situ")
    (c,) = tagged(d.udrs, "VI")
    dat = [loc for loc in d.nps if loc.phrase == "fast jedem Mitarbeiter"][0]
    acc = [loc for loc in d.nps if loc.phrase == "mindestens einen Bewerber"][0]
    assert c == Leq(acc.udrs.l_max, dat.udrs.l_min)


def test_25a_conditionalizes_on_the_plural(derive):
    d = derive("dat_acc")
    (c,) = tagged(d.udrs, "VI")
    pl = [loc for loc in d.nps if loc.phrase == "die Gemälde"][0]
    dat = [loc for loc in d.nps if loc.phrase == "mindestens einer Frau"][0]
    assert c == Cond(Lt(pl.udrs.l_min, pl.udrs.l_max), Leq(pl.udrs.l_max, dat.udrs.l_min))


def test_25b_has_no_complement_scope_constraint(derive):
    assert tagged(derive("acc_dat").udrs, "VI") == set()


def test_complement_scope_ignores_non_scope_bearing_arguments(derive):
    d = derive("lawyers")
    subj, obj = d.nps
    assert complement_scope(subj, [obj], ()) == []
    assert complement_scope(obj, [subj], ()) == []


@pytest.mark.parametrize("key", sorted(SENTENCES))
def test_every_constraint_has_one_provenance(derive, key):
    u = derive(key).udrs
    tags = {}
    for t, c in u.audit:
        tags.setdefault(c, set()).add(t)
    assert set(u.subord) <= set(tags)
    assert all(t <= {"lex", "IV", "V", "VI", "adj", "pl_dis"} for t in tags.values())
    assert all(len(t) == 1 for c, t in tags.items() if c in u.subord)


@pytest.mark.parametrize("key", sorted(SENTENCES))
def test_verb_is_closed_under_every_argument(derive, key):
    d = derive(key)
    u = d.udrs
    cl = u.closure
    verbs = {c.label: c for c in u.conds if isinstance(c, Atom)
             and any(isinstance(a, Slot) for a in c.args)}
    for loc in d.nps:
        under = [l for l, atom in verbs.items()
                 if any(isinstance(a, Slot) and u.slot(a.id).source_ls == loc.udrs.ls
                        for a in atom.args)]
        assert under, loc.phrase
        for l in under:
            assert cl.leq(l, loc.udrs.l_min), (key, loc.phrase)


@pytest.mark.parametrize("key", ["everybody", "lawyers", "fronted", "in_situ"])
def test_matrix_root_domain_is_top(derive, key):
    assert derive(key).udrs.l_max == TOP


def test_negation_scope_comes_from_the_adjunct(derive):
    u = derive("everybody").udrs
    (neg,) = [c for c in u.conds if isinstance(c, Neg)]
    (verb,) = [c for c in u.conds if isinstance(c, Atom) and c.rel == "pay_attention"]
    assert ("adj", Leq(verb.label, neg.inner)) in u.audit
