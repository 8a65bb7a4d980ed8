import itertools
import re

import pytest
from hypothesis import given, settings, strategies as st

from conftest import DATA, np_label
from scopeforge import loads
from scopeforge.disambig import (Directive, Reading, enumerate_readings, pl_dis, placements,
                                 promote_conditionals, render)
from scopeforge.errors import ArityMismatch, GenNotEvaluable, ModelError, NotEvaluable
from scopeforge.modeleval import Model, evaluate, load_model, loads_model
from scopeforge.udrs import Label, Leq, UdrsStore, add_constraint

MODELS = DATA / "models"


def expected(path):
    m = re.search(r"^# expected:((?:\s+[TF])+)\s*$", path.read_text(), re.M)
    return [v == "T" for v in m.group(1).split()]


def readings_of(derive, key):
    return enumerate_readings(derive(key).udrs, "branch")


# -- loading --------------------------------------------------------------------

def test_model_file_is_read():
    m = loads_model("entity a b c\ngroup G = {a, b}\nrel p: (a); (G)\nrel q: (a,b)\n")
    assert m.entities == {"a", "b", "c"} and m.groups["G"] == {"a", "b"}
    assert m.extensions["p"] == {("a",), (frozenset({"a", "b"}),)}
    assert m.arity("q") == 2 and m.arity("missing") is None


@pytest.mark.parametrize("text,line", [
    ("entity a\nfoo bar\n", 2),
    ("entity a\ngroup G = {a, z}\n", 2),
    ("entity a\nrel p: (z)\n", 2),
    ("entity a a\n", 1),
    ("entity a\nrel p: a\n", 2),
])
def test_bad_models_name_the_line(text, line):
    with pytest.raises(ModelError) as err:
        loads_model(text)
    assert err.value.line == line


def test_mixed_arity_is_rejected():
    with pytest.raises(ArityMismatch) as err:
        loads_model("entity a b\nrel p: (a)\nrel p: (a,b)\n")
    assert err.value.line == 3


# -- evaluation -------------------------------------------------------------------

def test_empty_box_is_true():
    (r,) = enumerate_readings(UdrsStore())
    assert evaluate(r, Model())


def test_wide_and_narrow_negation_come_apart_when_only_some_pay_attention():
    u = loads((DATA / "printed" / "everybody_open.udrs").read_text())
    (wide,) = enumerate_readings(add_constraint(u, Leq(Label(2), Label(12))))
    (narrow,) = enumerate_readings(add_constraint(u, Leq(Label(1), Label(21))))
    nobody = loads_model("entity a b\n")
    some = loads_model("entity a b\nrel pay_attention: (a)\n")
    assert evaluate(wide, nobody) and evaluate(narrow, nobody)
    assert not evaluate(wide, some) and evaluate(narrow, some)


def test_collective_and_distributive_lawyers(derive):
    d = derive("lawyers")
    l = np_label(d, "Die Rechtsanwälte")
    m = loads_model("entity l1 l2 s1\ngroup G = {l1,l2}\n"
                    "rel Rechtsanwalt: (G)\nrel Sekretaerin: (s1)\nrel einstellen: (G,s1)\n")
    (coll,) = enumerate_readings(pl_dis(d.udrs, Directive(l, "collective")))
    dist = enumerate_readings(pl_dis(d.udrs, Directive(l, "distributive")))
    assert evaluate(coll, m)
    assert not any(evaluate(r, m) for r in dist)


def test_generic_readings_are_not_evaluated(derive):
    d = derive("dass")
    u = pl_dis(d.udrs, Directive(np_label(d, "die Kinder"), "generic"))
    m = loads_model("entity a\n")
    for r in enumerate_readings(u):
        with pytest.raises(NotEvaluable):
            evaluate(r, m)
    with pytest.raises(GenNotEvaluable):
        evaluate(enumerate_readings(u)[0], m)


def test_reading_arity_must_match_model(derive):
    r = readings_of(derive, "in_situ")[0]
    with pytest.raises(ArityMismatch):
        evaluate(r, loads_model("entity a b\nrel vorstellen: (a,b)\n"
                                "rel Mitarbeiter: (a)\nrel Bewerber: (b)\n"))


SEPARATION = {
    "everybody": ["sep_everybody_1"],
    "lawyers": ["sep_lawyers_1", "sep_lawyers_2"],
    "breweries": ["sep_breweries_1", "sep_breweries_2", "sep_breweries_3", "sep_breweries_4"],
    "fronted": ["sep_fronted_1"],
    "dat_acc": ["sep_dat_acc_1"],
    "acc_dat": ["sep_acc_dat_1", "sep_acc_dat_2"],
}


@pytest.mark.parametrize("key", sorted(SEPARATION))
def test_models_match_their_expected_verdicts(derive, key):
    rs = readings_of(derive, key)
    for name in SEPARATION[key]:
        path = MODELS / f"{name}.txt"
        assert [evaluate(r, load_model(path)) for r in rs] == expected(path), name


@pytest.mark.parametrize("key", sorted(SEPARATION))
def test_readings_are_pairwise_separated(derive, key):
    rs = readings_of(derive, key)
    vectors = [expected(MODELS / f"{n}.txt") for n in SEPARATION[key]]
    for i, j in itertools.combinations(range(len(rs)), 2):
        assert any(v[i] != v[j] for v in vectors), (key, i, j)


def test_merge_equivalent_placements_agree(derive):
    d = derive("dat_acc")
    u = pl_dis(d.udrs, Directive(np_label(d, "die Gemälde"), "collective"))
    ps = list(placements(promote_conditionals(u)))
    assert len(ps) > 1 and len({render(p) for p in ps}) == 1
    m = load_model(MODELS / "sep_dat_acc_1.txt")
    assert len({evaluate(Reading(render(p), p), m) for p in ps}) == 1


# -- cumulative ------------------------------------------------------------------

BREWERIES = ["b1", "b2", "b3"]
INNS = ["i1", "i2", "i3", "i4", "i5"]


def supply_model(pairs):
    text = ("entity b1 b2 b3 i1 i2 i3 i4 i5\ngroup B = {b1,b2,b3}\n"
            "group I = {i1,i2,i3,i4,i5}\nrel brewery: (B)\nrel inn: (I)\n")
    if pairs:
        text += "rel supply: " + "; ".join(f"({a},{b})" for a, b in sorted(pairs)) + "\n"
    return loads_model(text)


def covers(pairs):
    """Each brewery supplies some inn and each inn gets supplied."""
    return ({a for a, _ in pairs} == set(BREWERIES)) and ({b for _, b in pairs} == set(INNS))


@pytest.fixture(scope="module")
def cumulative_reading(derive):
    d = derive("breweries")
    pair = (np_label(d, "Three breweries"), np_label(d, "five inns"))
    (r,) = enumerate_readings(pl_dis(d.udrs, Directive(pair, "cumulative")))
    return r


@pytest.mark.parametrize("name", ["cumulative_true_a", "cumulative_true_b",
                                  "cumulative_false_a", "cumulative_false_b"])
def test_cumulative_shipped_models(cumulative_reading, name):
    m = load_model(MODELS / f"{name}.txt")
    pairs = set(m.extensions.get("supply", ()))
    assert evaluate(cumulative_reading, m) == covers(pairs) == name.startswith("cumulative_true")


pairs_strategy = st.sets(st.tuples(st.sampled_from(BREWERIES), st.sampled_from(INNS)),
                         max_size=10)


@settings(max_examples=25, deadline=None)
@given(pairs_strategy)
def test_cumulative_matches_coverage(cumulative_reading, pairs):
    assert evaluate(cumulative_reading, supply_model(pairs)) == covers(pairs)
