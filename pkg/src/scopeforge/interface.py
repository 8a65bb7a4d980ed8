"""Semantic composition at each syntactic combination.

Every step inherits conditions and constraints from both daughters.  When
a verb argument is saturated the verb's minimal label goes weakly below
the argument's minimal label (closed formulas) and, for quantified or
plural arguments, arguments later on SUBCAT that are not in SLASH are
put under the argument's nuclear scope.  Quantified and plural labels
gathered on the projection are bounded by the local domain once the
functional head (complementizer or finite verb) combines.
"""
from __future__ import annotations

from dataclasses import replace
from typing import NamedTuple, Optional

from .signs import SCOPE_TYPES, LocRecord, Sign
from .udrs import (Cond, Eq, Label, Leq, Lt, UdrsStore, add_constraint,
                   dref_res, merge, resolve_with_trigger)


class ScopeItem(NamedTuple):
    """A scope-taking label pair gathered on a projection."""
    sem: str
    l_max: Label
    l_min: Label


def closed_formula(head_ls, arg_ls) -> Leq:
    return Leq(head_ls[1], arg_ls[1])


def quantifier_scope(item: ScopeItem, domain: Label):
    """Bound a quantifier, plural or negation by its local domain."""
    if item.sem in ("quant", "neg"):
        return Leq(item.l_max, domain)
    if item.sem == "plural":
        return Cond(Lt(item.l_min, item.l_max), Leq(item.l_max, domain))
    return None


def outside_slash(tail, slash) -> list:
    """Elements of ``tail`` whose LOC is not one of the SLASH members."""
    return [a for a in tail if not any(a is s for s in slash)]


def complement_scope(arg: LocRecord, tail, slash) -> list:
    """Put c-commanded quantified/plural arguments under ``arg``'s scope."""
    if arg.sem not in SCOPE_TYPES:
        return []
    a_max, a_min = arg.udrs.ls
    out = []
    for other in outside_slash(tail, slash):
        if other.sem not in SCOPE_TYPES:
            continue
        o_max, o_min = other.udrs.ls
        c = Leq(o_max, a_min)
        if other.sem == "plural":
            c = Cond(Lt(o_min, o_max), c)
        if arg.sem == "plural":
            c = Cond(Lt(a_min, a_max), c)
        out.append(c)
    return out


def wire_argument_slot(u: UdrsStore, slot_id: int, arg: LocRecord, collective: bool):
    """Point a verb slot at its argument and try to resolve it.

    Returns the store plus any constraint the wiring itself contributes
    (the collective trigger of a selecting verb, or the subordination of an
    embedded clause's domain under the verb).
    """
    slot = replace(u.slot(slot_id), source_ls=arg.udrs.ls)
    l_max, l_min = arg.udrs.ls
    extra = []
    if arg.sem == "s":
        slot = slot.resolve(Leq(l_min, l_max), l_max)
    elif collective:
        trigger = Eq(l_max, l_min)
        slot = resolve_with_trigger(arg.udrs, slot, trigger)
        extra.append(("lex", trigger))
    else:
        slot = dref_res(arg.udrs, slot)
    return u.with_slot(slot), extra


def saturate(head: Sign, arg: LocRecord, position: int, slash) -> UdrsStore:
    """Semantics of head_comp / head_subj.

    ``arg`` is the LOC of the argument (for a trace, its filler's LOC);
    ``slash`` is the SLASH set of the mother.
    """
    u = merge(head.udrs, arg.udrs, ls_from="a")
    u, extra = wire_argument_slot(u, head.slots[position], arg,
                                  position in head.collective)
    for tag, c in extra:
        u = add_constraint(u, c, tag)
    verb_min = head.udrs.l_min
    if arg.sem == "s":
        u = add_constraint(u, Lt(arg.udrs.l_max, verb_min), "IV")
    else:
        u = add_constraint(u, closed_formula(head.udrs.ls, arg.udrs.ls), "IV")
    tail = [loc for loc in head.realized[position + 1:] if loc is not None]
    for c in complement_scope(arg, tail, slash):
        u = add_constraint(u, c, "VI")
    return u


def scope_item(loc: LocRecord) -> Optional[ScopeItem]:
    if loc.sem in SCOPE_TYPES:
        return ScopeItem(loc.sem, *loc.udrs.ls)
    return None


def adjoin_negation(head: Sign, neg: Sign) -> UdrsStore:
    """A negation adjunct takes the verbal projection in its scope."""
    u = merge(head.udrs, neg.udrs, ls_from="a")
    return add_constraint(u, Leq(head.udrs.l_min, neg.udrs.l_min), "adj")


def func_comb(func: Sign, clause: Sign, domain: Label) -> UdrsStore:
    """Bind the clause's local domain at its functional head."""
    u = merge(clause.udrs, func.udrs, ls_from="a")
    u = replace(u, l_max=domain)
    for item in clause.pending_scope:
        c = quantifier_scope(item, domain)
        if c is not None:
            u = add_constraint(u, c, "V")
    if domain != u.top:
        u = add_constraint(u, Leq(clause.udrs.l_min, domain), "V")
    return u


def compose(head: Sign, dtr, schema: str, **kw) -> UdrsStore:
    """Dispatch on the combination schema."""
    if schema in ("head_comp", "head_subj"):
        return saturate(head, dtr, kw["position"], kw["slash"])
    if schema == "head_filler":
        return head.udrs
    if schema == "head_adj":
        return adjoin_negation(head, dtr)
    if schema == "func_comb":
        return func_comb(head, dtr, kw["domain"])
    raise ValueError(f"unknown schema {schema!r}")
