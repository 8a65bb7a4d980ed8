"""Random stores built directly from conditions, independent of the grammar."""
import random

from scopeforge.udrs import (GROUP, TOP, Atom, Cond, DeferredSlot, Eq, Implies, Intro,
                             Label, Leq, Lt, Neg, Referent, Slot, UdrsStore, closure)


def random_store(rng: random.Random, max_units=4, max_plurals=2):
    """A clause with quantifiers, indefinites, plurals and negation around one verb."""
    ids = iter(range(1, 10_000))
    conds, subord, slots, args, nps = set(), set(), [], [], []
    n_plural = rng.randint(0, max_plurals)
    n_quant = rng.randint(0, max_units - n_plural)
    n_neg = rng.randint(0, min(1, max_units - n_plural - n_quant))
    n_indef = rng.randint(0 if n_quant + n_plural else 1, 2)
    v = Label(next(ids))
    for _ in range(n_quant):
        l1, l11, l12, x = Label(next(ids)), Label(next(ids)), Label(next(ids)), Referent(next(ids))
        conds |= {Implies(l1, l11, l12, rng.choice(["every", "mindestens_ein"])),
                  Intro(l11, x), Atom(l11, rng.choice(["p", "q"]), (x,))}
        subord |= {Lt(l11, l1), Lt(l12, l1), Leq(l1, TOP)}
        nps.append(("quant", l1, l12))
        s = DeferredSlot(next(ids), (l1, l12), Lt(l12, l1), x)
        slots.append(s)
    for _ in range(n_indef):
        l, x = Label(next(ids)), Referent(next(ids))
        conds |= {Intro(l, x), Atom(l, rng.choice(["r", "s"]), (x,))}
        subord.add(Eq(l, l))
        nps.append(("indef", l, l))
        slots.append(DeferredSlot(next(ids), (l, l), Eq(l, l), x))
    for _ in range(n_plural):
        l1, l12, X = Label(next(ids)), Label(next(ids)), Referent(next(ids), GROUP)
        conds |= {Intro(l1, X), Atom(l1, rng.choice(["g", "h"]), (X,))}
        subord |= {Leq(l12, l1), Cond(Lt(l12, l1), Leq(l1, TOP))}
        nps.append(("plural", l1, l12))
        slots.append(DeferredSlot(next(ids), (l1, l12)))
    rng.shuffle(slots)
    conds.add(Atom(v, "verb", tuple(Slot(s.slot_id) for s in slots)))
    for s in slots:
        subord.add(Leq(v, s.source_ls[1]))
    if n_neg:
        l2, l21 = Label(next(ids)), Label(next(ids))
        conds.add(Neg(l2, l21))
        subord |= {Lt(l21, l2), Leq(v, l21), Leq(l2, TOP)}
        nps.append(("neg", l2, l21))
    u = UdrsStore(TOP, v, frozenset(subord), frozenset(conds), frozenset(slots))
    # a few ordering facts between scope bearers, kept only when consistent
    bearers = [n for n in nps if n[0] != "indef"]
    for _ in range(rng.randint(0, 2)):
        if len(bearers) < 2:
            break
        a, b = rng.sample(bearers, 2)
        c = Leq(a[1], b[2])
        if a[0] == "plural":
            c = Cond(Lt(a[2], a[1]), c)
        if b[0] == "plural":
            c = Cond(Lt(b[2], b[1]), c)
        trial = UdrsStore(u.l_max, u.l_min, u.subord | {c}, u.conds, u.deferred)
        if closure(trial).consistent:
            u = trial
    return u
