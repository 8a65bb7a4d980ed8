"""Plural disambiguation, conditional promotion and reading enumeration.

A reading places every label of a store into a tree of boxes.  Boxes are
the top box plus every sub-DRS slot of a complex condition (restrictor,
scope, negated box, propositional argument).  Labels that are not boxes
float: they are assigned to a box, which is where their conditions end
up.  A placement is admissible when the box tree is rooted at top, every
subordination constraint holds along the tree, every promoted or still
conditional constraint holds as a material implication, and each referent
occurrence is accessible.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .errors import (InconsistentStore, NotUnderspecified, ScaleExceeded,
                     UnresolvedSlot)
from .textformat import Naming
from .udrs import (DUPLEX, TOP, Atom, Cond, Diamond, Eq, Gen, Implies, Intro,
                   Label, Leq, Lt, Member, Neg, Referent, Slot, UdrsStore,
                   GROUP, INDIVIDUAL, add_constraint, children, classify,
                   POTENTIALLY_SCOPE_BEARING, SCOPE_BEARING, plural_min)

READINGS = ("collective", "distributive", "generic", "cumulative", "none")


@dataclass(frozen=True)
class Directive:
    target: Union[Label, tuple]
    reading: str

    def __post_init__(self):
        if self.reading not in READINGS:
            raise ValueError(f"unknown plural reading {self.reading!r}")
        if (self.reading == "cumulative") != isinstance(self.target, tuple):
            raise ValueError("cumulative readings take a pair of plural labels")


# -- pl_dis -------------------------------------------------------------------

def _group_intro(u, l):
    for c in u.conds:
        if isinstance(c, Intro) and c.label == l and c.ref.is_group:
            return c.ref
    return None


def undisambiguated_plurals(u: UdrsStore) -> list:
    """Plural maximal labels whose reading is still open."""
    cl = u.closure
    out = []
    for c in u.conds:
        if not (isinstance(c, Intro) and c.ref.is_group):
            continue
        l1 = c.label
        l12 = plural_min(u, l1)
        if l12 is None or classify(u, l1) != POTENTIALLY_SCOPE_BEARING:
            continue
        if cl.eq(l1, l12):
            continue
        out.append(l1)
    return sorted(out)


def settle_slots(u: UdrsStore) -> UdrsStore:
    """Resolve slots of plurals whose labels the store already identifies.

    This is the identity clause of dref_res firing late, e.g. after an
    external ``l_1 = l_12`` constraint.
    """
    cl = u.closure
    for s in sorted(u.pending_slots(), key=lambda s: s.slot_id):
        if s.source_ls is None:
            continue
        l1, l12 = s.source_ls
        X = _group_intro(u, l1)
        if X is not None and cl.eq(l1, l12):
            u = u.with_slot(s.resolve(Eq(l1, l12), X))
    return u


def _plural_parts(u, l1):
    X = _group_intro(u, l1)
    l12 = plural_min(u, l1)
    if X is None or l12 is None:
        raise NotUnderspecified(f"{l1!r} is not a plural noun phrase label")
    if l1 not in undisambiguated_plurals(u):
        raise NotUnderspecified(f"the reading of the plural at {l1!r} is already fixed")
    slots = [s for s in u.deferred if s.pending and s.source_ls == (l1, l12)]
    return X, l12, slots


def _tagged(u, items, tag="pl_dis"):
    subord = frozenset(c for c in items if not _is_cond(c))
    conds = frozenset(c for c in items if _is_cond(c))
    out = replace(u, subord=u.subord | subord, conds=u.conds | conds,
                  audit=u.audit | {(tag, c) for c in subord})
    return out


def _is_cond(c):
    return isinstance(c, (Atom, Intro, Implies, Neg, Diamond, Gen, Member))


def pl_dis(u: UdrsStore, d: Directive) -> UdrsStore:
    """Add the constraints and conditions of one plural reading."""
    if d.reading == "none":
        return u
    if d.reading == "cumulative":
        return _cumulative(u, *d.target)
    l1 = d.target
    X, l12, slots = _plural_parts(u, l1)
    if d.reading == "collective":
        trig = Eq(l1, l12)
        out = _tagged(u, [trig])
        for s in slots:
            out = out.with_slot(s.resolve(trig, X))
        return out.check()
    ids = itertools.count(u.max_id() + 1)
    l11 = Label(next(ids), "dist")
    x = Referent(next(ids), INDIVIDUAL)
    duplex = (Implies if d.reading == "distributive" else Gen)(l1, l11, l12)
    trig = Lt(l12, l1)
    out = _tagged(u, [duplex, Intro(l11, x), Member(l11, x, X), Lt(l11, l1), trig])
    for s in slots:
        out = out.with_slot(s.resolve(trig, x))
    return out.check()


def _cumulative(u, la, lb):
    Xa, la2, slots_a = _plural_parts(u, la)
    Xb, lb2, slots_b = _plural_parts(u, lb)
    verbs = [c for c in u.conds if isinstance(c, Atom)
             and any(isinstance(a, Slot) and s.slot_id == a.id
                     for a in c.args for s in slots_a)
             and any(isinstance(a, Slot) and s.slot_id == a.id
                     for a in c.args for s in slots_b)]
    if len(verbs) != 1:
        raise NotUnderspecified("cumulative reading needs one predicate over both plurals")
    verb = verbs[0]
    ids = itertools.count(u.max_id() + 1)
    c, c1, c2, e, e1, e2 = (Label(next(ids), h) for h in ("cum", "cum_r", "cum_s",
                                                           "cum", "cum_r", "cum_s"))
    x, y, y2, x2 = (Referent(next(ids)) for _ in range(4))
    ida = {s.slot_id for s in slots_a}
    idb = {s.slot_id for s in slots_b}

    def args(a_val, b_val):
        out = []
        for arg in verb.args:
            if isinstance(arg, Slot) and arg.id in ida:
                out.append(a_val)
            elif isinstance(arg, Slot) and arg.id in idb:
                out.append(b_val)
            elif isinstance(arg, Slot):
                s = u.slot(arg.id)
                if s.pending:
                    raise UnresolvedSlot("cumulative predicate has another open argument")
                out.append(s.resolved_to)
            else:
                out.append(arg)
        return tuple(out)

    trig = Leq(verb.label, c2)
    items = [Eq(la, la2), Eq(lb, lb2),
             Implies(c, c1, c2), Intro(c1, x), Member(c1, x, Xa),
             Intro(c2, y), Member(c2, y, Xb),
             Implies(e, e1, e2), Intro(e1, y2), Member(e1, y2, Xb),
             Intro(e2, x2), Member(e2, x2, Xa), Atom(e2, verb.rel, args(x2, y2)),
             Lt(c1, c), Lt(c2, c), Lt(e1, e), Lt(e2, e), Eq(c, la), Eq(e, la), trig]
    out = _tagged(u, items)
    for s in slots_a:
        out = out.with_slot(s.resolve(trig, x))
    for s in slots_b:
        out = out.with_slot(s.resolve(trig, y))
    return out.check()


# -- conditional constraints --------------------------------------------------

def promote_conditionals(u: UdrsStore) -> UdrsStore:
    """Promote conditionals whose antecedent holds, drop refuted ones."""
    while True:
        cl = u.closure
        if not cl.consistent:
            raise InconsistentStore("store became cyclic during promotion")
        changed = False
        subord = set(u.subord)
        audit = dict((c, t) for t, c in u.audit)
        for c in u.conditionals():
            a = c.antecedent
            if cl.lt(a.lower, a.upper):
                subord.discard(c)
                subord.add(c.consequent)
                audit.setdefault(c.consequent, audit.get(c, "VI"))
                changed = True
            elif cl.eq(a.lower, a.upper):
                subord.discard(c)
                changed = True
        if not changed:
            return u
        u = replace(u, subord=frozenset(subord),
                    audit=frozenset((t, c) for c, t in audit.items() if c in subord))
        u.check()


# -- box frames ------------------------------------------------------------

def _sub_boxes(c, u):
    """(position, label) for every sub-DRS of a condition."""
    if isinstance(c, Atom):
        args = [u.slot(a.id).resolved_to if isinstance(a, Slot) else a for a in c.args]
        return [(i, a) for i, a in enumerate(args) if isinstance(a, Label)]
    return list(enumerate(children(c)))


class Frame:
    """Box classes, floating label classes and box ownership of a store."""

    def __init__(self, u: UdrsStore):
        self.u = u
        cl = u.closure
        self.rep = {}
        for cls in cl.classes():
            r = min(cls)
            for l in cls:
                self.rep[l] = r
        self.top = self.rep[u.top]
        owners = {}
        for c in u.conds:
            for pos, ch in _sub_boxes(c, u):
                owners.setdefault(self.rep[ch], set()).add((c, pos))
        self.valid = all(len(v) == 1 for v in owners.values()) and self.top not in owners
        self.owner = {b: next(iter(v))[0] for b, v in owners.items()}
        self.boxes = sorted({self.top} | set(owners))
        reps = sorted(set(self.rep.values()))
        self.floating = [r for r in reps if r not in self.owner and r != self.top]
        self.restrictor_of = {}
        for c in u.conds:
            if isinstance(c, DUPLEX):
                self.restrictor_of[self.rep[c.scope]] = self.rep[c.restr]


@dataclass
class Placement:
    frame: Frame
    place: dict          # class representative -> box representative

    def box(self, l):
        return self.place[self.frame.rep[l]]

    def parent(self, b):
        if b == self.frame.top:
            return None
        return self.box(self.frame.owner[b].label)

    def ancestors(self, b):
        """Boxes from ``b`` up to top, or None on a cycle."""
        out, seen = [b], {b}
        while (p := self.parent(out[-1])) is not None:
            if p in seen:
                return None
            seen.add(p)
            out.append(p)
        return out

    def below(self, a, b, strict=False):
        """Box of label ``a`` lies (strictly) inside the box of ``b``."""
        ba, bb = self.box(a), self.box(b)
        chain = self.ancestors(ba)
        if strict:
            return bb in chain[1:]
        return bb in chain


def _holds(p: Placement, c) -> bool:
    if isinstance(c, Leq):
        return p.below(c.lower, c.upper)
    if isinstance(c, Lt):
        return p.below(c.lower, c.upper, strict=True)
    if isinstance(c, Eq):
        return p.box(c.left) == p.box(c.right)
    return (not _holds(p, c.antecedent)) or _holds(p, c.consequent)


def _slot_value(u, a):
    if isinstance(a, Slot):
        s = u.slot(a.id)
        if s.pending:
            raise UnresolvedSlot(f"argument slot {a.id} is still waiting for a plural reading")
        return s.resolved_to
    return a


def occurrences(u: UdrsStore):
    """(label, referent) for every use of a referent in a condition."""
    out = []
    for c in u.conds:
        if isinstance(c, Atom):
            for a in c.args:
                v = _slot_value(u, a)
                if isinstance(v, Referent):
                    out.append((c.label, v))
        elif isinstance(c, Member):
            out += [(c.label, c.elem), (c.label, c.group)]
    return out


def free_referents(p: Placement) -> list:
    """Referent occurrences not accessible from their box."""
    u, fr = p.frame.u, p.frame
    declared = {}
    for c in u.conds:
        if isinstance(c, Intro):
            declared.setdefault(c.ref, set()).add(p.box(c.label))
    bad = []
    for l, r in occurrences(u):
        ok = set()
        for b in p.ancestors(p.box(l)):
            ok.add(b)
            if b in fr.restrictor_of:
                ok.add(fr.restrictor_of[b])
        if not declared.get(r, set()) & ok:
            bad.append((l, r))
    return bad


def placements(u: UdrsStore, check_access: bool = True):
    """Admissible placements, by backtracking with early pruning."""
    fr = Frame(u)
    if not fr.valid:
        return
    unconditional = [c for c in u.subord if not isinstance(c, Cond)]
    conditional = [c for c in u.subord if isinstance(c, Cond)]
    # the search runs on label ids; place[r] is the id of r's box or None
    size = max(l.id for l in fr.rep) + 1
    place = [None] * size
    for b in fr.boxes:
        place[b.id] = b.id
    up = [None] * size
    for b in fr.boxes:
        if b != fr.top:
            up[b.id] = fr.rep[fr.owner[b].label].id
    top, limit = fr.top.id, len(fr.boxes)
    label = {l.id: l for l in fr.rep.values()}

    def chain(r, memo):
        # boxes from r's box up to top; False while unassigned, None on a cycle
        if r in memo:
            return memo[r]
        out, b = [], place[r]
        while b is not None and b != top and len(out) <= limit:
            out.append(b)
            b = place[up[b]]
        if b is None:
            memo[r] = False
        elif b != top:
            memo[r] = None
        else:
            out.append(b)
            memo[r] = out
        return memo[r]

    def ids_of(c):
        if isinstance(c, Eq):
            return (fr.rep[c.left].id, fr.rep[c.right].id)
        return (fr.rep[c.lower].id, fr.rep[c.upper].id)

    spans = [(0 if isinstance(c, Eq) else 1 if isinstance(c, Lt) else 2, ids_of(c))
             for c in unconditional]

    def split(pending):
        """Check constraints whose labels became fully placed; None on failure."""
        memo, rest = {}, []
        for kind, (a, b) in pending:
            ca, cb = chain(a, memo), chain(b, memo)
            if ca is None or cb is None:
                return None
            if ca is False or cb is False:
                rest.append((kind, (a, b)))
                continue
            # a fully placed constraint never changes again
            if kind == 0:
                ok = ca[0] == cb[0]
            elif kind == 1:
                ok = cb[0] in ca[1:]
            else:
                ok = cb[0] in ca
            if not ok:
                return None
        return rest

    def search(i, pending):
        if i == len(order):
            p = Placement(fr, {label[r]: label[place[r]] for r in label})
            for b in fr.boxes:
                if p.ancestors(b) is None:
                    return
            if not all(_holds(p, c) for c in unconditional + conditional):
                return
            if check_access and free_referents(p):
                return
            yield p
            return
        f = order[i]
        for b in hosts[f]:
            place[f] = b
            rest = split(pending)
            if rest is not None:
                yield from search(i + 1, rest)
        place[f] = None

    # outermost material first, so constraints become checkable early
    cl = u.closure
    reps = set(fr.rep.values())
    order = [r.id for r in sorted(fr.floating,
                                  key=lambda r: (sum(cl.leq(r, o) for o in reps), r))]
    # f never sits inside its own material
    hosts = {f: [b.id for b in fr.boxes if not cl.leq(b, label[f])] for f in order}
    start = split(spans)
    if start is None:
        return
    yield from search(0, start)


# -- readings --------------------------------------------------------------

def _hoisted(u: UdrsStore, fr: Frame) -> set:
    """Conditions of collectively read plurals: their own group material.

    Where such a unit sits makes no truth-conditional difference, so it is
    rendered in the top box.
    """
    out = set()
    for c in u.conds:
        if not (isinstance(c, Intro) and c.ref.is_group):
            continue
        l1 = c.label
        l12 = plural_min(u, l1)
        if l12 is None or not u.closure.eq(l1, l12):
            continue
        if any(isinstance(d, DUPLEX) for d in u.conds_at(l1)):
            continue
        out.add(c)
        out.update(d for d in u.conds_at(l1) if isinstance(d, Atom) and d.args == (c.ref,))
    return out


@dataclass
class Reading:
    text: str
    placement: Placement = field(compare=False, repr=False)

    def __hash__(self):
        return hash(self.text)

    def __eq__(self, other):
        return isinstance(other, Reading) and self.text == other.text

    def __lt__(self, other):
        return self.text < other.text

    @property
    def store(self):
        return self.placement.frame.u

    def outscopes(self, a: Label, b: Label) -> bool:
        """The condition at ``a`` has the material of ``b`` in one of its boxes."""
        p = self.placement
        subs = [p.frame.rep[ch] for c in self.store.conds_at(a) for _, ch in _sub_boxes(c, self.store)]
        chain = p.ancestors(p.box(b))
        return any(s in chain for s in subs)

    def pretty(self) -> str:
        return pretty(self.text)


def box_contents(p: Placement) -> dict:
    """Conditions per box, collective plural material lifted to top."""
    u, fr = p.frame.u, p.frame
    hoist = _hoisted(u, fr)
    content = {b: [] for b in fr.boxes}
    for c in u.conds:
        b = fr.top if c in hoist else p.box(c.label)
        content[b].append(c)
    return content


def render(p: Placement) -> str:
    """Canonical one-line box notation of a placement."""
    u, fr = p.frame.u, p.frame
    content = box_contents(p)

    def raw(a):
        v = _slot_value(u, a)
        return v

    def shape_key(c, names):
        return _cond_text(c, names, box_text, raw, anon=True)

    def box_text(l, names):
        b = fr.rep[l]
        univ = sorted((names[c.ref] if names else "_" for c in content[b]
                       if isinstance(c, Intro)), key=_name_key)
        conds = sorted(_cond_text(c, names, box_text, raw, anon=names is None)
                       for c in content[b] if not isinstance(c, Intro))
        return "[ " + " ".join(univ) + (" " if univ else "") + "| " + ", ".join(conds) + " ]"


    order = []

    def walk(b):
        conds = sorted(content[b], key=lambda c: (shape_key(c, None), repr(c)))
        for c in conds:
            for r in _refs_of(c, raw):
                if r not in order:
                    order.append(r)
            for _, ch in _sub_boxes(c, u):
                walk(fr.rep[ch])

    walk(fr.top)
    inds = [r for r in order if not r.is_group]
    grps = [r for r in order if r.is_group]
    names = {r: f"x{i}" for i, r in enumerate(inds, 1)}
    names.update({r: f"X{i}" for i, r in enumerate(grps, 1)})

    return box_text(u.top, names)


def _name_key(n):
    return (n[0].isupper(), len(n), n)


def _refs_of(c, raw):
    if isinstance(c, Intro):
        return [c.ref]
    if isinstance(c, Atom):
        return [v for v in (raw(a) for a in c.args) if isinstance(v, Referent)]
    if isinstance(c, Member):
        return [c.elem, c.group]
    return []


def _cond_text(c, names, box_text, raw, anon=False):
    def n(r):
        if anon or names is None:
            return "X" if r.is_group else "x"
        return names[r]

    if isinstance(c, Intro):
        return n(c.ref)
    if isinstance(c, Atom):
        parts = []
        for a in c.args:
            v = raw(a)
            parts.append(box_text(v, None if anon else names) if isinstance(v, Label) else n(v))
        return f"{c.rel}({','.join(parts)})"
    if isinstance(c, Member):
        return f"{n(c.elem)} in {n(c.group)}"
    sub = lambda l: box_text(l, None if anon else names)
    if isinstance(c, Implies):
        arrow = "=>" if c.quant == "every" else "=>{" + c.quant + "}"
        return f"{sub(c.restr)} {arrow} {sub(c.scope)}"
    if isinstance(c, Neg):
        return f"not {sub(c.inner)}"
    if isinstance(c, Gen):
        return f"GEN {sub(c.restr)} {sub(c.scope)}"
    if isinstance(c, Diamond):
        return f"{sub(c.restr)} <> {sub(c.scope)}"
    raise TypeError(c)


def pretty(text: str) -> str:
    """Indent the one-line box notation, one condition per line."""
    out, depth, i, line, parens = [], 0, 0, "", 0
    while i < len(text):
        ch = text[i]
        parens += (ch == "(") - (ch == ")")
        if ch == "[" and parens:
            # a propositional argument stays on its line
            j, d = i, 0
            while True:
                d += (text[j] == "[") - (text[j] == "]")
                j += 1
                if d == 0:
                    break
            line += text[i:j]
            i = j
            continue
        if ch == "[":
            j = text.index("|", i)
            line += text[i:j + 1].rstrip()
            out.append("  " * depth + line.strip())
            line = ""
            depth += 1
            i = j + 1
            continue
        if ch == "]":
            if line.strip():
                out.append("  " * depth + line.strip())
            line = ""
            depth -= 1
            rest = ""
            k = i + 1
            # keep "] => [", "] <> [" and "] [" (GEN) on one line
            while k < len(text) and text[k] not in "[],":
                rest += text[k]
                k += 1
            if k < len(text) and text[k] == "[":
                j = text.index("|", k)
                out.append("  " * depth + "]" + rest + text[k:j + 1])
                depth += 1
                i = j + 1
                continue
            out.append("  " * depth + "]" + rest.rstrip())
            i = k
            continue
        if ch == "," and depth > 0 and not parens:
            if line.strip():
                out.append("  " * depth + line.strip())
            line = ""
            i += 1
            continue
        line += ch
        i += 1
    return "\n".join(l.rstrip() for l in out if l.strip())


def _prepare(u: UdrsStore, plural_policy: str, directives=()):
    """Stores to enumerate: one per choice of reading for open plurals."""
    if plural_policy not in ("fixed", "branch"):
        raise ValueError(f"unknown plural policy {plural_policy!r}")
    for d in directives:
        u = pl_dis(u, d)
    open_pl = undisambiguated_plurals(u)
    if plural_policy == "fixed" or not open_pl:
        return [settle_slots(u)]
    out = []
    for choice in itertools.product(("collective", "distributive"), repeat=len(open_pl)):
        try:
            v = u
            for l, r in zip(open_pl, choice):
                v = pl_dis(v, Directive(l, r))
            promote_conditionals(v)
        except InconsistentStore:
            continue        # this choice contradicts the store
        out.append(settle_slots(v))
    if not out:
        raise InconsistentStore("no plural reading is consistent with the store")
    return out


def _require_resolved(u):
    pending = u.pending_slots()
    if pending:
        raise UnresolvedSlot(
            f"{len(pending)} argument slot(s) wait for a plural reading; "
            "give a directive or use the branch policy")


def enumerate_readings(u: UdrsStore, plural_policy: str = "fixed", directives=()) -> list:
    """Distinct readings, sorted by their canonical text."""
    found = {}
    for v in _prepare(u, plural_policy, directives):
        v = promote_conditionals(v)
        _require_resolved(v)
        for p in placements(v):
            r = Reading(render(p), p)
            found.setdefault(r.text, r)
    return [found[k] for k in sorted(found)]


# -- brute force oracle ---------------------------------------------------------

def scope_bearing_units(u: UdrsStore) -> list:
    return sorted(c.label for c in u.conds
                  if isinstance(c, (Neg,) + DUPLEX))


def brute_force_readings(u: UdrsStore, plural_policy: str = "fixed", directives=()) -> list:
    """Exhaustive generate-and-test over all label-to-box maps.

    Shares nothing with ``enumerate_readings`` except pl_dis and the
    rendering: the order is recomputed by naive fixpoint iteration,
    conditionals are promoted by its own loop, and accessibility is checked
    by pushing environments down the finished tree.
    """
    n_plural = sum(1 for c in u.conds if isinstance(c, Intro) and c.ref.is_group)
    if n_plural > 2:
        raise ScaleExceeded(f"{n_plural} plural noun phrases (at most 2)")
    found = {}
    for v in _prepare(u, plural_policy, directives):
        units = scope_bearing_units(v)
        if len(units) > 4:
            raise ScaleExceeded(f"{len(units)} scope-bearing units (at most 4)")
        v = _bf_promote(v)
        if any(s.pending for s in v.deferred):
            raise UnresolvedSlot("argument slots wait for a plural reading")
        for p in _bf_placements(v):
            r = Reading(render(p), p)
            found.setdefault(r.text, r)
    return [found[k] for k in sorted(found)]


def _bf_order(u):
    """Naive closure: set of (a, b, strict) facts, iterated to a fixpoint."""
    labels = set(u.labels())
    weak, strict = set(), set()
    for l in labels:
        weak |= {(l, l), (l, u.top)}
    for c in u.subord:
        if isinstance(c, Leq):
            weak.add((c.lower, c.upper))
        elif isinstance(c, Lt):
            strict.add((c.lower, c.upper))
        elif isinstance(c, Eq):
            weak |= {(c.left, c.right), (c.right, c.left)}
    for c in u.conds:
        for ch in children(c):
            strict.add((ch, c.label))
    while True:
        before = (len(weak), len(strict))
        rel = weak | strict
        new_w, new_s = set(), set()
        for a, b in rel:
            for b2, c in rel:
                if b == b2:
                    if (a, b) in strict or (b, c) in strict:
                        new_s.add((a, c))
                    else:
                        new_w.add((a, c))
        weak |= new_w
        strict |= new_s
        if (len(weak), len(strict)) == before:
            break
    if any(a == b for a, b in strict):
        raise InconsistentStore("cyclic")
    return weak | strict, strict


def _bf_promote(u):
    subord = set(u.subord)
    while True:
        cur = replace(u, subord=frozenset(subord))
        rel, strict = _bf_order(cur)
        step = False
        for c in [c for c in subord if isinstance(c, Cond)]:
            a = c.antecedent
            if (a.lower, a.upper) in strict:
                subord.remove(c)
                subord.add(c.consequent)
                step = True
            elif (a.lower, a.upper) in rel and (a.upper, a.lower) in rel:
                subord.remove(c)
                step = True
        if not step:
            return cur


def _bf_placements(u):
    rel, _ = _bf_order(u)
    labels = sorted(u.labels())
    same = {l: frozenset(m for m in labels if (l, m) in rel and (m, l) in rel) for l in labels}
    slots = {}      # box label -> (owning condition, position)
    for c in u.conds:
        for pos, ch in _sub_boxes(c, u):
            slots.setdefault(ch, []).append((c, pos))
    box_labels = {u.top} | set(slots)
    # a box is an equivalence class holding top or a sub-DRS label
    boxes = sorted({same[l] for l in box_labels}, key=min)
    for b in boxes:
        owners = {o for l in b if l in slots for o in slots[l]}
        if len(owners) > 1 or (u.top in b and owners):
            return
    classes = sorted({same[l] for l in labels}, key=min)
    idx = {cls: i for i, cls in enumerate(classes)}
    cls_of = {l: idx[same[l]] for l in labels}
    box_ids = [idx[b] for b in boxes]
    top_box = box_ids.index(cls_of[u.top])
    owner_cls = []
    for b in boxes:
        owners = [o for l in b if l in slots for o in slots[l]]
        owner_cls.append(cls_of[owners[0][0].label] if owners else None)
    free = [i for i in range(len(classes)) if i not in set(box_ids)]
    # a class never goes into a box that the order already puts below it
    cands = [[k for k, b in enumerate(boxes) if (min(b), min(classes[i])) not in rel]
             for i in free]

    def compile_(c):
        if isinstance(c, Cond):
            return ("=>", compile_(c.antecedent), compile_(c.consequent))
        if isinstance(c, Eq):
            return ("=", cls_of[c.left], cls_of[c.right])
        return ("<" if isinstance(c, Lt) else "<=", cls_of[c.lower], cls_of[c.upper])

    checks = [compile_(c) for c in u.subord]
    n = len(boxes)
    where = [None] * len(classes)
    for k, i in enumerate(box_ids):
        where[i] = k
    for combo in itertools.product(*cands):
        for i, k in zip(free, combo):
            where[i] = k
        parent = [None if o is None else where[o] for o in owner_cls]
        depth = []
        for k in range(n):
            seen, cur = [], k
            while cur is not None and cur not in seen:
                seen.append(cur)
                cur = parent[cur]
            if cur is not None or seen[-1] != top_box:
                break
            depth.append(seen)
        if len(depth) < n:
            continue

        def sat(c):
            if c[0] == "=>":
                return not sat(c[1]) or sat(c[2])
            if c[0] == "=":
                return where[c[1]] == where[c[2]]
            chain = depth[where[c[1]]]
            return where[c[2]] in (chain[1:] if c[0] == "<" else chain)

        if not all(sat(c) for c in checks):
            continue
        box_of = {l: boxes[where[cls_of[l]]] for l in labels}
        parents = {boxes[k]: (None if p is None else boxes[p]) for k, p in enumerate(parent)}
        if not _bf_accessible(u, box_of, parents, boxes):
            continue
        fr = Frame(u)
        place = {fr.rep[l]: fr.rep[min(box_of[l])] for l in labels}
        yield Placement(fr, place)


def _bf_accessible(u, box_of, parent, boxes):
    """Push the set of visible referents from the top box downwards."""
    decl = {b: set() for b in boxes}
    for c in u.conds:
        if isinstance(c, Intro):
            decl[box_of[c.label]].add(c.ref)
    restr = {}
    for c in u.conds:
        if isinstance(c, DUPLEX):
            restr[box_of[c.scope]] = box_of[c.restr]
    kids = {b: [k for k in boxes if parent[k] == b] for b in boxes}
    env = {}
    todo = [b for b in boxes if parent[b] is None]
    for b in todo:
        env[b] = set(decl[b])
    while todo:
        b = todo.pop()
        for k in kids[b]:
            env[k] = env[b] | decl[k]
            if k in restr:
                # the scope sees the restrictor's referents
                env[k] = env[k] | decl[restr[k]]
            todo.append(k)
    for c in u.conds:
        used = []
        if isinstance(c, Atom):
            for a in c.args:
                v = u.slot(a.id).resolved_to if isinstance(a, Slot) else a
                if isinstance(v, Referent):
                    used.append(v)
        elif isinstance(c, Member):
            used = [c.elem, c.group]
        if any(r not in env[box_of[c.label]] for r in used):
            return False
    return True


# -- DOT export -------------------------------------------------------------------

def to_dot(u: UdrsStore, name: str = "udrs") -> str:
    """Hasse diagram of the subordination closure, top at the top."""
    nm = Naming(u)
    cl = u.closure
    reps = sorted({min(c) for c in cl.classes()})
    cls_of = {min(c): sorted(c) for c in cl.classes()}
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box, fontname=monospace];"]
    for r in reps:
        labs = " = ".join(nm.label(l) for l in cls_of[r])
        conds = sorted(nm.cond(c).split(" : ", 1)[1] for l in cls_of[r] for c in u.conds_at(l))
        text = "\\n".join([labs] + conds).replace('"', '\\"')
        lines.append(f'  n{r.id} [label="{text}"];')
    for a in reps:
        for b in reps:
            if a == b or not cl.leq(a, b):
                continue
            if any(c not in (a, b) and cl.leq(a, c) and cl.leq(c, b) and not cl.eq(c, a)
                   and not cl.eq(c, b) for c in reps):
                continue
            style = "solid" if cl.lt(a, b) else "dashed"
            lines.append(f"  n{a.id} -> n{b.id} [style={style}];")
    for c in sorted(u.conditionals(), key=repr):
        lines.append(f'  // conditional: {nm.constraint(c)}')
    lines.append("}")
    return "\n".join(lines) + "\n"
