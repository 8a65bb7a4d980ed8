"""The label algebra of underspecified DRSs.

A store holds labelled conditions and subordination constraints between
labels.  Subordination is written ``lower <= upper`` throughout; the top
label is the greatest element.  Equality constraints are quotiented away
with a union-find before the order is closed.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Optional, Union

from .errors import (DuplicateIntro, InconsistentStore, NoMatchingClause,
                     TopMismatch)

INDIVIDUAL = "individual"
GROUP = "group"


@dataclass(frozen=True, order=True)
class Label:
    id: int
    hint: str = field(default="", compare=False)

    def __hash__(self):
        return self.id

    def __repr__(self):
        return f"<{self.hint or 'l'}#{self.id}>"


TOP = Label(0, "top")


@dataclass(frozen=True, order=True)
class Referent:
    id: int
    sort: str = INDIVIDUAL
    hint: str = field(default="", compare=False)

    def __post_init__(self):
        if self.sort not in (INDIVIDUAL, GROUP):
            raise ValueError(f"bad referent sort {self.sort!r}")

    @property
    def is_group(self):
        return self.sort == GROUP

    def __repr__(self):
        return f"<{'X' if self.is_group else 'x'}#{self.id}>"


@dataclass(frozen=True, order=True)
class Slot:
    """Placeholder in a verb atom for an argument filled by ``dref_res``."""
    id: int


class Fresh:
    """Fresh-id service for one analysis.  ``next`` on a count is atomic."""

    def __init__(self, start=1):
        self._ids = itertools.count(start)

    def label(self, hint=""):
        return Label(next(self._ids), hint)

    def referent(self, sort=INDIVIDUAL, hint=""):
        return Referent(next(self._ids), sort, hint)

    def slot(self):
        return Slot(next(self._ids))


# -- conditions -------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Atom:
    label: Label
    rel: str
    args: tuple = ()


@dataclass(frozen=True, order=True)
class Intro:
    label: Label
    ref: Referent


@dataclass(frozen=True, order=True)
class Implies:
    label: Label
    restr: Label
    scope: Label
    quant: str = "every"

    def __post_init__(self):
        _distinct_children(self, (self.restr, self.scope))


@dataclass(frozen=True, order=True)
class Neg:
    label: Label
    inner: Label

    def __post_init__(self):
        _distinct_children(self, (self.inner,))


@dataclass(frozen=True, order=True)
class Diamond:
    label: Label
    restr: Label
    scope: Label

    def __post_init__(self):
        _distinct_children(self, (self.restr, self.scope))


@dataclass(frozen=True, order=True)
class Gen:
    label: Label
    restr: Label
    scope: Label

    def __post_init__(self):
        _distinct_children(self, (self.restr, self.scope))


@dataclass(frozen=True, order=True)
class Member:
    label: Label
    elem: Referent
    group: Referent

    def __post_init__(self):
        if self.elem.is_group or not self.group.is_group:
            raise ValueError("membership needs an individual and a group")


Condition = Union[Atom, Intro, Implies, Neg, Diamond, Gen, Member]
DUPLEX = (Implies, Diamond, Gen)


def _distinct_children(cond, children):
    if cond.label in children:
        raise ValueError(f"{type(cond).__name__} child equals its own label")


def children(cond) -> tuple:
    """Labels of the sub-DRSs a condition embeds."""
    if isinstance(cond, DUPLEX):
        return (cond.restr, cond.scope)
    if isinstance(cond, Neg):
        return (cond.inner,)
    if isinstance(cond, Atom):
        return tuple(a for a in cond.args if isinstance(a, Label))
    return ()


def cond_labels(cond) -> tuple:
    return (cond.label,) + children(cond)


# -- subordination constraints ----------------------------------------------

@dataclass(frozen=True, order=True)
class Leq:
    lower: Label
    upper: Label


@dataclass(frozen=True, order=True)
class Lt:
    lower: Label
    upper: Label


@dataclass(frozen=True, order=True)
class Eq:
    left: Label
    right: Label


@dataclass(frozen=True, order=True)
class Cond:
    """``antecedent -> consequent``; inert until the antecedent holds."""
    antecedent: Lt
    consequent: "Constraint"

    def __post_init__(self):
        if not isinstance(self.antecedent, Lt):
            raise ValueError("conditional antecedent must be strict")
        depth, c = 1, self.consequent
        while isinstance(c, Cond):
            depth, c = depth + 1, c.consequent
        if depth > 2:
            raise ValueError("conditionals nest at most twice")


Constraint = Union[Leq, Lt, Eq, Cond]


def constraint_labels(c) -> tuple:
    if isinstance(c, (Leq, Lt)):
        return (c.lower, c.upper)
    if isinstance(c, Eq):
        return (c.left, c.right)
    return constraint_labels(c.antecedent) + constraint_labels(c.consequent)


@dataclass(frozen=True)
class DeferredSlot:
    """An argument slot whose referent is computed once its trigger is known.

    ``resolved_to`` is set exactly when ``trigger`` is; a sentential slot
    resolves to a label rather than a referent.
    """
    slot_id: int
    source_ls: Optional[tuple] = None
    trigger: Optional[Constraint] = None
    resolved_to: Union[Referent, Label, None] = None

    def __post_init__(self):
        if (self.trigger is None) != (self.resolved_to is None):
            raise ValueError("trigger and resolved_to are set together")

    @property
    def pending(self):
        return self.resolved_to is None

    def resolve(self, trigger, value):
        if not self.pending:
            raise ValueError(f"slot {self.slot_id} is already resolved")
        return replace(self, trigger=trigger, resolved_to=value)


# -- closure ----------------------------------------------------------------

class Closure:
    """Reflexive-transitive closure of the unconditional order.

    Strictness survives along any chain with at least one strict link.
    """

    def __init__(self, labels, eqs, edges):
        parent = {l: l for l in labels}

        def find(l):
            while parent[l] != l:
                parent[l] = parent[parent[l]]
                l = parent[l]
            return l

        for a, b in eqs:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        self._find = find
        reps = sorted({find(l) for l in labels})
        index = {r: i for i, r in enumerate(reps)}
        n = len(reps)
        # None = unrelated, False = weakly below, True = strictly below
        rel = [[None] * n for _ in range(n)]
        for i in range(n):
            rel[i][i] = False
        for lo, hi, strict in edges:
            i, j = index[find(lo)], index[find(hi)]
            if rel[i][j] is None or (strict and not rel[i][j]):
                rel[i][j] = strict
        for k in range(n):
            rk = rel[k]
            for i in range(n):
                rik = rel[i][k]
                if rik is None:
                    continue
                ri = rel[i]
                for j in range(n):
                    rkj = rk[j]
                    if rkj is None:
                        continue
                    s = rik or rkj
                    if ri[j] is None or (s and not ri[j]):
                        ri[j] = s
        self.labels = frozenset(labels)
        self._reps = reps
        self._index = index
        self._rel = rel

    def _ij(self, a, b):
        return self._index[self._find(a)], self._index[self._find(b)]

    def leq(self, a, b) -> bool:
        i, j = self._ij(a, b)
        return self._rel[i][j] is not None

    def lt(self, a, b) -> bool:
        i, j = self._ij(a, b)
        return bool(self._rel[i][j])

    def eq(self, a, b) -> bool:
        i, j = self._ij(a, b)
        return i == j or (self._rel[i][j] is not None and self._rel[j][i] is not None)

    @property
    def consistent(self) -> bool:
        return not any(self._rel[i][i] for i in range(len(self._reps)))

    def cyclic_labels(self):
        return sorted(l for l in self.labels if self.lt(l, l))

    def pairs(self) -> frozenset:
        """All (lower, upper) label pairs related by the closure."""
        return frozenset((a, b) for a in self.labels for b in self.labels if self.leq(a, b))

    def strict_pairs(self) -> frozenset:
        return frozenset((a, b) for a in self.labels for b in self.labels if self.lt(a, b))

    def classes(self):
        """Equivalence classes of labels (Eq constraints plus mutual <=)."""
        out = []
        seen = set()
        for l in sorted(self.labels):
            if l in seen:
                continue
            cls = frozenset(m for m in self.labels if self.eq(l, m))
            seen |= cls
            out.append(cls)
        return out


# -- the store --------------------------------------------------------------

@dataclass(frozen=True)
class UdrsStore:
    l_max: Optional[Label] = None
    l_min: Optional[Label] = None
    subord: frozenset = frozenset()
    conds: frozenset = frozenset()
    deferred: frozenset = frozenset()
    top: Label = TOP
    audit: frozenset = field(default=frozenset(), compare=False)

    @property
    def ls(self):
        return (self.l_max, self.l_min)

    def labels(self) -> frozenset:
        out = {self.top}
        out.update(l for l in self.ls if l is not None)
        for c in self.conds:
            out.update(cond_labels(c))
        for c in self.subord:
            out.update(constraint_labels(c))
        for s in self.deferred:
            if s.source_ls:
                out.update(l for l in s.source_ls if l is not None)
        return frozenset(out)

    def referents(self) -> frozenset:
        out = set()
        for c in self.conds:
            if isinstance(c, Intro):
                out.add(c.ref)
            elif isinstance(c, Member):
                out.update((c.elem, c.group))
            elif isinstance(c, Atom):
                out.update(a for a in c.args if isinstance(a, Referent))
        for s in self.deferred:
            if isinstance(s.resolved_to, Referent):
                out.add(s.resolved_to)
        return frozenset(out)

    def conds_at(self, label):
        return [c for c in self.conds if c.label == label]

    def slot(self, slot_id) -> DeferredSlot:
        for s in self.deferred:
            if s.slot_id == slot_id:
                return s
        raise KeyError(slot_id)

    def with_slot(self, slot: DeferredSlot) -> "UdrsStore":
        rest = frozenset(s for s in self.deferred if s.slot_id != slot.slot_id)
        return replace(self, deferred=rest | {slot})

    def pending_slots(self):
        return sorted((s for s in self.deferred if s.pending), key=lambda s: s.slot_id)

    def unconditional(self):
        return [c for c in self.subord if not isinstance(c, Cond)]

    def conditionals(self):
        return [c for c in self.subord if isinstance(c, Cond)]

    def max_id(self) -> int:
        ids = [l.id for l in self.labels()] + [r.id for r in self.referents()]
        ids += [s.slot_id for s in self.deferred]
        return max(ids, default=0)

    @cached_property
    def closure(self) -> Closure:
        return closure(self)

    def check(self) -> "UdrsStore":
        cl = self.closure
        if not cl.consistent:
            raise InconsistentStore(
                "subordination is cyclic at " + ", ".join(map(repr, cl.cyclic_labels())))
        return self


def closure(u: UdrsStore) -> Closure:
    labels = u.labels()
    eqs, edges = [], []
    for c in u.subord:
        if isinstance(c, Eq):
            eqs.append((c.left, c.right))
        elif isinstance(c, Leq):
            edges.append((c.lower, c.upper, False))
        elif isinstance(c, Lt):
            edges.append((c.lower, c.upper, True))
    for c in u.conds:
        for ch in children(c):
            edges.append((ch, c.label, True))
    for l in labels:
        edges.append((l, u.top, False))
    return Closure(labels, eqs, edges)


def merge(a: UdrsStore, b: UdrsStore, ls_from: str = "a") -> UdrsStore:
    """Union of two stores; ``ls_from`` names the input supplying LS."""
    if a.top != b.top:
        raise TopMismatch(f"cannot merge stores with tops {a.top!r} and {b.top!r}")
    by_id = {s.slot_id: s for s in a.deferred}
    for s in b.deferred:
        if s.slot_id in by_id and by_id[s.slot_id] != s:
            raise InconsistentStore(f"slot {s.slot_id} differs between daughters")
        by_id[s.slot_id] = s
    src = a if ls_from == "a" else b
    out = UdrsStore(src.l_max, src.l_min, a.subord | b.subord, a.conds | b.conds,
                    frozenset(by_id.values()), a.top, a.audit | b.audit)
    return out.check()


def add_constraint(u: UdrsStore, c, tag: str = "ext") -> UdrsStore:
    out = replace(u, subord=u.subord | {c}, audit=u.audit | {(tag, c)})
    return out.check()


def add_conditions(u: UdrsStore, conds: Iterable) -> UdrsStore:
    return replace(u, conds=u.conds | frozenset(conds))


def plural_min(u: UdrsStore, l: Label) -> Optional[Label]:
    """The weakly subordinated minimal label of the plural NP at ``l``."""
    for s in sorted(u.deferred, key=lambda s: s.slot_id):
        if s.source_ls and s.source_ls[0] == l and s.source_ls[1] != l:
            return s.source_ls[1]
    lexical = {c for t, c in u.audit if t == "lex"}
    for c in sorted(u.subord & lexical, key=repr):
        if isinstance(c, Leq) and c.upper == l and c.lower != l:
            return c.lower
    for c in sorted(u.subord, key=repr):
        if isinstance(c, Leq) and c.upper == l and c.lower != l:
            return c.lower
    return None


def _scope_res(u: UdrsStore, l: Label):
    here = u.conds_at(l)
    for c in here:
        if isinstance(c, Neg):
            return c.inner, c.inner
    for c in here:
        if isinstance(c, DUPLEX):
            return c.scope, c.restr
    if any(isinstance(c, Intro) and c.ref.is_group for c in here):
        cl = u.closure
        m = plural_min(u, l)
        if m is not None and cl.eq(m, l):
            return l, l
        return None, None
    return l, l


def scope_of(u: UdrsStore, l: Label) -> Optional[Label]:
    return _scope_res(u, l)[0]


def res_of(u: UdrsStore, l: Label) -> Optional[Label]:
    return _scope_res(u, l)[1]


SCOPE_BEARING = "scope_bearing"
NOT_SCOPE_BEARING = "not_scope_bearing"
POTENTIALLY_SCOPE_BEARING = "potentially_scope_bearing"


def classify(u: UdrsStore, l: Label) -> str:
    scope, res = _scope_res(u, l)
    if scope is None:
        return POTENTIALLY_SCOPE_BEARING
    if scope != l:
        return SCOPE_BEARING
    if res == l:
        return NOT_SCOPE_BEARING
    return POTENTIALLY_SCOPE_BEARING


def dref_of(u: UdrsStore, l: Label) -> Optional[Referent]:
    refs = {c.ref for c in u.conds if isinstance(c, Intro) and c.label == l}
    if len(refs) > 1:
        raise DuplicateIntro(f"label {l!r} introduces {sorted(refs)}")
    return next(iter(refs), None)


def _has_eq(subord, a, b):
    return Eq(a, b) in subord or Eq(b, a) in subord


def dref_res(arg: UdrsStore, slot: DeferredSlot) -> DeferredSlot:
    """Try to fill ``slot`` from the argument store it was wired to.

    Returns the slot, resolved when the argument's own subordination fixes
    its reading and still pending for an undisambiguated plural.  A slot that
    already carries a trigger (collective-selecting verbs) resolves at once.
    """
    l_max, l_min = slot.source_ls
    if not slot.pending:
        return slot
    if l_max == l_min or _has_eq(arg.subord, l_max, l_min):
        return slot.resolve(Eq(l_max, l_min), dref_of(arg, l_max))
    if Lt(l_min, l_max) in arg.subord:
        return slot.resolve(Lt(l_min, l_max), dref_of(arg, res_of(arg, l_max)))
    if Leq(l_min, l_max) in arg.subord:
        return slot
    raise NoMatchingClause(f"no subordination pattern between {l_max!r} and {l_min!r}")


def resolve_with_trigger(arg: UdrsStore, slot: DeferredSlot, trigger) -> DeferredSlot:
    """Resolve a slot from an externally supplied trigger (verb or pl_dis)."""
    l_max, l_min = slot.source_ls
    if isinstance(trigger, Eq):
        return slot.resolve(trigger, dref_of(arg, l_max))
    return slot.resolve(trigger, dref_of(arg, res_of(arg, l_max)))


def is_isomorphic(a: UdrsStore, b: UdrsStore, constraints: bool = True) -> bool:
    """Structural equality up to renaming of labels and referents.

    Backtracking over label bijections; only meant for small stores.
    """
    from .textformat import canonical_items
    ia, ib = set(canonical_items(a, constraints)), set(canonical_items(b, constraints))
    if len(ia) != len(ib) or len(a.labels()) != len(b.labels()):
        return False
    la = sorted(a.labels() - {a.top})
    lb = sorted(b.labels() - {b.top})
    ra, rb = sorted(a.referents()), sorted(b.referents())
    if len(ra) != len(rb):
        return False
    target = set(ib)

    def sig(items, l):
        return sorted(type(x).__name__ for x in items if l in _item_labels(x))

    sig_b = {l: sig(ib, l) for l in lb}
    sig_a = {l: sig(ia, l) for l in la}

    intro_b = {x.label: x.ref for x in ib if isinstance(x, Intro)}

    def refs_ok(lmap):
        full = dict(lmap)
        full[a.top] = b.top
        rmap = {}
        for x in ia:
            if isinstance(x, Intro):
                rmap[x.ref] = intro_b.get(full[x.label])
        if len(rmap) == len(ra) and None not in rmap.values():
            try:
                return {_rename(x, lmap, rmap, a.top, b.top) for x in ia} == target
            except KeyError:
                return False
        for rmap_perm in itertools.permutations(rb):
            rmap = dict(zip(ra, rmap_perm))
            if any(k.sort != v.sort for k, v in rmap.items()):
                continue
            if {_rename(x, lmap, rmap, a.top, b.top) for x in ia} == target:
                return True
        return False

    def search(i, lmap, used):
        if i == len(la):
            return refs_ok(lmap)
        for cand in lb:
            if cand in used or sig_b[cand] != sig_a[la[i]]:
                continue
            lmap[la[i]] = cand
            used.add(cand)
            if search(i + 1, lmap, used):
                return True
            used.discard(cand)
            del lmap[la[i]]
        return False

    return search(0, {}, set())


def _item_labels(x):
    if isinstance(x, (Leq, Lt, Eq, Cond)):
        return constraint_labels(x)
    return cond_labels(x)


def _rename(x, lmap, rmap, top_a, top_b):
    def L(l):
        return top_b if l == top_a else lmap[l]

    def arg(v):
        if isinstance(v, Label):
            return L(v)
        if isinstance(v, Referent):
            return rmap[v]
        if isinstance(v, tuple):
            return tuple(L(l) for l in v)
        return v

    if isinstance(x, Leq):
        return Leq(L(x.lower), L(x.upper))
    if isinstance(x, Lt):
        return Lt(L(x.lower), L(x.upper))
    if isinstance(x, Eq):
        return Eq(*sorted((L(x.left), L(x.right))))
    if isinstance(x, Cond):
        return Cond(_rename(x.antecedent, lmap, rmap, top_a, top_b),
                    _rename(x.consequent, lmap, rmap, top_a, top_b))
    if isinstance(x, Atom):
        return Atom(L(x.label), x.rel, tuple(arg(v) for v in x.args))
    if isinstance(x, Intro):
        return Intro(L(x.label), rmap[x.ref])
    if isinstance(x, Member):
        return Member(L(x.label), rmap[x.elem], rmap[x.group])
    if isinstance(x, Neg):
        return Neg(L(x.label), L(x.inner))
    return replace(x, label=L(x.label), restr=L(x.restr), scope=L(x.scope))
