"""Truth of fully scoped readings in small finite models.

Model file, one statement per line (``#`` starts a comment)::

    entity b1 b2 b3 i1 i2
    group B = {b1,b2,b3}
    rel brewery: (B)
    rel supply: (b1,i1); (b2,i2); (b3,i2)

Group names inside ``rel`` tuples stand for their member sets.  Group
referents of a reading range over all nonempty sets of entities; an atom
with a group argument holds iff that exact set appears in the extension.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path

from .disambig import Reading, box_contents
from .errors import ArityMismatch, GenNotEvaluable, ModelError, NotEvaluable
from .udrs import (Atom, Diamond, Gen, Implies, Intro, Label, Member, Neg,
                   Referent, Slot)

_NAME = r"[A-Za-z_][A-Za-z0-9_\-]*"
_RE_ENTITY = re.compile(rf"^entity((?:\s+{_NAME})+)$")
_RE_GROUP = re.compile(rf"^group\s+({_NAME})\s*=\s*\{{\s*({_NAME}(?:\s*,\s*{_NAME})*)\s*\}}$")
_RE_REL = re.compile(rf"^rel\s+({_NAME})\s*:\s*(.*)$")
_RE_TUPLE = re.compile(rf"^\(\s*({_NAME}(?:\s*,\s*{_NAME})*)?\s*\)$")
_CARD = re.compile(r"^card_(\d+)$")


@dataclass
class Model:
    entities: frozenset = frozenset()
    groups: dict = field(default_factory=dict)
    extensions: dict = field(default_factory=dict)

    def arity(self, rel):
        ext = self.extensions.get(rel)
        if not ext:
            return None
        return len(next(iter(ext)))


def loads_model(text: str) -> Model:
    entities, groups, ext = [], {}, {}
    rel_lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if (m := _RE_ENTITY.match(line)):
            for e in m.group(1).split():
                if e in entities:
                    raise ModelError(f"entity {e!r} declared twice", line=lineno)
                entities.append(e)
        elif (m := _RE_GROUP.match(line)):
            name = m.group(1)
            members = [x.strip() for x in m.group(2).split(",")]
            if name in groups or name in entities:
                raise ModelError(f"name {name!r} declared twice", line=lineno)
            groups[name] = (members, lineno)
        elif (m := _RE_REL.match(line)):
            rel_lines.append((m.group(1), m.group(2), lineno))
        else:
            raise ModelError(f"cannot read model line {line!r}", line=lineno)
    ents = frozenset(entities)
    gsets = {}
    for name, (members, lineno) in groups.items():
        bad = [x for x in members if x not in ents]
        if bad:
            raise ModelError(f"group {name} has undeclared members {bad}", line=lineno)
        gsets[name] = frozenset(members)
    for rel, body, lineno in rel_lines:
        tuples = ext.setdefault(rel, set())
        for part in (p.strip() for p in body.split(";")):
            if not part:
                continue
            m = _RE_TUPLE.match(part)
            if not m:
                raise ModelError(f"cannot read tuple {part!r}", line=lineno, field=rel)
            names = [x.strip() for x in m.group(1).split(",")] if m.group(1) else []
            vals = []
            for x in names:
                if x in gsets:
                    vals.append(gsets[x])
                elif x in ents:
                    vals.append(x)
                else:
                    raise ModelError(f"unknown entity or group {x!r}", line=lineno, field=rel)
            if tuples and len(next(iter(tuples))) != len(vals):
                raise ArityMismatch(f"relation {rel} used with arities "
                                    f"{len(next(iter(tuples)))} and {len(vals)}",
                                    line=lineno, field=rel)
            tuples.add(tuple(vals))
    return Model(ents, gsets, {k: frozenset(v) for k, v in ext.items()})


def load_model(path) -> Model:
    return loads_model(Path(path).read_text(encoding="utf-8"))


class _Evaluator:
    def __init__(self, reading: Reading, model: Model):
        self.p = reading.placement
        self.u = reading.store
        self.fr = self.p.frame
        self.content = box_contents(self.p)
        self.m = model
        ents = sorted(model.entities)
        self.subsets = [frozenset(c) for n in range(1, len(ents) + 1)
                        for c in itertools.combinations(ents, n)]
        self.ents = ents

    def value(self, a, g):
        if isinstance(a, Slot):
            a = self.u.slot(a.id).resolved_to
        if isinstance(a, Label):
            raise NotEvaluable("propositional arguments have no extension in the model")
        return g[a]

    def refs(self, c):
        if isinstance(c, Atom):
            out = []
            for a in c.args:
                if isinstance(a, Slot):
                    a = self.u.slot(a.id).resolved_to
                if isinstance(a, Referent):
                    out.append(a)
            return out
        if isinstance(c, Member):
            return [c.elem, c.group]
        return None     # complex: needs the full assignment

    def atomic(self, c, g) -> bool:
        if isinstance(c, Member):
            return g[c.elem] in g[c.group]
        args = tuple(self.value(a, g) for a in c.args)
        card = _CARD.match(c.rel)
        if card and len(args) == 1 and isinstance(args[0], frozenset):
            return len(args[0]) == int(card.group(1))
        ar = self.m.arity(c.rel)
        if ar is not None and ar != len(args):
            raise ArityMismatch(f"{c.rel} has arity {ar} in the model, {len(args)} in the reading")
        return args in self.m.extensions.get(c.rel, ())

    def complex(self, c, g) -> bool:
        if isinstance(c, Neg):
            return not any(True for _ in self.embeddings(self.fr.rep[c.inner], g))
        if isinstance(c, Gen):
            raise GenNotEvaluable("generic readings have no truth definition here")
        if isinstance(c, Diamond):
            raise NotEvaluable("modal conditions are not evaluated")
        if isinstance(c, Implies):
            restr = list(self.embeddings(self.fr.rep[c.restr], g))
            scope = self.fr.rep[c.scope]
            wins = sum(1 for h in restr if any(True for _ in self.embeddings(scope, h)))
            n = len(restr)
            if c.quant == "every":
                return wins == n
            if c.quant == "mindestens_ein":
                return wins >= 1
            if c.quant == "fast_jeder":
                return wins >= 1 and wins >= n - 1
            raise NotEvaluable(f"no truth definition for quantifier {c.quant!r}")
        raise NotEvaluable(f"cannot evaluate {c!r}")

    def embeddings(self, box, g):
        """Extensions of ``g`` over ``box``'s universe verifying its conditions."""
        conds = self.content[box]
        universe = sorted(c.ref for c in conds if isinstance(c, Intro))
        simple = [c for c in conds if isinstance(c, (Atom, Member))]
        hard = [c for c in conds if not isinstance(c, (Atom, Member, Intro))]
        need = {id(c): set(self.refs(c)) for c in simple}

        def extend(i, g):
            if i == len(universe):
                if all(self.complex(c, g) for c in hard):
                    yield g
                return
            r = universe[i]
            for v in (self.subsets if r.is_group else self.ents):
                h = dict(g)
                h[r] = v
                done = set(universe[:i + 1])
                ok = True
                for c in simple:
                    if r in need[id(c)] and need[id(c)] <= (done | set(g)):
                        if not self.atomic(c, h):
                            ok = False
                            break
                if ok:
                    yield from extend(i + 1, h)

        if not universe:
            if all(self.atomic(c, g) for c in simple) and all(self.complex(c, g) for c in hard):
                yield g
            return
        # conditions that do not mention this box's referents
        local = set(universe)
        for c in simple:
            if not need[id(c)] & local and not self.atomic(c, g):
                return
        yield from extend(0, g)


def evaluate(reading: Reading, model: Model) -> bool:
    """Is the reading true in the model?"""
    ev = _Evaluator(reading, model)
    # checked up front so the verdict never hides them
    for c in reading.store.conds:
        if isinstance(c, Gen):
            raise GenNotEvaluable("generic readings have no truth definition here")
        if isinstance(c, Atom) and not _CARD.match(c.rel):
            ar = model.arity(c.rel)
            if ar is not None and ar != len(c.args):
                raise ArityMismatch(f"{c.rel} has arity {ar} in the model, "
                                    f"{len(c.args)} in the reading")
    return any(True for _ in ev.embeddings(ev.fr.top, {}))
