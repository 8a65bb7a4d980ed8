"""Line-oriented text format for UDRS stores.

One item per line::

    ls l_1 l_3
    l_1 : l_2 => l_3
    l_2 : dref x1
    l_4 : pay_attention(x1)
    l_4 <= l_3
    (l_5 < l_6) -> (l_6 <= l_top)

Labels are renamed canonically (``l_top`` plus ``l_1..l_n`` by creation
order), referents to ``x1..`` / ``X1..``.  Pending argument slots print as
``dref_res(l_max,l_min)``.  Printing a parsed canonical text reproduces it
byte for byte.
"""
from __future__ import annotations

import re

from .errors import FormatError
from .udrs import (GROUP, INDIVIDUAL, TOP, Atom, Cond, DeferredSlot, Diamond,
                   Eq, Gen, Implies, Intro, Label, Leq, Lt, Member, Neg,
                   Referent, Slot, UdrsStore)


class Naming:
    """Canonical names for the labels and referents of one store."""

    def __init__(self, store: UdrsStore):
        labels = sorted(store.labels() - {store.top})
        self.top = store.top
        self.label_names = {store.top: "l_top"}
        self.label_names.update({l: f"l_{i}" for i, l in enumerate(labels, 1)})
        self.label_index = {store.top: 0}
        self.label_index.update({l: i for i, l in enumerate(labels, 1)})
        refs = sorted(store.referents())
        inds = [r for r in refs if not r.is_group]
        grps = [r for r in refs if r.is_group]
        self.ref_names = {r: f"x{i}" for i, r in enumerate(inds, 1)}
        self.ref_names.update({r: f"X{i}" for i, r in enumerate(grps, 1)})
        self.store = store

    def label(self, l):
        return "_" if l is None else self.label_names[l]

    def ref(self, r):
        return self.ref_names[r]

    def arg(self, a):
        if isinstance(a, Referent):
            return self.ref(a)
        if isinstance(a, Label):
            return self.label(a)
        if isinstance(a, Slot):
            s = self.store.slot(a.id)
            if not s.pending:
                return self.arg(s.resolved_to)
            if s.source_ls is None:
                return "?"
            return f"dref_res({self.label(s.source_ls[0])},{self.label(s.source_ls[1])})"
        raise TypeError(a)

    def cond(self, c) -> str:
        L = self.label
        head = f"{L(c.label)} : "
        if isinstance(c, Atom):
            return head + f"{c.rel}({','.join(self.arg(a) for a in c.args)})"
        if isinstance(c, Intro):
            return head + f"dref {self.ref(c.ref)}"
        if isinstance(c, Implies):
            arrow = "=>" if c.quant == "every" else "=>{" + c.quant + "}"
            return head + f"{L(c.restr)} {arrow} {L(c.scope)}"
        if isinstance(c, Neg):
            return head + f"not {L(c.inner)}"
        if isinstance(c, Diamond):
            return head + f"{L(c.restr)} <> {L(c.scope)}"
        if isinstance(c, Gen):
            return head + f"gen {L(c.restr)} {L(c.scope)}"
        if isinstance(c, Member):
            return head + f"{self.ref(c.elem)} in {self.ref(c.group)}"
        raise TypeError(c)

    def constraint(self, c) -> str:
        L = self.label
        if isinstance(c, Leq):
            return f"{L(c.lower)} <= {L(c.upper)}"
        if isinstance(c, Lt):
            return f"{L(c.lower)} < {L(c.upper)}"
        if isinstance(c, Eq):
            a, b = sorted((c.left, c.right), key=self.label_index.get)
            return f"{L(a)} = {L(b)}"
        return f"({self.constraint(c.antecedent)}) -> ({self.constraint(c.consequent)})"

    def _key(self, item, text):
        if isinstance(item, (Leq, Lt)):
            first, group = item.lower, 2
        elif isinstance(item, Eq):
            first, group = min((item.left, item.right), key=self.label_index.get), 2
        elif isinstance(item, Cond):
            first, group = item.antecedent.lower, 3
        else:
            first, group = item.label, 0 if isinstance(item, Intro) else 1
        return (self.label_index[first], group, text)

    def lines(self):
        s = self.store
        out = []
        if s.l_max is not None or s.l_min is not None:
            out.append(f"ls {self.label(s.l_max)} {self.label(s.l_min)}")
        items = [(c, self.cond(c)) for c in s.conds]
        items += [(c, self.constraint(c)) for c in s.subord]
        items.sort(key=lambda p: self._key(*p))
        for _, t in items:
            if not out or out[-1] != t:     # Eq(a,b) and Eq(b,a) print alike
                out.append(t)
        return out


def dumps(store: UdrsStore) -> str:
    return "\n".join(Naming(store).lines()) + "\n"


def canonical_items(store: UdrsStore, constraints: bool = True) -> list:
    """Conditions (and constraints) with argument slots replaced by values."""
    def arg(a):
        if isinstance(a, Slot):
            s = store.slot(a.id)
            if not s.pending:
                return s.resolved_to
            return tuple(s.source_ls) if s.source_ls else ("?",)
        return a

    out = []
    for c in store.conds:
        if isinstance(c, Atom):
            c = Atom(c.label, c.rel, tuple(arg(a) for a in c.args))
        out.append(c)
    if constraints:
        for c in store.subord:
            out.append(_norm_eq(c))
    return out


def _norm_eq(c):
    if isinstance(c, Eq):
        return Eq(*sorted((c.left, c.right)))
    if isinstance(c, Cond):
        return Cond(c.antecedent, _norm_eq(c.consequent))
    return c


# -- parsing ----------------------------------------------------------------

_LABEL = r"l_(?:top|T|\d+)"
_REF = r"[A-Za-z][A-Za-z0-9]*"
_ARG = rf"(?:dref_res\({_LABEL},{_LABEL}\)|\?|{_LABEL}|{_REF})"
_RE_LS = re.compile(rf"^ls ({_LABEL}|_) ({_LABEL}|_)$")
_RE_ATOM = re.compile(rf"^({_LABEL}) : ([^\s()]+)\(((?:{_ARG}(?:,{_ARG})*)?)\)$")
_RE_DREF = re.compile(rf"^({_LABEL}) : dref ({_REF})$")
_RE_IMPL = re.compile(rf"^({_LABEL}) : ({_LABEL}) =>(?:\{{([^}}\s]+)\}})? ({_LABEL})$")
_RE_NEG = re.compile(rf"^({_LABEL}) : not ({_LABEL})$")
_RE_DIA = re.compile(rf"^({_LABEL}) : ({_LABEL}) <> ({_LABEL})$")
_RE_GEN = re.compile(rf"^({_LABEL}) : gen ({_LABEL}) ({_LABEL})$")
_RE_MEM = re.compile(rf"^({_LABEL}) : ({_REF}) in ({_REF})$")
_RE_REL = re.compile(rf"^({_LABEL}) (<=|<|=) ({_LABEL})$")


class _Reader:
    def __init__(self):
        self.refs = {}
        self._extra = 1_000_000

    def label(self, name):
        num = name[2:]
        if num in ("top", "T"):
            return TOP
        return Label(int(num))

    def ref(self, name, lineno):
        if name in self.refs:
            return self.refs[name]
        sort = GROUP if name[0].isupper() else INDIVIDUAL
        digits = re.search(r"(\d+)$", name)
        if digits and re.fullmatch(r"[A-Za-z]\d+", name):
            rid = int(digits.group(1))
        else:
            self._extra += 1
            rid = self._extra
        ref = Referent(rid, sort)
        if ref in self.refs.values():
            raise FormatError(f"referent name {name!r} collides", line=lineno)
        self.refs[name] = ref
        return ref

    def constraint(self, text, lineno):
        text = text.strip()
        if text.startswith("("):
            depth = 0
            for i, ch in enumerate(text):
                depth += ch == "("
                depth -= ch == ")"
                if depth == 0:
                    break
            ante = text[1:i]
            rest = text[i + 1:].strip()
            if not rest.startswith("->"):
                raise FormatError(f"malformed conditional {text!r}", line=lineno)
            rest = rest[2:].strip()
            if not (rest.startswith("(") and rest.endswith(")")):
                raise FormatError(f"malformed consequent {rest!r}", line=lineno)
            a = self.constraint(ante, lineno)
            if not isinstance(a, Lt):
                raise FormatError("conditional antecedent must be '<'", line=lineno)
            try:
                return Cond(a, self.constraint(rest[1:-1], lineno))
            except ValueError as exc:
                raise FormatError(str(exc), line=lineno) from None
        m = _RE_REL.match(text)
        if not m:
            raise FormatError(f"cannot read constraint {text!r}", line=lineno)
        a, op, b = self.label(m.group(1)), m.group(2), self.label(m.group(3))
        return {"<=": Leq, "<": Lt, "=": Eq}[op](a, b)


def loads(text: str) -> UdrsStore:
    r = _Reader()
    ls = (None, None)
    conds, subord, slots, pending = set(), set(), {}, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if (m := _RE_LS.match(line)):
                ls = tuple(None if g == "_" else r.label(g) for g in m.groups())
            elif (m := _RE_DREF.match(line)):
                conds.add(Intro(r.label(m.group(1)), r.ref(m.group(2), lineno)))
            elif (m := _RE_IMPL.match(line)):
                conds.add(Implies(r.label(m.group(1)), r.label(m.group(2)),
                                  r.label(m.group(4)), m.group(3) or "every"))
            elif (m := _RE_NEG.match(line)):
                conds.add(Neg(r.label(m.group(1)), r.label(m.group(2))))
            elif (m := _RE_DIA.match(line)):
                conds.add(Diamond(*(r.label(g) for g in m.groups())))
            elif (m := _RE_GEN.match(line)):
                conds.add(Gen(*(r.label(g) for g in m.groups())))
            elif (m := _RE_MEM.match(line)):
                conds.add(Member(r.label(m.group(1)), r.ref(m.group(2), lineno),
                                 r.ref(m.group(3), lineno)))
            elif (m := _RE_ATOM.match(line)):
                args = []
                for a in re.findall(_ARG, m.group(3)):
                    if a.startswith("dref_res(") or a == "?":
                        pending.append((a, len(conds)))
                        sid = 2_000_000 + len(slots)
                        src = None
                        if a != "?":
                            x, y = a[len("dref_res("):-1].split(",")
                            src = (r.label(x), r.label(y))
                        slots[sid] = DeferredSlot(sid, src)
                        args.append(Slot(sid))
                    elif re.fullmatch(_LABEL, a):
                        args.append(r.label(a))
                    else:
                        args.append(r.ref(a, lineno))
                conds.add(Atom(r.label(m.group(1)), m.group(2), tuple(args)))
            else:
                subord.add(r.constraint(line, lineno))
        except ValueError as exc:
            raise FormatError(str(exc), line=lineno) from None
    return UdrsStore(ls[0], ls[1], frozenset(subord), frozenset(conds),
                     frozenset(slots.values()))
