"""Lexicon loading and template instantiation.

The lexicon file is YAML: a top-level list of entry records.  Fields:

    form     surface string, may span several tokens ("mindestens einen")
    kind     verb | det_quant | det_indef | det_def_plural | det_def | noun |
             proper_name | pronoun | pp | func_comp | func_vfin | neg
    case     one case or a list of admissible cases (nom, dat, acc)
    num      sg | pl
    vform    fin | inf
    subcat   list of {type: dp|pp|s, case, num, pcase}
    rel      predicate name
    select   collective | distributive  (verbs; applies to ``select_arg``)
    select_arg  SUBCAT index the selection applies to (default 0)
    particle separable particle closing the clause ("stellten ... ein")
    card     cardinality of a numeral plural determiner
    quant    quantifier relation of det_quant (default every)
    np       det_quant / det_indef that is a complete NP ("everybody")
    subord   extra template constraints over the placeholders
             l_1, l_11, l_12, l_2, l_21, l_v, l_top
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema
import yaml

from .errors import InconsistentTemplate, SchemaError
from .signs import ArgSpec, Category, LocRecord, Node, Sign
from .udrs import (GROUP, TOP, Atom, Eq, Fresh, Implies, Intro, Label, Leq,
                   Lt, Neg, UdrsStore, DeferredSlot)

KINDS = ("verb", "det_quant", "det_indef", "det_def_plural", "det_def", "noun",
         "proper_name", "pronoun", "pp", "func_comp", "func_vfin", "neg")
CASES = ("nom", "dat", "acc")
DETS = ("det_quant", "det_indef", "det_def_plural", "det_def")

_case = {"oneOf": [{"enum": list(CASES)},
                   {"type": "array", "items": {"enum": list(CASES)}, "minItems": 1}]}

ENTRY_SCHEMA = {
    "type": "object",
    "required": ["form", "kind"],
    "additionalProperties": False,
    "properties": {
        "form": {"type": "string", "minLength": 1},
        "kind": {"enum": list(KINDS)},
        "case": _case,
        "num": {"enum": ["sg", "pl"]},
        "vform": {"enum": ["fin", "inf"]},
        "subcat": {"type": "array", "items": {
            "type": "object",
            "required": ["type"],
            "additionalProperties": False,
            "properties": {
                "type": {"enum": ["dp", "pp", "s"]},
                "case": {"enum": list(CASES)},
                "num": {"enum": ["sg", "pl"]},
                "pcase": {"type": "string"},
            }}},
        "rel": {"type": "string", "minLength": 1},
        "select": {"enum": ["collective", "distributive"]},
        "select_arg": {"type": "integer", "minimum": 0},
        "particle": {"type": "string"},
        "card": {"type": "integer", "minimum": 1},
        "quant": {"type": "string", "pattern": r"^\S+$"},
        "np": {"type": "boolean"},
        "subord": {"type": "array", "items": {"type": "string"}},
    },
}

PLACEHOLDERS = ("l_1", "l_11", "l_12", "l_2", "l_21", "l_v", "l_top")


@dataclass(frozen=True)
class LexEntry:
    form: str
    kind: str
    category: Category
    subcat: tuple = ()
    rel: Optional[str] = None
    select: Optional[str] = None
    select_arg: int = 0
    particle: Optional[str] = None
    card: Optional[int] = None
    quant: str = "every"
    np: bool = False
    subord: tuple = ()
    line: int = 0

    @property
    def tokens(self):
        return tuple(self.form.casefold().split())


class Lexicon:
    """Surface form (token tuple) -> entries.  Immutable after load."""

    def __init__(self, entries=()):
        self.entries = tuple(entries)
        index = {}
        for e in self.entries:
            index.setdefault(e.tokens, []).append(e)
        self._index = {k: tuple(v) for k, v in index.items()}
        self.max_len = max((len(k) for k in self._index), default=0)
        self.particles = {e.particle.casefold() for e in self.entries if e.particle}

    def __len__(self):
        return len(self.entries)

    def __contains__(self, form):
        return tuple(form.casefold().split()) in self._index

    def lookup(self, form) -> tuple:
        if isinstance(form, str):
            form = tuple(form.casefold().split())
        return self._index.get(tuple(t.casefold() for t in form), ())

    def forms(self):
        return sorted(" ".join(k) for k in self._index)


# -- loading -----------------------------------------------------------------

def _key_line(node, key):
    for k, _ in node.value:
        if k.value == key:
            return k.start_mark.line + 1
    return node.start_mark.line + 1


def load_lexicon(source=None) -> Lexicon:
    """Load and validate a lexicon file; ``None`` loads the shipped fragment."""
    if source is None:
        text = resources.files("scopeforge").joinpath("data", "fragment.yaml").read_text("utf-8")
    else:
        text = Path(source).read_text(encoding="utf-8")
    return loads_lexicon(text)


def loads_lexicon(text: str) -> Lexicon:
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise SchemaError(f"not a valid lexicon document: {exc}",
                          line=mark.line + 1 if mark else None) from None
    if data is None:
        return Lexicon()
    if not isinstance(data, list):
        raise SchemaError("lexicon must be a list of entries", line=1)
    validator = jsonschema.Draft7Validator(ENTRY_SCHEMA)
    entries = []
    for node, rec in zip(root.value, data):
        line = node.start_mark.line + 1
        for err in sorted(validator.iter_errors(rec), key=lambda e: list(e.path)):
            fld = err.path[0] if err.path else None
            if fld is None and err.validator == "additionalProperties":
                fld = sorted(set(rec) - set(ENTRY_SCHEMA["properties"]))[0]
            if fld is None and err.validator == "required":
                fld = err.message.split("'")[1]
            at = _key_line(node, fld) if isinstance(node, yaml.MappingNode) and fld else line
            raise SchemaError(err.message, line=at, field=fld)
        entry = _entry(rec, line, lambda f: _key_line(node, f))
        _check_template(entry)
        entries.append(entry)
    return Lexicon(entries)


def _entry(rec, line, key_line) -> LexEntry:
    kind = rec["kind"]
    case = rec.get("case", ())
    case = (case,) if isinstance(case, str) else tuple(case)
    cat = Category(kind, case, rec.get("num"), rec.get("vform"))

    def need(fld, why):
        if fld not in rec:
            raise SchemaError(f"{kind} entry {rec['form']!r} needs {fld!r} ({why})",
                              line=line, field=fld)

    if kind in DETS:
        need("num", "determiners carry number")
    if kind == "verb":
        need("vform", "verbs carry a verb form")
        need("rel", "verbs name their relation")
        need("subcat", "verbs list their arguments")
    if kind in ("noun", "pp"):
        need("rel", "needed for the predicate condition")
    subcat = tuple(ArgSpec(s["type"], s.get("case"), s.get("num"), s.get("pcase"))
                   for s in rec.get("subcat", ()))
    ranks = [CASES.index(s.case) for s in subcat if s.case]
    if ranks != sorted(ranks):
        raise SchemaError("subcat must follow the normal order nom < dat < acc",
                          line=key_line("subcat"), field="subcat")
    sel_arg = rec.get("select_arg", 0)
    if "select" in rec and sel_arg >= len(subcat):
        raise SchemaError("select_arg outside subcat", line=key_line("select_arg"),
                          field="select_arg")
    return LexEntry(rec["form"], kind, cat, subcat, rec.get("rel"), rec.get("select"),
                    sel_arg, rec.get("particle"), rec.get("card"),
                    rec.get("quant", "every"), rec.get("np", False),
                    tuple(rec.get("subord", ())), line)


def _check_template(entry: LexEntry):
    """Instantiate once with placeholder labels and close the skeleton."""
    u = template(entry, Fresh(1))[0]
    if not u.closure.consistent:
        raise InconsistentTemplate(
            f"template of {entry.form!r} is cyclic", line=entry.line, field="subord")


# -- templates ---------------------------------------------------------------

_RE_EXTRA = re.compile(r"^(l_\w+)\s*(<=|<|=)\s*(l_\w+)$")


def _parse_extra(text, names, entry):
    m = _RE_EXTRA.match(text.strip())
    if not m:
        raise SchemaError(f"cannot read template constraint {text!r}",
                          line=entry.line, field="subord")
    for name in (m.group(1), m.group(3)):
        if name not in PLACEHOLDERS:
            raise SchemaError(f"unknown placeholder {name} in {text!r}",
                              line=entry.line, field="subord")
        if name not in names:
            raise SchemaError(f"placeholder {name} is not declared by a {entry.kind} template",
                              line=entry.line, field="subord")
    op = {"<=": Leq, "<": Lt, "=": Eq}[m.group(2)]
    return op(names[m.group(1)], names[m.group(3)])


def template(entry: LexEntry, fresh: Fresh):
    """Instantiate ``entry``'s store.  Returns (store, info) where info holds
    the anchor label for a noun and the fresh referent/slots."""
    k = entry.kind
    names = {"l_top": TOP}
    conds, subord = set(), set()
    info = {}
    ls = (None, None)
    if k == "verb":
        l = names["l_v"] = fresh.label("v")
        slots = [fresh.slot() for _ in entry.subcat]
        conds.add(Atom(l, entry.rel, tuple(slots)))
        info["slots"] = tuple(s.id for s in slots)
        ls = (None, l)
    elif k == "det_quant":
        l1, l11, l12 = (fresh.label(h) for h in ("q", "res", "nscope"))
        names.update(l_1=l1, l_11=l11, l_12=l12)
        x = fresh.referent()
        conds |= {Implies(l1, l11, l12, entry.quant), Intro(l11, x)}
        subord |= {Lt(l11, l1), Lt(l12, l1)}
        info.update(anchor=l11, ref=x, sem="quant")
        ls = (l1, l12)
    elif k == "det_indef":
        l1 = names["l_1"] = fresh.label("indef")
        x = fresh.referent()
        conds.add(Intro(l1, x))
        subord.add(Eq(l1, l1))
        info.update(anchor=l1, ref=x, sem="indef")
        ls = (l1, l1)
    elif k == "det_def_plural":
        l1, l12 = fresh.label("pl"), fresh.label("pl_min")
        names.update(l_1=l1, l_12=l12)
        X = fresh.referent(GROUP)
        conds.add(Intro(l1, X))
        if entry.card:
            conds.add(Atom(l1, f"card_{entry.card}", (X,)))
        subord.add(Leq(l12, l1))
        info.update(anchor=l1, ref=X, sem="plural")
        ls = (l1, l12)
    elif k in ("det_def", "proper_name", "pronoun", "pp"):
        # material of the top box: its own label, identified with top
        l1 = names["l_1"] = fresh.label(k)
        x = fresh.referent()
        conds.add(Intro(l1, x))
        if entry.rel and k != "det_def":
            conds.add(Atom(l1, entry.rel, (x,)))
        subord.add(Eq(l1, TOP))
        info.update(anchor=l1, ref=x, sem="name")
        ls = (l1, l1)
    elif k == "neg":
        l2, l21 = fresh.label("neg"), fresh.label("neg_scope")
        names.update(l_2=l2, l_21=l21)
        conds.add(Neg(l2, l21))
        subord.add(Lt(l21, l2))
        info["sem"] = "neg"
        ls = (l2, l21)
    if entry.np and entry.rel and "anchor" in info:
        conds.add(Atom(info["anchor"], entry.rel, (info["ref"],)))
    for text in entry.subord:
        subord.add(_parse_extra(text, names, entry))
    u = UdrsStore(ls[0], ls[1], frozenset(subord), frozenset(conds),
                  frozenset(DeferredSlot(s) for s in info.get("slots", ())),
                  audit=frozenset(("lex", c) for c in subord))
    return u, info


def instantiate(entry: LexEntry, fresh: Fresh, words=None) -> Sign:
    """A lexical sign with fresh labels, referents and slots.

    Verbs get SUBJ/COMPS from SUBCAT later (``syntax.vip``); determiners
    that are complete NPs come back with their LOC record.
    """
    u, info = template(entry, fresh)
    words = tuple(words or entry.form.split())
    sign = Sign(entry.category, u, head_subcat=entry.subcat, phon=words, lex=True,
                slots=info.get("slots", ()), realized=(None,) * len(entry.subcat),
                entry=entry, tree=Node("lex", words=words, tag=_tag(entry)))
    if entry.kind == "verb" and entry.select == "collective":
        sign = _replace(sign, collective=frozenset({entry.select_arg}))
    if _complete_np(entry):
        loc = LocRecord(_np_category(entry), u, info["sem"], " ".join(words),
                        "pp" if entry.kind == "pp" else "dp")
        sign = _replace(sign, loc=loc, nps=(loc,),
                        tree=Node("DP", words=words, tag=_np_tag(loc)))
    return sign


def combine_np(det: LexEntry, noun: LexEntry, fresh: Fresh, words) -> Sign:
    """Determiner + noun: the noun's condition sits at the det's anchor."""
    u, info = template(det, fresh)
    conds = set(u.conds)
    conds.add(Atom(info["anchor"], noun.rel, (info["ref"],)))
    u = UdrsStore(u.l_max, u.l_min, u.subord, frozenset(conds), u.deferred, u.top, u.audit)
    cat = _np_category(det, noun)
    loc = LocRecord(cat, u, info["sem"], " ".join(words))
    return Sign(cat, u, phon=tuple(words), loc=loc, nps=(loc,),
                tree=Node("DP", words=tuple(words), tag=_np_tag(loc)))


def _complete_np(entry):
    return entry.kind in ("proper_name", "pronoun", "pp") or (entry.kind in DETS and entry.np)


def _np_category(det, noun=None):
    num = det.category.num or (noun.category.num if noun else None)
    if noun and noun.category.num and det.category.num and noun.category.num != det.category.num:
        num = det.category.num
    case = det.category.case or (noun.category.case if noun else ())
    return Category(det.kind, case, num)


def _np_tag(loc):
    if loc.arg_type == "pp":
        return "PP"
    if len(loc.category.case) == 1:
        return f"DP:{loc.category.case[0]}"
    return "DP"


def _tag(entry):
    return {"verb": "V", "func_comp": "C", "func_vfin": "Vfin", "neg": "Neg",
            "noun": "N"}.get(entry.kind, entry.kind)


def _replace(sign, **kw):
    return replace(sign, **kw)
