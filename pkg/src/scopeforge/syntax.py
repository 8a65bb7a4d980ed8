"""Binary derivations over head-comp, head-subj, head-filler and func-cat
combination, with traces and SLASH for scrambling and topicalization.

Clauses are read off a topological-field split: Vorfeld, the verb-second
or complementizer position, Mittelfeld, right bracket, Nachfeld.  The
Mittelfeld is consumed right to left against the verb's valence; a
constituent that does not fit the last open valence element is either a
filler for a trace hypothesized earlier or forces a trace there.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Optional

from . import interface
from .errors import (NoMatchingSlash, NoParse, SaturationError,
                     ValenceMismatch)
from .lexicon import DETS, LexEntry, Lexicon, combine_np, instantiate
from .signs import Category, LocRecord, Node, Sign
from .udrs import TOP, Fresh

_PUNCT = ",.;:!?"


def tokenize(sentence: str) -> list:
    out = []
    for tok in sentence.split():
        tok = tok.strip(_PUNCT)
        if tok:
            out.append(tok)
    return out


# -- valence operations -------------------------------------------------------

def vip(sign: Sign) -> Sign:
    """Copy SUBCAT into the valence features: first element is the subject."""
    n = len(sign.head_subcat)
    return replace(sign, subj=tuple(range(min(n, 1))), comps=tuple(range(1, n)))


def _last_open(sign: Sign) -> Optional[int]:
    if sign.comps:
        return sign.comps[-1]
    if sign.subj:
        return sign.subj[-1]
    return None


def _trace_node(index):
    return Node("trace", index=index)


def _saturate(head: Sign, loc: LocRecord, idx: int, dtr_node: Node, schema: str,
              trace: bool, right: bool = False) -> Sign:
    slash = head.slash + ((loc,) if trace else ())
    u = interface.compose(head, loc, schema.replace("-", "_"), position=idx, slash=slash)
    realized = list(head.realized)
    realized[idx] = loc
    item = interface.scope_item(loc)
    kids = (head.tree, dtr_node) if right else (dtr_node, head.tree)
    return replace(head, udrs=u, slash=slash, realized=tuple(realized),
                   pending_scope=head.pending_scope + ((item,) if item else ()),
                   lex=False, tree=Node(schema, kids))


def head_comp(head: Sign, comp: LocRecord, node: Node, trace=False, right=False) -> Sign:
    if not head.comps:
        raise ValenceMismatch("head has no open complement")
    idx = head.comps[-1]
    if not head.head_subcat[idx].accepts(comp):
        raise ValenceMismatch(
            f"{comp.phrase!r} does not match the last complement ({head.head_subcat[idx]})")
    out = _saturate(head, comp, idx, node, "head-comp", trace, right)
    return replace(out, comps=head.comps[:-1])


def head_subj(head: Sign, subj: LocRecord, node: Node, trace=False) -> Sign:
    if head.comps:
        raise SaturationError("complements must be saturated before the subject")
    if not head.subj:
        raise ValenceMismatch("head has no open subject")
    idx = head.subj[-1]
    if not head.head_subcat[idx].accepts(subj):
        raise ValenceMismatch(
            f"{subj.phrase!r} does not match the subject ({head.head_subcat[idx]})")
    out = _saturate(head, subj, idx, node, "head-subj", trace)
    return replace(out, subj=())


def saturate_last(head: Sign, loc: LocRecord, node: Node, trace=False, right=False) -> Sign:
    if head.comps:
        return head_comp(head, loc, node, trace, right)
    return head_subj(head, loc, node, trace)


def head_filler(head: Sign, filler: LocRecord, node: Node) -> Sign:
    for i, s in enumerate(head.slash):
        if s is filler:
            return replace(head, slash=head.slash[:i] + head.slash[i + 1:],
                           tree=Node("head-filler", (node, head.tree)))
    raise NoMatchingSlash(f"{filler.phrase!r} binds no trace")


def head_adj(head: Sign, neg: Sign) -> Sign:
    u = interface.compose(head, neg, "head_adj")
    item = interface.ScopeItem("neg", *neg.udrs.ls)
    return replace(head, udrs=u, pending_scope=head.pending_scope + (item,),
                   tree=Node("head-adj", (neg.tree, head.tree)))


def func_combine(func: Sign, clause: Sign, domain) -> Sign:
    if clause.comps or clause.subj:
        raise SaturationError("functional head needs a saturated clause")
    if func.category.head_type == "neg":
        clause = head_adj(clause, func)
        clause = replace(clause, tree=clause.tree.children[1])
    u = interface.compose(func, clause, "func_comb", domain=domain)
    kind = "func-comp" if func.category.head_type == "func_comp" else "func-vfin"
    return replace(clause, category=func.category, udrs=u, pending_scope=(),
                   tree=Node(kind, (clause.tree,), words=func.phon))


# -- derivations --------------------------------------------------------------

@dataclass
class Derivation:
    root: Sign
    tree: Node
    nps: list            # LocRecords in surface order
    tokens: tuple

    @property
    def udrs(self):
        return self.root.udrs

    def dump(self) -> str:
        return self.tree.dump()

    def bracketing(self) -> str:
        return self.tree.one_line()

    def surface_bracketing(self) -> str:
        text = self.tree.clause_bracketing()
        return text if self.tree.kind == "head-filler" else f"[{text}]"


@dataclass(eq=False)
class _Con:
    kind: str            # np, verb, vfin, neg, comp, particle
    words: tuple
    sign: Optional[Sign] = None
    entry: Optional[LexEntry] = None

    @property
    def loc(self):
        return self.sign.loc if self.sign else None

    def node(self, index=None):
        t = self.sign.tree
        return replace(t, index=index) if index is not None else t


class _Parser:
    def __init__(self, cons, fresh: Fresh):
        self.cons = cons
        self.fresh = fresh
        self.trace_ids = {}
        self.failures = []

    def fail(self, msg):
        self.failures.append(msg)

    # Mittelfeld, right to left ----------------------------------------------

    def run(self, sign: Sign, left: list, fillers: list):
        """Consume ``left`` right to left; ``fillers`` may bind traces."""
        if not left:
            yield sign
            return
        c = left[-1]
        rest = left[:-1]
        if c.kind == "neg":
            yield from self.run(head_adj(sign, c.sign), rest, fillers)
            return
        if c.kind != "np":
            self.fail(f"{' '.join(c.words)!r} cannot stand in the middle field")
            return
        if any(s is c.loc for s in sign.slash):
            yield from self.run(head_filler(sign, c.loc, self._filler_node(c)), rest, fillers)
            return
        yield from self._base_or_trace(sign, c, rest, fillers)

    def _base_or_trace(self, sign, c, rest, fillers):
        idx = _last_open(sign)
        if idx is None:
            self.fail(f"no open argument left for {' '.join(c.words)!r}")
            return
        try:
            nxt = saturate_last(sign, c.loc, c.node())
        except (ValenceMismatch, SaturationError) as exc:
            self.fail(str(exc))
        else:
            yield from self.run(nxt, rest, fillers)
        # a trace in the last open position, bound by something further left
        spec = sign.head_subcat[idx]
        for f in [x for x in rest if x.kind == "np"] + list(fillers):
            if f is c or f.loc in self.trace_ids or not spec.accepts(f.loc):
                continue
            k = self.trace_ids[f.loc] = len(self.trace_ids) + 1
            try:
                nxt = saturate_last(sign, f.loc, _trace_node(k), trace=True)
            except (ValenceMismatch, SaturationError) as exc:
                self.fail(str(exc))
            else:
                yield from self.run(nxt, rest + [c], fillers)
            del self.trace_ids[f.loc]

    def _filler_node(self, c):
        return c.node(self.trace_ids[c.loc])

    # clauses -----------------------------------------------------------------

    def nachfeld(self, sign, nach):
        """Combine a sentential complement in the Nachfeld, if any."""
        if not nach:
            yield sign
            return
        for s_sign in self.clause_final(nach, embedded=True):
            loc = LocRecord(s_sign.category, s_sign.udrs, "s",
                            " ".join(s_sign.tree.surface()), "s")
            try:
                yield head_comp(sign, loc, s_sign.tree, right=True)
            except ValenceMismatch as exc:
                self.fail(str(exc))

    def clause_final(self, cons, embedded):
        """Complementizer clause with the verb at the end."""
        comp, rest = cons[0], cons[1:]
        k = next((i for i, c in enumerate(rest) if c.kind == "comp"), len(rest))
        mid, nach = rest[:k], rest[k:]
        if not mid or mid[-1].kind != "verb":
            self.fail(f"no clause-final verb after {' '.join(comp.words)!r}")
            return
        verb = mid[-1]
        if verb.entry.category.vform != "fin" or verb.entry.particle:
            self.fail(f"{' '.join(verb.words)!r} cannot close a verb-final clause")
            return
        domain = self.fresh.label("dom") if embedded else TOP
        for s in self.nachfeld(vip(verb.sign), nach):
            for full in self.run(s, list(mid[:-1]), []):
                if full.slash:
                    self.fail("unbound trace")
                    continue
                try:
                    yield func_combine(comp.sign, full, domain)
                except SaturationError as exc:
                    self.fail(str(exc))

    def clause_v2(self, cons):
        if len(cons) < 2:
            self.fail("too short for a verb-second clause")
            return
        front, v2, rest = cons[0], cons[1], cons[2:]
        if front.kind != "np":
            self.fail(f"{' '.join(front.words)!r} cannot open a verb-second clause")
            return
        k = next((i for i, c in enumerate(rest) if c.kind == "comp"), len(rest))
        mid, nach = list(rest[:k]), rest[k:]
        if v2.kind in ("vfin", "neg"):
            if v2.kind == "neg" and v2.entry.category.vform != "fin":
                self.fail(f"{' '.join(v2.words)!r} is not finite")
                return
            if not mid or mid[-1].kind != "verb" or mid[-1].entry.category.vform != "inf":
                self.fail(f"{' '.join(v2.words)!r} needs a non-finite verb at the end")
                return
            verb = mid.pop()
            func = v2.sign
            base = verb.sign
        elif v2.kind == "verb" and v2.entry.category.vform == "fin":
            e = v2.entry
            if e.particle:
                if not mid or mid[-1].kind != "particle" or mid[-1].words[0].casefold() != e.particle.casefold():
                    self.fail(f"{' '.join(v2.words)!r} needs its particle {e.particle!r}")
                    return
                bracket = mid.pop().words
            else:
                bracket = ("t_v",)
            base = replace(v2.sign, tree=Node("lex", words=bracket, tag="V"))
            func = Sign(Category("func_vfin", vform="fin"), phon=v2.words)
        else:
            self.fail(f"{' '.join(v2.words)!r} cannot occupy the second position")
            return
        if any(c.kind not in ("np", "neg") for c in mid):
            self.fail("unexpected material in the middle field")
            return
        for s in self.nachfeld(vip(base), nach):
            for inner in self.run(s, mid, [front]):
                yield from self._vorfeld(func, inner, front)

    def _vorfeld(self, func, sign, front):
        if any(s is front.loc for s in sign.slash):
            try:
                clause = func_combine(func, sign, TOP)
            except SaturationError as exc:
                self.fail(str(exc))
                return
            clause = head_filler(clause, front.loc, self._filler_node(front))
            if clause.slash:
                self.fail("unbound trace")
                return
            yield clause
            return
        if sign.slash:
            self.fail("unbound trace")
            return
        try:
            inner = saturate_last(sign, front.loc, front.node())
            yield func_combine(func, inner, TOP)
        except (ValenceMismatch, SaturationError) as exc:
            self.fail(str(exc))

    def root(self):
        if self.cons[0].kind == "comp":
            yield from self.clause_final(self.cons, embedded=False)
        else:
            yield from self.clause_v2(self.cons)


# -- lexical segmentation and chunking ---------------------------------------

def _segment(tokens, lexicon: Lexicon):
    """Greedy longest-first segmentation into (words, entries) items."""
    items, i = [], 0
    while i < len(tokens):
        for n in range(min(lexicon.max_len, len(tokens) - i), 0, -1):
            entries = lexicon.lookup(tokens[i:i + n])
            if entries:
                items.append((tuple(tokens[i:i + n]), entries))
                i += n
                break
        else:
            if tokens[i].casefold() in lexicon.particles:
                items.append(((tokens[i],), ("particle",)))
                i += 1
            else:
                raise NoParse(f"unknown word {tokens[i]!r}", partial=" ".join(tokens[:i]))
    return items


def _chunk(choice, fresh: Fresh):
    """Group determiners with nouns; returns constituents or None."""
    cons, i = [], 0
    while i < len(choice):
        words, e = choice[i]
        if e == "particle":
            cons.append(_Con("particle", words))
            i += 1
            continue
        k = e.kind
        if k in DETS and not e.np:
            if i + 1 >= len(choice) or choice[i + 1][1] == "particle" or choice[i + 1][1].kind != "noun":
                return None
            nwords, noun = choice[i + 1]
            if noun.category.num and noun.category.num != e.category.num:
                return None
            cons.append(_Con("np", words + nwords, combine_np(e, noun, fresh, words + nwords), e))
            i += 2
            continue
        if k == "noun":
            return None
        sign = instantiate(e, fresh, words)
        kind = {"func_comp": "comp", "func_vfin": "vfin", "neg": "neg", "verb": "verb"}.get(k, "np")
        cons.append(_Con(kind, words, sign, e))
        i += 1
    return cons


def parse(tokens, lexicon: Lexicon, fresh: Optional[Fresh] = None) -> list:
    """All complete derivations of ``tokens`` (a string is tokenized)."""
    if isinstance(tokens, str):
        tokens = tokenize(tokens)
    tokens = tuple(tokens)
    if not tokens:
        raise NoParse("empty input")
    items = _segment(tokens, lexicon)
    fresh = fresh or Fresh()
    out, failures = [], []
    for choice in itertools.product(*[[(w, e) for e in es] for w, es in items]):
        cons = _chunk(choice, fresh)
        if cons is None:
            failures.append("determiner without a matching noun")
            continue
        p = _Parser(cons, fresh)
        for root in p.root():
            nps = [c.loc for c in cons if c.kind == "np"]
            out.append(Derivation(root, root.tree, nps, tokens))
        failures += p.failures
    if not out:
        reason = failures[-1] if failures else "no analysis"
        raise NoParse(f"no derivation: {reason}", partial=" | ".join(dict.fromkeys(failures)))
    return out
