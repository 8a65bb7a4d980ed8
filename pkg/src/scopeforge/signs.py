"""Syntactic signs, categories and derivation-tree nodes."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .udrs import UdrsStore

SCOPE_TYPES = ("quant", "plural")


@dataclass(frozen=True)
class Category:
    head_type: str
    case: tuple = ()          # admissible cases; empty means any
    num: Optional[str] = None
    vform: Optional[str] = None


@dataclass(frozen=True)
class ArgSpec:
    """One SUBCAT element: what the verb expects in that position."""
    type: str = "dp"          # dp, pp or s
    case: Optional[str] = None
    num: Optional[str] = None
    pcase: Optional[str] = None

    def accepts(self, loc: "LocRecord") -> bool:
        if loc.arg_type != self.type:
            return False
        cat = loc.category
        if self.case and cat.case and self.case not in cat.case:
            return False
        if self.num and cat.num and self.num != cat.num:
            return False
        return True

    def __str__(self):
        return self.case or self.pcase or self.type


@dataclass(eq=False)
class LocRecord:
    """LOC value of an argument; shared by identity between trace and filler."""
    category: Category
    udrs: UdrsStore
    sem: str                  # quant, plural, indef, name or s
    phrase: str
    arg_type: str = "dp"

    @property
    def scope_typed(self):
        return self.sem in SCOPE_TYPES

    def __repr__(self):
        return f"LocRecord({self.phrase!r}, {self.sem})"


@dataclass(frozen=True)
class Node:
    """Derivation tree node; ``kind`` is a schema name or a leaf type."""
    kind: str
    children: tuple = ()
    words: tuple = ()
    index: Optional[int] = None
    tag: str = ""

    def leaf_text(self):
        if self.kind == "trace":
            return f"t_{self.index}"
        body = " ".join(self.words)
        tag = f"{self.tag} " if self.tag else ""
        suffix = f"_{self.index}" if self.index is not None else ""
        return f"[{tag}{body}]{suffix}"

    def is_leaf(self):
        return not self.children

    def dump(self, indent: int = 0) -> str:
        pad = "  " * indent
        if self.is_leaf():
            return pad + self.leaf_text()
        head = self.kind + (" " + " ".join(self.words) if self.words else "")
        if all(c.is_leaf() for c in self.children):
            return pad + "[" + head + " " + " ".join(c.leaf_text() for c in self.children) + "]"
        lines = [pad + "[" + head]
        lines += [c.dump(indent + 1) for c in self.children]
        lines[-1] += "]"
        return "\n".join(lines)

    def one_line(self) -> str:
        if self.is_leaf():
            return self.leaf_text()
        head = self.kind + (" " + " ".join(self.words) if self.words else "")
        return "[" + head + " " + " ".join(c.one_line() for c in self.children) + "]"

    def surface(self) -> list:
        """Terminal yield, with traces shown as ``t_i``."""
        if self.kind == "trace":
            return [f"t_{self.index}"]
        if self.is_leaf():
            return list(self.words)
        out = list(self.words) if self.kind.startswith("func") else []
        for c in self.children:
            out += c.surface()
        return out

    def clause_bracketing(self) -> str:
        """Topological bracketing: fillers and the V2/complementizer head."""
        if self.kind == "head-filler":
            filler, head = self.children
            return f"[[{' '.join(filler.words)}]_{filler.index} {head.clause_bracketing()}]"
        if self.kind.startswith("func"):
            return f"{' '.join(self.words)} [{' '.join(self.children[0].surface())}]"
        return " ".join(self.surface())


@dataclass(frozen=True)
class Sign:
    category: Category
    udrs: UdrsStore = field(default_factory=UdrsStore)
    head_subcat: tuple = ()   # ArgSpec per SUBCAT position
    subj: tuple = ()          # SUBCAT indices still to be saturated
    comps: tuple = ()
    slash: tuple = ()         # LocRecords of traces not yet bound
    phon: tuple = ()
    lex: bool = False
    loc: Optional[LocRecord] = None
    slots: tuple = ()         # slot id per SUBCAT position
    realized: tuple = ()      # LocRecord (or None) per SUBCAT position
    collective: frozenset = frozenset()
    pending_scope: tuple = () # (sem, l_max, l_min) awaiting the local domain
    tree: Optional[Node] = None
    nps: tuple = ()           # LocRecords of every NP inside, surface order
    entry: object = None
