"""Command-line front end: parse, compose, disambiguate, enumerate, evaluate.

    scopeforge parse "Ich habe fast jedem Mitarbeiter mindestens einen Bewerber vorgestellt" --readings
    scopeforge parse "Die Rechtsanwälte stellten eine Sekretärin ein" \\
        --disambiguate "die Rechtsanwälte"=collective --readings
    scopeforge parse "Three breweries supplied five inns" --cumulative "three breweries,five inns" \\
        --eval model.txt

Exit status: 0 success, 1 no parse, 2 inconsistency or unresolved
ambiguity, 3 lexicon/model/format errors.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import disambig, textformat
from .disambig import Directive, enumerate_readings
from .errors import ScopeforgeError, SchemaError
from .lexicon import load_lexicon
from .modeleval import evaluate, load_model
from .syntax import parse, tokenize
from .textformat import Naming
from .udrs import add_constraint


@dataclass
class RunConfig:
    sentence: str
    lexicon_path: str = None
    directives: list = field(default_factory=list)     # ("FORM", n, reading)
    cumulative: list = field(default_factory=list)     # [("FORM", n), ("FORM", n)]
    constraints: list = field(default_factory=list)    # texts like "l_2 <= l_3"
    policy: str = "branch"
    model_paths: list = field(default_factory=list)
    outputs: set = field(default_factory=lambda: {"udrs", "readings"})
    dot_path: str = None


@dataclass
class Result:
    derivation: object
    store: object              # after constraints and directives
    readings: list


def _norm(text):
    return " ".join(tokenize(text)).casefold()


def parse_np_ref(spec: str):
    """``FORM`` or ``FORM#N`` -> (normalized form, occurrence index)."""
    form, _, idx = spec.rpartition("#") if "#" in spec else (spec, "", "1")
    try:
        n = int(idx)
    except ValueError:
        raise SchemaError(f"bad occurrence index in {spec!r}", field="directive") from None
    return _norm(form), n


def parse_directive(spec: str):
    if "=" not in spec:
        raise SchemaError(f"directive {spec!r} must look like FORM[#N]=reading", field="directive")
    lhs, reading = spec.rsplit("=", 1)
    reading = reading.strip()
    if reading not in ("collective", "distributive", "generic", "none"):
        raise SchemaError(f"unknown plural reading {reading!r}", field="directive")
    form, n = parse_np_ref(lhs)
    return form, n, reading


def _np_label(derivation, form, n):
    hits = [loc for loc in derivation.nps if _norm(loc.phrase) == form]
    if len(hits) < n:
        raise SchemaError(f"no noun phrase {form!r} (occurrence {n}) in the sentence",
                          field="directive")
    return hits[n - 1].udrs.l_max


def _constraint(u, text):
    names = {v: k for k, v in Naming(u).label_names.items()}
    r = textformat._Reader()
    c = r.constraint(text, 1)

    def back(l):
        name = "l_top" if l == u.top or l.id == 0 else f"l_{l.id}"
        if name not in names:
            raise SchemaError(f"no label {name} in the printed store", field="constrain")
        return names[name]

    from dataclasses import fields, replace
    from .udrs import Label

    def rename(x):
        kw = {f.name: back(getattr(x, f.name)) if isinstance(getattr(x, f.name), Label)
              else rename(getattr(x, f.name)) for f in fields(x)}
        return replace(x, **kw)
    return rename(c)


def run(cfg: RunConfig, lexicon=None) -> list:
    """Analyze one sentence; one Result per derivation."""
    lexicon = lexicon or load_lexicon(cfg.lexicon_path)
    out = []
    for d in parse(cfg.sentence, lexicon):
        u = d.udrs
        for text in cfg.constraints:
            u = add_constraint(u, _constraint(d.udrs, text), "ext")
        directives = [Directive(_np_label(d, f, n), r) for f, n, r in cfg.directives]
        if cfg.cumulative:
            pair = tuple(_np_label(d, f, n) for f, n in cfg.cumulative)
            directives.append(Directive(pair, "cumulative"))
        for dr in directives:
            u = disambig.pl_dis(u, dr)
        readings = enumerate_readings(u, cfg.policy)
        out.append(Result(d, u, readings))
    return out


def report(cfg: RunConfig, results, stream=None, lexicon=None):
    stream = stream or sys.stdout
    models = [(p, load_model(p)) for p in cfg.model_paths]
    many = len(results) > 1
    union = {}
    for i, res in enumerate(results, 1):
        if many:
            print(f"== derivation {i}", file=stream)
        if "tree" in cfg.outputs:
            print(res.derivation.dump(), file=stream)
        if "udrs" in cfg.outputs:
            print(textformat.dumps(res.derivation.udrs), end="", file=stream)
        if "audit" in cfg.outputs:
            print(audit_table(res.derivation.udrs), end="", file=stream)
        if "readings" in cfg.outputs or models:
            print(f"readings: {len(res.readings)}", file=stream)
            for k, r in enumerate(res.readings, 1):
                if "readings" in cfg.outputs:
                    print(f"-- reading {k}", file=stream)
                    print(r.pretty(), file=stream)
                for path, m in models:
                    print(f"   {Path(path).name}: {_truth(r, m)}", file=stream)
        for r in res.readings:
            union.setdefault(r.text, r)
    if many:
        print(f"readings (all derivations): {len(union)}", file=stream)
    if cfg.dot_path and results:
        u = results[0].store
        with open(cfg.dot_path, "w", encoding="utf-8") as fh:
            fh.write(disambig.to_dot(results[0].derivation.udrs, "before"))
            fh.write(disambig.to_dot(disambig.promote_conditionals(u), "after"))


def _truth(reading, model):
    try:
        return "true" if evaluate(reading, model) else "false"
    except ScopeforgeError as exc:
        if exc.exit_status == 3:
            raise
        return f"n/a ({exc.code})"


def audit_table(u) -> str:
    """Every constraint with the step that introduced it, in printed order."""
    nm = Naming(u)
    tags = {}
    for tag, c in u.audit:
        tags.setdefault(c, tag)
    rows = sorted((nm.constraint(c), tags.get(c, "?")) for c in u.subord)
    width = max((len(t) for t, _ in rows), default=0)
    return "".join(f"{t.ljust(width)}  {tag}\n" for t, tag in rows)


def build_parser():
    ap = argparse.ArgumentParser(prog="scopeforge", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("parse", help="analyze a sentence")
    p.add_argument("sentence", nargs="?")
    p.add_argument("--lexicon", metavar="PATH")
    p.add_argument("--readings", action="store_true", help="print the readings")
    p.add_argument("--udrs", action="store_true", help="print the underspecified store")
    p.add_argument("--audit", action="store_true", help="print constraint provenance")
    p.add_argument("--tree", action="store_true", help="print the derivation")
    p.add_argument("--dot", metavar="PATH", help="write the subordination lattice as DOT")
    p.add_argument("--disambiguate", action="append", default=[], metavar="FORM[#N]=READING")
    p.add_argument("--cumulative", metavar="FORM,FORM")
    p.add_argument("--constrain", action="append", default=[], metavar="CONSTRAINT",
                   help='extra constraint over printed labels, e.g. "l_4 <= l_3"')
    p.add_argument("--policy", choices=("branch", "fixed"), default="branch")
    p.add_argument("--eval", action="append", default=[], metavar="MODELPATH")
    p.add_argument("--batch", metavar="FILE", help="one sentence per line")
    return ap


def _config(args, sentence):
    outputs = {k for k in ("readings", "udrs", "audit", "tree") if getattr(args, k)}
    if not outputs:
        outputs = {"udrs", "readings"}
    cum = []
    if args.cumulative:
        parts = args.cumulative.split(",")
        if len(parts) != 2:
            raise SchemaError("--cumulative takes two noun phrases separated by a comma",
                              field="cumulative")
        cum = [parse_np_ref(x) for x in parts]
    return RunConfig(sentence, args.lexicon, [parse_directive(d) for d in args.disambiguate],
                     cum, list(args.constrain), args.policy, list(args.eval), outputs, args.dot)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        lexicon = load_lexicon(args.lexicon)
        if args.batch:
            sentences = [l.strip() for l in Path(args.batch).read_text(encoding="utf-8").splitlines()
                         if l.strip() and not l.lstrip().startswith("#")]
        elif args.sentence:
            sentences = [args.sentence]
        else:
            print("error[usage]: give a sentence or --batch FILE", file=sys.stderr)
            return 2
        status = 0
        for s in sentences:
            if args.batch:
                print(f"### {s}")
            try:
                cfg = _config(args, s)
                report(cfg, run(cfg, lexicon), lexicon=lexicon)
            except ScopeforgeError as exc:
                if not args.batch:
                    raise
                print(f"error[{exc.code}]: {exc}", file=sys.stderr)
                status = max(status, exc.exit_status)
        return status
    except ScopeforgeError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        partial = getattr(exc, "partial", None)
        if partial:
            print(f"partial analysis: {partial}", file=sys.stderr)
        return exc.exit_status
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
