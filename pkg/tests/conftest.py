from dataclasses import replace
from pathlib import Path

import pytest

from scopeforge import load_lexicon, parse
from scopeforge.udrs import Lt, children

DATA = Path(__file__).parent / "data"

# The acceptance sentences, keyed by their example numbers.
SENTENCES = {
    "everybody": "Everybody didn't pay attention.",
    "gather": "Die Mädchen gathered in the garden.",
    "lawyers": "Die Rechtsanwälte stellten eine Sekretärin ein.",
    "breweries": "Three breweries supplied five inns.",
    "fronted": "Mindestens einen Bewerber habe ich fast jedem Mitarbeiter vorgestellt.",
    "in_situ": "Ich habe fast jedem Mitarbeiter mindestens einen Bewerber vorgestellt.",
    "dass": "Mindestens ein Mann glaubte, daß die Kinder Klingelputz gemacht haben.",
    "dat_acc": "weil der Mann mindestens einer Frau die Gemälde gezeigt hat.",
    "acc_dat": "weil der Mann die Gemälde mindestens einer Frau gezeigt hat.",
}


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon()


@pytest.fixture(scope="session")
def derive(lexicon):
    cache = {}

    def get(key):
        if key not in cache:
            ds = parse(SENTENCES.get(key, key), lexicon)
            assert len(ds) == 1, f"{key}: {len(ds)} derivations"
            cache[key] = ds[0]
        return cache[key]
    return get


def np_label(derivation, phrase, n=1):
    hits = [loc for loc in derivation.nps if loc.phrase.casefold() == phrase.casefold()]
    return hits[n - 1].udrs.l_max


def without_structural(u):
    """Drop child < owner constraints that only restate a complex condition."""
    structural = {Lt(ch, c.label) for c in u.conds for ch in children(c)}
    return replace(u, subord=frozenset(c for c in u.subord if c not in structural))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
