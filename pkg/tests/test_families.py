import itertools
from pathlib import Path

import numpy as np
from hypothesis import given, strategies as st

from adralg import families as fm
from adralg import fuzz
from adralg.presentation import Quiver, parse_presentation
from oracles import monomial_dim

DATA = Path(__file__).resolve().parents[1] / "data"


def has_long_path(arrows, nv, banned, length):
    """True when some path of the given length avoids every banned subword."""
    banned = set(banned)
    frontier = [(v, ()) for v in range(nv)]
    for _ in range(length):
        nxt = []
        for s, w in frontier:
            end = arrows[w[-1]][2] if w else s
            for k, (_, a, _b) in enumerate(arrows):
                cand = w + (k,)
                if a == end and not any(cand[i:i + len(b)] == b for b in banned for i in range(len(cand) - len(b) + 1)):
                    nxt.append((s, cand))
        frontier = nxt
        if not frontier:
            return False
    return True


@st.composite
def monomial_quivers(draw):
    nv = draw(st.integers(1, 2))
    arrows = tuple((f"a{k}", draw(st.integers(0, nv - 1)), draw(st.integers(0, nv - 1)))
                   for k in range(draw(st.integers(1, 3))))
    q = Quiver(tuple(str(v + 1) for v in range(nv)), arrows)
    words = [w for n in (2, 3) for w in itertools.product(range(len(arrows)), repeat=n) if q.composes(w)]
    banned = draw(st.lists(st.sampled_from(words), max_size=4, unique=True)) if words else []
    return q, arrows, nv, banned


@given(monomial_quivers())
def test_monomial_finite_against_path_count(data):
    # DERIVED: a path longer than the number of length-2 paths must revisit one, hence pumps
    q, arrows, nv, banned = data
    n2 = sum(1 for w in itertools.product(range(len(arrows)), repeat=2) if q.composes(w))
    assert fm.monomial_finite(q, banned) == (not has_long_path(arrows, nv, banned, n2 + 2))


@given(st.integers(0, 10_000), st.integers(0, 50))
def test_random_presentations_are_admissible(seed, k):
    pres = fm.random_presentation(fm.instance_rng(seed, k))
    q = pres.quiver
    banned = [next(iter(r)) for r in pres.relations]
    assert all(len(w) in (2, 3) for w in banned)
    assert pres.dim <= 30
    assert pres.dim == monomial_dim(list(q.arrows), len(q.vertices), banned)
    mods = fm.random_semilocal(pres, fm.instance_rng(seed, k))
    assert 1 <= len(mods) <= 3 and all(m.is_local() and m.satisfies_relations() for m in mods)


def test_instances_replay():
    a = fm.random_presentation(fm.instance_rng(5, 17))
    b = fm.random_presentation(fm.instance_rng(5, 17))
    assert a.quiver == b.quiver and a.relations == b.relations
    for suite in ("stratification", "four-way"):
        assert fuzz.run_one(suite, 5, 17) == fuzz.run_one(suite, 5, 17)
    s1, s2 = fuzz.run(9, 4, ["top-quotient-hom"]), fuzz.run(9, 4, ["top-quotient-hom"])
    assert s1.to_json() == s2.to_json()


def test_shipped_data_files_match_families():
    files = fm.data_files()
    assert sorted(files) == sorted(p.name for p in DATA.iterdir())
    for name, text in files.items():
        assert (DATA / name).read_text() == text
        if name.endswith(".alg"):
            parse_presentation(text, source=name)


@given(st.integers(2, 5))
def test_star_family(n):
    pres, mods = fm.star(n)
    assert len(pres.quiver.vertices) == n and pres.loewy_length() == 2
    assert [m.name for m in mods][0] == "P(1)"
