import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from adralg import families as fm
from adralg.errors import NonParallelRelation, NotAdmissibleWithinCap, ParseError, RelationTooShort
from adralg.presentation import Presentation, Quiver, format_presentation, parse_presentation
from oracles import monomial_dim, quotient_dim


def signed(rel, p):
    return {w: (c - p if c > p // 2 else c) for w, c in rel.items()}


def stable_quotient_dim(pres, start=3, stop=12):
    # increase the truncation length until the count stops moving
    q = pres.quiver
    rels = [signed(r, pres.p) for r in pres.relations]
    prev = None
    for length in range(start, stop):
        d = quotient_dim(q.arrows, len(q.vertices), rels, length)
        if d == prev:
            return d
        prev = d
    raise AssertionError("truncated dimension did not stabilize")


@pytest.mark.parametrize("text, dim, ll", [
    (fm.BRANCHING_ALG, 4 + 3 + 2, 3),  # paths: 4 trivial, a b c, ab ac
    (fm.LOOP_ALG, 5, 3),
    (fm.KRONECKER_ALG, 4, 2),
    (fm.truncated_alg(1), 1, 1),
    (fm.truncated_alg(4), 4, 4),
])
def test_dimension_and_loewy_length(text, dim, ll):
    pres = parse_presentation(text)
    assert pres.dim == dim
    assert pres.loewy_length() == ll


@pytest.mark.parametrize("text, dim", [(fm.BRANCHING_B_ALG, 20), (fm.LOOP_B_ALG, 28)])
def test_endomorphism_presentations_against_linear_algebra(text, dim):
    pres = parse_presentation(text)
    assert pres.is_confluent()
    assert pres.dim == dim == stable_quotient_dim(pres)


def test_basis_is_length_lex():
    pres = parse_presentation(fm.LOOP_ALG)
    assert pres.describe()["basis"] == ["e1", "e2", "alpha", "beta", "alpha*alpha"]


def test_normal_form_reduces_relations():
    pres = parse_presentation(fm.LOOP_ALG)
    el_ = pres.parse_element("alpha*alpha*alpha + 3*alpha - alpha*beta")
    q = pres.quiver
    assert pres.normal_form(el_) == {(0, (q.arrow_index["alpha"],)): 3}


def test_commutativity_relation_identifies_paths():
    pres = parse_presentation(fm.BRANCHING_B_ALG)
    da = pres.normal_form(pres.parse_element("d*a"))
    eb = pres.normal_form(pres.parse_element("e*b"))
    assert da == eb and da
    assert pres.normal_form(pres.parse_element("g*f")) == {}


def test_format_roundtrip():
    for text in fm.NAMED_ALGEBRAS.values():
        pres = parse_presentation(text)
        again = parse_presentation(format_presentation(pres))
        assert again.describe() == pres.describe()


def test_comments_and_blank_lines():
    pres = parse_presentation("# leading\n\nquiver   # trailing\nvertices: 1\narrow x: 1 -> 1\nrelations\nrel: x*x\n")
    assert pres.dim == 2


@pytest.mark.parametrize("text, line, column", [
    ("vertices: 1", 1, 1),
    ("quiver\nvertices: 1 2\narrow a: 1 -> 3\n", 3, 1),
    ("quiver\nvertices: 1\narrow x: 1 -> 1\nrelations\nrel: x*x - y\n", 5, 12),
    ("quiver\nvertices: 1\nrelations\nrel: 2 +* x\n", 4, 8),
    ("quiver\nvertices: 1\narrow x 1 -> 1\n", 3, 1),
    ("quiver\n  vertices:\n", 2, 3),
    ("", 1, 1),
])
def test_parse_errors_carry_positions(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_presentation(text, source="t.alg")
    assert (info.value.line, info.value.column) == (line, column)
    assert str(info.value).startswith(f"t.alg:{line}:{column}:")


def test_relation_errors():
    with pytest.raises(NonParallelRelation):
        parse_presentation("quiver\nvertices: 1 2\narrow a: 1 -> 2\narrow b: 1 -> 1\nrelations\nrel: a*b\n")
    with pytest.raises(NonParallelRelation):
        parse_presentation("quiver\nvertices: 1 2\narrow a: 1 -> 2\narrow x: 1 -> 1\narrow y: 2 -> 2\n"
                           "relations\nrel: x*x - x*a\n")
    with pytest.raises(RelationTooShort):
        parse_presentation("quiver\nvertices: 1 2\narrow a: 1 -> 2\nrelations\nrel: a\n")


def test_non_admissible_inputs():
    with pytest.raises(NotAdmissibleWithinCap):
        parse_presentation("quiver\nvertices: 1\narrow x: 1 -> 1\n")
    with pytest.raises(NotAdmissibleWithinCap):
        parse_presentation("quiver\nvertices: 1\narrow x: 1 -> 1\nrelations\nrel: x*x - x*x*x\n")


def test_cap_is_respected():
    with pytest.raises(NotAdmissibleWithinCap):
        parse_presentation(fm.truncated_alg(10), cap=5)
    assert parse_presentation(fm.truncated_alg(10), cap=20).dim == 10


def test_small_prime_changes_nothing_for_monomial_algebras():
    for p in (2, 3, 101):
        assert parse_presentation(fm.LOOP_ALG, p=p).dim == 5


def test_coefficients_reduce_mod_p():
    # x^2 - 3 y^2 with 3 = 0 in F_3 is monomial there
    text = ("quiver\nvertices: 1 2\narrow x: 1 -> 2\narrow u: 2 -> 2\narrow y: 1 -> 2\n"
            "relations\nrel: x*u - 3*y*u\nrel: u*u\n")
    assert parse_presentation(text, p=3).dim == parse_presentation(text.replace(" - 3*y*u", ""), p=3).dim


@st.composite
def monomial_instances(draw):
    nv = draw(st.integers(1, 3))
    na = draw(st.integers(1, 4))
    arrows = tuple((f"a{k}", draw(st.integers(0, nv - 1)), draw(st.integers(0, nv - 1))) for k in range(na))
    quiver = Quiver(tuple(str(v) for v in range(nv)), arrows)
    words = [w for n in (2, 3) for w in itertools.product(range(na), repeat=n) if quiver.composes(w)]
    banned = draw(st.lists(st.sampled_from(words), max_size=4, unique=True)) if words else []
    return quiver, banned


@given(monomial_instances())
def test_monomial_dimension_matches_path_count(inst):
    quiver, banned = inst
    rels = [{w: 1} for w in banned]
    if not fm.monomial_finite(quiver, banned):
        with pytest.raises(NotAdmissibleWithinCap):
            Presentation(quiver, rels, cap=6)
        return
    pres = Presentation(quiver, rels, cap=40)
    assert pres.dim == monomial_dim(quiver.arrows, len(quiver.vertices), banned)
    assert pres.is_confluent()


@given(st.integers(0, 10_000))
def test_random_presentations_are_admissible(seed):
    pres = fm.random_presentation(np.random.default_rng(seed))
    assert pres.dim <= 30
    assert pres.is_confluent()
    banned = [next(iter(r)) for r in pres.relations]
    q = pres.quiver
    assert pres.dim == monomial_dim(q.arrows, len(q.vertices), banned)
