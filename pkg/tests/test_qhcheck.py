import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from adralg import adrcore as ac
from adralg import endoalg as ea
from adralg import families as fm
from adralg import qhcheck as qh
from adralg.errors import LoewyLengthOne, ParseError, SearchBoundExceeded
from adralg.presentation import parse_presentation


def labels_of(adr, chain):
    return [[adr.labels[x] for x in r] for r in chain.removed]


def test_parse_order(loop):
    _, _, adr = loop
    o = qh.parse_order(fm.LOOP_ORDER, adr.labels)
    assert o.describe() == "{P(1)} < {P(1)/P(1)J^2} < {P(1)/socP(1)} < {P(2), S(1)}"
    single = qh.parse_order("# comment\norder: P(1) < {P(1)/P(1)J^2, P(1)/socP(1)} < {S(1), P(2)}\n", adr.labels)
    assert single.blocks == qh.length_order(adr).blocks
    assert single.lt(0, 3) and not single.lt(1, 2) and single.le(2, 2)


@pytest.mark.parametrize("text, line, column", [
    ("", 1, 1),
    ("orders: {P(1)}\n", 1, 1),
    ("order: {P(1)}\norder: {S(1)}\n", 2, 1),
    ("order: {P(1)} < {Q} < {S(1)}\n", 1, 16),
    ("order: {P(1) < {S(1)}\n", 1, 7),
    ("order: {P(1)} <  < {S(1)}\n", 1, 16),
    ("order: {P(1)} < {S(1)}\n", 1, 7),  # not a partition
])
def test_order_errors(loop, text, line, column):
    _, _, adr = loop
    with pytest.raises(ParseError) as info:
        qh.parse_order(text, adr.labels, source="x.order")
    assert (info.value.line, info.value.column) == (line, column)


def test_costandard_extremes(br, br_b):
    _, _, adr = br
    order = qh.adr_order(adr)
    b = br_b
    for x in order.blocks[-1]:
        nab, e, q = qh.costandard(b, order, x)
        assert nab.dims == e.dims and q.dim == 0
    for x in order.blocks[0]:
        nab, _, _ = qh.costandard(b, order, x)
        assert nab.dims == tuple(int(j == x) for j in range(b.n))


def test_branching_orders(br, br_b):
    # PAPER: the ADR order is always left-strongly quasi-hereditary
    _, _, adr = br
    adr_o, len_o = qh.adr_order(adr), qh.length_order(adr)
    cert = qh.check_left_strongly_qh(br_b, adr_o)
    assert cert.holds and cert.failing == []
    assert cert.to_json()["labels"]["S(1)"]["quotient_dim"] == 0
    assert qh.check_strongly_qh(br_b, adr_o)
    # P(1) sits above both corners it maps onto, so coarsening to Loewy length breaks it
    assert not qh.check_left_strongly_qh(br_b, len_o).holds
    assert not qh.check_strongly_qh(br_b, len_o)


def test_loop_orders(loop, loop_b):
    # PAPER: the loop example with its strongly quasi-hereditary order
    _, _, adr = loop
    adr_o = qh.adr_order(adr)
    assert qh.check_left_strongly_qh(loop_b, adr_o).holds
    assert not qh.check_strongly_qh(loop_b, adr_o)
    chain = qh.find_rejective_chain(adr)
    assert labels_of(adr, chain) == [["P(1)"], ["P(1)/P(1)J^2"], ["P(1)/socP(1)"], ["S(1)", "P(2)"]]
    found = qh.chain_order(adr, chain)
    assert [set(b) for b in found.blocks] == [set(b) for b in qh.parse_order(fm.LOOP_ORDER, adr.labels).blocks]
    assert qh.check_strongly_qh(loop_b, found)


def test_branching_search(br, br_b):
    _, _, adr = br
    chain = qh.find_rejective_chain(adr)
    assert ac.verify_rejective_chain(adr, chain)["verified"]
    assert qh.check_strongly_qh(br_b, qh.chain_order(adr, chain))


def test_search_bound(br):
    with pytest.raises(SearchBoundExceeded):
        qh.find_rejective_chain(br[2], bound=6)


def test_semisimple_and_loewy_length_one():
    pres = parse_presentation("quiver\nvertices: 1 2 3\n")
    adr = ac.adr_of_algebra(pres)
    assert adr.labels == ["S(1)", "S(2)", "S(3)"]
    b = ea.endomorphism_algebra(adr)
    assert int(b.ext_quiver().sum()) == 0 and ea.global_dimension(b) == 0
    assert qh.check_strongly_qh(b, qh.adr_order(adr))
    assert ac.stratify(adr).n_M == 1
    with pytest.raises(LoewyLengthOne):
        qh.theorem2_suite(pres)
    with pytest.raises(LoewyLengthOne):
        qh.theorem2_suite(fm.truncated_polynomial(1))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_suite_truncated(m):
    # PAPER: K[x]/(x^m) is the motivating positive instance
    rep = qh.theorem2_suite(fm.truncated_polynomial(m))
    assert all(rep[k] for k in ("i", "ii", "iii", "iv", "agree"))
    assert rep["J_decomposition"] == [f"P(1)/P(1)J^{m - 1}" if m > 2 else "S(1)"]
    assert rep["chain"] == [[x] for x in rep["catalog"]]


def test_suite_branching_algebra(br):
    rep = qh.theorem2_suite(br[0])
    assert sorted(rep["J_decomposition"]) == ["P(2)", "S(3)", "S(4)"]
    assert rep["gldim"] == 2 and rep["pd2_witness"] == "S(1)"
    assert rep["chain"] == [["P(1)"], ["P(1)/P(1)J^2", "P(2)"], ["S(1)", "S(2)", "S(3)", "S(4)"]]
    assert rep["i"] and rep["found_order_strongly_qh"]


def test_suite_star_and_kronecker():
    pres, _ = fm.star(4)
    rep = qh.theorem2_suite(pres)
    assert rep["agree"] and rep["i"] and rep["gldim"] == 2
    rep = qh.theorem2_suite(parse_presentation(fm.KRONECKER_ALG))
    assert rep["agree"]


def test_suite_loop_algebra_is_negative():
    rep = qh.theorem2_suite(parse_presentation(fm.LOOP_ALG))
    assert not any(rep[k] for k in ("i", "ii", "iii", "iv"))
    assert rep["agree"] and rep["gldim"] == 3
    assert rep["J_remainder_dims"] == [2, 0]
    assert rep["failing_steps"] == [1]


@settings(max_examples=25)
@given(st.integers(0, 100_000))
def test_chain_check_matches_costandard_check(seed):
    # DERIVED: a total order is strongly quasi-hereditary iff the chain of its singletons is rejective
    rng = np.random.default_rng(seed)
    pres = fm.random_presentation(rng, max_dim=12)
    adr = ac.build_adr(pres, fm.random_semilocal(pres, rng))
    assume(len(adr) <= 5)
    b = ea.endomorphism_algebra(adr)
    any_good = False
    for perm in itertools.permutations(range(len(adr))):
        blocks = [[x] for x in perm]
        chain_ok = ac.verify_rejective_chain(adr, ac.chain_from_blocks(adr, blocks))["verified"]
        assert chain_ok == qh.check_strongly_qh(b, qh.OrderSpec(blocks, adr.labels)), perm
        any_good = any_good or chain_ok
    assert (qh.find_rejective_chain(adr) is not None) == any_good
