import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from adralg import adrcore as ac
from adralg import endoalg as ea
from adralg import families as fm
from adralg import repcat as rc
from adralg.errors import CapExceeded
from adralg.presentation import parse_presentation
from oracles import algebra_from_presentation, brute_hom_dim

# vertex names of the displayed presentations, in catalog order
BRANCHING_VERTICES = ["P1", "P1S3", "P1S4", "J2", "P2S3", "S1", "S2"]
LOOP_VERTICES = ["P1", "J2", "P1soc", "S1", "P2"]


def relabel(mat, perm):
    mat = np.asarray(mat)
    return mat[np.ix_(perm, perm)]


def test_branching_dims(br_b):
    b = br_b
    assert b.dim == 20
    assert int(b.ext_quiver().sum()) == 8
    assert b.check_associative() and b.check_identities()


def test_hom_dims_against_enumeration():
    # DERIVED: B(i, j) = Hom(X_j, X_i), counted over F_3
    pres, mods = fm.branching_example(p=3)
    adr = ac.build_adr(pres, mods)
    b = ea.endomorphism_algebra(adr)
    for i, x in enumerate(adr.catalog):
        for j, y in enumerate(adr.catalog):
            assert b.dims[i, j] == brute_hom_dim(y, x)


@pytest.mark.parametrize("which", ["br", "loop"])
def test_matches_displayed_presentation(which, br_b, loop_b):
    # PAPER: the quivers with relations displayed for both examples
    b, text, names = (br_b, fm.BRANCHING_B_ALG, BRANCHING_VERTICES) if which == "br" else \
        (loop_b, fm.LOOP_B_ALG, LOOP_VERTICES)
    ref = algebra_from_presentation(parse_presentation(text))
    perm = [ref.labels.index(v) for v in names]
    cartan = [[b.dims[i, j] for j in range(b.n)] for i in range(b.n)]
    ref_cartan = [[ref.dims[i, j] for j in range(ref.n)] for i in range(ref.n)]
    assert cartan == relabel(ref_cartan, perm).tolist()
    assert b.ext_quiver().tolist() == relabel(ref.ext_quiver(), perm).tolist()
    assert ref.check_associative() and ref.check_identities()
    assert ea.simple_pds(b) == [ea.simple_pds(ref, cap=10)[k] for k in perm]


def test_loop_dims(loop_b):
    assert loop_b.dim == 28
    assert int(loop_b.ext_quiver().sum()) == 6


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_auslander_algebra_of_truncated_polynomials(m):
    # DERIVED: Hom(K[x]/x^i, K[x]/x^j) has dimension min(i, j)
    pres = fm.truncated_polynomial(m)
    b = ea.endomorphism_algebra(ac.adr_of_algebra(pres))
    assert b.dim == sum(min(i, j) for i in range(1, m + 1) for j in range(1, m + 1))
    assert ea.global_dimension(b, cap=10) == (0 if m == 1 else 2)


def test_dual_numbers():
    pres = fm.truncated_polynomial(2)
    adr = ac.adr_of_algebra(pres)
    b = ea.endomorphism_algebra(adr)
    assert adr.labels == ["P(1)", "S(1)"]
    assert b.dim == 5
    assert [b.projective(k).dim for k in range(2)] == [3, 2]
    assert [b.injective(k).dim for k in range(2)] == [3, 2]


def test_projectives_and_injectives(br_b):
    b = br_b
    for k in range(b.n):
        pk = b.projective(k)
        assert pk.dims == tuple(b.dims[k, j] for j in range(b.n))
        assert pk.respects_table()
        assert pk.top_dims == tuple(int(j == k) for j in range(b.n))
        ek = b.injective(k)
        assert ek.dims == tuple(b.dims[j, k] for j in range(b.n))
        assert ek.respects_table()
        assert tuple(len(r) for r in ek.socle_sub()) == tuple(int(j == k) for j in range(b.n))


def test_opposite(br_b):
    b = br_b
    assert b.op.op is b
    assert b.op.ext_quiver().tolist() == b.ext_quiver().T.tolist()
    assert b.op.check_associative() and b.op.check_identities()
    assert ea.global_dimension(b.op) == ea.global_dimension(b)


def test_double_dual(br_b, loop_b):
    for b in (br_b, loop_b):
        for k in range(b.n):
            m = b.projective(k)
            d = ea.dual_module(m)
            assert d.algebra is b.op and d.respects_table()
            assert rc.is_isomorphic(ea.dual_module(d), m)


def test_global_dimensions(br_b, loop_b):
    assert ea.simple_pds(br_b) == [0, 1, 1, 2, 0, 2, 1]
    assert ea.global_dimension(br_b) == 2
    assert ea.global_dimension(loop_b) == 2
    # for M = A the loop algebra's ADR algebra needs one more step
    b = ea.endomorphism_algebra(ac.adr_of_algebra(parse_presentation(fm.LOOP_ALG)))
    assert ea.global_dimension(b, cap=10) == 3


def test_resolution_terms(br_b):
    # S(1) <- P_S(1) <- P_J2 <- P_S(2): the arrows S1 -> J2 -> S2 with gf = 0
    assert ea.minimal_projective_resolution(br_b.simple(5)) == [[5], [3], [6]]
    assert ea.minimal_projective_resolution(br_b.projective(3)) == [[3]]


def test_cap_exceeded(loop_b):
    with pytest.raises(CapExceeded):
        ea.global_dimension(loop_b, cap=1)


def test_pd2_witness_and_bounds(br, br_b):
    assert ea.pd2_witness(br_b, br[2]) == "S(1)"
    rep = ea.bound_report(2, 4)
    assert rep["within_bound"] and rep["classical_bound"] == 6 and rep["strictly_better"]


def test_json_roundtrip(br_b):
    data = json.loads(br_b.dumps())
    assert data["schema"] == 1 and data["dim"] == 20
    again = ea.BasicAlgebra.from_json(data)
    assert again.to_json() == data
    assert ea.global_dimension(again) == 2
    assert again.ext_quiver().tolist() == br_b.ext_quiver().tolist()
    with pytest.raises(ValueError):
        ea.BasicAlgebra.from_json({**data, "schema": 2})


def test_radical_is_nilpotent(br_b):
    assert br_b.radical_nilpotency() <= br_b.n + 1
    assert len(br_b.rad_elements) == br_b.dim - br_b.n


@given(st.integers(0, 100_000))
def test_random_endomorphism_algebras(seed):
    rng = np.random.default_rng(seed)
    pres = fm.random_presentation(rng, max_dim=15)
    adr = ac.build_adr(pres, fm.random_semilocal(pres, rng))
    b = ea.endomorphism_algebra(adr)
    assert b.check_associative() and b.check_identities()
    assert b.op.ext_quiver().tolist() == b.ext_quiver().T.tolist()
    gl = ea.global_dimension(b, cap=b.dim)
    assert ea.global_dimension(b.op, cap=b.dim) == gl
    for k in range(b.n):
        assert rc.is_isomorphic(ea.dual_module(ea.dual_module(b.projective(k))), b.projective(k))
