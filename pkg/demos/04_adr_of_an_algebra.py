"""
When is the ADR algebra of A strongly quasi-hereditary?
=======================================================

Four independent tests that should agree: the radical of A lies in add of
the catalog, gl B = 2, the length chain is rejective, and some rejective
chain exists.
"""

from adralg import families as fm
from adralg import qhcheck as qh
from adralg.presentation import parse_presentation

cases = {
    "K[x]/(x^3)": fm.truncated_polynomial(3),
    "commutative square": fm.branching_example()[0],
    "Kronecker": parse_presentation(fm.KRONECKER_ALG),
    "loop": parse_presentation(fm.LOOP_ALG),
}
for name, pres in cases.items():
    rep = qh.theorem2_suite(pres)
    flags = " ".join(f"({k})={rep[k]}" for k in ("i", "ii", "iii", "iv"))
    print(f"{name:20s} gl B = {rep['gldim']}  {flags}  J(A) ~ {' + '.join(rep['J_decomposition'])}")
