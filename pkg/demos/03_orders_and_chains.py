"""
Orders, costandard modules and rejective chains
===============================================

For the loop algebra the ADR order makes B left-strongly quasi-hereditary
but not strongly so. A search over chains of subcategories finds an order
that works.
"""

from adralg import adrcore as ac
from adralg import endoalg as ea
from adralg import families as fm
from adralg import qhcheck as qh

pres, mods = fm.loop_example()
adr = ac.build_adr(pres, mods)
b = ea.endomorphism_algebra(adr)

order = qh.adr_order(adr)
print("ADR order:", order.describe())
for x in range(b.n):
    nab, e, q = qh.costandard(b, order, x)
    print(f"  nabla({adr.labels[x]}) dims {nab.dims}, E/nabla dim {q.dim}")
print("left-strongly QH:", qh.check_left_strongly_qh(b, order).holds)
print("strongly QH:", qh.check_strongly_qh(b, order))

rep = ac.verify_rejective_chain(adr, ac.build_chain(adr, ac.stratify(adr)))
print(ac.chain_report_text(rep))

found = qh.find_rejective_chain(adr)
better = qh.chain_order(adr, found)
print("found:", better.describe())
print("strongly QH:", qh.check_strongly_qh(b, better))
