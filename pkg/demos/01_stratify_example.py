"""
Stratifying a semilocal module
==============================

Build the catalog of radical quotients for a four-vertex algebra with a
commutative square, split it into layers, and check the chain of
subcategories those layers define.
"""

from adralg import adrcore as ac
from adralg import families as fm

pres, mods = fm.branching_example()
print(f"dim A = {pres.dim}, Loewy length {pres.loewy_length()}")
print("inputs:", ", ".join(f"{m.name} {m.dims}" for m in mods))

adr = ac.build_adr(pres, mods)
strat = ac.stratify(adr)
for key, labels in strat.as_labels(adr).items():
    print(f"  {key}: {', '.join(labels)}")
print("n_M =", strat.n_M)

# removing the layers one by one gives the chain; both kinds of check pass here
chain = ac.build_chain(adr, strat)
print(ac.chain_report_text(ac.verify_total_left_rejective_chain(adr, chain)))
print(ac.chain_report_text(ac.verify_rejective_chain(adr, chain)))
