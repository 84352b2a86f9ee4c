"""
The endomorphism algebra and its global dimension
=================================================

B = End(M~) as structure constants over F_p, its Ext quiver, and minimal
projective resolutions of the simple B-modules.
"""

import numpy as np

from adralg import adrcore as ac
from adralg import endoalg as ea
from adralg import families as fm

pres, mods = fm.branching_example()
adr = ac.build_adr(pres, mods)
b = ea.endomorphism_algebra(adr)

print("dim B =", b.dim)
print("Cartan matrix (rows: B(i, -)):")
print(np.array([[b.dims[i, j] for j in range(b.n)] for i in range(b.n)]))
print("Ext quiver:")
print(b.ext_quiver())

for k, label in enumerate(b.labels):
    terms = ea.minimal_projective_resolution(b.simple(k))
    print(f"  pd S({label}) = {len(terms) - 1}:", " <- ".join("+".join(b.labels[j] for j in t) for t in terms))
print("gl B =", ea.global_dimension(b))

# the star family: gl B against the layer count n_M
for n in range(2, 6):
    pres, mods = fm.star(n)
    adr = ac.build_adr(pres, mods)
    n_M = ac.stratify(adr).n_M
    gl = ea.global_dimension(ea.endomorphism_algebra(adr))
    print(f"star n={n}: |F| = {len(adr)}, n_M = {n_M}, gl B = {gl}, classical bound {2 * (n_M - 1)}")
