"""ADR modules of semilocal modules: catalog, stratification and chains.

Given local modules ``X_1, ..., X_r`` (the summands of a semilocal ``M``),
the catalog ``F`` holds one representative of every radical quotient
``X/XJ^k``.  The stratification splits ``F`` by Loewy length and then by
the absence of surjective radical maps; removing its layers one after the
other gives the chain of subcategories that the checkers below verify.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .errors import EmptyInput, NonTerminatingLayer, NotInAdd, NotLocal
from .presentation import Presentation
from .repcat import (HomSpace, Map, Module, Rep, compose, decompose_into, flatten, hom_space,
                     has_surjective_radical_hom, into_radical_coeffs, is_epi_map, is_isomorphic,
                     projective_module)


def _quotient_label(name: str, k: int) -> str:
    base = name if "/" not in name else f"({name})"
    return f"{base}/{base}J" if k == 1 else f"{base}/{base}J^{k}"


class AdrModule:
    """The catalog F of indecomposable summands of the ADR module of ``M``."""

    def __init__(self, pres: Presentation, inputs: Sequence[Module]):
        if not inputs:
            raise EmptyInput("the semilocal module needs at least one local summand")
        for x in inputs:
            if not x.is_local():
                raise NotLocal(f"{x.name or 'input'} is not local (top dims {x.top_dims})")
        self.pres = pres
        self.p = pres.p
        self.inputs = list(inputs)
        self.m = max(x.loewy_length() for x in inputs)
        cands = []
        for idx, x in enumerate(self.inputs):
            ll = x.loewy_length()
            for k in range(ll, 0, -1):
                cands.append((-k, idx, k == ll, k, x))
        cands.sort(key=lambda c: (c[0], c[1]))
        self.catalog: List[Module] = []
        self.origin: List[Tuple[int, int]] = []  # (input index, k) of the first occurrence
        for _, idx, is_input, k, x in cands:
            if is_input:
                q = x
            else:
                q = x.radical_quotient(k)[0]
                q.name = f"S({pres.quiver.vertices[q.top_vertex()]})" if q.dim == 1 else _quotient_label(x.name, k)
            hit = next((j for j, y in enumerate(self.catalog) if is_isomorphic(q, y)), None)
            if hit is None:
                self.catalog.append(q)
                self.origin.append((idx, k))
            elif is_input and self.origin[hit][1] != self.inputs[self.origin[hit][0]].loewy_length():
                # an input module keeps its own display label
                self.catalog[hit].name = x.name
        self.lengths = [x.loewy_length() for x in self.catalog]
        self._hom: Dict[Tuple[int, int], HomSpace] = {}
        self._rad: Dict[Tuple[int, int], np.ndarray] = {}
        self._rq: Dict[Tuple[int, int], int] = {}

    def __len__(self):
        return len(self.catalog)

    @property
    def labels(self) -> List[str]:
        return [x.name for x in self.catalog]

    def index_of(self, label: str) -> int:
        return self.labels.index(label)

    def hom(self, i: int, j: int) -> HomSpace:
        key = (i, j)
        if key not in self._hom:
            self._hom[key] = hom_space(self.catalog[i], self.catalog[j])
        return self._hom[key]

    def radical_coeffs(self, i: int, j: int) -> np.ndarray:
        """J(F_i, F_j) in coordinates of the Hom basis (catalog members are pairwise non-isomorphic)."""
        key = (i, j)
        if key not in self._rad:
            h = self.hom(i, j)
            self._rad[key] = into_radical_coeffs(h) if i == j else el.identity(len(h), self.p)
        return self._rad[key]

    def radical_maps(self, i: int, j: int) -> List[Map]:
        h = self.hom(i, j)
        return [h.combine(c) for c in self.radical_coeffs(i, j)]

    def find(self, x: Rep, among: Optional[Sequence[int]] = None) -> Optional[int]:
        """Catalog index isomorphic to the local module ``x`` (restricted to ``among``)."""
        idx = range(len(self.catalog)) if among is None else among
        for j in idx:
            if self.catalog[j].dims == x.dims and is_isomorphic(x, self.catalog[j]):
                return j
        return None

    def radical_quotient_index(self, i: int, k: int) -> Optional[int]:
        """Catalog index of F_i / F_i J^k (``None`` for k = 0, the zero module)."""
        if k <= 0:
            return None
        if k >= self.lengths[i]:
            return i
        key = (i, k)
        if key not in self._rq:
            q = self.catalog[i].radical_quotient(k)[0]
            j = self.find(q)
            if j is None:
                raise RuntimeError("radical quotient of a catalog member is missing from the catalog")
            self._rq[key] = j
        return self._rq[key]

    def module(self, name: str = "M~") -> Rep:
        parts = self.catalog
        return parts[0].direct_sum(parts[1:], name)


def build_adr(pres: Presentation, inputs: Sequence[Module]) -> AdrModule:
    return AdrModule(pres, inputs)


def adr_of_algebra(pres: Presentation) -> AdrModule:
    """The original ADR module: M = A = ⊕ P(i)."""
    parts = []
    for i, v in enumerate(pres.quiver.vertices):
        x = projective_module(pres, i)
        if x.dim == 1:
            x.name = f"S({v})"
        parts.append(x)
    return AdrModule(pres, parts)


# -- stratification -----------------------------------------------------------


@dataclass
class StratTable:
    layers: Dict[Tuple[int, int], List[int]]
    n: Dict[int, int]
    n_M: int
    m: int

    def order(self) -> List[Tuple[int, int]]:
        return sorted(self.layers)

    def blocks(self) -> List[List[int]]:
        """Layers in ADR order."""
        return [self.layers[k] for k in self.order()]

    def length_blocks(self, adr: "AdrModule") -> List[List[int]]:
        return [[x for x in range(len(adr)) if adr.lengths[x] == self.m - i] for i in range(self.m)]

    def as_labels(self, adr: AdrModule) -> Dict[str, List[str]]:
        return {f"F_{i},{j}": [adr.labels[x] for x in v] for (i, j), v in sorted(self.layers.items())}


def surjective_radical_table(adr: AdrModule, members: Sequence[int]) -> Dict[Tuple[int, int], bool]:
    out = {}
    for x in members:
        for y in members:
            out[x, y] = x != y and has_surjective_radical_hom(adr.catalog[x], adr.catalog[y], adr.hom(x, y), iso=False)
    return out


def stratify(adr: AdrModule) -> StratTable:
    layers: Dict[Tuple[int, int], List[int]] = {}
    n: Dict[int, int] = {}
    for i in range(adr.m):
        remaining = [x for x in range(len(adr)) if adr.lengths[x] == adr.m - i]
        surj = surjective_radical_table(adr, remaining)
        j = 0
        while remaining:
            j += 1
            layer = [x for x in remaining if not any(surj[x, y] for y in remaining)]
            if not layer:
                raise NonTerminatingLayer(f"no module qualifies for layer F_{i},{j}")
            layers[i, j] = layer
            remaining = [x for x in remaining if x not in layer]
        n[i] = j
    return StratTable(layers, n, sum(n.values()), adr.m)


# -- chains -------------------------------------------------------------------


@dataclass
class Chain:
    """``C_0 = add F ⊃ C_1 ⊃ ... ⊃ C_n = 0`` stored as the removed sets."""

    removed: List[List[int]]
    size: int
    names: List[str] = field(default_factory=list)
    flags: Dict[str, bool] = field(default_factory=dict)

    def __len__(self):
        return len(self.removed)

    def subcategories(self) -> List[List[int]]:
        cur = list(range(self.size))
        out = [list(cur)]
        for r in self.removed:
            cur = [x for x in cur if x not in r]
            out.append(list(cur))
        return out


def build_chain(adr: AdrModule, strat: StratTable) -> Chain:
    keys = strat.order()
    return Chain([list(strat.layers[k]) for k in keys], len(adr), [f"F_{i},{j}" for i, j in keys])


def chain_from_blocks(adr: AdrModule, blocks: Sequence[Sequence[int]]) -> Chain:
    return Chain([list(b) for b in blocks], len(adr), [f"step {k + 1}" for k in range(len(blocks))])


def _coords_of_composites(hy: HomSpace, hx: HomSpace, pi: Map, p: int) -> np.ndarray:
    """Rows: coordinates in ``hx`` of ``g ∘ pi`` for each basis map g of ``hy``."""
    if not hy.basis:
        return el.zeros(0, len(hx), p)
    return np.vstack([hx.coords(compose(g, pi, p)) for g in hy.basis]) if len(hx) else el.zeros(len(hy), 0, p)


def _coords_of_postcomposites(hw: HomSpace, hx: HomSpace, iota: Map, p: int) -> np.ndarray:
    """Rows: coordinates in ``hx`` of ``iota ∘ g`` for each basis map g of ``hw``."""
    if not hw.basis:
        return el.zeros(0, len(hx), p)
    return np.vstack([hx.coords(compose(iota, g, p)) for g in hw.basis]) if len(hx) else el.zeros(len(hw), 0, p)


def _span_equal(rows: np.ndarray, target: np.ndarray, p: int) -> bool:
    """Row spaces equal (both given in the same coordinates)."""
    r1 = el.rank(rows, p) if rows.size else 0
    r2 = el.rank(target, p) if target.size else 0
    if r1 != r2:
        return False
    if r1 == 0:
        return True
    return el.rank(np.vstack([rows, target]), p) == r1


def verify_left_approximation(x: Rep, y: Rep, f: Map, tests: Sequence[Rep]) -> bool:
    """``f: x -> y`` is epic and every map from x to a test object factors through f."""
    p = x.p
    if y.dim == 0 and x.dim:
        return False  # no approximation into the zero subcategory by convention
    if not is_epi_map(f, p):
        return False
    for z in tests:
        hx = hom_space(x, z)
        if not len(hx):
            continue
        hy = hom_space(y, z)
        img = _coords_of_composites(hy, hx, f, p)
        if (el.rank(img, p) if img.size else 0) != len(hx):
            return False
    return True


def _iso_condition_left(adr: AdrModule, x: int, y: Rep, pi: Map, scope: Sequence[int]) -> List[str]:
    """Failures of: Hom(y, -) -> J(x, -), g ↦ g∘pi, is an isomorphism on ``scope``."""
    fails = []
    p = adr.p
    X = adr.catalog[x]
    for z in scope:
        hx = adr.hom(x, z)
        jx = adr.radical_coeffs(x, z)
        hy = hom_space(y, adr.catalog[z])
        img = _coords_of_composites(hy, hx, pi, p)
        rk = el.rank(img, p) if img.size else 0
        if rk != len(hy):
            fails.append(f"Hom({y.name or 'Y'},{adr.labels[z]}) -> J({X.name},{adr.labels[z]}) not injective")
        elif not _span_equal(img, jx, p):
            fails.append(f"image of Hom({y.name or 'Y'},{adr.labels[z]}) differs from J({X.name},{adr.labels[z]})")
    return fails


def _iso_condition_right(adr: AdrModule, x: int, u: Rep, iota: Map, scope: Sequence[int]) -> List[str]:
    """Failures of: Hom(-, u) -> J(-, x), g ↦ iota∘g, is an isomorphism on ``scope``."""
    fails = []
    p = adr.p
    for w in scope:
        hx = adr.hom(w, x)
        jx = adr.radical_coeffs(w, x)
        hw = hom_space(adr.catalog[w], u)
        img = _coords_of_postcomposites(hw, hx, iota, p)
        rk = el.rank(img, p) if img.size else 0
        if rk != len(hw):
            fails.append(f"Hom({adr.labels[w]},U) -> J({adr.labels[w]},{adr.labels[x]}) not injective")
        elif not _span_equal(img, jx, p):
            fails.append(f"image of Hom({adr.labels[w]},U) differs from J({adr.labels[w]},{adr.labels[x]})")
    return fails


@dataclass
class RadicalTop:
    """Top of the radical functor ``J(-, X)`` (right) or ``J(X, -)`` (left) on ``add(level)``.

    ``mult[z]`` counts copies of the representable functor at ``z`` in its
    projective cover; ``mismatch`` lists objects where the cover has the
    wrong dimension, i.e. where the functor is not representable.
    """

    mult: Dict[int, int]
    mismatch: List[int]

    @property
    def representable(self) -> bool:
        return not self.mismatch

    def support(self) -> List[int]:
        return sorted(z for z, m in self.mult.items() if m)


def radical_top(adr: AdrModule, x: int, level: Sequence[int], side: str) -> RadicalTop:
    """Decide the cosemisimple rejectivity condition for ``x`` inside ``add(level)`` from Hom data alone.

    The morphism ``φ`` exists iff the radical functor is projective, and
    then ``Y`` is its top: ``J(z, x) / J²(z, x)`` counts the copies of ``z``.
    Since the cover maps onto the functor, equal dimensions give the
    isomorphism.
    """
    p = adr.p

    def rad(a, b):
        return adr.radical_maps(a, b)

    mult = {}
    for z in level:
        if side == "right":
            direct = rad(z, x)
            prods = [compose(g, f, p) for w in level for f in rad(z, w) for g in rad(w, x)]
        else:
            direct = rad(x, z)
            prods = [compose(g, f, p) for w in level for f in rad(x, w) for g in rad(w, z)]
        if not direct:
            mult[z] = 0
            continue
        r2 = el.rank(np.vstack([flatten(h, p) for h in prods]), p) if prods else 0
        mult[z] = len(direct) - r2
    mismatch = []
    for w in level:
        if side == "right":
            have = len(rad(w, x))
            cover = sum(m * adr.hom(w, z).dim for z, m in mult.items() if m)
        else:
            have = len(rad(x, w))
            cover = sum(m * adr.hom(z, w).dim for z, m in mult.items() if m)
        if have != cover:
            mismatch.append(w)
    return RadicalTop(mult, mismatch)


def rejective_failures(adr: AdrModule, x: int, prev: Sequence[int], cur: Sequence[int],
                       side: str) -> Tuple[RadicalTop, List[str]]:
    """Why ``x`` fails the cosemisimple ``side``-rejective condition for ``cur ⊂ prev`` (empty if it passes)."""
    top = radical_top(adr, x, prev, side)
    fails = []
    keep = set(cur)
    name = adr.labels[x]
    for w in top.mismatch:
        what = f"J({adr.labels[w]},{name})" if side == "right" else f"J({name},{adr.labels[w]})"
        fails.append(f"{side}: {what} is not covered isomorphically by the top")
    for z in top.support():
        if z not in keep:
            fails.append(f"{side}: {adr.labels[z]} is needed in the approximation but is removed")
    return top, fails


def _largest_quotient_in(adr: AdrModule, x: int, sub: Sequence[int]) -> int:
    """Largest ℓ < ll(x) with x/xJ^ℓ in add(sub); 0 means the zero module."""
    subset = set(sub)
    for ell in range(adr.lengths[x] - 1, 0, -1):
        if adr.radical_quotient_index(x, ell) in subset:
            return ell
    return 0


def verify_total_left_rejective_chain(adr: AdrModule, chain: Chain) -> Dict:
    """Check the chain is an A-total left rejective chain.

    At step s the candidate for each X outside ``C_s`` is the canonical
    surjection X -> X/XJ^ℓ with ℓ largest such that the target lies in
    ``C_s``; it must be an epic left ``C_s``-approximation.  For the objects
    removed at step s, cosemisimplicity is checked through the isomorphism
    Hom(Y, -) ≅ J(X, -) on ``C_{s-1}``.
    """
    subs = chain.subcategories()
    steps = []
    ok = True
    for s in range(1, len(subs)):
        prev, cur = subs[s - 1], subs[s]
        entries = []
        cur_mods = [adr.catalog[z] for z in cur]
        for x in [x for x in subs[0] if x not in cur]:
            X = adr.catalog[x]
            ell = _largest_quotient_in(adr, x, cur)
            y, pi = X.radical_quotient(ell)
            y.name = adr.labels[adr.radical_quotient_index(x, ell)] if ell else "0"
            if ell:
                approx = verify_left_approximation(X, y, pi, cur_mods)
            else:
                # X -> 0 approximates iff X has no maps into C_s (vacuous at the last step)
                approx = all(len(adr.hom(x, z)) == 0 for z in cur)
            entry = {"object": adr.labels[x], "candidate": f"{adr.labels[x]} -> {y.name} (mod J^{ell})",
                     "approximation": approx}
            if x in prev:
                fails = _iso_condition_left(adr, x, y, pi, prev)
                entry["cosemisimple"] = not fails
                if fails:
                    entry["witnesses"] = fails
            entries.append(entry)
            ok = ok and approx and entry.get("cosemisimple", True)
        steps.append({"step": s, "removed": [adr.labels[x] for x in prev if x not in cur], "objects": entries})
    chain.flags["A-total-left"] = ok
    return {"kind": "A-total-left", "verified": ok, "length": len(chain), "steps": steps}


# canonical candidates ---------------------------------------------------------


def left_candidate(adr: AdrModule, x: int, scope: Sequence[int], radical: bool = True) -> Tuple[Rep, Map]:
    """X ↠ X/K, K the common kernel of all (radical) maps from X into ``scope``.

    Any epic map through which those maps factor has exactly this kernel.
    """
    X = adr.catalog[x]
    p = adr.p
    cols: List[List[np.ndarray]] = [[] for _ in X.dims]
    for z in scope:
        maps = adr.radical_maps(x, z) if radical else adr.hom(x, z).basis
        for f in maps:
            for v, m in enumerate(f):
                if m.shape[1]:
                    cols[v].append(m)
    ker = [el.left_kernel(np.hstack(c), p) if c else el.identity(d, p) for c, d in zip(cols, X.dims)]
    return X.quotient(ker)


def right_candidate(adr: AdrModule, x: int, scope: Sequence[int], radical: bool = True) -> Tuple[Rep, Map]:
    """U ↪ X, U the sum of images of all (radical) maps from ``scope`` into X."""
    X = adr.catalog[x]
    p = adr.p
    rows: List[List[np.ndarray]] = [[] for _ in X.dims]
    for w in scope:
        maps = adr.radical_maps(w, x) if radical else adr.hom(w, x).basis
        for f in maps:
            for v, m in enumerate(f):
                if m.shape[0]:
                    rows[v].append(m)
    img = [el.row_basis(np.vstack(r), p) if r else el.zeros(0, d, p) for r, d in zip(rows, X.dims)]
    return X.restrict(img)


def summands_in(adr: AdrModule, mod: Rep, among: Sequence[int]) -> Optional[List[int]]:
    """Catalog indices (from ``among``) of the summands of ``mod``, or None."""
    if mod.dim == 0:
        return []
    try:
        found = decompose_into(mod, [adr.catalog[i] for i in among])
    except (NotInAdd, NotLocal):
        return None
    return [among[k] for k in found]


def verify_right_rejective_step(adr: AdrModule, x: int, sub: Sequence[int], scope: Optional[Sequence[int]] = None) -> bool:
    """XJ ↪ X is a monic right ``sub``-approximation satisfying the isomorphism criterion on ``scope``."""
    X = adr.catalog[x]
    xj, iota = X.radical()
    if summands_in(adr, xj, list(sub)) is None:
        return False
    scope = range(len(adr)) if scope is None else scope
    return not _iso_condition_right(adr, x, xj, iota, scope)


def _step_report(adr: AdrModule, prev: Sequence[int], cur: Sequence[int], everything: Sequence[int],
                 scope: str) -> Tuple[bool, List[Dict]]:
    entries = []
    ok = True
    for x in [x for x in prev if x not in cur]:
        ltop, lf = rejective_failures(adr, x, prev, cur, "left")
        rtop, rf = rejective_failures(adr, x, prev, cur, "right")
        e = {"object": adr.labels[x],
             "left_candidate": _with_mult(adr, ltop) if ltop.representable else None,
             "right_candidate": _with_mult(adr, rtop) if rtop.representable else None,
             "left": not lf, "right": not rf}
        if lf or rf:
            e["witnesses"] = lf + rf
        ok = ok and not lf and not rf
        entries.append(e)
    if scope == "total":
        # C_s must also admit epic left and monic right approximations, as module maps, of all of C_0
        for x in [x for x in everything if x not in cur]:
            y, _ = left_candidate(adr, x, cur, radical=False)
            u, _ = right_candidate(adr, x, cur, radical=False)
            la = summands_in(adr, y, list(cur)) is not None
            ra = summands_in(adr, u, list(cur)) is not None
            entries.append({"object": adr.labels[x], "total_left": la, "total_right": ra})
            ok = ok and la and ra
    return ok, entries


def _with_mult(adr: AdrModule, top: RadicalTop) -> List[str]:
    return [adr.labels[z] for z in top.support() for _ in range(top.mult[z])]


def verify_rejective_chain(adr: AdrModule, chain: Chain, scope: str = "relative") -> Dict:
    """Check every step is a cosemisimple rejective subcategory of the previous one.

    ``scope="total"`` additionally asks each ``C_s`` to admit epic left and
    monic right approximations of every object of ``C_0``.
    """
    subs = chain.subcategories()
    steps = []
    ok = True
    for s in range(1, len(subs)):
        good, entries = _step_report(adr, subs[s - 1], subs[s], subs[0], scope)
        ok = ok and good
        steps.append({"step": s, "removed": [adr.labels[x] for x in subs[s - 1] if x not in subs[s]],
                      "verified": good, "objects": entries})
    chain.flags["rejective" if scope == "relative" else "total-rejective"] = ok
    return {"kind": "rejective" if scope == "relative" else "total-rejective", "verified": ok,
            "length": len(chain), "steps": steps}


# -- property checks ----------------------------------------------------------


def top_quotient_dims(adr: AdrModule, strat: StratTable) -> List[Tuple[str, int, int]]:
    """For M' in F_{0,1}: (label, dim Hom(M'/M'J^{m-1}, M~), dim J(M', M~))."""
    out = []
    for x in strat.layers.get((0, 1), []):
        q = adr.catalog[x].radical_quotient(adr.m - 1)[0]
        lhs = sum(len(hom_space(q, z)) for z in adr.catalog)
        rhs = sum(adr.radical_coeffs(x, z).shape[0] for z in range(len(adr)))
        out.append((adr.labels[x], lhs, rhs))
    return out


def stratification_witnesses(adr: AdrModule, strat: StratTable) -> List[str]:
    """Violations of the layer definition (empty when sound)."""
    bad = []
    for i in range(adr.m):
        keys = sorted(j for (ii, j) in strat.layers if ii == i)
        for j in keys:
            later = [y for k in keys if k >= j for y in strat.layers[i, k]]
            from_prev = [y for k in keys if k >= j - 1 for y in strat.layers[i, k]] if j >= 2 else []
            for x in strat.layers[i, j]:
                X = adr.catalog[x]
                for y in later:
                    if x != y and has_surjective_radical_hom(X, adr.catalog[y], adr.hom(x, y), iso=False):
                        bad.append(f"{adr.labels[x]} in F_{i},{j} maps onto {adr.labels[y]} radically")
                if j >= 2 and not any(x != y and has_surjective_radical_hom(X, adr.catalog[y], adr.hom(x, y), iso=False)
                                      for y in from_prev):
                    bad.append(f"{adr.labels[x]} in F_{i},{j} should already lie in F_{i},{j - 1}")
    return bad


def radical_quotients_in_add(adr: AdrModule) -> Optional[bool]:
    """For the ADR module of A: if every P(i)J is in add Ã, all P(i)J/P(i)J^j are too.

    Returns None when the hypothesis fails.
    """
    pres = adr.pres
    everything = list(range(len(adr)))
    rads = []
    for i in range(len(pres.quiver.vertices)):
        pj, _ = projective_module(pres, i).radical()
        if summands_in(adr, pj, everything) is None:
            return None
        rads.append(pj)
    for pj in rads:
        for j in range(1, adr.m + 1):
            q = pj.radical_quotient(j)[0]
            if summands_in(adr, q, everything) is None:
                return False
    return True


def chain_report_text(report: Dict) -> str:
    lines = [f"{report['kind']} chain of length {report['length']}: {'verified' if report['verified'] else 'FAILED'}"]
    for st in report["steps"]:
        lines.append(f"  step {st['step']}: remove {{{', '.join(st['removed'])}}}")
        for e in st["objects"]:
            w = e.get("witnesses")
            if w:
                for msg in w:
                    lines.append(f"    {e['object']}: {msg}")
    return "\n".join(lines)
