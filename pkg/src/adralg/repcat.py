"""Finite-dimensional modules as representations, Hom spaces and splitting.

Vectors are rows and maps act on the right: an element ``v`` of the space
at vertex ``i`` is sent by an action ``a: i -> j`` to ``v @ mat``.  This is
the right-module convention, so the matrix of a path ``a*b`` is
``mat(a) @ mat(b)``, and a module map ``f`` followed by ``g`` has per-vertex
matrix ``F_i @ G_i``.

``Rep`` is the common engine.  A-modules (``Module``) use the arrows of the
quiver as actions; right modules over an endomorphism algebra (see
``endoalg``) use its basis elements, with a subset marked as generators of
the radical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .errors import NotASubmodule, NotInAdd, NotLocal, ParseError
from .presentation import Presentation

Sub = List[np.ndarray]  # per-vertex row bases (reduced echelon)
Map = Tuple[np.ndarray, ...]  # per-vertex matrices, shape (dim X_i, dim Y_i)


class Rep:
    def __init__(self, dims: Sequence[int], actions: Sequence[Tuple[int, int, np.ndarray]], p: int,
                 gens: Optional[Sequence[int]] = None, name: str = ""):
        self.dims = tuple(int(d) for d in dims)
        self.p = p
        self.name = name
        self.actions = []
        for s, t, m in actions:
            m = np.asarray(m)
            if m.shape != (self.dims[s], self.dims[t]):
                raise ValueError(f"action {s}->{t} has shape {m.shape}, expected {(self.dims[s], self.dims[t])}")
            self.actions.append((s, t, m % p))
        self.gens = list(range(len(self.actions))) if gens is None else list(gens)

    # -- construction of related representations ------------------------------

    # attributes a subclass carries over to derived representations
    _context: Tuple[str, ...] = ()

    def _like(self, dims, actions, name):
        """New representation of the same kind (keeps the algebra it lives over)."""
        out = object.__new__(type(self))
        for k in self._context:
            setattr(out, k, getattr(self, k))
        Rep.__init__(out, dims, actions, self.p, self.gens, name)
        return out

    def __repr__(self):
        return f"<{type(self).__name__} {self.name or '?'} dims={self.dims}>"

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def dim_vector(self) -> Tuple[int, ...]:
        return self.dims

    def zero_sub(self) -> Sub:
        return [el.zeros(0, d, self.p) for d in self.dims]

    def full_sub(self) -> Sub:
        return [el.identity(d, self.p) for d in self.dims]

    def gen_actions(self):
        return [self.actions[k] for k in self.gens]

    # -- subspaces ------------------------------------------------------------

    def image_under_gens(self, sub: Sub) -> Sub:
        """``sub * rad``: images of ``sub`` under the radical generators."""
        p = self.p
        parts: List[List[np.ndarray]] = [[] for _ in self.dims]
        for s, t, m in self.gen_actions():
            if sub[s].shape[0] and m.size:
                parts[t].append(el.matmul(sub[s], m, p))
        return [el.row_basis(np.vstack(ps), p) if ps else el.zeros(0, d, p) for ps, d in zip(parts, self.dims)]

    def closure(self, sub: Sub) -> Sub:
        """Smallest submodule containing the given per-vertex vectors."""
        cur = [el.row_basis(s, self.p) if s.shape[0] else el.zeros(0, d, self.p) for s, d in zip(sub, self.dims)]
        while True:
            img = self.image_under_gens(cur)
            nxt = [el.sum_rows(a, b, self.p) for a, b in zip(cur, img)]
            if all(a.shape[0] == b.shape[0] for a, b in zip(cur, nxt)):
                return nxt
            cur = nxt

    def is_submodule(self, sub: Sub) -> bool:
        img = self.image_under_gens(sub)
        return all(el.rank(np.vstack([s, i]), self.p) == el.rank(s, self.p) if s.shape[1] else True
                   for s, i in zip(sub, img))

    def radical_sub(self) -> Sub:
        return self.image_under_gens(self.full_sub())

    def radical_power_sub(self, k: int) -> Sub:
        cur = self.full_sub()
        for _ in range(k):
            if not any(s.shape[0] for s in cur):
                break
            cur = self.image_under_gens(cur)
        return cur

    def socle_sub(self) -> Sub:
        p = self.p
        out = []
        for v, d in enumerate(self.dims):
            mats = [m for s, t, m in self.gen_actions() if s == v and m.shape[1]]
            if not mats or d == 0:
                out.append(el.identity(d, p))
            else:
                out.append(el.left_kernel(np.hstack(mats), p))
        return out

    def loewy_length(self) -> int:
        k = 0
        cur = self.full_sub()
        while any(s.shape[0] for s in cur):
            cur = self.image_under_gens(cur)
            k += 1
        return k

    # -- sub / quotient modules -----------------------------------------------

    def restrict(self, sub: Sub, name: str = "") -> Tuple["Rep", Map]:
        """Submodule as a representation plus its inclusion maps."""
        if not self.is_submodule(sub):
            raise NotASubmodule("subspace is not closed under the action")
        p = self.p
        basis = [el.row_basis(s, p) if s.shape[0] else el.zeros(0, d, p) for s, d in zip(sub, self.dims)]
        coords = [el.Coordinates(b, p) for b in basis]
        acts = []
        for s, t, m in self.actions:
            img = el.matmul(basis[s], m, p)
            acts.append((s, t, coords[t](img) if basis[s].shape[0] else el.zeros(0, basis[t].shape[0], p)))
        return self._like([b.shape[0] for b in basis], acts, name), tuple(basis)

    def quotient(self, sub: Sub, name: str = "") -> Tuple["Rep", Map]:
        """Quotient representation plus the projection maps.

        The complement of ``sub`` at each vertex is spanned by the standard
        vectors at non-pivot columns of its reduced echelon basis.
        """
        if not self.is_submodule(sub):
            raise NotASubmodule("subspace is not closed under the action")
        p = self.p
        projs = []
        for s, d in zip(sub, self.dims):
            r, piv = el.rref(s, p) if s.shape[0] else (s, [])
            r = r[: len(piv)]
            free = [c for c in range(d) if c not in set(piv)]
            proj = el.zeros(d, len(free), p)
            # v -> v - sum v[piv_k] * r_k, then read the free coordinates
            for j, c in enumerate(free):
                proj[c, j] = 1
                for k, pc in enumerate(piv):
                    proj[pc, j] = (proj[pc, j] - r[k, c]) % p
            projs.append((proj, free))
        acts = []
        for s, t, m in self.actions:
            proj_s, free_s = projs[s]
            rows = el.identity(self.dims[s], p)[free_s] if free_s else el.zeros(0, self.dims[s], p)
            acts.append((s, t, el.matmul(el.matmul(rows, m, p), projs[t][0], p)))
        return self._like([len(f) for _, f in projs], acts, name), tuple(pr for pr, _ in projs)

    def top(self, name: str = "") -> "Rep":
        return self.quotient(self.radical_sub(), name or (f"top {self.name}" if self.name else ""))[0]

    def socle(self, name: str = "") -> "Rep":
        return self.restrict(self.socle_sub(), name or (f"soc {self.name}" if self.name else ""))[0]

    def radical(self, name: str = "") -> Tuple["Rep", Map]:
        return self.restrict(self.radical_sub(), name or (f"rad {self.name}" if self.name else ""))

    def radical_quotient(self, k: int, name: str = "") -> Tuple["Rep", Map]:
        """``M / M J^k`` with its projection."""
        return self.quotient(self.radical_power_sub(k), name)

    # -- locality -------------------------------------------------------------

    @cached_property
    def top_dims(self) -> Tuple[int, ...]:
        rad = self.radical_sub()
        return tuple(d - r.shape[0] for d, r in zip(self.dims, rad))

    def is_local(self) -> bool:
        return sum(self.top_dims) == 1

    def top_vertex(self) -> int:
        if not self.is_local():
            raise NotLocal(f"{self.name or 'module'} does not have a simple top (top dims {self.top_dims})")
        return next(i for i, d in enumerate(self.top_dims) if d)

    @cached_property
    def _top_functional(self) -> np.ndarray:
        """Column vector at the top vertex that vanishes exactly on the radical."""
        v = self.top_vertex()
        rad = self.radical_sub()[v]
        k = el.kernel_matrix(rad, self.p) if rad.shape[0] else el.identity(self.dims[v], self.p)
        return k[:1].T  # dims[v] x 1

    def direct_sum(self, others: Sequence["Rep"], name: str = "") -> "Rep":
        parts = [self, *others]
        p = self.p
        dims = [sum(r.dims[v] for r in parts) for v in range(self.n)]
        acts = []
        for k, (s, t, _) in enumerate(self.actions):
            m = el.zeros(dims[s], dims[t], p)
            r0 = c0 = 0
            for r in parts:
                blk = r.actions[k][2]
                m[r0 : r0 + blk.shape[0], c0 : c0 + blk.shape[1]] = blk
                r0 += blk.shape[0]
                c0 += blk.shape[1]
            acts.append((s, t, m))
        return self._like(dims, acts, name)


# -- Hom spaces ---------------------------------------------------------------


@dataclass
class HomSpace:
    source: Rep
    target: Rep
    basis: List[Map]
    flat: np.ndarray  # basis maps flattened into rows

    def __len__(self):
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def _coords(self) -> el.Coordinates:
        return el.Coordinates(self.flat, self.source.p)

    def coords(self, f: Map) -> np.ndarray:
        """Coordinates of a module map in this basis."""
        return self._coords(flatten(f, self.source.p))[0]

    def combine(self, c: Sequence[int]) -> Map:
        p = self.source.p
        out = []
        for v in range(self.source.n):
            m = el.zeros(self.source.dims[v], self.target.dims[v], p)
            for ck, f in zip(c, self.basis):
                if ck % p:
                    m = (m + ck * f[v]) % p
            out.append(m)
        return tuple(out)


def flatten(f: Map, p: int) -> np.ndarray:
    parts = [m.reshape(-1) for m in f]
    if not parts:
        return el.zeros(1, 0, p)
    return np.concatenate(parts).reshape(1, -1) % p


def compose(g: Map, f: Map, p: int) -> Map:
    """``g ∘ f`` (apply ``f`` first)."""
    return tuple(el.matmul(fi, gi, p) for fi, gi in zip(f, g))


def identity_map(x: Rep) -> Map:
    return tuple(el.identity(d, x.p) for d in x.dims)


def is_iso_map(f: Map, p: int) -> bool:
    return all(el.is_invertible(m, p) if m.size else m.shape[0] == m.shape[1] for m in f)


def is_epi_map(f: Map, p: int) -> bool:
    return all(el.rank(m, p) == m.shape[1] if m.shape[1] else True for m in f)


def is_mono_map(f: Map, p: int) -> bool:
    return all(el.rank(m, p) == m.shape[0] if m.shape[0] else True for m in f)


def hom_space(x: Rep, y: Rep) -> HomSpace:
    """Basis of Hom(x, y) from one kernel computation over the intertwining equations."""
    p = x.p
    offs = [0]
    for v in range(x.n):
        offs.append(offs[-1] + x.dims[v] * y.dims[v])
    nvar = offs[-1]
    blocks = []
    for k in x.gens:
        s, t, xa = x.actions[k]
        ya = y.actions[k][2]
        rows = x.dims[s] * y.dims[t]
        if rows == 0:
            continue
        eq = el.zeros(rows, nvar, p)
        # F_s @ ya - xa @ F_t = 0, with F flattened row-major
        if x.dims[s] and y.dims[s]:
            eq[:, offs[s] : offs[s + 1]] = np.kron(el.identity(x.dims[s], p), ya.T)
        if x.dims[t] and y.dims[t]:
            eq[:, offs[t] : offs[t + 1]] = (eq[:, offs[t] : offs[t + 1]] - np.kron(xa, el.identity(y.dims[t], p))) % p
        blocks.append(eq)
    if nvar == 0:
        flat = el.zeros(0, 0, p)
    elif blocks:
        flat = el.kernel_matrix(np.vstack(blocks) % p, p)
    else:
        flat = el.identity(nvar, p)
    basis = []
    for row in flat:
        basis.append(tuple(row[offs[v] : offs[v + 1]].reshape(x.dims[v], y.dims[v]) for v in range(x.n)))
    return HomSpace(x, y, basis, flat)


def is_isomorphic(x: Rep, y: Rep, hom: Optional[HomSpace] = None) -> bool:
    """Isomorphism test; complete when x has a local endomorphism ring.

    If x ≅ y and End(x) is local, the non-isomorphisms form a proper subspace
    of Hom(x, y), so some basis element is an isomorphism.
    """
    if x.dims != y.dims:
        return False
    if x.dim == 0:
        return True
    h = hom or hom_space(x, y)
    return any(is_iso_map(f, x.p) for f in h.basis)


def into_radical_coeffs(h: HomSpace) -> np.ndarray:
    """Row basis (in Hom coordinates) of the maps whose image lies in rad(target).

    The target must be local; a map into a local module is surjective iff it
    is not in this subspace.
    """
    y = h.target
    p = y.p
    v = y.top_vertex()
    if not h.basis:
        return el.zeros(0, 0, p)
    if h.source.dims[v] == 0:
        return el.identity(len(h.basis), p)
    fun = y._top_functional
    phi = np.vstack([el.matmul(f[v], fun, p).reshape(-1) for f in h.basis])
    return el.left_kernel(phi, p)


def radical_hom_coeffs(x: Rep, y: Rep, h: Optional[HomSpace] = None, iso: Optional[bool] = None) -> np.ndarray:
    """The categorical radical J(x, y) as coefficient rows in the Hom basis."""
    if not x.is_local() or not y.is_local():
        raise NotLocal("radical Hom subspace needs local modules")
    h = h or hom_space(x, y)
    if iso is None:
        iso = is_isomorphic(x, y, h)
    if not iso:
        return el.identity(len(h.basis), x.p)
    return into_radical_coeffs(h)


def radical_hom_subspace(x: Rep, y: Rep) -> List[Map]:
    h = hom_space(x, y)
    return [h.combine(c) for c in radical_hom_coeffs(x, y, h)]


def has_surjective_radical_hom(x: Rep, n: Rep, h: Optional[HomSpace] = None, iso: Optional[bool] = None) -> bool:
    """Whether some map in J(x, n) is surjective (n local).

    Such a map exists iff J(x, n) is not contained in Hom(x, rad n).
    """
    if not x.is_local() or not n.is_local():
        raise NotLocal("surjectivity test needs local modules")
    h = h or hom_space(x, n)
    if iso is None:
        iso = is_isomorphic(x, n, h)
    if iso:
        return False  # a surjective endomorphism is invertible
    return into_radical_coeffs(h).shape[0] < len(h.basis)


def split_local_summand(m: Rep, x: Rep) -> Optional[Tuple[Rep, Map, Map]]:
    """Split the local module ``x`` off ``m``.

    Returns ``(complement, f, pi)`` with ``f: x -> m``, ``pi: m -> x``,
    ``pi ∘ f = id`` and complement ``= ker pi``; ``None`` if ``x`` is not a
    summand.  Only basis pairs are tried: their composites span the trace
    ideal, which contains a unit iff it is not inside rad End(x).
    """
    x.top_vertex()  # raises NotLocal
    p = m.p
    if any(a > b for a, b in zip(x.dims, m.dims)):
        return None
    hxm = hom_space(x, m)
    if not hxm.basis:
        return None
    hmx = hom_space(m, x)
    v = x.top_vertex()
    fun = x._top_functional
    for f in hxm.basis:
        for g in hmx.basis:
            gf_v = el.matmul(f[v], g[v], p)
            if not el.matmul(gf_v, fun, p).any():
                continue
            h = compose(g, f, p)
            hinv = tuple(el.inverse(hi, p) if hi.size else hi for hi in h)
            pi = compose(hinv, g, p)
            ker = [el.left_kernel(pv, p) if pv.shape[1] else el.identity(pv.shape[0], p) for pv in pi]
            comp, _ = m.restrict(ker)
            return comp, f, pi
    return None


def decompose_into(m: Rep, catalog: Sequence[Rep]) -> List[int]:
    """Indices (with repetition) of catalog summands whose direct sum is ``m``.

    Raises ``NotInAdd`` with the stuck remainder when ``m`` is not in add of
    the catalog.
    """
    found: List[int] = []
    rest = m
    while rest.dim:
        for i, x in enumerate(catalog):
            res = split_local_summand(rest, x)
            if res is not None:
                found.append(i)
                rest = res[0]
                break
        else:
            raise NotInAdd(f"remainder with dims {rest.dims} has no summand in the catalog",
                           found=found, remainder=rest)
    return sorted(found)


def in_add(m: Rep, catalog: Sequence[Rep]) -> bool:
    try:
        decompose_into(m, catalog)
    except NotInAdd:
        return False
    return True


# -- A-modules ----------------------------------------------------------------


class Module(Rep):
    """A right module over ``A = KQ/I`` given as a quiver representation."""

    _context = ("pres",)

    def __init__(self, pres: Presentation, dims, arrow_mats, name: str = "", check: bool = True):
        q = pres.quiver
        self.pres = pres
        acts = [(q.source(a), q.target(a), m) for a, m in enumerate(arrow_mats)]
        super().__init__(dims, acts, pres.p, None, name)
        if check and not self.satisfies_relations():
            raise ValueError(f"module {name or ''} does not satisfy the relations")

    def path_matrix(self, w) -> np.ndarray:
        q = self.pres.quiver
        m = el.identity(self.dims[q.source(w[0])], self.p)
        for a in w:
            m = el.matmul(m, self.actions[a][2], self.p)
        return m

    def satisfies_relations(self) -> bool:
        p = self.p
        q = self.pres.quiver
        for rel in self.pres.relations:
            if not rel:
                continue
            s, t = q.word_ends(next(iter(rel)))
            acc = el.zeros(self.dims[s], self.dims[t], p)
            for w, c in rel.items():
                acc = (acc + c * self.path_matrix(w)) % p
            if acc.any():
                return False
        return True


def projective_module(pres: Presentation, i: int, name: str = "") -> Module:
    """P(i): spanned by the basis paths starting at ``i``; arrows act by right multiplication."""
    q = pres.quiver
    idx = pres.basis_from(i)
    at = [[k for k in idx if q.path_target(pres.basis[k]) == v] for v in range(len(q.vertices))]
    mats = []
    for a in range(len(q.arrows)):
        s, t = q.source(a), q.target(a)
        rm = pres.right_mult[a]
        mats.append(rm[np.ix_(at[s], at[t])] if at[s] and at[t] else el.zeros(len(at[s]), len(at[t]), pres.p))
    return Module(pres, [len(x) for x in at], mats, name or f"P({q.vertices[i]})", check=False)


def projective_basis_paths(pres: Presentation, i: int) -> List[List[int]]:
    """Global basis indices of P(i) grouped by target vertex (the coordinate order of P(i))."""
    q = pres.quiver
    idx = pres.basis_from(i)
    return [[k for k in idx if q.path_target(pres.basis[k]) == v] for v in range(len(q.vertices))]


def simple_module(pres: Presentation, i: int, name: str = "") -> Module:
    q = pres.quiver
    dims = [1 if v == i else 0 for v in range(len(q.vertices))]
    mats = [el.zeros(dims[q.source(a)], dims[q.target(a)], pres.p) for a in range(len(q.arrows))]
    return Module(pres, dims, mats, name or f"S({q.vertices[i]})", check=False)


def zero_module(pres: Presentation) -> Module:
    q = pres.quiver
    return Module(pres, [0] * len(q.vertices), [el.zeros(0, 0, pres.p) for _ in q.arrows], "0", check=False)


def element_in_projective(pres: Presentation, i: int, element) -> Sub:
    """Split an element of e_i A into per-vertex row vectors of P(i)."""
    vec = pres.vector(element)
    groups = projective_basis_paths(pres, i)
    for k, c in enumerate(vec):
        if c and pres.basis[k][0] != i:
            raise ValueError(f"element does not lie in e_{pres.quiver.vertices[i]} A")
    return [vec[g].reshape(1, -1) if g else el.zeros(1, 0, pres.p) for g in groups]


def local_quotient(pres: Presentation, i: int, gens: Sequence, name: str = "") -> Module:
    """P(i) modulo the submodule generated by ``gens`` (elements of e_i A)."""
    P = projective_module(pres, i)
    rows: List[List[np.ndarray]] = [[] for _ in P.dims]
    for g in gens:
        if isinstance(g, str):
            g = pres.parse_element(g, source=i)
        for v, r in enumerate(element_in_projective(pres, i, g)):
            if r.any():
                rows[v].append(r)
    sub = [np.vstack(r) if r else el.zeros(0, d, pres.p) for r, d in zip(rows, P.dims)]
    if not gens:
        P.name = name or P.name
        return P
    Q, _ = P.quotient(P.closure(sub), name)
    return Q


def radical_of_algebra(pres: Presentation) -> Module:
    """J(A) = ⊕ rad P(i) as a right A-module."""
    parts = [projective_module(pres, i).radical()[0] for i in range(len(pres.quiver.vertices))]
    return parts[0].direct_sum(parts[1:], "J(A)")


# -- module description files -------------------------------------------------

_LOCAL_RE = re.compile(r"local\s+(\S+)\s*=\s*([PS])\s+(\S+)\s*(?:/\s*(.*))?$")
_MODULE_RE = re.compile(r"module\s+(\S+)\s*=\s*(.+)$")


@dataclass
class ModuleFile:
    locals: Dict[str, Module]
    order: List[str]  # names making up the semilocal module M

    def modules(self) -> List[Module]:
        return [self.locals[n] for n in self.order]


def parse_module_file(text: str, pres: Presentation, source: str = "<modules>") -> ModuleFile:
    """Parse ``local NAME = P v / g1, g2`` and ``module M = X1 + X2`` lines.

    ``S v`` is accepted as shorthand for the simple module at ``v``.  Without a
    ``module`` line, M is the sum of all declared locals in order.
    """
    q = pres.quiver
    locs: Dict[str, Module] = {}
    order: Optional[List[str]] = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LOCAL_RE.match(line)
        if m:
            name, kind, vert, rest = m.groups()
            if vert not in q.vertex_index:
                raise ParseError(f"unknown vertex {vert!r}", ln, raw.index(vert) + 1, source)
            if name in locs:
                raise ParseError(f"duplicate local {name!r}", ln, 1, source)
            i = q.vertex_index[vert]
            if kind == "S":
                locs[name] = simple_module(pres, i, name)
                continue
            gens = [g.strip() for g in rest.split(",")] if rest and rest.strip() else []
            try:
                parsed = [pres.parse_element(g, source=i) for g in gens]
            except ParseError as exc:
                raise ParseError(str(exc).split(": ", 1)[-1], ln, raw.index("/") + 1, source) from None
            locs[name] = local_quotient(pres, i, parsed, name)
            continue
        m = _MODULE_RE.match(line)
        if m:
            names = [s.strip() for s in m.group(2).split("+")]
            for nm in names:
                if nm not in locs:
                    raise ParseError(f"undeclared local {nm!r}", ln, raw.index(nm) + 1 if nm in raw else 1, source)
            order = names
            continue
        raise ParseError(f"unexpected line {line!r}", ln, 1, source)
    if order is None:
        order = list(locs)
    return ModuleFile(locs, order)
