"""The endomorphism algebra B = End_A(Ã) as an explicit based algebra.

Conventions: ``B(i, j) = e_i B e_j = Hom(X_j, X_i)`` for catalog members
``X_i``, and the product is composition, ``b1 · b2 = b1 ∘ b2``.  Right
B-modules are representations whose vertex spaces are ``M e_i``; an
element of ``B(i, j)`` acts from ``M e_i`` to ``M e_j``.

The basis of ``B(i, i)`` starts with the identity, followed by a basis of
the radical of ``End(X_i)``; every other basis element is radical.
"""

from __future__ import annotations

import json
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .adrcore import stratify
from .errors import CapExceeded, NonSplitEndomorphism
from .repcat import Rep, compose, flatten

Key = Tuple[int, int]
Elem = Tuple[int, int, int]  # (i, j, u): u-th basis element of B(i, j)


class BasicAlgebra:
    """Structure constants ``mu[(i, j, k)][u, v, :]`` = coordinates of ``b_u · b_v``.

    ``b_u ∈ B(i, j)`` and ``b_v ∈ B(j, k)``; the product lies in ``B(i, k)``.
    """

    def __init__(self, labels: Sequence[str], dims: Dict[Key, int], mu: Dict[Tuple[int, int, int], np.ndarray],
                 p: int, n_M: Optional[int] = None):
        self.labels = list(labels)
        self.n = len(self.labels)
        self.p = p
        self.dims = {(i, j): int(dims.get((i, j), 0)) for i in range(self.n) for j in range(self.n)}
        self.mu = mu
        self.n_M = n_M
        self._op: Optional[BasicAlgebra] = None
        for i in range(self.n):
            if self.dims[i, i] < 1:
                raise ValueError(f"B({i},{i}) must contain the identity")

    # -- basis bookkeeping ----------------------------------------------------

    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    def table(self, i: int, j: int, k: int) -> np.ndarray:
        key = (i, j, k)
        if key not in self.mu:
            return np.zeros((self.dims[i, j], self.dims[j, k], self.dims[i, k]), dtype=el.zeros(0, 0, self.p).dtype)
        return self.mu[key]

    @cached_property
    def rad_elements(self) -> List[Elem]:
        """Basis of rad B: everything except the identities."""
        out = []
        for i in range(self.n):
            for j in range(self.n):
                start = 1 if i == j else 0
                out.extend((i, j, u) for u in range(start, self.dims[i, j]))
        return out

    @cached_property
    def rad_index(self) -> Dict[Elem, int]:
        return {e: k for k, e in enumerate(self.rad_elements)}

    def _rad_coords(self, i: int, j: int) -> np.ndarray:
        """Rows: the radical part of B(i, j) in its own coordinates."""
        d = self.dims[i, j]
        return el.identity(d, self.p)[1:] if i == j else el.identity(d, self.p)

    @cached_property
    def rad_powers(self) -> List[Dict[Key, np.ndarray]]:
        """``[rad, rad², ...]`` as per-(i, j) row bases, ending before the zero power."""
        p = self.p
        cur = {(i, j): self._rad_coords(i, j) for i in range(self.n) for j in range(self.n)}
        out = []
        guard = self.dim + 1
        while any(v.shape[0] for v in cur.values()):
            out.append(cur)
            if len(out) > guard:
                raise RuntimeError("radical of B is not nilpotent")
            nxt = {}
            for i in range(self.n):
                for k in range(self.n):
                    rows = []
                    for j in range(self.n):
                        a, b = cur[i, j], out[0][j, k]
                        if a.shape[0] and b.shape[0] and self.dims[i, k]:
                            t = self.table(i, j, k)
                            # products of every row of a with every row of b
                            prod = np.einsum("au,bv,uvw->abw", a, b, t) % p
                            rows.append(prod.reshape(-1, self.dims[i, k]))
                    nxt[i, k] = el.row_basis(np.vstack(rows) % p, p) if rows else el.zeros(0, self.dims[i, k], p)
            cur = nxt
        return out

    def radical_nilpotency(self) -> int:
        """Smallest k with rad^k = 0."""
        return len(self.rad_powers) + 1 if self.rad_powers else 1

    @cached_property
    def generators(self) -> List[Elem]:
        """Basis elements of rad B spanning a complement of rad² (the arrows)."""
        p = self.p
        rad2 = self.rad_powers[1] if len(self.rad_powers) > 1 else {}
        out = []
        for i in range(self.n):
            for j in range(self.n):
                d = self.dims[i, j]
                cur = rad2.get((i, j), el.zeros(0, d, p))
                r = cur.shape[0]
                for u in range(1 if i == j else 0, d):
                    e = el.zeros(1, d, p)
                    e[0, u] = 1
                    test = np.vstack([cur, e])
                    if el.rank(test, p) > r:
                        cur, r = test, r + 1
                        out.append((i, j, u))
        return out

    def ext_quiver(self) -> np.ndarray:
        """``Q[i, j]`` = number of arrows i -> j = dim e_i (rad/rad²) e_j."""
        q = np.zeros((self.n, self.n), dtype=int)
        for i, j, _ in self.generators:
            q[i, j] += 1
        return q

    # -- checks ---------------------------------------------------------------

    def check_associative(self) -> bool:
        p = self.p
        n = self.n
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    ijk = self.table(i, j, k)
                    if ijk.size == 0:
                        continue
                    for l in range(n):
                        if not self.dims[k, l] or not self.dims[i, l]:
                            continue
                        left = np.einsum("uvs,swx->uvwx", ijk, self.table(i, k, l)) % p
                        right = np.einsum("vwt,utx->uvwx", self.table(j, k, l), self.table(i, j, l)) % p
                        if not np.array_equal(left, right):
                            return False
        return True

    def check_identities(self) -> bool:
        p = self.p
        for i in range(self.n):
            for j in range(self.n):
                d = self.dims[i, j]
                if not d:
                    continue
                if not np.array_equal(self.table(i, i, j)[0] % p, el.identity(d, p)):
                    return False
                if not np.array_equal(self.table(i, j, j)[:, 0, :] % p, el.identity(d, p)):
                    return False
        return True

    # -- derived algebras -----------------------------------------------------

    @property
    def op(self) -> "BasicAlgebra":
        if self._op is None:
            dims = {(i, j): self.dims[j, i] for i in range(self.n) for j in range(self.n)}
            mu = {(i, j, k): np.transpose(t, (1, 0, 2)) for (k, j, i), t in self.mu.items()}
            other = BasicAlgebra(self.labels, dims, mu, self.p, self.n_M)
            other._op = self
            self._op = other
        return self._op

    def default_cap(self) -> int:
        return self.n_M if self.n_M is not None else max(self.dim, 1)

    # -- modules --------------------------------------------------------------

    def projective(self, k: int) -> "RightBModule":
        """``P_k = e_k B``."""
        dims = [self.dims[k, i] for i in range(self.n)]
        acts = []
        for i, j, u in self.rad_elements:
            t = self.table(k, i, j)
            mat = t[:, u, :] if t.size else el.zeros(dims[i], dims[j], self.p)
            acts.append((i, j, mat))
        return RightBModule(self, dims, acts, f"P_{self.labels[k]}")

    def simple(self, k: int) -> "RightBModule":
        dims = [1 if i == k else 0 for i in range(self.n)]
        acts = [(i, j, el.zeros(dims[i], dims[j], self.p)) for i, j, _ in self.rad_elements]
        return RightBModule(self, dims, acts, f"S_{self.labels[k]}")

    def injective(self, k: int) -> "RightBModule":
        """``E(k) = D(e_k B^op)``: the injective envelope of the simple at k."""
        out = dual_module(self.op.projective(k))
        out.name = f"E_{self.labels[k]}"
        return out

    # -- serialization --------------------------------------------------------

    def offsets(self) -> Dict[Key, int]:
        off, k = {}, 0
        for i in range(self.n):
            for j in range(self.n):
                off[i, j] = k
                k += self.dims[i, j]
        return off

    def to_json(self) -> Dict:
        off = self.offsets()
        triples = []
        for (i, j, k), t in sorted(self.mu.items()):
            for u, v, w in zip(*np.nonzero(t)):
                triples.append([off[i, j] + int(u), off[j, k] + int(v), off[i, k] + int(w), int(t[u, v, w])])
        return {
            "schema": 1,
            "prime": self.p,
            "labels": self.labels,
            "dim": self.dim,
            "hom_dims": [[self.dims[i, j] for j in range(self.n)] for i in range(self.n)],
            "convention": "B(i,j) = e_i B e_j = Hom(X_j, X_i); product is composition",
            "multiplication": triples,
            "radical": [off[i, j] + u for i, j, u in self.rad_elements],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, data: Dict) -> "BasicAlgebra":
        """Inverse of ``to_json`` (the radical list is recomputed, not read)."""
        if data.get("schema") != 1:
            raise ValueError(f"unsupported schema {data.get('schema')!r}")
        p = int(data["prime"])
        labels = data["labels"]
        n = len(labels)
        dims = {(i, j): int(data["hom_dims"][i][j]) for i in range(n) for j in range(n)}
        # global index -> (block, local index)
        where, k = {}, 0
        for i in range(n):
            for j in range(n):
                for u in range(dims[i, j]):
                    where[k + u] = (i, j, u)
                k += dims[i, j]
        dt = el.zeros(0, 0, p).dtype
        mu: Dict[Tuple[int, int, int], np.ndarray] = {}
        for a, b, c, val in data["multiplication"]:
            i, j, u = where[a]
            _, kk, v = where[b]
            w = where[c][2]
            key = (i, j, kk)
            if key not in mu:
                mu[key] = np.zeros((dims[i, j], dims[j, kk], dims[i, kk]), dtype=dt)
            mu[key][u, v, w] = val % p
        return cls(labels, dims, mu, p)


def endomorphism_algebra(adr) -> BasicAlgebra:
    """Materialize ``End_A(Ã)`` from an ``AdrModule``'s catalog."""
    p = adr.p
    n = len(adr)
    # maps[(i, j)] = basis of B(i, j) = Hom(X_j, X_i)
    maps: Dict[Key, list] = {}
    for i in range(n):
        for j in range(n):
            h = adr.hom(j, i)
            if i == j:
                if adr.radical_coeffs(i, i).shape[0] != len(h) - 1:
                    raise NonSplitEndomorphism(f"End({adr.labels[i]}) has a residue field bigger than F_{p}")
                ident = tuple(el.identity(d, p) for d in adr.catalog[i].dims)
                maps[i, j] = [ident] + adr.radical_maps(i, i)
            else:
                maps[i, j] = list(h.basis)
    coords = {}
    for key, basis in maps.items():
        if basis:
            coords[key] = el.Coordinates(np.vstack([flatten(f, p) for f in basis]), p)
    mu = {}
    for i in range(n):
        for j in range(n):
            if not maps[i, j]:
                continue
            for k in range(n):
                if not maps[j, k] or not maps[i, k]:
                    continue
                rows = [flatten(compose(b1, b2, p), p)[0] for b1 in maps[i, j] for b2 in maps[j, k]]
                t = coords[i, k](np.vstack(rows))
                mu[i, j, k] = t.reshape(len(maps[i, j]), len(maps[j, k]), len(maps[i, k]))
    dims = {key: len(v) for key, v in maps.items()}
    return BasicAlgebra(adr.labels, dims, mu, p, stratify(adr).n_M)


class RightBModule(Rep):
    """Right module over a ``BasicAlgebra``.

    ``actions`` is aligned with ``algebra.rad_elements``; only the arrows are
    used as radical generators.
    """

    _context = ("algebra",)

    def __init__(self, algebra: BasicAlgebra, dims, actions, name: str = ""):
        self.algebra = algebra
        gens = [algebra.rad_index[g] for g in algebra.generators]
        super().__init__(dims, actions, algebra.p, gens, name)

    def act(self, vec: np.ndarray, elem: Elem) -> np.ndarray:
        i, j, u = elem
        if i == j and u == 0:
            return np.atleast_2d(vec) % self.p
        return el.matmul(np.atleast_2d(vec), self.actions[self.algebra.rad_index[elem]][2], self.p)

    def respects_table(self) -> bool:
        """Check ``(m b1) b2 = m (b1 b2)`` on all pairs of radical basis elements."""
        alg, p = self.algebra, self.p
        for (i, j, u), (_, _, m1) in zip(alg.rad_elements, self.actions):
            for k in range(alg.n):
                if not alg.dims[j, k] or not alg.dims[i, k]:
                    continue
                t = alg.table(i, j, k)
                for v in range(alg.dims[j, k]):
                    if j == k and v == 0:
                        continue
                    m2 = self.actions[alg.rad_index[j, k, v]][2]
                    lhs = el.matmul(m1, m2, p)
                    rhs = el.zeros(self.dims[i], self.dims[k], p)
                    for w in np.flatnonzero(t[u, v]):
                        rhs = (rhs + int(t[u, v, w]) * self._full(i, k, int(w))) % p
                    if not np.array_equal(lhs, rhs):
                        return False
        return True

    def _full(self, i: int, k: int, w: int) -> np.ndarray:
        if i == k and w == 0:
            return el.identity(self.dims[i], self.p)
        return self.actions[self.algebra.rad_index[i, k, w]][2]


def dual_module(m: RightBModule) -> RightBModule:
    """Vector-space dual, a right module over the opposite algebra."""
    op = m.algebra.op
    # element (i, j, u) of B is element (j, i, u) of B^op
    acts = []
    for i, j, u in op.rad_elements:
        mat = m.actions[m.algebra.rad_index[j, i, u]][2]
        acts.append((i, j, mat.T))
    return RightBModule(op, m.dims, acts, f"D({m.name})" if m.name else "")


# -- resolutions --------------------------------------------------------------


def top_generators(m: RightBModule) -> List[Tuple[int, np.ndarray]]:
    """Lifts of a basis of m/m·rad as (vertex, vector) pairs."""
    rad = m.radical_sub()
    out = []
    for v, (r, d) in enumerate(zip(rad, m.dims)):
        if d == r.shape[0]:
            continue
        cur = r
        for k in range(d):
            e = el.zeros(1, d, m.p)
            e[0, k] = 1
            test = np.vstack([cur, e])
            if el.rank(test, m.p) > cur.shape[0]:
                cur = test
                out.append((v, e[0]))
    return out


def projective_cover(m: RightBModule) -> Tuple[RightBModule, Tuple[np.ndarray, ...], List[int]]:
    """``(P, pi, vertices)`` with ``pi: P -> m`` a projective cover."""
    alg, p = m.algebra, m.p
    gens = top_generators(m)
    parts = [alg.projective(v) for v, _ in gens]
    if not parts:
        empty = RightBModule(alg, [0] * alg.n, [(i, j, el.zeros(0, 0, p)) for i, j, _ in alg.rad_elements])
        return empty, tuple(el.zeros(0, d, p) for d in m.dims), []
    cover = parts[0].direct_sum(parts[1:], "")
    pi = []
    for j in range(alg.n):
        rows = []
        for v, vec in gens:
            for u in range(alg.dims[v, j]):
                rows.append(m.act(vec, (v, j, u))[0])
        pi.append(np.vstack(rows) % p if rows else el.zeros(0, m.dims[j], p))
    return cover, tuple(pi), [v for v, _ in gens]


def minimal_projective_resolution(m: RightBModule, cap: Optional[int] = None) -> List[List[int]]:
    """Vertices of the indecomposable projectives in each term P_0, P_1, ...

    Raises ``CapExceeded`` when more than ``cap + 1`` terms would be needed.
    """
    cap = m.algebra.default_cap() if cap is None else cap
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    terms = []
    cur = m
    while cur.dim:
        if len(terms) > cap:
            raise CapExceeded(f"projective dimension of {m.name or 'module'} exceeds {cap}")
        cover, pi, verts = projective_cover(cur)
        terms.append(verts)
        ker = [el.left_kernel(f, m.p) if f.shape[0] else el.zeros(0, 0, m.p) for f in pi]
        ker = [k if k.shape[1] == d else el.zeros(0, d, m.p) for k, d in zip(ker, cover.dims)]
        cur = cover.restrict(ker)[0]
    return terms


def projective_dimension(m: RightBModule, cap: Optional[int] = None) -> int:
    return len(minimal_projective_resolution(m, cap)) - 1 if m.dim else 0


def global_dimension(b: BasicAlgebra, cap: Optional[int] = None) -> int:
    return max(projective_dimension(b.simple(k), cap) for k in range(b.n))


def simple_pds(b: BasicAlgebra, cap: Optional[int] = None) -> List[int]:
    return [projective_dimension(b.simple(k), cap) for k in range(b.n)]


def pd2_witness(b: BasicAlgebra, adr) -> Optional[str]:
    """Label of a simple A-module S in the catalog with pd of top Hom(Ã, S) equal to 2."""
    for k, x in enumerate(adr.catalog):
        if x.dim == 1 and projective_dimension(b.simple(k), max(b.default_cap(), 2)) == 2:
            return adr.labels[k]
    return None


def bound_report(gl: int, n_M: int) -> Dict:
    return {"gldim": gl, "n_M": n_M, "classical_bound": 2 * (n_M - 1),
            "within_bound": gl <= n_M, "within_classical": gl <= 2 * (n_M - 1),
            "strictly_better": n_M < 2 * (n_M - 1)}
