"""Named instances and seeded random generators.

Each named instance returns ``(presentation, local modules)``.  The DSL
texts are kept here so the data files shipped with the repository and the
test suite read from one source.
"""

from __future__ import annotations

import itertools
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .errors import NotAdmissibleWithinCap
from .presentation import Presentation, Quiver, parse_presentation
from .repcat import Module, local_quotient, parse_module_file, projective_module

BRANCHING_ALG = """\
# 1 -> 2 -> 3, 2 -> 4 ; no relations
quiver
vertices: 1 2 3 4
arrow a: 1 -> 2
arrow b: 2 -> 3
arrow c: 2 -> 4
"""

BRANCHING_MOD = """\
# M = P(1) + P(1)/S(3) + P(1)/S(4) + P(2)/S(3)
local P(1) = P 1
local P(1)/S(3) = P 1 / a*b
local P(1)/S(4) = P 1 / a*c
local P(2)/S(3) = P 2 / b
module M = P(1) + P(1)/S(3) + P(1)/S(4) + P(2)/S(3)
"""

# the ADR algebra of BRANCHING_MOD as a quiver with relations
# (vertex J2 is P(1)/P(1)J^2)
BRANCHING_B_ALG = """\
quiver
vertices: P1S4 P1 P1S3 J2 P2S3 S1 S2
arrow a: P1S4 -> P1
arrow b: P1S3 -> P1
arrow c: P1S3 -> P2S3
arrow d: J2 -> P1S4
arrow e: J2 -> P1S3
arrow f: J2 -> S2
arrow g: S1 -> J2
arrow h: S2 -> P2S3
relations
rel: d*a - e*b
rel: e*c - f*h
rel: g*f
"""

LOOP_ALG = """\
# loop alpha at 1, beta: 1 -> 2, relations alpha*beta and alpha^3
quiver
vertices: 1 2
arrow alpha: 1 -> 1
arrow beta: 1 -> 2
relations
rel: alpha*beta
rel: alpha*alpha*alpha
"""

LOOP_MOD = """\
# M = P(1) + P(1)/socP(1) + P(2)
local P(1) = P 1
local P(1)/socP(1) = P 1 / alpha*alpha, beta
local P(2) = P 2
"""

LOOP_B_ALG = """\
quiver
vertices: P1 J2 P1soc P2 S1
arrow a: P1 -> P2
arrow b: P1 -> P1soc
arrow c: J2 -> P1
arrow d: J2 -> S1
arrow e: P1soc -> J2
arrow f: S1 -> P1soc
relations
rel: e*c*a
rel: f*e*d
rel: c*b - d*f
"""

LOOP_ORDER = "order: {P(1)} < {P(1)/P(1)J^2} < {P(1)/socP(1)} < {P(2), S(1)}\n"


def branching_example(p: int = el.DEFAULT_PRIME) -> Tuple[Presentation, List[Module]]:
    pres = parse_presentation(BRANCHING_ALG, p=p)
    return pres, parse_module_file(BRANCHING_MOD, pres).modules()


def loop_example(p: int = el.DEFAULT_PRIME) -> Tuple[Presentation, List[Module]]:
    pres = parse_presentation(LOOP_ALG, p=p)
    return pres, parse_module_file(LOOP_MOD, pres).modules()


def star_alg(n: int) -> str:
    lines = ["# vertex 1 with one arrow to each of 2..n", "quiver", "vertices: " + " ".join(str(k) for k in range(1, n + 1))]
    lines += [f"arrow a{k}: 1 -> {k}" for k in range(2, n + 1)]
    return "\n".join(lines) + "\n"


def star_mod(n: int) -> str:
    """All factor modules of P(1): P(1) modulo any set of the simples S(2), ..., S(n)."""
    lines = ["# every factor module of P(1)"]
    rest = list(range(2, n + 1))
    for size in range(len(rest) + 1):
        for sub in itertools.combinations(rest, size):
            if not sub:
                name = "P(1)"
            elif len(sub) == len(rest):
                name = "S(1)"
            else:
                name = "P(1)/(" + "+".join(f"S({k})" for k in sub) + ")"
            gens = ", ".join(f"a{k}" for k in sub)
            lines.append(f"local {name} = P 1" + (f" / {gens}" if gens else ""))
    return "\n".join(lines) + "\n"


def star(n: int, p: int = el.DEFAULT_PRIME) -> Tuple[Presentation, List[Module]]:
    if n < 2:
        raise ValueError("the star quiver needs n >= 2")
    pres = parse_presentation(star_alg(n), p=p)
    return pres, parse_module_file(star_mod(n), pres).modules()


def truncated_alg(m: int) -> str:
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return "# K\nquiver\nvertices: 1\n"
    return (f"# K[x]/(x^{m})\nquiver\nvertices: 1\narrow x: 1 -> 1\nrelations\nrel: "
            + "*".join(["x"] * m) + "\n")


def truncated_polynomial(m: int, p: int = el.DEFAULT_PRIME) -> Presentation:
    return parse_presentation(truncated_alg(m), p=p)


KRONECKER_ALG = """\
# two parallel arrows 1 => 2
quiver
vertices: 1 2
arrow x: 1 -> 2
arrow y: 1 -> 2
"""


def projectives(pres: Presentation) -> List[Module]:
    return [projective_module(pres, i) for i in range(len(pres.quiver.vertices))]


NAMED_ALGEBRAS = {
    "branching": BRANCHING_ALG,
    "branching_B": BRANCHING_B_ALG,
    "loop": LOOP_ALG,
    "loop_B": LOOP_B_ALG,
    "kronecker": KRONECKER_ALG,
}


def data_files() -> Dict[str, str]:
    """File name -> content for the shipped example inputs."""
    out = {f"{k}.alg": v for k, v in NAMED_ALGEBRAS.items()}
    out["branching.mod"] = BRANCHING_MOD
    out["loop.mod"] = LOOP_MOD
    out["loop.order"] = LOOP_ORDER
    for n in range(2, 6):
        out[f"star{n}.alg"] = star_alg(n)
        out[f"star{n}.mod"] = star_mod(n)
    for m in range(1, 5):
        out[f"truncated{m}.alg"] = truncated_alg(m)
    return out


# -- random instances ---------------------------------------------------------


def monomial_finite(quiver: Quiver, words: Sequence[Tuple[int, ...]]) -> bool:
    """Finite dimension test for monomial relations of length 2 or 3.

    A path avoids the relations iff all its subwords of length 2 and 3 do, so
    the algebra is finite-dimensional iff the graph whose vertices are the
    allowed length-2 paths, joined along allowed length-3 paths, is acyclic.
    """
    banned = set(words)
    na = len(quiver.arrows)
    nodes = [w for w in itertools.product(range(na), repeat=2) if quiver.composes(w) and w not in banned]
    succ = {w: [(w[1], c) for c in range(na) if quiver.composes((w[1], c)) and (w[1], c) not in banned
                and (w[0], w[1], c) not in banned] for w in nodes}
    state: Dict[Tuple[int, ...], int] = {}

    def cyclic(w) -> bool:
        state[w] = 1
        for nxt in succ[w]:
            if state.get(nxt) == 1 or (nxt not in state and cyclic(nxt)):
                return True
        state[w] = 2
        return False

    return not any(w not in state and cyclic(w) for w in nodes)


def random_presentation(rng: np.random.Generator, max_vertices: int = 5, max_arrows: int = 6,
                        max_relations: int = 3, p: int = el.DEFAULT_PRIME, max_dim: int = 30,
                        min_arrows: int = 1) -> Presentation:
    """A random admissible presentation with monomial relations.

    Arrows mostly go from lower to higher vertices; a few loops and backward
    arrows are allowed, and draws that are infinite-dimensional or larger
    than ``max_dim`` are discarded.
    """
    for _ in range(200):
        nv = int(rng.integers(1, max_vertices + 1))
        na = int(rng.integers(min_arrows, max_arrows + 1))
        arrows = []
        for k in range(na):
            if nv == 1 or rng.random() < 0.2:
                s, t = int(rng.integers(nv)), int(rng.integers(nv))
            else:
                s, t = sorted(int(x) for x in rng.choice(nv, size=2, replace=False))
            arrows.append((f"a{k + 1}", s, t))
        quiver = Quiver(tuple(str(v + 1) for v in range(nv)), tuple(arrows))
        words = [w for length in (2, 3) for w in itertools.product(range(na), repeat=length) if quiver.composes(w)]
        rels = []
        if words:
            nrel = int(rng.integers(0, max_relations + 1))
            picks = rng.choice(len(words), size=min(nrel, len(words)), replace=False)
            rels = [{words[int(k)]: 1} for k in sorted(picks)]
        if not monomial_finite(quiver, [next(iter(r)) for r in rels]):
            continue
        try:
            pres = Presentation(quiver, rels, p=p, cap=12)
        except NotAdmissibleWithinCap:
            continue
        if pres.dim <= max_dim:
            return pres
    raise RuntimeError("could not draw an admissible presentation")


def random_local(pres: Presentation, rng: np.random.Generator, vertex: Optional[int] = None) -> Module:
    """P(i) modulo the submodule generated by up to two random radical elements."""
    q = pres.quiver
    i = int(rng.integers(len(q.vertices))) if vertex is None else vertex
    rad_paths = [b for b in pres.basis if b[0] == i and b[1]]
    gens = []
    if rad_paths:
        for _ in range(int(rng.integers(0, 3))):
            k = int(rng.integers(1, min(2, len(rad_paths)) + 1))
            picks = rng.choice(len(rad_paths), size=k, replace=False)
            gens.append({rad_paths[int(j)]: int(rng.integers(1, pres.p)) for j in picks})
    name = f"P({q.vertices[i]})"
    if gens:
        terms = ["+".join(f"{c}{q.path_str(path)}" for path, c in g.items()) for g in gens]
        name += "/<" + ",".join(terms) + ">"
    return local_quotient(pres, i, gens, name)


def random_semilocal(pres: Presentation, rng: np.random.Generator, max_locals: int = 3) -> List[Module]:
    return [random_local(pres, rng) for _ in range(int(rng.integers(1, max_locals + 1)))]


def instance_rng(seed: int, k: int) -> np.random.Generator:
    """Generator for the k-th instance of a run; ``(seed, k)`` replays it."""
    return np.random.default_rng([seed, k])
