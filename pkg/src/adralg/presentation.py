"""Quivers with admissible relations and their finite-dimensional quotients.

A path is stored as ``(source, arrows)`` where ``source`` is a vertex index
and ``arrows`` a tuple of arrow indices composed left to right (``a*b`` means
``a`` first).  The empty tuple is the trivial path at ``source``.

Relations are completed to a confluent rewriting system for the
length-lexicographic order (longer paths are larger, ties broken by arrow
declaration order).  The normal words of that system form the basis of
``A = KQ/I``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .errors import NonParallelRelation, NotAdmissibleWithinCap, ParseError, RelationTooShort

Word = Tuple[int, ...]
Path = Tuple[int, Word]
Poly = Dict[Word, int]

DEFAULT_CAP = 64


@dataclass(frozen=True)
class Quiver:
    vertices: Tuple[str, ...]
    arrows: Tuple[Tuple[str, int, int], ...]  # (label, source index, target index)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex label")
        labels = [a[0] for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate arrow label")
        n = len(self.vertices)
        for label, s, t in self.arrows:
            if not (0 <= s < n and 0 <= t < n):
                raise ValueError(f"arrow {label} has an undeclared endpoint")

    @cached_property
    def vertex_index(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def arrow_index(self) -> Dict[str, int]:
        return {a[0]: i for i, a in enumerate(self.arrows)}

    def source(self, a: int) -> int:
        return self.arrows[a][1]

    def target(self, a: int) -> int:
        return self.arrows[a][2]

    def word_ends(self, w: Word) -> Tuple[int, int]:
        return self.source(w[0]), self.target(w[-1])

    def composes(self, w: Word) -> bool:
        return all(self.target(x) == self.source(y) for x, y in zip(w, w[1:]))

    def path_target(self, path: Path) -> int:
        s, w = path
        return self.target(w[-1]) if w else s

    def arrows_from(self, v: int) -> List[int]:
        return [i for i, a in enumerate(self.arrows) if a[1] == v]

    def arrows_into(self, v: int) -> List[int]:
        return [i for i, a in enumerate(self.arrows) if a[2] == v]

    def path_str(self, path: Path) -> str:
        s, w = path
        if not w:
            return f"e{self.vertices[s]}"
        return "*".join(self.arrows[a][0] for a in w)


def _key(w: Word) -> Tuple[int, Word]:
    return (len(w), w)


def _tip(f: Poly) -> Word:
    return max(f, key=_key)


def _add(f: Poly, g: Poly, c: int, p: int) -> Poly:
    out = dict(f)
    for w, x in g.items():
        y = (out.get(w, 0) + c * x) % p
        if y:
            out[w] = y
        else:
            out.pop(w, None)
    return out


def _monic(f: Poly, p: int) -> Poly:
    inv = el.inv_mod(f[_tip(f)], p)
    return {w: (c * inv) % p for w, c in f.items()}


def _shift(f: Poly, left: Word, right: Word) -> Poly:
    return {left + w + right: c for w, c in f.items()}


class RewritingSystem:
    """Rules ``tip -> tail`` with ``tail`` strictly smaller than ``tip``."""

    def __init__(self, p: int):
        self.p = p
        self.rules: Dict[Word, Poly] = {}

    def _lengths(self):
        return sorted({len(t) for t in self.rules})

    def find(self, w: Word) -> Optional[Tuple[int, Word]]:
        """Leftmost-shortest occurrence of a tip inside ``w``."""
        for L in self._lengths():
            for i in range(len(w) - L + 1):
                if w[i : i + L] in self.rules:
                    return i, w[i : i + L]
        return None

    def reduce(self, f: Poly) -> Poly:
        f = dict(f)
        done: Poly = {}
        while f:
            w = max(f, key=_key)
            c = f.pop(w)
            hit = self.find(w)
            if hit is None:
                done[w] = c
                continue
            i, t = hit
            tail = _shift(self.rules[t], w[:i], w[i + len(t) :])
            # tip - tail is in the ideal, so tip == tail mod I
            f = _add(f, tail, c, self.p)
        return done

    def is_reducible(self, w: Word) -> bool:
        return self.find(w) is not None


def _overlaps(t1: Word, t2: Word) -> Iterable[int]:
    """Lengths k of proper overlaps: suffix of t1 equal to prefix of t2."""
    for k in range(1, min(len(t1), len(t2))):
        if t1[-k:] == t2[:k]:
            yield k


def complete(relations: Sequence[Poly], p: int, cap: int) -> RewritingSystem:
    """Complete ``relations`` to a reduced confluent rewriting system.

    Overlap ambiguities are resolved smallest tip first; any element whose tip
    grows beyond ``cap`` aborts the completion.
    """
    rs = RewritingSystem(p)
    queue: List[Poly] = [dict(r) for r in relations if r]
    while queue:
        queue.sort(key=lambda f: _key(_tip(f)))
        f = rs.reduce(queue.pop(0))
        if not f:
            continue
        f = _monic(f, p)
        t = _tip(f)
        if len(t) > cap:
            raise NotAdmissibleWithinCap(f"rewriting rule with tip of length {len(t)} exceeds cap {cap}")
        tail = {w: (-c) % p for w, c in f.items() if w != t}
        # rules made redundant by the new tip are re-queued
        for old in [s for s in rs.rules if _contains(s, t)]:
            old_tail = rs.rules.pop(old)
            queue.append(_add({old: 1}, old_tail, p - 1, p))
        rs.rules[t] = tail
        for s, s_tail in list(rs.rules.items()):
            g = _add({s: 1}, s_tail, p - 1, p)
            pairs = [(t, f, s, g)] if s == t else [(t, f, s, g), (s, g, t, f)]
            for a, fa, b, fb in pairs:
                for k in _overlaps(a, b):
                    spoly = _add(_shift(fa, (), b[k:]), _shift(fb, a[:-k], ()), p - 1, p)
                    if spoly:
                        queue.append(spoly)
    # reduce tails so the system is canonical
    for t in sorted(rs.rules, key=_key):
        rs.rules[t] = rs.reduce(rs.rules[t])
    return rs


def _contains(big: Word, small: Word) -> bool:
    L = len(small)
    return any(big[i : i + L] == small for i in range(len(big) - L + 1))


@dataclass
class Presentation:
    quiver: Quiver
    relations: List[Poly]
    p: int = el.DEFAULT_PRIME
    cap: int = DEFAULT_CAP
    rewriting: RewritingSystem = field(init=False)
    basis: List[Path] = field(init=False)

    def __post_init__(self):
        self.p = el.check_prime(self.p)
        q = self.quiver
        for r in self.relations:
            for w in r:
                if len(w) < 2:
                    raise RelationTooShort(f"relation term {self._word_str(w)} has length < 2")
                if not q.composes(w):
                    raise NonParallelRelation(f"{self._word_str(w)} is not a path")
            ends = {q.word_ends(w) for w in r}
            if len(ends) > 1:
                raise NonParallelRelation("relation mixes paths with different endpoints: "
                                          + ", ".join(self._word_str(w) for w in r))
        self.relations = [{w: c % self.p for w, c in r.items() if c % self.p} for r in self.relations]
        self.rewriting = complete(self.relations, self.p, self.cap)
        self.basis = self._enumerate_basis()
        self.index = {b: i for i, b in enumerate(self.basis)}
        self._check_nilpotent()

    # -- construction helpers -------------------------------------------------

    def _word_str(self, w: Word) -> str:
        return "*".join(self.quiver.arrows[a][0] for a in w) if w else "1"

    def _enumerate_basis(self) -> List[Path]:
        q = self.quiver
        out: List[Path] = [(v, ()) for v in range(len(q.vertices))]
        layer: List[Word] = [(a,) for a in range(len(q.arrows)) if not self.rewriting.is_reducible((a,))]
        length = 1
        while layer:
            if length >= self.cap:
                raise NotAdmissibleWithinCap(f"irreducible path of length {length} reaches cap {self.cap}")
            out.extend((q.source(w[0]), w) for w in layer)
            nxt = []
            for w in layer:
                for a in q.arrows_from(q.target(w[-1])):
                    u = w + (a,)
                    # only suffixes can contain a new tip since w is irreducible
                    if not any(u[i:] in self.rewriting.rules for i in range(len(u) - 1)):
                        nxt.append(u)
            layer = nxt
            length += 1
        return out

    def _check_nilpotent(self):
        jpow = self.radical_power_basis(1)
        k = 1
        while jpow.shape[0]:
            nxt = self._times_radical(jpow)
            k += 1
            if nxt.shape[0] == jpow.shape[0] or k > self.cap:
                raise NotAdmissibleWithinCap(
                    "the arrow ideal is not nilpotent modulo the relations (ideal is not admissible)")
            jpow = nxt
        self._loewy = k

    # -- algebra structure ----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    def normal_form(self, element: Dict[Path, int]) -> Dict[Path, int]:
        """Fully reduced representative of a linear combination of paths."""
        q, p = self.quiver, self.p
        out: Dict[Path, int] = {}
        by_source: Dict[int, Poly] = {}
        for (s, w), c in element.items():
            c %= p
            if not c:
                continue
            if w and not q.composes(w):
                continue  # not a path: zero in KQ
            if w and q.source(w[0]) != s:
                raise ValueError("path does not start at its declared source")
            if not w:
                out[(s, w)] = (out.get((s, w), 0) + c) % p
            else:
                by_source.setdefault(s, {})
                by_source[s] = _add(by_source[s], {w: c}, 1, p)
        for s, f in by_source.items():
            for w, c in self.rewriting.reduce(f).items():
                out[(s, w)] = (out.get((s, w), 0) + c) % p
        return {k: v for k, v in out.items() if v}

    def vector(self, element: Dict[Path, int]) -> np.ndarray:
        v = el.zeros(1, self.dim, self.p)[0]
        for path, c in self.normal_form(element).items():
            v[self.index[path]] = c
        return v

    @cached_property
    def right_mult(self) -> List[np.ndarray]:
        """For each arrow, the matrix of right multiplication on A (row vectors)."""
        q, p = self.quiver, self.p
        mats = []
        for a in range(len(q.arrows)):
            m = el.zeros(self.dim, self.dim, p)
            for i, (s, w) in enumerate(self.basis):
                if q.path_target((s, w)) == q.source(a):
                    m[i] = self.vector({(s, w + (a,)): 1})
            mats.append(m)
        return mats

    def _times_radical(self, rows: np.ndarray) -> np.ndarray:
        if not self.quiver.arrows:
            return el.zeros(0, self.dim, self.p)
        return el.row_basis(np.vstack([el.matmul(rows, m, self.p) for m in self.right_mult]), self.p)

    def radical_power_basis(self, k: int) -> np.ndarray:
        """Row basis of J(A)^k inside A."""
        if k == 0:
            return el.identity(self.dim, self.p)
        rows = [el.identity(self.dim, self.p)[i] for i, (_, w) in enumerate(self.basis) if w]
        cur = el.row_basis(np.vstack(rows), self.p) if rows else el.zeros(0, self.dim, self.p)
        for _ in range(k - 1):
            if not cur.shape[0]:
                break
            cur = self._times_radical(cur)
        return cur

    def loewy_length(self) -> int:
        """Smallest m with J(A)^m = 0."""
        return self._loewy

    def basis_from(self, v: int) -> List[int]:
        return [i for i, (s, _) in enumerate(self.basis) if s == v]

    def max_basis_length(self) -> int:
        return max(len(w) for _, w in self.basis)

    def is_confluent(self) -> bool:
        """Check every overlap and inclusion ambiguity resolves."""
        rules = self.rewriting.rules
        p = self.p
        for t1, tail1 in rules.items():
            f1 = _add({t1: 1}, tail1, p - 1, p)
            for t2, tail2 in rules.items():
                f2 = _add({t2: 1}, tail2, p - 1, p)
                for k in _overlaps(t1, t2):
                    s = _add(_shift(f1, (), t2[k:]), _shift(f2, t1[:-k], ()), p - 1, p)
                    if self.rewriting.reduce(s):
                        return False
                if t1 != t2 and _contains(t1, t2):
                    return False  # not interreduced
        return True

    # -- text helpers ---------------------------------------------------------

    def parse_element(self, text: str, source: Optional[int] = None) -> Dict[Path, int]:
        """Parse a linear combination like ``2*a*b - c`` into paths.

        ``e<vertex>`` denotes a trivial path unless an arrow has that label.
        """
        q = self.quiver
        out: Dict[Path, int] = {}
        for coef, labels, (ln, col) in _parse_terms(text, 1, 1, "<element>"):
            head = labels[0]
            if len(labels) == 1 and head not in q.arrow_index and head[1:] in q.vertex_index and head[0] == "e":
                path: Path = (q.vertex_index[head[1:]], ())
            else:
                for lbl in labels:
                    if lbl not in q.arrow_index:
                        raise ParseError(f"unknown arrow {lbl!r}", ln, col)
                w = tuple(q.arrow_index[lbl] for lbl in labels)
                if not q.composes(w):
                    continue  # not a path, hence zero
                path = (q.source(w[0]), w)
            if source is not None and path[0] != source:
                raise ParseError(f"term does not start at vertex {q.vertices[source]}", ln, col)
            out[path] = (out.get(path, 0) + coef) % self.p
        return {k: v for k, v in out.items() if v}

    def describe(self) -> Dict:
        q = self.quiver
        return {
            "dim": self.dim,
            "loewy_length": self.loewy_length(),
            "basis": [q.path_str(b) for b in self.basis],
            "rules": [
                {"lhs": self._word_str(t), "rhs": {self._word_str(w): c for w, c in tail.items()}}
                for t, tail in sorted(self.rewriting.rules.items(), key=lambda kv: _key(kv[0]))
            ],
        }


# -- DSL ----------------------------------------------------------------------

_LABEL = r"[^\s:*+\-<>#,{}=/]+"
_TERM_RE = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*\s*)?(" + _LABEL + r"(?:\s*\*\s*" + _LABEL + r")*)\s*")


def _parse_terms(text: str, line: int, col0: int, source: str):
    """Split ``term (('+'|'-') term)*`` into (coefficient, labels, position)."""
    pos = 0
    out = []
    first = True
    text = text.rstrip()
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse term near {text[pos:pos + 12]!r}", line, col0 + pos, source)
        sign, num, body = m.groups()
        if sign is None and not first:
            raise ParseError("expected '+' or '-' between terms", line, col0 + pos, source)
        coef = int(num) if num else 1
        if sign == "-":
            coef = -coef
        labels = [s.strip() for s in body.split("*")]
        out.append((coef, labels, (line, col0 + m.start(3))))
        pos = m.end()
        first = False
    if not out:
        raise ParseError("empty expression", line, col0, source)
    return out


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_presentation(text: str, p: int = el.DEFAULT_PRIME, cap: int = DEFAULT_CAP,
                       source: str = "<input>") -> Presentation:
    vertices: List[str] = []
    arrows: List[Tuple[str, str, str, int]] = []
    rel_lines: List[Tuple[str, int, int]] = []
    state = "start"
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        s = line.strip()
        if not s:
            continue
        col = line.index(s[0]) + 1
        if state == "start":
            if s != "quiver":
                raise ParseError("expected 'quiver'", ln, col, source)
            state = "quiver"
        elif s.startswith("vertices") and state == "quiver" and not vertices:
            m = re.fullmatch(r"vertices\s*:\s*(.*)", s)
            if not m or not m.group(1).split():
                raise ParseError("expected 'vertices: <label>+'", ln, col, source)
            vertices = m.group(1).split()
        elif s.startswith("arrow") and state == "quiver":
            m = re.fullmatch(r"arrow\s+(" + _LABEL + r")\s*:\s*(" + _LABEL + r")\s*->\s*(" + _LABEL + r")", s)
            if not m:
                raise ParseError("expected 'arrow <label> : <src> -> <tgt>'", ln, col, source)
            arrows.append((m.group(1), m.group(2), m.group(3), ln))
        elif s == "relations" and state == "quiver":
            state = "relations"
        elif s.startswith("rel") and state == "relations":
            m = re.match(r"rel\s*:", s)
            if not m:
                raise ParseError("expected 'rel: <expression>'", ln, col, source)
            rel_lines.append((s[m.end():], ln, col + m.end()))
        else:
            raise ParseError(f"unexpected line {s!r}", ln, col, source)
    if state == "start":
        raise ParseError("empty presentation", 1, 1, source)
    if not vertices:
        raise ParseError("missing 'vertices:' line", 1, 1, source)
    vidx = {v: i for i, v in enumerate(vertices)}
    arr = []
    for label, s_, t_, ln in arrows:
        for end in (s_, t_):
            if end not in vidx:
                raise ParseError(f"arrow {label} uses undeclared vertex {end!r}", ln, 1, source)
        arr.append((label, vidx[s_], vidx[t_]))
    try:
        quiver = Quiver(tuple(vertices), tuple(arr))
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1, source) from None
    relations = []
    for body, ln, col in rel_lines:
        poly: Poly = {}
        for coef, labels, (l2, c2) in _parse_terms(body, ln, col, source):
            w = []
            for lbl in labels:
                if lbl not in quiver.arrow_index:
                    raise ParseError(f"unknown arrow {lbl!r}", l2, c2, source)
                w.append(quiver.arrow_index[lbl])
            w = tuple(w)
            poly[w] = (poly.get(w, 0) + coef) % p
        relations.append({w: c for w, c in poly.items() if c})
    return Presentation(quiver, relations, p=p, cap=cap)


def format_presentation(pres: Presentation) -> str:
    """Render a presentation back into DSL text."""
    q = pres.quiver
    lines = ["quiver", "vertices: " + " ".join(q.vertices)]
    for label, s, t in q.arrows:
        lines.append(f"arrow {label}: {q.vertices[s]} -> {q.vertices[t]}")
    if pres.relations:
        lines.append("relations")
        for r in pres.relations:
            terms = []
            for w, c in sorted(r.items(), key=lambda kv: _key(kv[0]), reverse=True):
                c = c if c <= pres.p // 2 else c - pres.p
                body = "*".join(q.arrows[a][0] for a in w)
                sign = "-" if c < 0 else "+"
                mag = abs(c)
                terms.append((sign, (f"{mag}*" if mag != 1 else "") + body))
            text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
            for sign, body in terms[1:]:
                text += f" {sign} {body}"
            lines.append("rel: " + text)
    return "\n".join(lines) + "\n"
