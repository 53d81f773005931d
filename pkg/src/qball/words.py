"""Symbolic *-algebra of a graph in the normal-form words S_mu S_nu^*.

Products of normal words are computed with the path-extension rule; the
Cuntz-Krieger relation (G3) is applied on demand by :func:`ck_expand`.  No
canonical form modulo (G3) is attempted, so equality is decided numerically
(see :mod:`qball.verify`).
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .graphs import DirectedGraph, GraphError, Path

__all__ = [
    "PRUNE",
    "ParseError",
    "NormalWord",
    "GeneratorLetter",
    "WordExpr",
    "multiply",
    "reduce",
    "adjoint",
    "ck_expand",
    "gauge",
    "parse_letters",
    "parse_expr",
    "render",
    "letters_headroom",
    "random_normal_word",
    "random_expr",
    "random_letters",
]

PRUNE = 1e-14


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


# ---------------------------------------------------------------------------
# path helpers


def _concat(p: Path, q: Path) -> Path:
    if p.range != q.source:
        raise GraphError("paths do not compose")
    if p.is_vertex:
        return q
    if q.is_vertex:
        return p
    return Path(p.edges + q.edges, p.source, q.range)


def _remainder(prefix: Path, p: Path) -> Path | None:
    """``r`` with ``p = prefix r``, or None when ``prefix`` does not start ``p``."""
    if prefix.is_vertex:
        return p if p.source == prefix.source else None
    k = len(prefix.edges)
    if p.edges[:k] != prefix.edges:
        return None
    rest = p.edges[k:]
    if not rest:
        return Path((), prefix.range, prefix.range)
    return Path(rest, prefix.range, p.range)


def _path_key(g: DirectedGraph, p: Path) -> tuple:
    return (len(p), g.vertex_position(p.source), tuple(g.edge_position(e) for e in p.edges))


# ---------------------------------------------------------------------------
# words and expressions


@dataclass(frozen=True)
class NormalWord:
    """``S_mu S_nu^*``; ``mu == nu == v`` (vertex paths) is ``P_v``."""

    mu: Path
    nu: Path

    def __post_init__(self) -> None:
        if self.mu.range != self.nu.range:
            raise GraphError(
                f"r(mu)={self.mu.range} differs from r(nu)={self.nu.range}; the word is zero"
            )

    @property
    def degree(self) -> int:
        return len(self.mu) - len(self.nu)

    @property
    def is_projection(self) -> bool:
        return self.mu.is_vertex and self.nu.is_vertex

    def letters(self) -> list[GeneratorLetter]:
        if self.is_projection:
            return [GeneratorLetter("P", self.mu.source)]
        return [GeneratorLetter("S", e) for e in self.mu.edges] + [
            GeneratorLetter("S*", e) for e in reversed(self.nu.edges)
        ]

    def text(self) -> str:
        return "".join(letter.text() for letter in self.letters())


def _word_product(a: NormalWord, b: NormalWord) -> NormalWord | None:
    rest = _remainder(a.nu, b.mu)  # b.mu = a.nu rest
    if rest is not None:
        return NormalWord(_concat(a.mu, rest), b.nu)
    rest = _remainder(b.mu, a.nu)  # a.nu = b.mu rest
    if rest is not None:
        return NormalWord(a.mu, _concat(b.nu, rest))
    return None


@dataclass(frozen=True)
class GeneratorLetter:
    kind: str  # "S", "S*", "P" or "1"
    name: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("S", "S*", "P", "1"):
            raise ValueError(f"unknown letter kind {self.kind!r}")
        if (self.kind == "1") != (self.name is None):
            raise ValueError("the unit letter takes no name; every other letter needs one")

    def text(self, display: str | None = None) -> str:
        if self.kind == "1":
            return "1"
        name = display or self.name
        if self.kind == "S*":
            return f"S[{name}]*"
        return f"{self.kind}[{name}]"


class WordExpr:
    """Finite complex combination of normal words over one graph."""

    __slots__ = ("graph", "terms")

    def __init__(self, graph: DirectedGraph, terms: Mapping[NormalWord, complex] | None = None):
        self.graph = graph
        clean: dict[NormalWord, complex] = {}
        for w, c in (terms or {}).items():
            c = complex(c)
            if abs(c) >= PRUNE:
                clean[w] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, g: DirectedGraph) -> WordExpr:
        return cls(g)

    @classmethod
    def unit(cls, g: DirectedGraph) -> WordExpr:
        return cls(g, {NormalWord(g.vertex_path(v), g.vertex_path(v)): 1.0 for v in g.vertices})

    @classmethod
    def word(cls, g: DirectedGraph, mu: Path, nu: Path, coeff: complex = 1.0) -> WordExpr:
        return cls(g, {NormalWord(mu, nu): coeff})

    @classmethod
    def projection(cls, g: DirectedGraph, v: str) -> WordExpr:
        p = g.vertex_path(v)
        return cls(g, {NormalWord(p, p): 1.0})

    @classmethod
    def generator(cls, g: DirectedGraph, eid: str) -> WordExpr:
        """``S_e`` as the normal word ``S_e S_{r(e)}^*``."""
        p = g.path([eid])
        return cls(g, {NormalWord(p, g.vertex_path(p.range)): 1.0})

    @classmethod
    def from_letter(cls, g: DirectedGraph, letter: GeneratorLetter) -> WordExpr:
        if letter.kind == "1":
            return cls.unit(g)
        if letter.kind == "P":
            return cls.projection(g, letter.name)
        s = cls.generator(g, letter.name)
        return s if letter.kind == "S" else adjoint(s)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: WordExpr) -> None:
        if other.graph != self.graph:
            raise GraphError("expressions live over different graphs")

    def __add__(self, other: WordExpr) -> WordExpr:
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return WordExpr(self.graph, out)

    def __neg__(self) -> WordExpr:
        return WordExpr(self.graph, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: WordExpr) -> WordExpr:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, WordExpr):
            return multiply(self, other)
        return WordExpr(self.graph, {w: c * other for w, c in self.terms.items()})

    def __rmul__(self, scalar) -> WordExpr:
        return WordExpr(self.graph, {w: scalar * c for w, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, WordExpr):
            return NotImplemented
        return self.graph == other.graph and not (self - other).terms

    __hash__ = None

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"WordExpr({render(self)!r})"

    def close_to(self, other: WordExpr, tol: float = 1e-12) -> bool:
        diff = self - other
        return all(abs(c) <= tol for c in diff.terms.values())

    def sorted_terms(self) -> list[tuple[NormalWord, complex]]:
        g = self.graph
        return sorted(
            self.terms.items(),
            key=lambda wc: (len(wc[0].mu) + len(wc[0].nu), _path_key(g, wc[0].mu), _path_key(g, wc[0].nu)),
        )

    def max_mu_length(self) -> int:
        return max((len(w.mu) for w in self.terms), default=0)


# ---------------------------------------------------------------------------
# operations


def multiply(a: WordExpr, b: WordExpr) -> WordExpr:
    a._check(b)
    out: dict[NormalWord, complex] = {}
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            w = _word_product(wa, wb)
            if w is not None:
                out[w] = out.get(w, 0) + ca * cb
    return WordExpr(a.graph, out)


def reduce(g: DirectedGraph, letters: Iterable[GeneratorLetter]) -> WordExpr:
    """Normal form of a product of generator letters (empty product is the unit)."""
    acc = WordExpr.unit(g)
    for letter in letters:
        acc = multiply(acc, WordExpr.from_letter(g, letter))
    return acc


def adjoint(a: WordExpr) -> WordExpr:
    return WordExpr(a.graph, {NormalWord(w.nu, w.mu): c.conjugate() for w, c in a.terms.items()})


def ck_expand(a: WordExpr, v: str, depth: int = 1) -> WordExpr:
    """Rewrite every word with range ``v`` through ``P_v = sum S_e S_e^*``."""
    g = a.graph
    if g.is_sink(v):
        raise GraphError(f"{v} is a sink; the Cuntz-Krieger relation does not apply")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    out_edges = g.out_edges(v)
    for _ in range(depth):
        terms: dict[NormalWord, complex] = {}
        for w, c in a.terms.items():
            if w.mu.range != v:
                terms[w] = terms.get(w, 0) + c
                continue
            for e in out_edges:
                pe = g.path([e.id])
                nw = NormalWord(_concat(w.mu, pe), _concat(w.nu, pe))
                terms[nw] = terms.get(nw, 0) + c
        a = WordExpr(g, terms)
    return a


def gauge(a: WordExpr, t: float) -> WordExpr:
    """Circle action: ``S_mu S_nu^*`` picks up ``exp(i t (|mu| - |nu|))``."""
    return WordExpr(a.graph, {w: c * cmath.exp(1j * t * w.degree) for w, c in a.terms.items()})


def letters_headroom(letters: Sequence[GeneratorLetter]) -> int:
    """Loop headroom needed to evaluate ``letters`` exactly on a truncated space.

    Removing a non-loop edge can expose a loop, after which one added edge
    raises that loop's exponent, so the bound is the number of ``S`` letters
    rather than their net count.
    """
    return sum(1 for letter in letters if letter.kind == "S")


# ---------------------------------------------------------------------------
# text grammar
#
#   expr   := ""  |  "0"  |  [sign] term (sign term)*
#   term   := coeff factor*  |  factor+
#   factor := "S[" name "]" ["*"]  |  "P[" name "]"
#   coeff  := real number  |  "(" python complex literal ")"

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<letter>(?P<kind>[SP])\[(?P<name>[A-Za-z0-9_']+)\](?P<star>\*)?)
  | (?P<complex>\([^()]*\))
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)
  | (?P<sign>[+-])
    """,
    re.VERBOSE,
)


def _tokens(text: str) -> list[tuple[str, str, int, re.Match]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            kind = "letter" if m.group("letter") else m.lastgroup
            out.append((kind, m.group(0), pos, m))
        pos = m.end()
    return out


def _resolve(g: DirectedGraph, name: str, kind: str, labels: Mapping[str, str], pos: int) -> str:
    name = labels.get(name, name)
    ok = g.has_vertex(name) if kind == "P" else g.has_edge(name)
    if not ok:
        what = "vertex" if kind == "P" else "edge"
        raise ParseError(f"unknown {what} {name!r}", pos)
    return name


def _letter(g, m: re.Match, labels, pos) -> GeneratorLetter:
    kind = m.group("kind")
    name = _resolve(g, m.group("name"), kind, labels, pos)
    if kind == "P":
        if m.group("star"):
            raise ParseError("projections take no star", pos)
        return GeneratorLetter("P", name)
    return GeneratorLetter("S*" if m.group("star") else "S", name)


def parse_letters(g: DirectedGraph, text: str, labels: Mapping[str, str] | None = None) -> list[GeneratorLetter]:
    """Parse a bare product such as ``"S[e]* S[e]"``."""
    labels = labels or {}
    out = []
    for kind, _, pos, m in _tokens(text):
        if kind != "letter":
            raise ParseError("expected a generator letter", pos)
        out.append(_letter(g, m, labels, pos))
    return out


def parse_expr(g: DirectedGraph, text: str, labels: Mapping[str, str] | None = None) -> WordExpr:
    """Parse the rendering grammar into a reduced expression."""
    labels = labels or {}
    toks = _tokens(text)
    if not toks:
        return WordExpr.unit(g)
    if len(toks) == 1 and toks[0][0] == "number" and float(toks[0][1]) == 0.0:
        return WordExpr.zero(g)
    total = WordExpr.zero(g)
    k = 0
    sign = 1.0
    if toks[0][0] == "sign":
        sign = -1.0 if toks[0][1] == "-" else 1.0
        k = 1
    while True:
        if k >= len(toks):
            raise ParseError("expected a term", len(text))
        coeff: complex = 1.0
        start = k
        kind, tok, pos, m = toks[k]
        if kind == "number":
            coeff = float(tok)
            k += 1
        elif kind == "complex":
            try:
                coeff = complex(tok[1:-1].replace(" ", ""))
            except ValueError:
                raise ParseError(f"bad complex literal {tok!r}", pos) from None
            k += 1
        letters = []
        while k < len(toks) and toks[k][0] == "letter":
            letters.append(_letter(g, toks[k][3], labels, toks[k][2]))
            k += 1
        if k == start:
            raise ParseError(f"unexpected token {tok!r}", pos)
        total = total + (sign * coeff) * reduce(g, letters)
        if k == len(toks):
            return total
        kind, tok, pos, _ = toks[k]
        if kind != "sign":
            raise ParseError(f"expected '+' or '-' before {tok!r}", pos)
        sign = -1.0 if tok == "-" else 1.0
        k += 1


def _fmt_real(x: float) -> str:
    return f"{x:.12g}"


def render(a: WordExpr, labels: Mapping[str, str] | None = None) -> str:
    """Stable text form, e.g. ``S[b]S[e]* - 0.5 P[v0]``.

    ``labels`` maps display names to ids (as in ``SHORT_LABELS``); only edge
    names are substituted, vertices keep their ids.
    """
    names = {eid: alias for alias, eid in (labels or {}).items() if a.graph.has_edge(eid)}
    parts: list[tuple[str, str]] = []
    for w, c in a.sorted_terms():
        body = "".join(
            letter.text(names.get(letter.name) if letter.kind != "P" else None)
            for letter in w.letters()
        )
        if abs(c.imag) < PRUNE:
            r = c.real
            sign = "-" if r < 0 else "+"
            mag = "" if abs(abs(r) - 1.0) < PRUNE else _fmt_real(abs(r)) + " "
        else:
            sign = "+"
            mag = f"({_fmt_real(c.real)}{c.imag:+.12g}j) "
        parts.append((sign, mag + body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# random words (seeded) for cross-checks


def _random_path_to(g: DirectedGraph, rng: np.random.Generator, end: str, max_len: int) -> Path:
    length = int(rng.integers(0, max_len + 1))
    edges: list[str] = []
    cur = end
    for _ in range(length):
        incoming = g.in_edges(cur)
        if not incoming:
            break
        e = incoming[int(rng.integers(len(incoming)))]
        edges.insert(0, e.id)
        cur = e.src
    return g.path(edges) if edges else g.vertex_path(end)


def random_normal_word(g: DirectedGraph, rng: np.random.Generator, max_len: int = 3) -> NormalWord:
    end = g.vertices[int(rng.integers(len(g.vertices)))]
    return NormalWord(_random_path_to(g, rng, end, max_len), _random_path_to(g, rng, end, max_len))


def random_expr(g: DirectedGraph, rng: np.random.Generator, terms: int = 3, max_len: int = 3) -> WordExpr:
    out = WordExpr.zero(g)
    for _ in range(int(rng.integers(1, terms + 1))):
        c = complex(rng.normal(), rng.normal())
        out = out + WordExpr(g, {random_normal_word(g, rng, max_len): c})
    return out


def random_letters(g: DirectedGraph, rng: np.random.Generator, max_len: int = 8) -> list[GeneratorLetter]:
    out = []
    for _ in range(int(rng.integers(0, max_len + 1))):
        r = rng.random()
        if r < 0.15:
            out.append(GeneratorLetter("P", g.vertices[int(rng.integers(len(g.vertices)))]))
        else:
            e = g.edges[int(rng.integers(len(g.edges)))].id
            out.append(GeneratorLetter("S" if r < 0.6 else "S*", e))
    return out
