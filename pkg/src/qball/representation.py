"""Truncated path-space representations of C*(E_n).

Basis vectors are the paths ending at a fixed vertex with every loop exponent
at most ``cutoff``.  ``S_f`` prepends the edge ``f`` and sends a vector to
zero whenever that would push an exponent past the cutoff (compression).  Algebraic
identities therefore hold exactly only on ``interior(h)``: the vectors whose
exponents all stay ``<= cutoff - h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

import numpy as np
import scipy.sparse as sp

from .graphs import (
    DirectedGraph,
    GraphError,
    LoopEncodedPath,
    ball_graph,
    edge_id,
    enumerate_paths,
    vertex_id,
    vertex_index,
)
from .words import WordExpr

__all__ = [
    "QParam",
    "PiRep",
    "EpsilonRep",
    "SigmaRep",
    "RepSpec",
    "TruncatedPathSpace",
    "GeneratorFamily",
    "Irrep",
    "lambda_coeff",
    "build_generators",
    "aggregate_shift",
    "weighted_shift",
    "build_irrep",
    "IrrepFamily",
    "list_irreps",
    "evaluate_word",
    "export_coo",
    "basis_manifest",
]

DTYPE = np.complex128


@dataclass(frozen=True)
class QParam:
    q: float

    def __post_init__(self) -> None:
        q = float(self.q)
        if not (0.0 < q < 1.0) or math.isnan(q):
            raise ValueError(f"q must satisfy 0 < q < 1, got {self.q!r}")
        object.__setattr__(self, "q", q)

    def __float__(self) -> float:
        return self.q


def _q(q: float | QParam) -> float:
    return q.q if isinstance(q, QParam) else QParam(q).q


def lambda_coeff(k: int, q: float | QParam) -> float:
    """``sqrt(1 - q^(k+1)) - sqrt(1 - q^k)``; the partial sums telescope."""
    q = _q(q)
    if k < 0:
        raise ValueError("k must be nonnegative")
    return math.sqrt(1.0 - q ** (k + 1)) - math.sqrt(1.0 - q**k)


# ---------------------------------------------------------------------------
# representation labels


@dataclass(frozen=True)
class PiRep:
    @property
    def name(self) -> str:
        return "pi"


@dataclass(frozen=True)
class EpsilonRep:
    k: int
    theta: float

    @property
    def name(self) -> str:
        return f"eps[k={self.k},theta={self.theta:.6g}]"


@dataclass(frozen=True)
class SigmaRep:
    theta: float

    @property
    def name(self) -> str:
        return f"sigma[theta={self.theta:.6g}]"


RepSpec = Union[PiRep, EpsilonRep, SigmaRep]


# ---------------------------------------------------------------------------
# spaces and generators


def _zeros(d: int) -> sp.csr_matrix:
    return sp.csr_matrix((d, d), dtype=DTYPE)


def _diag(mask: np.ndarray) -> sp.csr_matrix:
    return sp.diags(mask.astype(DTYPE), format="csr")


def _from_map(pairs: Iterable[tuple[int, int]], d: int, values=None) -> sp.csr_matrix:
    """Matrix sending basis column ``c`` to ``value * e_r`` for each ``(c, r)``."""
    pairs = list(pairs)
    if not pairs:
        return _zeros(d)
    cols, rows = zip(*pairs)
    data = np.ones(len(pairs), dtype=DTYPE) if values is None else np.asarray(values, dtype=DTYPE)
    return sp.csr_matrix((data, (rows, cols)), shape=(d, d))


class TruncatedPathSpace:
    """Span of the paths ending at ``end_vertex`` with loop exponents <= cutoff."""

    def __init__(self, graph: DirectedGraph, end_vertex: str, cutoff: int):
        self.graph = graph
        self.end_vertex = end_vertex
        self.cutoff = cutoff
        self.basis: tuple[LoopEncodedPath, ...] = tuple(enumerate_paths(graph, end_vertex, cutoff))
        self.index = {p: k for k, p in enumerate(self.basis)}
        self.dim = len(self.basis)
        self._maxexp = np.array([p.max_exponent() for p in self.basis], dtype=int)
        self._source = np.array([p.source for p in self.basis], dtype=int)

    def __repr__(self) -> str:
        return f"TruncatedPathSpace(end={self.end_vertex}, cutoff={self.cutoff}, dim={self.dim})"

    def interior(self, h: int) -> np.ndarray:
        if not 0 <= h <= self.cutoff:
            raise ValueError(f"headroom {h} outside 0..{self.cutoff}")
        return self._maxexp <= self.cutoff - h

    def source_mask(self, i: int) -> np.ndarray:
        return self._source == i

    def prepend(self, p: LoopEncodedPath, i: int, j: int) -> LoopEncodedPath | None:
        """The path ``e_ij p`` if it lies in the truncated basis, else None."""
        if p.source != j:
            return None
        if i == j:
            if not p.chain:
                return None  # loop at the end vertex: not in this basis
            m = p.chain[0][1] + 1
            if m > self.cutoff:
                return None
            return LoopEncodedPath(((i, m),) + p.chain[1:], p.end)
        return LoopEncodedPath(((i, 0),) + p.chain, p.end)

    def labels(self, labels: Mapping[str, str] | None = None) -> list[str]:
        return [p.label(labels) for p in self.basis]


@dataclass
class GeneratorFamily:
    """Operators for the projections ``P_v`` and partial isometries ``S_e``."""

    graph: DirectedGraph
    dim: int
    P: dict[str, sp.csr_matrix]
    S: dict[str, sp.csr_matrix]
    space: TruncatedPathSpace | None = None

    def identity(self) -> sp.csr_matrix:
        return sp.identity(self.dim, dtype=DTYPE, format="csr")


def build_generators(space: TruncatedPathSpace) -> GeneratorFamily:
    """pi(S_f) zeta_a = zeta_{f a} when r(f) = s(a) and the result fits; else 0."""
    g = space.graph
    d = space.dim
    S = {}
    for e in g.edges:
        i, j = vertex_index(e.src), vertex_index(e.dst)
        pairs = []
        for c, p in enumerate(space.basis):
            new = space.prepend(p, i, j)
            if new is not None:
                pairs.append((c, space.index[new]))
        S[e.id] = _from_map(pairs, d)
    P = {v: _diag(space.source_mask(vertex_index(v))) for v in g.vertices}
    return GeneratorFamily(g, d, P, S, space)


def aggregate_shift(gens: GeneratorFamily, i: int) -> sp.csr_matrix:
    """``S_i = S_{i0} + ... + S_{ii}``."""
    n = len(gens.graph.vertices) - 1
    if not 1 <= i <= n:
        raise ValueError(f"shift index {i} outside 1..{n}")
    total = _zeros(gens.dim)
    for j in range(i + 1):
        eid = edge_id(i, j)
        if eid in gens.S:
            total = total + gens.S[eid]
    return total.tocsr()


def weighted_shift(gens: GeneratorFamily, i: int, q: float | QParam, terms: int | None = None) -> sp.csr_matrix:
    """``z_i = sum_k lambda_k S_i^(k+1) (S_i^*)^k`` summed to ``k = cutoff + 1``.

    Later terms annihilate every vector of the truncated space.
    """
    q = _q(q)
    s = aggregate_shift(gens, i)
    sh = s.conj().T.tocsr()
    if terms is None:
        cutoff = gens.space.cutoff if gens.space is not None else gens.dim
        terms = cutoff + 2
    power_up = s.copy()                     # S^(k+1)
    power_down = gens.identity()            # (S^*)^k
    z = _zeros(gens.dim)
    for k in range(terms):
        z = z + lambda_coeff(k, q) * (power_up @ power_down)
        power_up = (s @ power_up).tocsr()
        power_down = (sh @ power_down).tocsr()
    z = z.tocsr()
    z.eliminate_zeros()
    return z


def evaluate_word(a: WordExpr, gens: GeneratorFamily) -> sp.csr_matrix:
    """Linear extension of ``S_mu S_nu^* -> S_mu1 ... S_muk (S_nu1 ... S_nul)^*``."""
    if a.graph != gens.graph:
        raise GraphError("word and generators live over different graphs")
    total = _zeros(gens.dim)
    for w, c in a.terms.items():
        if w.is_projection:
            op = gens.P[w.mu.source]
        else:
            left = gens.P[w.mu.source] if w.mu.is_vertex else _product(gens, w.mu.edges)
            right = gens.P[w.nu.source] if w.nu.is_vertex else _product(gens, w.nu.edges)
            op = left @ right.conj().T
        total = total + c * op
    return total.tocsr()


def _product(gens: GeneratorFamily, edges: tuple[str, ...]) -> sp.csr_matrix:
    out = gens.S[edges[0]]
    for e in edges[1:]:
        out = out @ gens.S[e]
    return out.tocsr()


# ---------------------------------------------------------------------------
# irreducible representations


@dataclass
class Irrep:
    """Images of x_1..x_n together with the Cuntz-Krieger generators.

    ``x[i - 1]`` is the image of ``x_i``.  ``gens`` holds the images of every
    ``P_v`` and ``S_e`` of ``E_n`` in the same representation, so relation
    checks can mix the two generating sets.
    """

    spec: RepSpec
    n: int
    q: float
    cutoff: int
    basis: tuple[LoopEncodedPath, ...]
    x: tuple[sp.csr_matrix, ...]
    gens: GeneratorFamily
    _maxexp: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def faithful(self) -> bool:
        return isinstance(self.spec, PiRep)

    def interior(self, h: int) -> np.ndarray:
        if h > self.cutoff:
            raise ValueError(f"headroom {h} exceeds cutoff {self.cutoff}")
        return self._maxexp <= self.cutoff - h

    def identity(self) -> sp.csr_matrix:
        return self.gens.identity()

    def P(self, i: int) -> sp.csr_matrix:
        return self.gens.P[vertex_id(i)]

    def S(self, i: int) -> sp.csr_matrix:
        return aggregate_shift(self.gens, i)

    def S_edge(self, i: int, j: int) -> sp.csr_matrix:
        return self.gens.S[edge_id(i, j)]

    def Q(self, i: int) -> sp.csr_matrix:
        """Image of ``P_0 + ... + P_i`` (the identity once ``i >= n``)."""
        if i >= self.n:
            return self.identity()
        total = _zeros(self.dim)
        for j in range(i + 1):
            total = total + self.P(j)
        return total.tocsr()

    def labels(self, labels: Mapping[str, str] | None = None) -> list[str]:
        return [p.label(labels) for p in self.basis]


def _pi(n: int, q: float, cutoff: int) -> Irrep:
    space = TruncatedPathSpace(ball_graph(n), vertex_id(0), cutoff)
    gens = build_generators(space)
    x = tuple(weighted_shift(gens, i, q) for i in range(1, n + 1))
    return Irrep(PiRep(), n, q, cutoff, space.basis, x, gens, space._maxexp)


def _shift_path(p: LoopEncodedPath, k: int) -> LoopEncodedPath:
    return LoopEncodedPath(tuple((i + k, m) for i, m in p.chain), p.end + k)


def _epsilon(spec: EpsilonRep, n: int, q: float, cutoff: int) -> Irrep:
    k = spec.k
    theta = complex(math.cos(spec.theta), math.sin(spec.theta))
    g = ball_graph(n)
    space = TruncatedPathSpace(g, vertex_id(k), cutoff)
    gens = build_generators(space)
    d = space.dim
    vk = space.index[LoopEncodedPath((), k)]
    # S_kk fixes the end vertex up to the phase theta
    gens.S[edge_id(k, k)] = _from_map([(vk, vk)], d, [theta])

    # x_i for i > k: the faithful representation of E_{n-k}, relabelled v'_i = v_{i-k}
    lower = _pi(n - k, q, cutoff)
    perm = np.array([space.index[_shift_path(p, k)] for p in lower.basis])
    if len(set(perm.tolist())) != d:
        raise GraphError("index shift is not a bijection onto the epsilon basis")
    move = _from_map(list(enumerate(perm)), d)
    x: list[sp.csr_matrix] = [_zeros(d) for _ in range(k - 1)]
    x.append(_from_map([(vk, vk)], d, [theta]))
    for i in range(k + 1, n + 1):
        x.append((move @ lower.x[i - k - 1] @ move.T).tocsr())
    return Irrep(spec, n, q, cutoff, space.basis, tuple(x), gens, space._maxexp)


def _sigma(spec: SigmaRep, n: int, q: float, cutoff: int) -> Irrep:
    theta = complex(math.cos(spec.theta), math.sin(spec.theta))
    g = ball_graph(n)
    one = sp.csr_matrix(np.array([[1.0]], dtype=DTYPE))
    zero = _zeros(1)
    P = {v: (one if v == vertex_id(n) else zero) for v in g.vertices}
    S = {e.id: zero for e in g.edges}
    S[edge_id(n, n)] = (theta * one).tocsr()
    gens = GeneratorFamily(g, 1, P, S)
    x = tuple(zero for _ in range(n - 1)) + ((theta * one).tocsr(),)
    return Irrep(spec, n, q, cutoff, (LoopEncodedPath((), n),), x, gens, np.zeros(1, dtype=int))


def build_irrep(spec: RepSpec, n: int, q: float | QParam, cutoff: int) -> Irrep:
    q = _q(q)
    if n < 1:
        raise ValueError("n must be >= 1")
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    if isinstance(spec, PiRep):
        return _pi(n, q, cutoff)
    if isinstance(spec, EpsilonRep):
        if not 1 <= spec.k <= n - 1:
            raise ValueError(f"epsilon index k={spec.k} outside 1..{n - 1}")
        return _epsilon(spec, n, q, cutoff)
    if isinstance(spec, SigmaRep):
        return _sigma(spec, n, q, cutoff)
    raise TypeError(f"unknown representation spec {spec!r}")


@dataclass(frozen=True)
class IrrepFamily:
    """A point (``pi``) or a circle (``eps`` for one ``k``, or ``sigma``) of irreps."""

    kind: str
    k: int | None = None

    @property
    def is_circle(self) -> bool:
        return self.kind != "pi"

    @property
    def name(self) -> str:
        return f"eps[k={self.k}]" if self.kind == "eps" else self.kind

    def member(self, theta: float = 0.0) -> RepSpec:
        if self.kind == "pi":
            return PiRep()
        if self.kind == "eps":
            return EpsilonRep(self.k, theta)
        return SigmaRep(theta)


def list_irreps(n: int) -> list[IrrepFamily]:
    """The point family ``pi`` followed by the ``n`` circle families."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [IrrepFamily("pi")] + [IrrepFamily("eps", k) for k in range(1, n)] + [IrrepFamily("sigma")]


# ---------------------------------------------------------------------------
# export


def export_coo(op: sp.spmatrix) -> str:
    """``row col re im`` per stored entry, row-major."""
    coo = sp.coo_matrix(op)
    order = np.lexsort((coo.col, coo.row))
    lines = [
        f"{int(coo.row[k])} {int(coo.col[k])} {float(coo.data[k].real)!r} {float(coo.data[k].imag)!r}"
        for k in order
        if coo.data[k] != 0
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def basis_manifest(basis: Iterable[LoopEncodedPath], labels: Mapping[str, str] | None = None) -> str:
    return "".join(p.label(labels) + "\n" for p in basis)
