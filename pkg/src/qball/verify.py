"""Relation-checking harness.

Each identity becomes a named check with a declared headroom ``h``.  The
residual is the largest 2-norm of a column of ``LHS - RHS`` over the basis
vectors in ``interior(h)``.  Checks flagged ``exact`` pass only on a residual
of exactly zero.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .graphs import ball_graph, edge_id, vertex_id
from .polar import CornerContext, modulus, phase_in_corner
from .representation import (
    GeneratorFamily,
    Irrep,
    PiRep,
    QParam,
    TruncatedPathSpace,
    build_generators,
    build_irrep,
    evaluate_word,
    lambda_coeff,
    list_irreps,
)
from .words import (
    GeneratorLetter,
    WordExpr,
    adjoint,
    ck_expand,
    gauge,
    letters_headroom,
    multiply,
    random_expr,
    random_letters,
    reduce,
)

__all__ = [
    "TOL",
    "SUITES",
    "RelationReport",
    "CheckSuite",
    "RunConfig",
    "VerificationReport",
    "HeadroomError",
    "residual",
    "check_cuntz_krieger",
    "cuntz_krieger_negative_control",
    "check_ball_relations",
    "check_projection_lemma",
    "check_universal_relations",
    "check_generator_recovery",
    "check_partial_sum_bound",
    "partial_sum_grid",
    "check_matrix_units",
    "symbolic_numeric_crosscheck",
    "symbolic_suite",
    "corner_phases",
    "lemma_phases",
    "draw_thetas",
    "run_verification",
]

TOL = 1e-12
PARTIAL_SUM_CUTOFF = 8
SYMBOLIC_CUTOFF = 8
SUITES = (
    "cuntz_krieger",
    "ball",
    "projection_lemma",
    "universal",
    "recovery",
    "partial_sum",
    "matrix_units",
    "symbolic",
)


class HeadroomError(ValueError):
    """A check needs more loop headroom than the cutoff provides."""


@dataclass(frozen=True)
class RelationReport:
    id: str
    headroom: int
    residual: float
    passed: bool
    context: Mapping[str, Any] = field(default_factory=dict)
    detail: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.residual >= 0:
            raise ValueError(f"residual must be a nonnegative number, got {self.residual!r}")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "id": self.id,
            "headroom": self.headroom,
            "residual": self.residual,
            "pass": self.passed,
        }
        out.update(self.context)
        out.update(self.detail)
        return out


@dataclass
class CheckSuite:
    """Reports of one suite on one representation, in check order."""

    name: str
    tol: float
    reports: list[RelationReport] = field(default_factory=list)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for r in self.reports:
            if r.id in seen:
                raise ValueError(f"duplicate relation id {r.id!r} in suite {self.name}")
            seen.add(r.id)

    @property
    def ids(self) -> list[tuple[str, int]]:
        return [(r.id, r.headroom) for r in self.reports]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


# ---------------------------------------------------------------------------
# residual plumbing


def residual(diff: sp.spmatrix | np.ndarray, cols: np.ndarray) -> float:
    """Largest column 2-norm of ``diff`` over the selected columns."""
    idx = np.flatnonzero(cols)
    if idx.size == 0:
        return 0.0
    if sp.issparse(diff):
        sub = sp.csc_matrix(diff)[:, idx]
        if sub.nnz == 0:
            return 0.0
        sq = np.asarray(abs(sub).power(2).sum(axis=0)).ravel()
    else:
        sq = np.sum(np.abs(np.asarray(diff)[:, idx]) ** 2, axis=0)
    return float(math.sqrt(float(sq.max())))


def _interior_fn(obj: Irrep | GeneratorFamily) -> Callable[[int], np.ndarray]:
    if isinstance(obj, Irrep):
        return obj.interior
    if obj.space is None:
        return lambda h: np.ones(obj.dim, dtype=bool)
    return obj.space.interior


def _adj(a: sp.spmatrix) -> sp.csr_matrix:
    return a.conj().T.tocsr()


class _Recorder:
    def __init__(self, tol: float, interior: Callable[[int], np.ndarray], context: Mapping[str, Any]):
        self.tol = tol
        self.interior = interior
        self.context = dict(context)
        self.reports: list[RelationReport] = []

    def add(self, rid: str, h: int, res: float, ok: bool, **detail: Any) -> RelationReport:
        rep = RelationReport(rid, h, res, ok, self.context, detail)
        self.reports.append(rep)
        return rep

    def relation(self, rid: str, lhs, rhs, h: int, *, exact: bool = False) -> RelationReport:
        res = residual(lhs - rhs, self.interior(h))
        ok = res == 0.0 if exact else res <= self.tol
        return self.add(rid, h, res, ok, **({"exact": True} if exact else {}))

    def below(self, rid: str, diff, h: int, strict: bool) -> RelationReport:
        """``A <= B`` (or ``A < B``) for projections, given ``diff = B - A``.

        ``diff`` must be a projection on the interior; strictness additionally
        asks for interior trace at least one.
        """
        cols = self.interior(h)
        res = max(residual(diff @ diff - diff, cols), residual(diff - _adj(diff), cols))
        trace = float(np.real(sp.csr_matrix(diff).diagonal()[cols]).sum())
        ok = res <= self.tol and (trace >= 1 - self.tol or not strict)
        return self.add(rid, h, res, ok, trace=round(trace, 9) + 0.0, strict=strict)


def _rep_context(rep: Irrep) -> dict[str, Any]:
    return {"rep": rep.spec.name, "q": rep.q}


# ---------------------------------------------------------------------------
# Cuntz-Krieger relations


def check_cuntz_krieger(
    gens: Irrep | GeneratorFamily, tol: float = TOL, context: Mapping[str, Any] | None = None
) -> list[RelationReport]:
    """(G1) ``P_v P_w = 0``, (G2) ``S_e^* S_e = P_r(e)``, (G3) ``P_v = sum S_e S_e^*``."""
    interior = _interior_fn(gens)
    if isinstance(gens, Irrep):
        context = {**_rep_context(gens), **(context or {})}
        gens = gens.gens
    rec = _Recorder(tol, interior, context or {})
    g = gens.graph
    zero = sp.csr_matrix((gens.dim, gens.dim), dtype=complex)
    for a, v in enumerate(g.vertices):
        for w in g.vertices[a + 1 :]:
            rec.relation(f"G1[{v},{w}]", gens.P[v] @ gens.P[w], zero, 0, exact=True)
    for e in g.edges:
        s = gens.S[e.id]
        rec.relation(f"G2[{e.id}]", _adj(s) @ s, gens.P[e.dst], 1)
    for v in g.vertices:
        if g.is_sink(v):
            continue
        total = zero
        for e in g.out_edges(v):
            total = total + gens.S[e.id] @ _adj(gens.S[e.id])
        rec.relation(f"G3[{v}]", gens.P[v], total, 1)
    return rec.reports


def cuntz_krieger_negative_control(gens: GeneratorFamily, tol: float = TOL) -> list[RelationReport]:
    """(G2) over every basis vector (headroom 0): boundary columns must fail."""
    rec = _Recorder(tol, lambda h: np.ones(gens.dim, dtype=bool), {"control": "headroom0"})
    for e in gens.graph.edges:
        s = gens.S[e.id]
        rec.relation(f"G2[{e.id}]", _adj(s) @ s, gens.P[e.dst], 0)
    return rec.reports


# ---------------------------------------------------------------------------
# polynomial (ball) relations


def _z_formula(rep: Irrep, i: int) -> sp.csr_matrix:
    """pi(z_i) from its closed-form action on basis paths."""
    q = rep.q
    space = rep.gens.space
    rows, cols, vals = [], [], []
    for c, p in enumerate(rep.basis):
        j = p.source
        if j > i:
            continue
        if j == i:
            m = p.chain[0][1]
            weight = math.sqrt(1 - q ** (m + 2))
        else:
            weight = math.sqrt(1 - q)
        new = space.prepend(p, i, j)
        if new is None:
            continue
        rows.append(space.index[new])
        cols.append(c)
        vals.append(weight)
    return sp.csr_matrix((np.asarray(vals, dtype=complex), (rows, cols)), shape=(rep.dim, rep.dim))


def _z_adjoint_formula(rep: Irrep, i: int) -> sp.csr_matrix:
    q = rep.q
    space = rep.gens.space
    rows, cols, vals = [], [], []
    for c, p in enumerate(rep.basis):
        if p.source != i or not p.chain:
            continue
        m = p.chain[0][1]
        if m == 0:
            tail = type(p)(p.chain[1:], p.end)
            weight = math.sqrt(1 - q)
        else:
            tail = type(p)(((i, m - 1),) + p.chain[1:], p.end)
            weight = math.sqrt(1 - q ** (m + 1))
        rows.append(space.index[tail])
        cols.append(c)
        vals.append(weight)
    return sp.csr_matrix((np.asarray(vals, dtype=complex), (rows, cols)), shape=(rep.dim, rep.dim))


def check_ball_relations(rep: Irrep, tol: float = TOL) -> list[RelationReport]:
    """``x_i x_j = 0`` (i<j), ``x_i^* x_j = 0`` (i!=j), ``x_i^*x_i - q x_i x_i^* = (1-q) Q_i``."""
    rec = _Recorder(tol, rep.interior, _rep_context(rep))
    n, q, x = rep.n, rep.q, rep.x
    zero = sp.csr_matrix((rep.dim, rep.dim), dtype=complex)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            rec.relation(f"x{i}x{j}=0", x[i - 1] @ x[j - 1], zero, 2, exact=True)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                rec.relation(f"x{i}*x{j}=0", _adj(x[i - 1]) @ x[j - 1], zero, 2, exact=True)
    for i in range(1, n + 1):
        xi = x[i - 1]
        rec.relation(f"qrel[x{i}]", _adj(xi) @ xi - q * (xi @ _adj(xi)), (1 - q) * rep.Q(i), 2)

    if rep.faithful:
        for i in range(1, n + 1):
            rec.relation(f"z{i}=formula", x[i - 1], _z_formula(rep, i), 1)
            rec.relation(f"z{i}*=formula", _adj(x[i - 1]), _z_adjoint_formula(rep, i), 1)
            q_i = rep.Q(i)
            rec.relation(f"z{i}in-corner", q_i @ x[i - 1] @ q_i, x[i - 1], 0, exact=True)
        if n == 1:
            # quantum disc: zeta_k is the k-th basis path, z zeta_k = sqrt(1 - q^(k+1)) zeta_(k+1)
            d = rep.dim
            weights = np.sqrt(1 - q ** np.arange(1, d))
            disc = sp.diags(weights.astype(complex), -1, shape=(d, d), format="csr")
            rec.relation("disc[z]", x[0], disc, 1)
            shift = sp.diags(np.ones(d - 1, dtype=complex), -1, shape=(d, d), format="csr")
            rec.relation("disc[S]", rep.S(1), shift, 1)
    return rec.reports


# ---------------------------------------------------------------------------
# phases and the projection lemma


def _corner(q_op: sp.spmatrix, rep: Irrep) -> CornerContext:
    return CornerContext.from_projection(q_op, rep.interior(1))


def corner_phases(rep: Irrep) -> list[sp.csr_matrix]:
    """``alpha_i = phase(x_i)`` inside the corner ``P_0 + ... + P_i``."""
    return [phase_in_corner(rep.x[i - 1], _corner(rep.Q(i), rep)) for i in range(1, rep.n + 1)]


def lemma_phases(rep: Irrep) -> tuple[list[sp.csr_matrix], list[sp.csr_matrix]]:
    """Phases and corners built by the downward recursion ``Q_(i-1) = Q_i - alpha_i alpha_i^*``.

    Returns ``(alpha, Q)`` with ``alpha[i-1]`` the phase of ``x_i`` and
    ``Q[i]`` the i-th corner, ``Q[n] = 1``.
    """
    n = rep.n
    Q: list[sp.csr_matrix] = [None] * (n + 1)  # type: ignore[list-item]
    alpha: list[sp.csr_matrix] = [None] * n  # type: ignore[list-item]
    Q[n] = rep.identity()
    for i in range(n, 0, -1):
        a = phase_in_corner(rep.x[i - 1], _corner(Q[i], rep))
        alpha[i - 1] = a
        Q[i - 1] = (Q[i] - a @ _adj(a)).tocsr()
    return alpha, Q


def check_projection_lemma(rep: Irrep, tol: float = TOL) -> list[RelationReport]:
    """The five items on ``R_i = alpha_i alpha_i^*`` and the corners ``Q_i``.

    Strict inequalities ``R_i < Q_j`` are only required in the faithful
    representation; elsewhere ``Q_j - R_i`` must still be a projection.
    """
    rec = _Recorder(tol, rep.interior, _rep_context(rep))
    n = rep.n
    alpha, Q = lemma_phases(rep)
    R = [(a @ _adj(a)).tocsr() for a in alpha]
    one = rep.identity()
    zero = sp.csr_matrix((rep.dim, rep.dim), dtype=complex)
    for i in range(1, n + 1):
        a = alpha[i - 1]
        rec.relation(f"item1[Q{i - 1}]", Q[i - 1], _adj(a) @ a - R[i - 1], 2)
    for i in range(2, n + 1):
        tail = zero
        for j in range(i, n + 1):
            tail = tail + R[j - 1]
        rec.relation(f"item2[Q{i - 1}]", Q[i - 1], one - tail, 2)
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            rec.below(f"item3[R{i}<Q{j}]", Q[j] - R[i - 1], 2, strict=rep.faithful)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                rec.relation(f"item4[R{i}R{j}]", R[i - 1] @ R[j - 1], zero, 2)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            rec.relation(f"item5[Q{i}R{j}]", Q[i] @ R[j - 1], zero, 2)
    for i in range(0, n + 1):
        rec.relation(f"psi(Q{i})", Q[i], rep.Q(i), 2)
    return rec.reports


# ---------------------------------------------------------------------------
# universal relations on T_i := S_i


def check_universal_relations(rep: Irrep, tol: float = TOL) -> list[RelationReport]:
    rec = _Recorder(tol, rep.interior, _rep_context(rep))
    n = rep.n
    T = [rep.S(i) for i in range(1, n + 1)]
    one = rep.identity()
    zero = sp.csr_matrix((rep.dim, rep.dim), dtype=complex)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            rec.relation(f"T{i}T{j}=0", T[i - 1] @ T[j - 1], zero, 2, exact=True)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                rec.relation(f"T{i}*T{j}=0", _adj(T[i - 1]) @ T[j - 1], zero, 2, exact=True)
    tn = T[n - 1]
    rec.relation(f"T{n}*T{n}=1", _adj(tn) @ tn, one, 1)
    for i in range(2, n + 1):
        ti, tp = T[i - 1], T[i - 2]
        rec.relation(f"T{i - 1}*T{i - 1}=T{i}*T{i}-T{i}T{i}*", _adj(tp) @ tp, _adj(ti) @ ti - ti @ _adj(ti), 2)
    t1 = T[0]
    rec.below("T1T1*<T1*T1", _adj(t1) @ t1 - t1 @ _adj(t1), 2, strict=rep.faithful)
    rec.below(f"T{n}T{n}*<1", one - tn @ _adj(tn), 2, strict=rep.faithful)
    return rec.reports


# ---------------------------------------------------------------------------
# recovering the Cuntz-Krieger generators


def check_generator_recovery(rep: Irrep, tol: float = TOL) -> list[RelationReport]:
    """Projections and edges from ``S_1..S_n``; phases; the round trip through phases."""
    rec = _Recorder(tol, rep.interior, _rep_context(rep))
    n = rep.n
    S = [rep.S(i) for i in range(1, n + 1)]
    Sd = [_adj(s) for s in S]
    one = rep.identity()

    p0 = Sd[0] @ S[0] - S[0] @ Sd[0]
    rec.relation("P[v0]=S1*S1-S1S1*", rep.P(0), p0, 1)
    for i in range(1, n + 1):
        rec.relation(f"P[{vertex_id(i)}]=S{i}S{i}*", rep.P(i), S[i - 1] @ Sd[i - 1], 1)
        rec.relation(f"S{i}*S{i}=P0..P{i}", Sd[i - 1] @ S[i - 1], _psum(rep, i), 1)
    for i in range(1, n + 1):
        for j in range(0, i + 1):
            e = edge_id(i, j)
            rec.relation(f"S[{e}]=S{i}P{j}", rep.S_edge(i, j), S[i - 1] @ rep.P(j), 1)
            proj = p0 if j == 0 else S[j - 1] @ Sd[j - 1]
            rec.relation(f"S[{e}]=S{i}(shift form)", rep.S_edge(i, j), S[i - 1] @ proj, 2)
    if n == 2:
        rec.relation("S[e10]=S1(1-S1S1*)", rep.S_edge(1, 0), S[0] @ (one - S[0] @ Sd[0]), 2)

    for i in range(1, n + 1):
        ctx = _corner(rep.Q(i), rep)
        x = rep.x[i - 1]
        u = phase_in_corner(x, ctx)
        rec.relation(f"phase(x{i})=S{i}", u, S[i - 1], 1)
        rec.relation(f"polar[x{i}]", u @ modulus(x), x, 1)

    alpha = corner_phases(rep)
    ad = [_adj(a) for a in alpha]
    phi_p0 = ad[0] @ alpha[0] - alpha[0] @ ad[0]
    rec.relation("phi(P[v0])", phi_p0, rep.P(0), 2)
    for i in range(1, n + 1):
        rec.relation(f"phi(P[{vertex_id(i)}])", alpha[i - 1] @ ad[i - 1], rep.P(i), 2)
    for i in range(1, n + 1):
        total = sp.csr_matrix((rep.dim, rep.dim), dtype=complex)
        for j in range(0, i + 1):
            img = alpha[i - 1] @ (phi_p0 if j == 0 else alpha[j - 1] @ ad[j - 1])
            total = total + img
            rec.relation(f"phi(S[{edge_id(i, j)}])", img, rep.S_edge(i, j), 2)
        rec.relation(f"phi(S{i})=alpha{i}", total, alpha[i - 1], 2)
    return rec.reports


def _psum(rep: Irrep, i: int) -> sp.csr_matrix:
    total = sp.csr_matrix((rep.dim, rep.dim), dtype=complex)
    for j in range(i + 1):
        total = total + rep.P(j)
    return total


# ---------------------------------------------------------------------------
# quantum disc partial sums


def check_partial_sum_bound(
    q: float, m: int, upper: int, cutoff: int = PARTIAL_SUM_CUTOFF, tol: float = TOL
) -> RelationReport:
    """``|| sum_{k=m+1}^{upper} lambda_k S^(k+1) S^*k || <= sqrt(1-q^(upper+1)) - sqrt(1-q^(m+1))``.

    Evaluated on the n=1 truncated space; the norm is the dense spectral norm.
    """
    q = QParam(q).q
    if not 0 <= m <= upper:
        raise ValueError("need 0 <= m <= upper")
    if upper + 1 > cutoff:
        raise HeadroomError(f"upper={upper} needs cutoff >= {upper + 1}")
    gens = build_generators(TruncatedPathSpace(ball_graph(1), vertex_id(0), cutoff))
    s = (gens.S[edge_id(1, 1)] + gens.S[edge_id(1, 0)]).toarray()
    sd = s.conj().T
    op = np.zeros_like(s)
    up = np.linalg.matrix_power(s, m + 2)
    down = np.linalg.matrix_power(sd, m + 1)
    for k in range(m + 1, upper + 1):
        op += lambda_coeff(k, q) * (up @ down)
        up = s @ up
        down = sd @ down
    norm = float(np.linalg.norm(op, 2)) if op.size else 0.0
    bound = math.sqrt(1 - q ** (upper + 1)) - math.sqrt(1 - q ** (m + 1))
    excess = max(0.0, norm - bound)
    return RelationReport(
        f"partial_sum[m={m},n={upper}]",
        0,
        excess,
        excess <= tol,
        {"q": q},
        {"norm": norm, "bound": bound},
    )


def partial_sum_grid(max_upper: int = 4) -> list[tuple[int, int]]:
    """All ``(m, upper)`` with ``0 <= m < upper <= max_upper`` (10 pairs for 4)."""
    return [(m, u) for u in range(1, max_upper + 1) for m in range(u)]


# ---------------------------------------------------------------------------
# matrix units for the ideal at the sink


def check_matrix_units(n: int, cutoff: int, tol: float = TOL, max_paths: int = 16) -> RelationReport:
    """``U_ab U_cd = delta_bc U_ad`` and ``U_ab^* = U_ba`` with ``U_ab = S_a S_b^*``.

    Paths are the first ``max_paths`` basis paths ending at the sink.  Each
    ``U_ab`` is first shown to live in that block, so the products reduce to
    dense block arithmetic.
    """
    if cutoff < 2:
        raise HeadroomError("matrix units need cutoff >= 2")
    g = ball_graph(n)
    space = TruncatedPathSpace(g, vertex_id(0), cutoff)
    gens = build_generators(space)
    paths = space.basis[: max_paths]
    k = len(paths)
    ops = []
    for p in paths:
        op = gens.P[vertex_id(p.source)]
        edges = p.edge_ids()
        if edges:
            op = gens.S[edges[0]]
            for e in edges[1:]:
                op = op @ gens.S[e]
        ops.append(sp.csr_matrix(op))
    outside = 0.0
    U = np.zeros((k, k, k, k), dtype=complex)
    mask = np.zeros(space.dim, dtype=bool)
    mask[:k] = True
    for a in range(k):
        for b in range(k):
            u = (ops[a] @ _adj(ops[b])).tocsr()
            coo = u.tocoo()
            off = ~(mask[coo.row] & mask[coo.col])
            if off.any():
                outside = max(outside, float(np.abs(coo.data[off]).max()))
            U[a, b] = u[:k][:, :k].toarray()
    res = outside
    for a in range(k):
        for b in range(k):
            prod = np.einsum("ij,cdjk->cdik", U[a, b], U)
            expect = np.zeros_like(prod)
            expect[b] = U[a]
            res = max(res, float(np.abs(prod - expect).max()))
            res = max(res, float(np.abs(U[a, b].conj().T - U[b, a]).max()))
    return RelationReport(
        f"matrix_units[n={n}]", 0, res, res <= tol, {"rep": "pi"}, {"paths": k, "cutoff": cutoff}
    )


# ---------------------------------------------------------------------------
# symbolic vs numeric


def symbolic_numeric_crosscheck(
    a: WordExpr, b: WordExpr, gens: GeneratorFamily, tol: float = TOL, rid: str = "product"
) -> RelationReport:
    """Compare ``pi(a b)`` (symbolic product) with ``pi(a) pi(b)`` on the interior."""
    h = a.max_mu_length() + b.max_mu_length()
    cutoff = gens.space.cutoff
    if h > cutoff:
        raise HeadroomError(f"headroom {h} exceeds cutoff {cutoff}; use a larger cutoff")
    lhs = evaluate_word(multiply(a, b), gens)
    rhs = evaluate_word(a, gens) @ evaluate_word(b, gens)
    res = residual(lhs - rhs, gens.space.interior(h))
    return RelationReport(rid, h, res, res <= tol, {"rep": "pi"})


def _letter_operator(gens: GeneratorFamily, letters: Sequence[GeneratorLetter]) -> sp.csr_matrix:
    op = gens.identity()
    for letter in letters:
        if letter.kind == "S":
            f = gens.S[letter.name]
        elif letter.kind == "S*":
            f = _adj(gens.S[letter.name])
        elif letter.kind == "P":
            f = gens.P[letter.name]
        else:
            continue
        op = op @ f
    return op.tocsr()


def _coeff_norm(a: WordExpr) -> float:
    return max((abs(c) for c in a.terms.values()), default=0.0)


def _aggregate(rid: str, reports: Iterable[RelationReport], tol: float, **detail) -> RelationReport:
    reports = list(reports)
    res = max((r.residual for r in reports), default=0.0)
    h = max((r.headroom for r in reports), default=0)
    return RelationReport(rid, h, res, res <= tol, {"rep": "pi"}, {"count": len(reports), **detail})


def symbolic_suite(n: int, cutoff: int = SYMBOLIC_CUTOFF, seed: int = 0, count: int = 100, tol: float = TOL):
    """Randomized and relation-level agreement between rewriting and matrices."""
    g = ball_graph(n)
    gens = build_generators(TruncatedPathSpace(g, vertex_id(0), cutoff))
    rng = np.random.default_rng([seed, n])
    max_len = max(1, min(3, cutoff // 2))
    out: list[RelationReport] = []

    pairs = []
    for _ in range(count):
        a = random_expr(g, rng, terms=3, max_len=max_len)
        b = random_expr(g, rng, terms=3, max_len=max_len)
        pairs.append((a, b))
    out.append(_aggregate("symbolic[product]", (symbolic_numeric_crosscheck(a, b, gens, tol) for a, b in pairs), tol))

    word_reports = []
    for _ in range(count):
        letters = random_letters(g, rng, max_len=8)
        while letters_headroom(letters) > cutoff:
            letters = letters[:-1]
        h = letters_headroom(letters)
        lhs = evaluate_word(reduce(g, letters), gens)
        res = residual(lhs - _letter_operator(gens, letters), gens.space.interior(h))
        word_reports.append(RelationReport("letters", h, res, res <= tol))
    out.append(_aggregate("symbolic[letters]", word_reports, tol))

    assoc = 0.0
    anti = 0.0
    for a, b in pairs[:20]:
        c = random_expr(g, rng, terms=2, max_len=max_len)
        assoc = max(assoc, _coeff_norm(multiply(multiply(a, b), c) - multiply(a, multiply(b, c))))
        anti = max(anti, _coeff_norm(adjoint(multiply(a, b)) - multiply(adjoint(b), adjoint(a))))
    out.append(RelationReport("symbolic[associative]", 0, assoc, assoc <= tol, {"rep": "words"}))
    out.append(RelationReport("symbolic[(ab)*=b*a*]", 0, anti, anti <= tol, {"rep": "words"}))

    ck_reports = []
    for v in g.vertices:
        if g.is_sink(v):
            continue
        for depth in (1, 2):
            a = random_expr(g, rng, terms=3, max_len=max_len)
            a = a + WordExpr.projection(g, v)
            expanded = ck_expand(a, v, depth)
            h = expanded.max_mu_length()
            if h > cutoff:
                continue
            res = residual(evaluate_word(a, gens) - evaluate_word(expanded, gens), gens.space.interior(h))
            ck_reports.append(RelationReport("ck", h, res, res <= tol))
    out.append(_aggregate("symbolic[ck_expand]", ck_reports, tol))

    angles = rng.uniform(0.0, 2 * math.pi, size=3)
    hom = 0.0
    for t in angles:
        for a, b in pairs[:20]:
            hom = max(hom, _coeff_norm(gauge(multiply(a, b), t) - multiply(gauge(a, t), gauge(b, t))))
            hom = max(hom, _coeff_norm(gauge(adjoint(a), t) - adjoint(gauge(a, t))))
        hom = max(hom, _coeff_norm(gauge(WordExpr.unit(g), t) - WordExpr.unit(g)))
    out.append(RelationReport("gauge[homomorphism]", 0, hom, hom <= tol, {"rep": "words"}))

    for name, relations in _gauged_ck_relations(g, angles):
        reps = []
        for expr in relations:
            sym = _coeff_norm(expr)
            num = residual(evaluate_word(expr, gens), gens.space.interior(1))
            reps.append(RelationReport(name, 1, max(sym, num), max(sym, num) <= tol))
        out.append(_aggregate(f"gauge[{name}]", reps, tol, angles=len(angles)))
    return out


def _gauged_ck_relations(g, angles) -> list[tuple[str, list[WordExpr]]]:
    """Each defining relation, written with gauge-transformed generators, minus its right side."""
    g1, g2, g3 = [], [], []
    for t in angles:
        P = {v: gauge(WordExpr.projection(g, v), t) for v in g.vertices}
        S = {e.id: gauge(WordExpr.generator(g, e.id), t) for e in g.edges}
        for a, v in enumerate(g.vertices):
            for w in g.vertices[a + 1 :]:
                g1.append(multiply(P[v], P[w]))
        for e in g.edges:
            g2.append(multiply(adjoint(S[e.id]), S[e.id]) - P[e.dst])
        for v in g.vertices:
            if g.is_sink(v):
                continue
            total = WordExpr.zero(g)
            for e in g.out_edges(v):
                total = total + multiply(S[e.id], adjoint(S[e.id]))
            g3.append(ck_expand(P[v], v) - total)
    return [("G1", g1), ("G2", g2), ("G3", g3)]


# ---------------------------------------------------------------------------
# full runs


@dataclass(frozen=True)
class RunConfig:
    n: int
    qs: tuple[float, ...] = (0.5,)
    cutoff: int = 6
    tol: float = TOL
    seed: int = 0
    suites: tuple[str, ...] = SUITES

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not self.qs:
            raise ValueError("at least one q is required")
        object.__setattr__(self, "qs", tuple(QParam(q).q for q in self.qs))
        if self.cutoff < 2:
            raise ValueError("cutoff must be >= 2")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suite(s): {', '.join(unknown)}; choose from {', '.join(SUITES)}")
        if not self.suites:
            object.__setattr__(self, "suites", SUITES)


def draw_thetas(n: int, seed: int) -> dict[str, float]:
    """One angle per circle family, drawn from ``seed``."""
    rng = np.random.default_rng(seed)
    return {fam.name: float(rng.uniform(0.0, 2 * math.pi)) for fam in list_irreps(n) if fam.is_circle}


@dataclass
class VerificationReport:
    context: dict[str, Any]
    suites: list[CheckSuite]

    @property
    def checks(self) -> list[RelationReport]:
        return [r for s in self.suites for r in s.reports]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.checks)

    def failures(self) -> list[RelationReport]:
        return [r for r in self.checks if not r.passed]

    def to_dict(self) -> dict[str, Any]:
        checks = []
        for s in self.suites:
            for r in s.reports:
                checks.append({**r.to_dict(), "suite": s.name})
        return {"context": self.context, "checks": checks, "pass": self.passed}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_ndjson(self) -> str:
        doc = self.to_dict()
        lines = [json.dumps({"context": doc["context"]})]
        lines += [json.dumps(c) for c in doc["checks"]]
        lines.append(json.dumps({"pass": doc["pass"]}))
        return "\n".join(lines) + "\n"


_REP_SUITES = {
    "cuntz_krieger": check_cuntz_krieger,
    "ball": check_ball_relations,
    "projection_lemma": check_projection_lemma,
    "universal": check_universal_relations,
    "recovery": check_generator_recovery,
}


def run_verification(config: RunConfig) -> VerificationReport:
    """Every selected suite, over every q and one member of every irrep family."""
    thetas = draw_thetas(config.n, config.seed)
    context = {
        "n": config.n,
        "q": list(config.qs),
        "cutoff": config.cutoff,
        "tol": config.tol,
        "seed": config.seed,
        "thetas": thetas,
        "suites": list(config.suites),
    }
    suites: list[CheckSuite] = []
    wanted = [s for s in SUITES if s in config.suites]
    rep_suites = [s for s in wanted if s in _REP_SUITES]
    for q in config.qs:
        if rep_suites:
            for fam in list_irreps(config.n):
                rep = build_irrep(fam.member(thetas.get(fam.name, 0.0)), config.n, q, config.cutoff)
                for name in rep_suites:
                    suites.append(CheckSuite(name, config.tol, _REP_SUITES[name](rep, config.tol)))
        if "partial_sum" in wanted:
            reps = [check_partial_sum_bound(q, m, u, PARTIAL_SUM_CUTOFF, config.tol) for m, u in partial_sum_grid()]
            suites.append(CheckSuite("partial_sum", config.tol, reps))
    if "matrix_units" in wanted:
        suites.append(CheckSuite("matrix_units", config.tol, [check_matrix_units(config.n, config.cutoff, config.tol)]))
    if "symbolic" in wanted:
        cutoff = max(config.cutoff, SYMBOLIC_CUTOFF)
        suites.append(CheckSuite("symbolic", config.tol, symbolic_suite(config.n, cutoff, config.seed, tol=config.tol)))
    return VerificationReport(context, suites)
