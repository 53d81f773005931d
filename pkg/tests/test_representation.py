import math

import numpy as np
import pytest
import scipy.sparse as sp

from qball.graphs import SHORT_LABELS, GraphError, LoopEncodedPath, ball_graph
from qball.representation import (
    EpsilonRep,
    PiRep,
    QParam,
    SigmaRep,
    TruncatedPathSpace,
    aggregate_shift,
    basis_manifest,
    build_generators,
    build_irrep,
    evaluate_word,
    export_coo,
    lambda_coeff,
    list_irreps,
    weighted_shift,
)
from qball.verify import residual
from qball.words import WordExpr, parse_expr

L2 = SHORT_LABELS[2]

# independently evaluated (mpmath, 30 digits)
LAMBDA1_HALF = 0.158918622597891      # sqrt(0.75) - sqrt(0.5)
SQRT_075 = 0.866025403784439          # sqrt(1 - 0.5^2)
SQRT_0875 = 0.935414346693485         # sqrt(1 - 0.5^3)


def space(n, cutoff, end="v0"):
    return TruncatedPathSpace(ball_graph(n), end, cutoff)


def idx(sp_, label, labels=L2):
    return sp_.labels(labels).index(label)


def col(op, j):
    return op.toarray()[:, j]


# --- parameters --------------------------------------------------------------


@pytest.mark.parametrize("q", [0.0, 1.0, -0.2, 1.5, float("nan")])
def test_qparam_rejects(q):
    with pytest.raises(ValueError):
        QParam(q)


def test_lambda_values():
    assert lambda_coeff(1, 0.5) == pytest.approx(LAMBDA1_HALF, abs=1e-15)
    for q in (0.3, 0.5, 0.9):
        assert lambda_coeff(0, q) == pytest.approx(math.sqrt(1 - q), abs=1e-15)
        assert all(lambda_coeff(k, q) > 0 for k in range(20))


@pytest.mark.parametrize("q", [0.3, 0.5, 0.9])
def test_lambda_telescopes(q):
    for i in range(12):
        assert sum(lambda_coeff(k, q) for k in range(i + 1)) == pytest.approx(math.sqrt(1 - q ** (i + 1)), abs=1e-14)


# --- generators --------------------------------------------------------------


def test_generator_action_e2():
    s = space(2, 4)
    g = build_generators(s)
    w = idx(s, "v0")
    assert col(g.S["e10"], w)[idx(s, "b^0 e")] == 1
    assert np.count_nonzero(col(g.S["e10"], w)) == 1
    assert np.count_nonzero(col(g.S["e22"], idx(s, "b^2 e"))) == 0
    assert col(g.P["v0"], w)[w] == 1
    assert col(g.P["v0"], idx(s, "b^0 e"))[idx(s, "b^0 e")] == 0


def test_projections_match_sources():
    s = space(3, 3)
    g = build_generators(s)
    for v, P in g.P.items():
        expect = np.array([f"v{p.source}" == v for p in s.basis], dtype=float)
        assert np.array_equal(P.diagonal().real, expect)


def test_compression_at_cutoff():
    s = space(1, 3)
    g = build_generators(s)
    top = idx(s, "e11^3 e10", {})
    assert np.count_nonzero(col(g.S["e11"], top)) == 0


def test_partial_isometries_on_interior():
    s = space(2, 5)
    g = build_generators(s)
    for e in s.graph.edges:
        S = g.S[e.id]
        assert residual(S.conj().T @ S - g.P[e.dst], s.interior(1)) == 0.0


def test_aggregate_shift_e2():
    s = space(2, 4)
    g = build_generators(s)
    assert (aggregate_shift(g, 1) - g.S["e11"] - g.S["e10"]).count_nonzero() == 0
    assert (aggregate_shift(g, 2) - g.S["e22"] - g.S["e21"] - g.S["e20"]).count_nonzero() == 0
    with pytest.raises(ValueError):
        aggregate_shift(g, 3)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_aggregate_shift_identities(n):
    s = space(n, 4)
    g = build_generators(s)
    Sn = aggregate_shift(g, n)
    assert residual(Sn.conj().T @ Sn - g.identity(), s.interior(1)) == 0.0
    for i in range(1, n + 1):
        Si = aggregate_shift(g, i)
        psum = sum(g.P[f"v{j}"] for j in range(i + 1))
        assert residual(Si.conj().T @ Si - psum, s.interior(1)) == 0.0


def test_unilateral_shift_picture():
    s = space(1, 5)
    S = aggregate_shift(build_generators(s), 1).toarray()
    shift = np.eye(s.dim, k=-1)
    interior = s.interior(1)
    assert np.array_equal(S[:, interior], shift[:, interior])


# --- weighted shifts ---------------------------------------------------------


def test_z1_on_sink():
    q = 0.5
    s = space(2, 4)
    z1 = weighted_shift(build_generators(s), 1, q)
    c = col(z1, idx(s, "v0"))
    assert c[idx(s, "b^0 e")] == pytest.approx(math.sqrt(1 - q), abs=1e-15)
    assert np.count_nonzero(np.abs(c) > 1e-15) == 1


def test_z2_weights():
    q = 0.5
    s = space(2, 4)
    z2 = weighted_shift(build_generators(s), 2, q)
    assert col(z2, idx(s, "a^0 d"))[idx(s, "a^1 d")] == pytest.approx(SQRT_075, abs=1e-14)
    assert col(z2, idx(s, "a^1 d"))[idx(s, "a^2 d")] == pytest.approx(SQRT_0875, abs=1e-14)
    for m in range(3):
        expect = math.sqrt(1 - q ** (m + 2))
        assert col(z2, idx(s, f"a^{m} d"))[idx(s, f"a^{m + 1} d")] == pytest.approx(expect, abs=1e-14)


def test_z2_explicit_series():
    """The operator equals the lambda-series summed with dense matrix powers."""
    q = 0.3
    s = space(2, 3)
    g = build_generators(s)
    S = aggregate_shift(g, 2).toarray()
    dense = sum(
        lambda_coeff(k, q) * np.linalg.matrix_power(S, k + 1) @ np.linalg.matrix_power(S.conj().T, k)
        for k in range(s.cutoff + 2)
    )
    assert np.allclose(weighted_shift(g, 2, q).toarray(), dense, atol=1e-14)


@pytest.mark.parametrize("q", [0.3, 0.5, 0.9])
def test_disc_representation(q):
    s = space(1, 6)
    z = weighted_shift(build_generators(s), 1, q).toarray()
    for i in range(s.dim - 1):
        col_ = z[:, i]
        assert col_[i + 1] == pytest.approx(math.sqrt(1 - q ** (i + 1)), abs=1e-14)
        assert np.count_nonzero(np.abs(col_) > 1e-15) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_z_supported_in_corner(n):
    s = space(n, 3)
    g = build_generators(s)
    for i in range(1, n + 1):
        z = weighted_shift(g, i, 0.5)
        Q = sum(g.P[f"v{j}"] for j in range(i + 1))
        assert (Q @ z @ Q - z).count_nonzero() == 0


def test_z_adjoint_formula():
    q = 0.5
    s = space(2, 4)
    zs = weighted_shift(build_generators(s), 2, q).conj().T.toarray()
    assert zs[idx(s, "a^1 d"), idx(s, "a^2 d")] == pytest.approx(math.sqrt(1 - q**3), abs=1e-14)
    assert zs[idx(s, "v0"), idx(s, "a^0 d")] == pytest.approx(math.sqrt(1 - q), abs=1e-14)


# --- irreps ------------------------------------------------------------------


def test_list_irreps():
    fams = list_irreps(2)
    assert [f.name for f in fams] == ["pi", "eps[k=1]", "sigma"]
    assert [f.is_circle for f in fams] == [False, True, True]
    assert len(list_irreps(1)) == 2
    assert len(list_irreps(4)) == 5
    assert sum(f.is_circle for f in list_irreps(4)) == 4


def test_pi_irrep_n1_is_disc():
    r = build_irrep(PiRep(), 1, 0.5, 6)
    assert r.dim == 8 and r.faithful
    assert np.allclose(r.x[0].toarray(), weighted_shift(r.gens, 1, 0.5).toarray())


def test_epsilon_e2():
    q = 0.5
    theta = 0.4
    r = build_irrep(EpsilonRep(1, theta), 2, q, 4)
    labels = r.labels(L2)
    assert labels[0] == "v1" and not any("b" in s for s in labels)
    v = labels.index("v1")
    x1, x2 = r.x[0].toarray(), r.x[1].toarray()
    assert x1[v, v] == pytest.approx(np.exp(1j * theta))
    assert np.count_nonzero(x1) == 1
    assert x2[labels.index("a^0 c"), v] == pytest.approx(math.sqrt(1 - q))
    for m in range(3):
        assert x2[labels.index(f"a^{m + 1} c"), labels.index(f"a^{m} c")] == pytest.approx(math.sqrt(1 - q ** (m + 2)))


def test_epsilon_lower_x_vanish():
    r = build_irrep(EpsilonRep(2, 1.0), 4, 0.5, 3)
    assert r.x[0].count_nonzero() == 0
    assert r.P(0).count_nonzero() == 0 and r.P(1).count_nonzero() == 0


def test_sigma():
    theta = 2.2
    r = build_irrep(SigmaRep(theta), 3, 0.7, 6)
    assert r.dim == 1
    t = r.x[2].toarray()[0, 0]
    assert abs(t) == pytest.approx(1.0)
    assert (t.conjugate() * t - 0.7 * t * t.conjugate()).real == pytest.approx(0.3)
    assert r.x[0].count_nonzero() == 0 and r.x[1].count_nonzero() == 0


def test_build_irrep_errors():
    with pytest.raises(ValueError):
        build_irrep(EpsilonRep(2, 0.0), 2, 0.5, 4)
    with pytest.raises(ValueError):
        build_irrep(EpsilonRep(0, 0.0), 2, 0.5, 4)
    with pytest.raises(ValueError):
        build_irrep(PiRep(), 2, 1.2, 4)


# --- words -> operators ------------------------------------------------------


def test_evaluate_projection_and_unit():
    s = space(2, 3)
    g = build_generators(s)
    for v in s.graph.vertices:
        assert (evaluate_word(WordExpr.projection(s.graph, v), g) - g.P[v]).count_nonzero() == 0
    assert (evaluate_word(WordExpr.unit(s.graph), g) - g.identity()).count_nonzero() == 0


def test_evaluate_matrix_unit():
    s = space(2, 3)
    g = build_generators(s)
    u = evaluate_word(parse_expr(s.graph, "S[c] S[b]*", L2), g).toarray()
    # S_c S_b^* sends b^m e to c b^(m-1) e
    assert u[idx(s, "a^0 c b^0 e"), idx(s, "b^1 e")] == 1
    assert u[:, idx(s, "b^0 e")].sum() == 0


def test_evaluate_rejects_other_graph():
    with pytest.raises(GraphError):
        evaluate_word(WordExpr.unit(ball_graph(1)), build_generators(space(2, 2)))


# --- export and determinism --------------------------------------------------


def test_export_coo_roundtrip():
    r = build_irrep(PiRep(), 2, 0.5, 3)
    text = export_coo(r.x[1])
    rows, cols, vals = [], [], []
    for line in text.splitlines():
        a, b, re_, im = line.split()
        rows.append(int(a))
        cols.append(int(b))
        vals.append(complex(float(re_), float(im)))
    back = sp.csr_matrix((vals, (rows, cols)), shape=r.x[1].shape)
    assert (back - r.x[1]).count_nonzero() == 0


def test_basis_manifest():
    s = space(2, 2)
    lines = basis_manifest(s.basis, L2).splitlines()
    assert len(lines) == 16 and lines[0] == "v0" and "a^0 c b^0 e" in lines


def test_deterministic_matrices():
    a = build_irrep(EpsilonRep(1, 0.3), 3, 0.5, 4)
    b = build_irrep(EpsilonRep(1, 0.3), 3, 0.5, 4)
    for x, y in zip(a.x, b.x):
        assert export_coo(x) == export_coo(y)


def test_interior_bounds():
    s = space(2, 3)
    assert s.interior(0).all()
    assert s.interior(3).sum() == 4  # v0, b^0 e, a^0 d, a^0 c b^0 e
    with pytest.raises(ValueError):
        s.interior(4)
    assert s.index[LoopEncodedPath((), 0)] == 0
