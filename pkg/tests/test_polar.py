import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from qball.graphs import SHORT_LABELS
from qball.polar import (
    CornerContext,
    PolarError,
    corner_inverse,
    modulus,
    modulus_diagonal,
    modulus_eigh,
    phase_in_corner,
)
from qball.representation import PiRep, build_irrep
from qball.verify import residual

L2 = SHORT_LABELS[2]
SQRT_075 = 0.866025403784439


@pytest.fixture(scope="module")
def e2():
    return build_irrep(PiRep(), 2, 0.5, 6)


def corner(rep, i, h=1):
    return CornerContext(rep.Q(i).diagonal().real > 0.5, rep.interior(h))


def test_modulus_of_z1(e2):
    labels = e2.labels(L2)
    m = modulus(e2.x[0]).toarray()
    assert m[0, 0] == pytest.approx(math.sqrt(0.5), abs=1e-15)
    b0 = labels.index("b^0 e")
    assert m[b0, b0] == pytest.approx(SQRT_075, abs=1e-15)


def test_modulus_routes_agree(e2):
    for x in e2.x:
        d = modulus_diagonal(x)
        e = modulus_eigh(x)
        assert abs(d - e).max() < 1e-12


def test_modulus_of_partial_isometry(e2):
    s = e2.S(1)
    m = modulus(s)
    dom = (s.conj().T @ s).tocsr()
    assert abs(m - dom).max() < 1e-14


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_modulus_general_route(seed):
    rng = np.random.default_rng(seed)
    a = sp.random(30, 30, density=0.08, random_state=rng) + 1j * sp.random(30, 30, density=0.08, random_state=rng)
    m = modulus(a).toarray()
    h = (a.conj().T @ a).toarray()
    assert np.allclose(m, m.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(m).min() > -1e-10
    assert np.allclose(m @ m, h, atol=1e-10)


def test_modulus_diagonal_rejects_non_diagonal():
    a = sp.csr_matrix(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(PolarError):
        modulus_diagonal(a)


def test_modulus_of_projection():
    p = sp.diags([1.0, 0.0, 1.0, 1.0]).tocsr()
    assert abs(modulus(p) - p).max() == 0


def test_corner_inverse_of_modulus_z1(e2):
    q = e2.q
    labels = e2.labels(L2)
    ctx = corner(e2, 1)
    inv = corner_inverse(modulus(e2.x[0]), ctx).toarray()
    assert inv[0, 0] == pytest.approx(1 / math.sqrt(1 - q))
    for m in range(4):
        k = labels.index(f"b^{m} e")
        assert inv[k, k] == pytest.approx(1 / math.sqrt(1 - q ** (m + 2)))
    # outside the corner the inverse is zero
    k = labels.index("a^0 d")
    assert inv[k, k] == 0


def test_corner_inverse_of_unit():
    mask = np.array([True, False, True])
    ctx = CornerContext(mask)
    p = ctx.projection
    assert abs(corner_inverse(p, ctx) - p).max() == 0


def test_corner_inverse_identities(e2):
    ctx = corner(e2, 1)
    a = modulus(e2.x[0])
    b = corner_inverse(a, ctx)
    P = ctx.projection
    cols = ctx.claimed
    assert residual(a @ b - P, cols) < 1e-12
    assert residual(b @ a - P, cols) < 1e-12
    assert abs(P @ b @ P - b).max() == 0


def test_corner_inverse_non_diagonal():
    h = np.array([[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 0.0]])
    ctx = CornerContext(np.array([True, True, False]))
    b = corner_inverse(sp.csr_matrix(h), ctx).toarray()
    assert np.allclose(b[:2, :2], np.linalg.inv(h[:2, :2]))


def test_corner_inverse_reports_singular_vector():
    a = sp.diags([1.0, 0.0, 2.0]).tocsr()
    with pytest.raises(PolarError, match="basis vector 1"):
        corner_inverse(a, CornerContext(np.array([True, True, True])))
    # singular only outside the claimed interior: allowed
    ok = corner_inverse(a, CornerContext(np.array([True, True, True]), np.array([True, False, True])))
    assert ok.toarray()[1, 1] == 0


def test_not_in_corner():
    a = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(PolarError):
        corner_inverse(a, CornerContext(np.array([True, False])))


def test_phase_of_disc_is_shift():
    r = build_irrep(PiRep(), 1, 0.3, 6)
    u = phase_in_corner(r.x[0], CornerContext(np.ones(r.dim, bool), r.interior(1)))
    assert residual(u - r.S(1), r.interior(1)) < 1e-12


@pytest.mark.parametrize("i", [1, 2])
def test_phase_e2(e2, i):
    u = phase_in_corner(e2.x[i - 1], corner(e2, i))
    assert residual(u - e2.S(i), e2.interior(1)) < 1e-12
    assert residual(u @ modulus(e2.x[i - 1]) - e2.x[i - 1], e2.interior(1)) < 1e-12
    assert residual(u.conj().T @ u - e2.Q(i), e2.interior(1)) < 1e-12


def test_phase_z1_maps_sink_to_b0e(e2):
    labels = e2.labels(L2)
    u = phase_in_corner(e2.x[0], corner(e2, 1)).toarray()
    assert u[labels.index("b^0 e"), 0] == pytest.approx(1.0)


def test_phase_of_positive_diagonal_is_support():
    d = sp.diags([0.3, 0.0, 2.0, 0.0]).tocsr()
    ctx = CornerContext(np.array([True, False, True, False]))
    assert abs(phase_in_corner(d, ctx) - ctx.projection).max() < 1e-15


def test_from_projection():
    p = sp.diags([1.0, 0.0, 1.0 + 1e-13]).tocsr()
    assert CornerContext.from_projection(p).mask.tolist() == [True, False, True]
    with pytest.raises(PolarError):
        CornerContext.from_projection(sp.diags([0.5, 1.0]))
    with pytest.raises(PolarError):
        CornerContext.from_projection(sp.csr_matrix(np.array([[1.0, 0.1], [0.1, 1.0]])))
