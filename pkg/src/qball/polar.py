"""Modulus, corner inverse and phase of truncated operators.

Every corner used here is cut out by a projection that is diagonal in the
path basis.  Moduli are computed either from the diagonal of ``T^*T`` (all
weighted shifts) or by Hermitian eigendecomposition of each connected block
of ``T^*T``; :func:`modulus` cross-checks the two when both apply.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

__all__ = [
    "PolarError",
    "CornerContext",
    "modulus",
    "modulus_diagonal",
    "modulus_eigh",
    "corner_inverse",
    "phase_in_corner",
]

DTYPE = np.complex128
SINGULAR = 1e-10


class PolarError(ValueError):
    """The operator has no polar decomposition inside the requested corner."""


@dataclass(frozen=True)
class CornerContext:
    """A basis-diagonal projection ``P`` plus the vectors on which exactness is claimed.

    ``interior`` defaults to every basis vector.
    """

    mask: np.ndarray
    interior: np.ndarray | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "mask", np.asarray(self.mask, dtype=bool))
        if self.interior is not None:
            interior = np.asarray(self.interior, dtype=bool)
            if interior.shape != self.mask.shape:
                raise ValueError("interior mask has the wrong length")
            object.__setattr__(self, "interior", interior)

    @classmethod
    def from_projection(
        cls, p: sp.spmatrix, interior: np.ndarray | None = None, *, tol: float = 1e-9
    ) -> CornerContext:
        """Snap a numerically computed basis-diagonal projection to its 0/1 mask."""
        p = sp.csr_matrix(p)
        diag = p.diagonal()
        off = (p - sp.diags(diag)).tocsr()
        off_max = abs(off).max() if off.nnz else 0.0
        ones = np.abs(diag - 1) <= tol
        if off_max > tol or not np.all(ones | (np.abs(diag) <= tol)):
            raise PolarError("corner projection must be diagonal with 0/1 entries")
        return cls(ones, interior)

    @property
    def dim(self) -> int:
        return self.mask.size

    @property
    def projection(self) -> sp.csr_matrix:
        return sp.diags(self.mask.astype(DTYPE), format="csr")

    @property
    def claimed(self) -> np.ndarray:
        """Selected vectors on which the inverse must be exact."""
        return self.mask if self.interior is None else self.mask & self.interior


def _is_diagonal(a: sp.spmatrix) -> bool:
    coo = sp.coo_matrix(a)
    off = coo.row != coo.col
    return not np.any(coo.data[off] != 0)


def modulus_diagonal(t: sp.spmatrix) -> sp.csr_matrix:
    """Entrywise square root of ``T^*T``; valid only when ``T^*T`` is diagonal."""
    t = sp.csr_matrix(t)
    h = (t.conj().T @ t).tocsr()
    if not _is_diagonal(h):
        raise PolarError("T^*T is not diagonal in the path basis")
    d = np.sqrt(np.clip(h.diagonal().real, 0.0, None))
    return sp.diags(d.astype(DTYPE), format="csr")


def _blocks(h: sp.csr_matrix) -> list[np.ndarray]:
    pattern = (abs(h) + abs(h).T).tocsr()
    _, labels = connected_components(pattern, directed=False)
    order = np.argsort(labels, kind="stable")
    splits = np.flatnonzero(np.diff(labels[order])) + 1
    return np.split(order, splits)


def _block_function(h: sp.csr_matrix, f) -> sp.csr_matrix:
    """Apply ``f`` to the eigenvalues of the Hermitian ``h`` block by block.

    Blocks of equal size are stacked and diagonalized in one batched call.
    """
    n = h.shape[0]
    by_size: dict[int, list[np.ndarray]] = {}
    for idx in _blocks(h):
        by_size.setdefault(idx.size, []).append(idx)
    rows, cols, vals = [], [], []
    for size, group in sorted(by_size.items()):
        idx = np.stack(group)                                   # (k, s)
        r = np.repeat(idx, size, axis=1).ravel()
        c = np.tile(idx, (1, size)).ravel()
        block = np.asarray(h[r, c]).reshape(len(group), size, size)
        w, v = np.linalg.eigh(0.5 * (block + np.conj(np.swapaxes(block, 1, 2))))
        fb = np.einsum("kij,kj,klj->kil", v, f(w), np.conj(v))
        rows.append(r)
        cols.append(c)
        vals.append(fb.ravel())
    out = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n), dtype=DTYPE
    )
    out.eliminate_zeros()
    return out


def modulus_eigh(t: sp.spmatrix) -> sp.csr_matrix:
    """``(T^*T)^(1/2)`` by eigendecomposition of each connected block."""
    t = sp.csr_matrix(t)
    h = (t.conj().T @ t).tocsr()
    return _block_function(h, lambda w: np.sqrt(np.clip(w, 0.0, None)))


def modulus(t: sp.spmatrix, *, crosscheck: bool = True, tol: float = 1e-10) -> sp.csr_matrix:
    """Positive square root of ``T^*T``.

    Takes the diagonal route when ``T^*T`` is diagonal and, with
    ``crosscheck``, asserts agreement with the eigendecomposition route.
    """
    t = sp.csr_matrix(t)
    h = (t.conj().T @ t).tocsr()
    if not _is_diagonal(h):
        return modulus_eigh(t)
    fast = modulus_diagonal(t)
    if crosscheck:
        slow = modulus_eigh(t)
        gap = abs(fast - slow).max() if fast.nnz or slow.nnz else 0.0
        if gap > tol:
            raise AssertionError(f"modulus routes disagree by {gap:.3e}")
    return fast


def _check_in_corner(a: sp.spmatrix, ctx: CornerContext, what: str) -> sp.csr_matrix:
    a = sp.csr_matrix(a)
    if a.shape != (ctx.dim, ctx.dim):
        raise ValueError(f"{what} has shape {a.shape}, corner has dimension {ctx.dim}")
    p = ctx.projection
    leak = a - p @ a @ p
    if leak.count_nonzero() and abs(leak).max() > 0:
        raise PolarError(f"{what} is not supported in the corner")
    return a


def corner_inverse(a: sp.spmatrix, ctx: CornerContext, *, tol: float = 1e-10) -> sp.csr_matrix:
    """``B = PBP`` with ``AB = BA = P`` on the claimed vectors of the corner.

    Eigenvalues (or diagonal entries) below ``SINGULAR`` are left uninverted;
    if one of them touches a claimed vector a :class:`PolarError` names it.
    """
    a = _check_in_corner(a, ctx, "operator")
    sel = ctx.mask
    if _is_diagonal(a):
        diag = a.diagonal()
        inv = np.zeros_like(diag, dtype=DTYPE)
        ok = sel & (np.abs(diag) > SINGULAR)
        bad = np.flatnonzero(ctx.claimed & ~ok)
        if bad.size:
            raise PolarError(f"not invertible in the corner at basis vector {int(bad[0])}")
        inv[ok] = 1.0 / diag[ok]
        return sp.diags(inv, format="csr")

    p = ctx.projection
    h = (p @ a @ p).tocsr()
    b = _block_function(h, lambda w: np.where(np.abs(w) > SINGULAR, 1.0 / np.where(w == 0, 1, w), 0.0))
    b = (p @ b @ p).tocsr()
    defect = (a @ b - p).tocsc()
    cols = np.flatnonzero(ctx.claimed)
    if cols.size:
        norms = np.sqrt(np.asarray(abs(defect[:, cols]).power(2).sum(axis=0)).ravel())
        worst = int(np.argmax(norms))
        if norms[worst] > tol:
            raise PolarError(f"not invertible in the corner at basis vector {int(cols[worst])}")
    return b


def phase_in_corner(t: sp.spmatrix, ctx: CornerContext) -> sp.csr_matrix:
    """``U = T |T|~`` where ``|T|~`` inverts ``|T|`` inside the corner."""
    t = _check_in_corner(t, ctx, "operator")
    u = (t @ corner_inverse(modulus(t), ctx)).tocsr()
    u.eliminate_zeros()
    return u
