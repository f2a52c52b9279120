"""Dense linear-algebra helpers: minimum-norm least squares, numerical rank,
and ordered matrix products.

Matrices are plain 2-D float64 ``numpy`` arrays.  The least-squares solver
targets possibly rank-deficient systems: it factors ``A P = Q R`` with column
pivoting, decides the rank from the diagonal of ``R`` at a fixed threshold,
and completes the factorization to return the minimum-l2-norm solution.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

# Rank cutoff: a pivot counts toward the rank while |R_kk| exceeds this
# fraction of the largest column norm of the input.
RANK_THRESHOLD = 1e-10


class NonFiniteError(ValueError):
    """Input contains NaN or infinite entries."""


class DimensionMismatchError(ValueError):
    """Operands have incompatible shapes."""


def _as_matrix(a, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise DimensionMismatchError(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteError(f"{name} has non-finite entries")
    return a


def numerical_rank(a) -> int:
    """Rank of ``a`` from a column-pivoted QR, with pivots below
    ``RANK_THRESHOLD * max column norm`` treated as zero."""
    a = _as_matrix(a, "a")
    if a.size == 0:
        return 0
    col_norms = np.linalg.norm(a, axis=0)
    scale = col_norms.max()
    if scale == 0.0:
        return 0
    r = scipy.linalg.qr(a, mode="r", pivoting=True)[0]
    diag = np.abs(np.diag(r))
    return int(np.sum(diag > RANK_THRESHOLD * scale))


def min_norm_least_squares(a, b) -> tuple[np.ndarray, float, int]:
    """Minimum-norm solution of ``min ||a x - b||_2``.

    Backed by the LAPACK complete-orthogonal solver (column-pivoted QR,
    ``gelsy``); pivots below ``RANK_THRESHOLD`` relative to the leading one
    (the largest column norm) do not count toward the rank.

    Returns ``(x, residual_norm, rank)``.
    """
    a = _as_matrix(a, "a")
    b = np.asarray(b, dtype=float).reshape(-1)
    if not np.all(np.isfinite(b)):
        raise NonFiniteError("b has non-finite entries")
    m, n = a.shape
    if b.shape[0] != m:
        raise DimensionMismatchError(f"b has length {b.shape[0]}, expected {m}")

    col_norms = np.linalg.norm(a, axis=0) if a.size else np.zeros(n)
    scale = col_norms.max() if n else 0.0
    if n == 0 or scale == 0.0:
        return np.zeros(n), float(np.linalg.norm(b)), 0

    x, _, rank, _ = scipy.linalg.lstsq(
        a, b, cond=RANK_THRESHOLD, lapack_driver="gelsy"
    )
    residual = float(np.linalg.norm(a @ x - b))
    return x, residual, int(rank)


def matrix_product_accumulate(mats, size: int | None = None) -> np.ndarray:
    """Left-to-right product of ``mats``; an empty list yields the identity
    (``size`` must then be given)."""
    mats = list(mats)
    if not mats:
        if size is None:
            raise DimensionMismatchError("empty product needs an explicit size")
        return np.eye(size)
    out = _as_matrix(mats[0], "mats[0]")
    for i, m in enumerate(mats[1:], start=1):
        m = _as_matrix(m, f"mats[{i}]")
        if out.shape[1] != m.shape[0]:
            raise DimensionMismatchError(
                f"cannot multiply {out.shape} by {m.shape}"
            )
        out = out @ m
    return out
