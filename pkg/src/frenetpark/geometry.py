"""Dense vector and matrix primitives shared by the frame modules.

Phase vectors are plain 1-D ``numpy`` arrays; square matrices are 2-D arrays
whose rows are the frame axes.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

EPS_ZERO = 1e-12
EPS_RANK = 1e-9


class GeometryError(ValueError):
    """Raised on dimension mismatches and degenerate geometric inputs."""


class DegenerateDirectionError(GeometryError):
    pass


class RankDeficiencyError(GeometryError):
    def __init__(self, message: str, rank: int):
        super().__init__(message)
        self.rank = rank


def as_phase_vector(u, name: str = "vector") -> np.ndarray:
    """Validate ``u`` as a finite phase vector of dimension >= 2."""
    arr = np.asarray(u, dtype=float)
    if arr.ndim != 1:
        raise GeometryError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < 2:
        raise GeometryError(f"{name} must have dim >= 2, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise GeometryError(f"{name} contains non-finite values")
    return arr


def as_square_matrix(m, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise GeometryError(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise GeometryError(f"{name} contains non-finite values")
    return arr


def _check_same_dim(u: np.ndarray, v: np.ndarray) -> None:
    if u.size != v.size:
        raise GeometryError(f"dimension mismatch: {u.size} vs {v.size}")


def dot(u, v) -> float:
    u = as_phase_vector(u, "u")
    v = as_phase_vector(v, "v")
    _check_same_dim(u, v)
    return float(np.dot(u, v))


def norm(u) -> float:
    """Euclidean norm, scaled so tiny or huge components do not under/overflow."""
    u = as_phase_vector(u)
    m = float(np.max(np.abs(u)))
    if m == 0.0:
        return 0.0
    return m * float(np.linalg.norm(u / m))


def row_norms(a) -> np.ndarray:
    """Scaled Euclidean norm of each row of a (k, n) array; NaN rows stay NaN."""
    a = np.asarray(a, dtype=float)
    m = np.max(np.abs(a), axis=1)
    safe = np.where(m > 0, m, 1.0)
    return m * np.linalg.norm(a / safe[:, None], axis=1)


def cross(u, v) -> np.ndarray:
    """Right-handed cross product of two 3-vectors."""
    u = as_phase_vector(u, "u")
    v = as_phase_vector(v, "v")
    _check_same_dim(u, v)
    if u.size != 3:
        raise GeometryError(
            f"cross product needs dim 3, got {u.size}; use hodge_complement "
            "for higher dimensions"
        )
    return np.array(
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    )


def _zero_threshold(*vectors: np.ndarray) -> float:
    scale = max(float(np.max(np.abs(x))) for x in vectors)
    return EPS_ZERO * scale


def project(u, w) -> np.ndarray:
    """Component of ``w`` along ``u``: ((u.w)/(u.u)) u."""
    u = as_phase_vector(u, "u")
    w = as_phase_vector(w, "w")
    _check_same_dim(u, w)
    # degeneracy is judged against the scale of both operands
    if np.linalg.norm(u) <= _zero_threshold(u, w):
        raise DegenerateDirectionError("cannot project onto a zero-length direction")
    return (np.dot(u, w) / np.dot(u, u)) * u


def hodge_complement(basis: Sequence) -> np.ndarray:
    """Vector orthogonal to ``n - 1`` independent vectors in ``n`` dimensions.

    Computed as the cofactor expansion of the formal determinant whose last
    row holds the unit basis symbols, so ``[basis; result]`` has positive
    determinant. In three dimensions this is ``cross(basis[0], basis[1])``.
    The result is not normalized.
    """
    rows = [as_phase_vector(b, f"basis[{i}]") for i, b in enumerate(basis)]
    if not rows:
        raise GeometryError("hodge_complement needs at least one input vector")
    n = rows[0].size
    for r in rows[1:]:
        _check_same_dim(rows[0], r)
    if len(rows) != n - 1:
        raise GeometryError(f"hodge_complement needs {n - 1} vectors of dim {n}, got {len(rows)}")
    m = np.vstack(rows)

    # numerical rank by Gram-Schmidt residuals
    largest = max(float(np.linalg.norm(r)) for r in rows)
    tol = EPS_RANK * largest
    ortho: list[np.ndarray] = []
    rank = 0
    for r in rows:
        e = r.copy()
        for q in ortho:
            e -= np.dot(q, e) * q
        size = float(np.linalg.norm(e))
        if size > tol:
            ortho.append(e / size)
            rank += 1
    if rank < n - 1:
        raise RankDeficiencyError(
            f"inputs are rank deficient: numerical rank {rank} < {n - 1}", rank
        )

    result = np.empty(n)
    for j in range(n):
        minor = np.delete(m, j, axis=1)
        result[j] = (-1) ** (n - 1 + j) * np.linalg.det(minor)
    return result


def is_orthonormal(m, tol: float) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = as_square_matrix(m)
    return bool(np.max(np.abs(m @ m.T - np.eye(m.shape[0]))) <= tol)


def orthonormality_error(m) -> float:
    m = as_square_matrix(m)
    return float(np.max(np.abs(m @ m.T - np.eye(m.shape[0]))))


def skew_part_check(m, tol: float) -> bool:
    """True when ``m`` is skew-symmetric within ``tol`` (max-abs of M + Mᵀ)."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    m = as_square_matrix(m)
    return bool(np.max(np.abs(m + m.T)) <= tol)
