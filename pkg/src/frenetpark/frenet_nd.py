"""Generalized Frenet frame for n-phase trajectories.

The frame is built by Gram-Schmidt on the derivative stack (v, v', v'', ...),
with degenerate steps skipped. Missing directions are filled from the
zero-sequence axis and then the canonical basis, and the last vector is the
Hodge complement of the others.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import geometry as geo

RANK_TOL = 1e-8


@dataclass
class GeneralizedFrame:
    vectors: np.ndarray  # (n, n), row i is f_{i+1}
    rank: int
    chi: np.ndarray = field(default=None)
    omega_chi: np.ndarray = field(default=None)

    def __post_init__(self):
        n = self.dim
        if self.chi is None:
            self.chi = np.zeros(n - 1)
        if self.omega_chi is None:
            self.omega_chi = np.zeros(n - 1)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]


def _orthogonalize(x: np.ndarray, basis: Sequence[np.ndarray]) -> np.ndarray:
    # two passes of modified Gram-Schmidt keep the residual orthogonal to 1e-16
    e = x.copy()
    for _ in range(2):
        for q in basis:
            e -= np.dot(q, e) * q
    return e


def _fill_candidates(n: int):
    yield np.full(n, 1.0 / np.sqrt(n))
    yield from np.eye(n)


def gram_schmidt_frame(derivs: Sequence, rank_tol: float = RANK_TOL, eps_v: float = 0.0) -> GeneralizedFrame:
    """Generalized Frenet frame from ``derivs = [v, v', v'', ...]``.

    At most ``n`` derivative vectors are used. Retained Gram-Schmidt steps
    give ``f_1 .. f_{n-1}``; step ``h`` is degenerate when its residual is at
    most ``rank_tol * |derivs[h]|``. ``rank`` counts the retained steps, the
    n-th derivative included, so a full-rank curve reports ``rank == n``.

    The generalized frequencies are evaluated pointwise from the derivative
    stack; directions past the first degenerate step carry zero.
    """
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    vecs = [geo.as_phase_vector(d, f"derivs[{i}]") for i, d in enumerate(derivs)]
    if not vecs:
        raise ValueError("need at least one derivative vector")
    n = vecs[0].size
    for d in vecs[1:]:
        if d.size != n:
            raise geo.GeometryError(f"dimension mismatch: {d.size} vs {n}")
    if len(vecs) > n:
        raise ValueError(f"at most {n} derivative vectors for dim {n}, got {len(vecs)}")
    v_norm = float(np.linalg.norm(vecs[0]))
    if v_norm <= eps_v or v_norm == 0.0:
        raise geo.DegenerateDirectionError("zero voltage: the frame is undefined")

    frame: list[np.ndarray] = []
    sizes: list[float] = []
    rank = 0
    first_skip = None
    for h, d in enumerate(vecs):
        e = _orthogonalize(d, frame)
        size = float(np.linalg.norm(e))
        if size <= rank_tol * float(np.linalg.norm(d)) or size == 0.0:
            if first_skip is None:
                first_skip = h
            continue
        rank += 1
        if len(frame) < n - 1:
            frame.append(e / size)
            sizes.append(size)

    for c in _fill_candidates(n):
        if len(frame) >= n - 1:
            break
        e = _orthogonalize(c, frame)
        size = float(np.linalg.norm(e))
        if size > 1e-6:
            frame.append(e / size)

    last = geo.hodge_complement(frame)
    frame.append(last / np.linalg.norm(last))
    vectors = np.vstack(frame)

    # f_i' . f_{i+1} = (x^(i+1) . f_{i+1}) / |e_i| while steps 1..i+1 are all retained
    consecutive = len(vecs) if first_skip is None else first_skip
    omega = np.zeros(n - 1)
    for i in range(min(n - 1, consecutive - 1)):
        omega[i] = np.dot(vecs[i + 1], vectors[i + 1]) / sizes[i]
    return GeneralizedFrame(vectors=vectors, rank=rank, chi=omega / v_norm, omega_chi=omega)


def align_frames(frames) -> np.ndarray:
    """Flip frame vectors so each one points like its predecessor in time."""
    F = np.array(frames, dtype=float)
    for k in range(1, F.shape[0]):
        if not (np.all(np.isfinite(F[k])) and np.all(np.isfinite(F[k - 1]))):
            continue
        signs = np.sign(np.einsum("ij,ij->i", F[k], F[k - 1]))
        signs[signs == 0] = 1.0
        F[k] *= signs[:, None]
    return F


class FrameAlignmentError(ValueError):
    pass


def generalized_invariants(frames, s_dot, dt: float, ranks=None):
    """Generalized frequencies and curvatures along a frame path.

    ``omega_chi[k, i] = f_i'(k) . f_{i+1}(k)`` with ``f_i'`` by central
    difference, and ``chi = omega_chi / s_dot``. Entries with ``i + 1 >=
    ranks[k]`` are flat directions and set to zero. Endpoint rows are NaN.

    Returns ``(chi, omega_chi)``, each of shape (k, n - 1).
    """
    F = np.asarray(frames, dtype=float)
    s = np.asarray(s_dot, dtype=float)
    if F.ndim != 3 or F.shape[1] != F.shape[2]:
        raise ValueError(f"frames must have shape (k, n, n), got {F.shape}")
    k, n, _ = F.shape
    if k < 3:
        raise ValueError(f"need at least 3 samples, got {k}")
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")

    with np.errstate(invalid="ignore"):
        overlap = np.einsum("kij,kij->ki", F[1:], F[:-1])
    bad = np.argwhere(overlap < 0)
    if bad.size:
        step, vec = bad[0]
        raise FrameAlignmentError(
            f"f_{vec + 1} flips sign between samples {step} and {step + 1}; "
            "call align_frames first"
        )

    omega = np.full((k, n - 1), np.nan)
    dF = (F[2:] - F[:-2]) / (2.0 * dt)
    omega[1:-1] = np.einsum("kij,kij->ki", dF[:, :-1, :], F[1:-1, 1:, :])
    if ranks is not None:
        r = np.asarray(ranks)
        flat = np.arange(n - 1)[None, :] + 1 >= r[:, None]
        omega[1:-1][flat[1:-1]] = 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        chi = omega / s[:, None]
    return chi, omega


def frame_rotation(omega_chi) -> np.ndarray:
    """Tridiagonal skew matrix Ω_χ with F' = Ω_χ F."""
    w = np.asarray(omega_chi, dtype=float)
    n = w.size + 1
    m = np.zeros((n, n))
    idx = np.arange(n - 1)
    m[idx, idx + 1] = w
    m[idx + 1, idx] = -w
    return m
