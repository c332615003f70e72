"""Power-invariant Park/Clarke transforms and attitude-matrix rotations.

Row convention: the d-axis row carries the sines, the q-axis row the cosines,
the zero-sequence row is 1/sqrt(3) everywhere. Many texts put the cosine row
first; this module does not.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import GeometryError, as_phase_vector, orthonormality_error

ALPHA = 2.0 * np.pi / 3.0
OMEGA_0 = 2.0 * np.pi * 60.0

_SQRT_2_3 = np.sqrt(2.0 / 3.0)


@dataclass(frozen=True)
class CylindricalAngles:
    """Bus-voltage phase and rotor angle, both relative to one omega_0 frame."""

    theta_s: float
    delta_r: float
    omega_s: float = OMEGA_0
    omega_r: float = OMEGA_0


def park_angle(omega_samples, dt: float, theta_P0: float = 0.0) -> np.ndarray:
    """Unwrapped Park angle by trapezoidal integration of ``omega_samples``.

    ``theta[0] == theta_P0``; sample ``k`` holds the integral up to ``k * dt``.
    """
    omega = np.asarray(omega_samples, dtype=float)
    if omega.ndim != 1 or omega.size == 0:
        raise ValueError("omega_samples must be a non-empty 1-D series")
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    increments = 0.5 * dt * (omega[1:] + omega[:-1])
    return theta_P0 + np.concatenate(([0.0], np.cumsum(increments)))


def park_matrix(theta_P: float) -> np.ndarray:
    t = float(theta_P)
    return _SQRT_2_3 * np.array(
        [
            [np.sin(t), np.sin(t - ALPHA), np.sin(t + ALPHA)],
            [np.cos(t), np.cos(t - ALPHA), np.cos(t + ALPHA)],
            [np.sqrt(0.5), np.sqrt(0.5), np.sqrt(0.5)],
        ]
    )


def park_matrices(theta_P) -> np.ndarray:
    """Vectorised :func:`park_matrix` over an array of angles, shape (k, 3, 3)."""
    t = np.asarray(theta_P, dtype=float)
    out = np.empty(t.shape + (3, 3))
    for j, shift in enumerate((0.0, -ALPHA, ALPHA)):
        out[..., 0, j] = _SQRT_2_3 * np.sin(t + shift)
        out[..., 1, j] = _SQRT_2_3 * np.cos(t + shift)
    out[..., 2, :] = 1.0 / np.sqrt(3.0)
    return out


def clarke_matrix() -> np.ndarray:
    return park_matrix(0.0)


def park_apply(theta_P: float, v_abc) -> np.ndarray:
    v = as_phase_vector(v_abc, "v_abc")
    if v.size != 3:
        raise GeometryError(f"Park transform needs 3 phases, got {v.size}")
    return park_matrix(theta_P) @ v


def park_rotation(omega_P: float) -> np.ndarray:
    """Skew-symmetric rotation P'Pᵀ of a Park frame spinning at ``omega_P``."""
    m = np.zeros((3, 3))
    m[0, 1] = omega_P
    m[1, 0] = -omega_P
    return m


def dq_derivative(v_dqo_dot, omega_P: float, v_dqo) -> np.ndarray:
    """Park transform of the phase-voltage derivative, P v'_abc.

    Translation term ``v_dqo_dot`` plus the frame-rotation term Ω_Pᵀ v_dqo.
    """
    vd = as_phase_vector(v_dqo_dot, "v_dqo_dot")
    v = as_phase_vector(v_dqo, "v_dqo")
    return vd + park_rotation(omega_P).T @ v


def cylindrical_frame(angles: CylindricalAngles) -> np.ndarray:
    """dq-plane rotation mapping generator dqo coordinates onto network ones.

    Equals ``park_matrix(theta_s) @ park_matrix(delta_r).T``.
    """
    d = angles.theta_s - angles.delta_r
    c, s = np.cos(d), np.sin(d)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def cylindrical_rotation(omega_s: float, omega_r: float) -> np.ndarray:
    return park_rotation(omega_s) - park_rotation(omega_r)


def attitude_rotation(path: Sequence, index: int, dt: float, tol: float = 1e-8) -> np.ndarray:
    """Rotation A'Aᵀ of an attitude-matrix path at ``index`` by central difference.

    Endpoints have no central stencil and raise ``IndexError``.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    n = len(path)
    if not 0 < index < n - 1:
        raise IndexError(f"index {index} has no central-difference stencil in a path of {n}")
    prev, cur, nxt = (np.asarray(path[k], dtype=float) for k in (index - 1, index, index + 1))
    for k, m in zip((index - 1, index, index + 1), (prev, cur, nxt)):
        err = orthonormality_error(m)
        if err > tol:
            raise GeometryError(f"path[{k}] is not orthonormal (max |AAᵀ - I| = {err:.3e})")
    return (nxt - prev) / (2.0 * dt) @ cur.T


def attitude_rotations(path, dt: float) -> np.ndarray:
    """Central-difference A'Aᵀ for every interior sample; endpoints are NaN."""
    a = np.asarray(path, dtype=float)
    out = np.full(a.shape, np.nan)
    if a.shape[0] >= 3:
        deriv = (a[2:] - a[:-2]) / (2.0 * dt)
        out[1:-1] = deriv @ np.swapaxes(a[1:-1], -1, -2)
    return out
