"""Frenet frame of a three-phase voltage trajectory.

The voltage is treated as the velocity of a space curve (the negated flux
linkage), so the frame, curvature and torsion follow from ``v``, ``v'`` and
``v''``. Frame matrices are stacked row-wise as (T, N, B).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import geometry as geo
from .park import park_matrix, park_rotation

EPS_KAPPA = 1e-9


@dataclass(frozen=True)
class DerivativeBundle:
    v: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    v3: Optional[np.ndarray] = None

    def __post_init__(self):
        names = ("v", "v1", "v2", "v3")
        vecs = [getattr(self, k) for k in names]
        dim = None
        for name, vec in zip(names, vecs):
            if vec is None:
                continue
            arr = geo.as_phase_vector(vec, name)
            if dim is not None and arr.size != dim:
                raise geo.GeometryError(f"{name} has dim {arr.size}, expected {dim}")
            dim = arr.size
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.v.size


@dataclass(frozen=True)
class FrenetState:
    s_dot: float
    defined: bool
    T: Optional[np.ndarray] = None
    N: Optional[np.ndarray] = None
    B: Optional[np.ndarray] = None
    kappa: float = 0.0
    tau: float = 0.0
    omega_kappa: float = 0.0
    omega_tau: float = 0.0
    darboux: np.ndarray = field(default_factory=lambda: np.zeros(3))

    @property
    def matrix(self) -> np.ndarray:
        if not self.defined:
            raise geo.GeometryError("Frenet frame is undefined at this sample")
        return np.vstack([self.T, self.N, self.B])

    @property
    def rotation(self) -> np.ndarray:
        return frenet_rotation(self.omega_kappa, self.omega_tau)


def frenet_rotation(omega_kappa: float, omega_tau: float) -> np.ndarray:
    """Ω_F: the skew matrix with F' = Ω_F F."""
    return np.array(
        [
            [0.0, omega_kappa, 0.0],
            [-omega_kappa, 0.0, omega_tau],
            [0.0, -omega_tau, 0.0],
        ]
    )


def frenet3(bundle: DerivativeBundle, eps_v: float = 0.0, eps_kappa: float = EPS_KAPPA) -> FrenetState:
    """Frenet frame and invariants of one sample.

    Degenerate samples come back with ``defined=False`` instead of raising:
    ``|v| <= eps_v`` leaves only ``s_dot``; a vanishing ``v x v'`` keeps T but
    reports zero curvature.
    """
    if bundle.dim != 3:
        raise geo.GeometryError(
            f"frenet3 needs a 3-phase bundle, got dim {bundle.dim}; use frenet_nd"
        )
    v, v1, v2 = bundle.v, bundle.v1, bundle.v2
    speed = geo.norm(v)
    if speed <= eps_v or speed == 0.0:
        return FrenetState(s_dot=speed, defined=False)
    T = v / speed
    vxv1 = geo.cross(v, v1)
    area = geo.norm(vxv1)
    if area <= eps_kappa * speed * geo.norm(v1) or area == 0.0:
        return FrenetState(s_dot=speed, defined=False, T=T)

    # divisions are chained so that squares of small magnitudes never form
    B = vxv1 / area
    N = geo.cross(B, T)
    omega_kappa = area / speed / speed
    kappa = omega_kappa / speed
    tau = float(np.dot(v, geo.cross(v1, v2))) / area / area
    omega_tau = speed * tau
    return FrenetState(
        s_dot=speed,
        defined=True,
        T=T,
        N=N,
        B=B,
        kappa=kappa,
        tau=tau,
        omega_kappa=omega_kappa,
        omega_tau=omega_tau,
        darboux=omega_tau * T + omega_kappa * B,
    )


@dataclass
class FrenetSeries:
    """Per-sample Frenet output for a whole trajectory (arrays along axis 0)."""

    s_dot: np.ndarray
    defined: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    omega_kappa: np.ndarray
    omega_tau: np.ndarray

    @property
    def frames(self) -> np.ndarray:
        return np.stack([self.T, self.N, self.B], axis=1)

    @property
    def darboux(self) -> np.ndarray:
        return self.omega_tau[:, None] * self.T + self.omega_kappa[:, None] * self.B

    def __len__(self) -> int:
        return self.s_dot.size


def frenet_series(v, v1, v2, eps_v: float = 0.0, eps_kappa: float = EPS_KAPPA) -> FrenetSeries:
    """Vectorised :func:`frenet3` over (k, 3) arrays.

    Undefined samples carry NaN in every field except ``s_dot`` (and ``T``
    when only the curvature is degenerate).
    """
    v, v1, v2 = (np.asarray(a, dtype=float) for a in (v, v1, v2))
    if v.ndim != 2 or v.shape[1] != 3:
        raise geo.GeometryError(f"frenet_series needs (k, 3) arrays, got {v.shape}")
    if v1.shape != v.shape or v2.shape != v.shape:
        raise geo.GeometryError("derivative arrays must match the voltage array shape")
    # boundary samples of finite-difference derivatives arrive as NaN
    finite = np.all(np.isfinite(v1), axis=1) & np.all(np.isfinite(v2), axis=1)

    speed = geo.row_norms(v)
    vxv1 = np.cross(v, v1)
    area = geo.row_norms(vxv1)
    has_tangent = (speed > eps_v) & (speed > 0.0)
    defined = (
        has_tangent
        & finite
        & (area > eps_kappa * speed * geo.row_norms(v1))
        & (area > 0.0)
    )

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        T = np.where(has_tangent[:, None], v / speed[:, None], np.nan)
        B = vxv1 / area[:, None]
        N = np.cross(B, T)
        omega_kappa = area / speed / speed
        kappa = omega_kappa / speed
        tau = np.einsum("ij,ij->i", v, np.cross(v1, v2)) / area / area
        omega_tau = speed * tau

    nan3 = np.full_like(v, np.nan)
    undefined = ~defined
    return FrenetSeries(
        s_dot=speed,
        defined=defined,
        T=T,
        N=np.where(undefined[:, None], nan3, N),
        B=np.where(undefined[:, None], nan3, B),
        kappa=np.where(undefined, np.nan, kappa),
        tau=np.where(undefined, np.nan, tau),
        omega_kappa=np.where(undefined, np.nan, omega_kappa),
        omega_tau=np.where(undefined, np.nan, omega_tau),
    )


def frenet_apply(state: FrenetState, v) -> np.ndarray:
    """Components (T.v, N.v, B.v); equals (|v|, 0, 0) for the generating voltage."""
    v = geo.as_phase_vector(v, "v")
    return state.matrix @ v


def frenet_serret_residual(frames, omega_kappa, omega_tau, dt: float) -> np.ndarray:
    """max-abs entry of F' - Ω_F F per sample, F' by central difference.

    The first and last samples have no stencil and are NaN.
    """
    F = np.asarray(frames, dtype=float)
    wk = np.asarray(omega_kappa, dtype=float)
    wt = np.asarray(omega_tau, dtype=float)
    if F.shape[0] < 3:
        raise ValueError(f"need at least 3 samples, got {F.shape[0]}")
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    out = np.full(F.shape[0], np.nan)
    dF = (F[2:] - F[:-2]) / (2.0 * dt)
    omega = np.zeros((F.shape[0] - 2, 3, 3))
    omega[:, 0, 1] = wk[1:-1]
    omega[:, 1, 0] = -wk[1:-1]
    omega[:, 1, 2] = wt[1:-1]
    omega[:, 2, 1] = -wt[1:-1]
    out[1:-1] = np.max(np.abs(dF - omega @ F[1:-1]), axis=(1, 2))
    return out


def darboux_rotation(state: FrenetState, w) -> np.ndarray:
    """Frame-rotation term of the transformed derivative.

    With ``w = F v`` the identity ``F v' = w' + darboux_rotation(state, w)``
    holds; the term equals Ω_Fᵀ w, i.e. the Darboux vector (in TNB
    coordinates) crossed with ``w``.
    """
    if not state.defined:
        raise geo.GeometryError("Frenet frame is undefined at this sample")
    w = geo.as_phase_vector(w, "w")
    r_tnb = state.matrix @ state.darboux
    return geo.cross(r_tnb, w)


def psi_frame(theta_P: float, F, tol: float = 1e-10) -> np.ndarray:
    """Ψ = P(theta_P) Fᵀ: maps local TNB components onto network dqo ones."""
    F = geo.as_square_matrix(F, "F")
    err = geo.orthonormality_error(F)
    if err > tol:
        raise geo.GeometryError(f"F is not orthonormal (max |FFᵀ - I| = {err:.3e})")
    return park_matrix(theta_P) @ F.T


def psi_rotation(omega_P: float, Psi, Omega_F, tol: float = 1e-9) -> np.ndarray:
    """Ω_Ψ = Ω_P - Ψ Ω_F Ψᵀ."""
    Psi = geo.as_square_matrix(Psi, "Psi")
    Omega_F = geo.as_square_matrix(Omega_F, "Omega_F")
    err = geo.orthonormality_error(Psi)
    if err > tol:
        raise geo.GeometryError(f"Psi is not orthonormal (max |ΨΨᵀ - I| = {err:.3e})")
    scale = max(1.0, float(np.max(np.abs(Omega_F))))
    if not geo.skew_part_check(Omega_F, tol * scale):
        raise geo.GeometryError("Omega_F is not skew-symmetric")
    return park_rotation(omega_P) - Psi @ Omega_F @ Psi.T
