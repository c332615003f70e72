"""Series-level pipelines behind the CLI: dqo/TNB analysis, Park-vs-Frenet
comparison and the n-phase generalized analysis."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import geometry as geo
from .frenet import EPS_KAPPA, FrenetSeries, frenet_series
from .frenet_nd import RANK_TOL, align_frames, gram_schmidt_frame
from .park import OMEGA_0, park_angle, park_matrices, park_rotation
from .signals import SampledSeries, WaveformScenario, derivatives, finite_difference_stack

EPS_V_REL = 1e-6


def derivative_stack(
    series: SampledSeries,
    max_order: int,
    scenario: Optional[WaveformScenario] = None,
    allow_high_order: bool = False,
) -> List[np.ndarray]:
    """[v, v', ..., v^(max_order)]; analytic when a scenario is given."""
    if scenario is not None:
        d = derivatives(scenario, series.times, max_order)
        return [d[k] for k in range(max_order + 1)]
    if all(k in series.channels for k in range(1, max_order + 1)):
        return [series.samples] + [series.channels[k] for k in range(1, max_order + 1)]
    return finite_difference_stack(series, max_order, allow_high_order)


def eps_v_for(series: SampledSeries, eps_v_rel: float = EPS_V_REL, nominal: Optional[float] = None) -> float:
    if nominal is None:
        nominal = float(np.max(np.linalg.norm(series.samples, axis=1)))
    return eps_v_rel * nominal


def park_angles(series: SampledSeries, park_omega: float, theta_P0: float) -> np.ndarray:
    # angle integrated from t = 0, so shift by the series start time
    omega = np.full(len(series), float(park_omega))
    return park_angle(omega, series.dt, theta_P0 + park_omega * series.t0)


@dataclass
class Analysis3:
    t: np.ndarray
    frenet: FrenetSeries
    v_tnb: np.ndarray
    v_dqo: np.ndarray
    theta_P: np.ndarray

    def rows(self, v_base: Optional[float] = None, omega_base: float = OMEGA_0):
        """CSV rows t,defined,vmag,w_kappa,w_tau,vT,vN,vB,vd,vq,vo."""
        vs = 1.0 / v_base if v_base else 1.0
        ws = 1.0 / omega_base if v_base else 1.0
        fr = self.frenet
        for k in range(self.t.size):
            ok = bool(fr.defined[k])
            nan = float("nan")
            inv = [fr.s_dot[k] * vs, fr.omega_kappa[k] * ws, fr.omega_tau[k] * ws] if ok else [fr.s_dot[k] * vs, nan, nan]
            tnb = list(self.v_tnb[k] * vs) if ok else [nan] * 3
            yield [float(self.t[k]), int(ok)] + [float(x) for x in inv + tnb + list(self.v_dqo[k] * vs)]


HEADER_3 = ["t", "defined", "vmag", "w_kappa", "w_tau", "vT", "vN", "vB", "vd", "vq", "vo"]


def analyze3(
    series: SampledSeries,
    stack: List[np.ndarray],
    park_omega: float = OMEGA_0,
    theta_P0: float = 0.0,
    eps_v: float = 0.0,
    eps_kappa: float = EPS_KAPPA,
) -> Analysis3:
    if series.dim != 3:
        raise geo.GeometryError(f"dqo/TNB analysis needs 3 phases, got {series.dim}; use nd-analyze")
    v, v1, v2 = stack[0], stack[1], stack[2]
    fr = frenet_series(v, v1, v2, eps_v=eps_v, eps_kappa=eps_kappa)
    v_tnb = np.einsum("kij,kj->ki", fr.frames, v)
    theta = park_angles(series, park_omega, theta_P0)
    v_dqo = np.einsum("kij,kj->ki", park_matrices(theta), v)
    return Analysis3(series.times, fr, v_tnb, v_dqo, theta)


@dataclass
class Comparison:
    t: np.ndarray
    defined: np.ndarray
    deviation: np.ndarray  # max over rows of |P_i - F_i|
    psi_rotation: np.ndarray  # (k, 3, 3)

    def summary(self) -> dict:
        ok = self.defined
        dev = self.deviation[ok]
        psi = np.max(np.abs(self.psi_rotation[ok]), axis=(1, 2))
        return {
            "samples": int(self.t.size),
            "defined": int(ok.sum()),
            "deviation_max": float(dev.max()) if dev.size else float("nan"),
            "deviation_mean": float(dev.mean()) if dev.size else float("nan"),
            "psi_rotation_max": float(psi.max()) if psi.size else float("nan"),
            "psi_rotation_mean": float(psi.mean()) if psi.size else float("nan"),
        }


def compare3(analysis: Analysis3, park_omega: float = OMEGA_0) -> Comparison:
    """Row-wise deviation between P(theta_P) and F, and Ω_Ψ = Ω_P - Ψ Ω_F Ψᵀ."""
    fr = analysis.frenet
    P = park_matrices(analysis.theta_P)
    F = fr.frames
    deviation = np.max(np.linalg.norm(P - F, axis=2), axis=1)
    omega_F = np.zeros_like(F)
    omega_F[:, 0, 1] = fr.omega_kappa
    omega_F[:, 1, 0] = -fr.omega_kappa
    omega_F[:, 1, 2] = fr.omega_tau
    omega_F[:, 2, 1] = -fr.omega_tau
    psi = P @ np.swapaxes(F, 1, 2)
    rot = park_rotation(park_omega)[None] - psi @ omega_F @ np.swapaxes(psi, 1, 2)
    return Comparison(analysis.t, fr.defined, deviation, rot)


@dataclass
class AnalysisND:
    t: np.ndarray
    vmag: np.ndarray
    omega_chi: np.ndarray  # (k, n - 1)
    rank: np.ndarray
    defined: np.ndarray
    frames: np.ndarray

    def rows(self, v_base: Optional[float] = None, omega_base: float = OMEGA_0):
        vs = 1.0 / v_base if v_base else 1.0
        ws = 1.0 / omega_base if v_base else 1.0
        for k in range(self.t.size):
            w = [float(x) * ws for x in self.omega_chi[k]]
            yield [float(self.t[k]), float(self.vmag[k] * vs)] + w + [int(self.rank[k])]

    def header(self) -> List[str]:
        n1 = self.omega_chi.shape[1]
        return ["t", "vmag"] + [f"w_chi_{i + 1}" for i in range(n1)] + ["rank"]


def analyze_nd(
    series: SampledSeries,
    stack: List[np.ndarray],
    rank_tol: float = RANK_TOL,
    eps_v: float = 0.0,
) -> AnalysisND:
    """Generalized frame and frequencies per sample; frames come back sign-aligned.

    Samples whose derivative stack is incomplete (finite-difference edges) or
    whose voltage vanishes get rank 0 and NaN frequencies.
    """
    n = series.dim
    k = len(series)
    stack = stack[:n]
    frames = np.full((k, n, n), np.nan)
    omega = np.full((k, n - 1), np.nan)
    rank = np.zeros(k, dtype=int)
    for j in range(k):
        derivs = [d[j] for d in stack]
        if not all(np.all(np.isfinite(d)) for d in derivs):
            continue
        try:
            g = gram_schmidt_frame(derivs, rank_tol=rank_tol, eps_v=eps_v)
        except geo.DegenerateDirectionError:
            continue
        frames[j] = g.vectors
        omega[j] = g.omega_chi
        rank[j] = g.rank
    vmag = np.linalg.norm(series.samples, axis=1)
    return AnalysisND(series.times, vmag, omega, rank, rank > 0, align_frames(frames))
