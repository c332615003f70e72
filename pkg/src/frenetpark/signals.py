"""Synthetic multi-phase waveforms, numerical differentiation and CSV I/O.

Phase ``h`` of a scenario is

    V_h (1 + m sin(rho t)) [sin(theta(t) - phi_h) + sum_j w_jh sin(k_j (theta(t) - phi_h))]

with theta(t) = theta0 + omega t + (A / Omega)(1 - cos(Omega t)), the
integral of the frequency law omega + A sin(Omega t), Omega = 2 pi f_m.
Analytic derivatives of any order come from truncated Taylor series.
"""

from __future__ import annotations

import contextlib
import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .park import ALPHA, OMEGA_0

BETA = 2.0 * np.pi / 6.0
V_NOMINAL = 15e3
SCENARIO_NAMES = ("E1", "E2", "E3", "E4", "E5", "E6", "SIX")


@dataclass(frozen=True)
class AmplitudeLaw:
    """Common multiplicative modulation 1 + depth * sin(rate * t)."""

    depth: float = 0.0
    rate: float = 0.0  # rad/s


@dataclass(frozen=True)
class FrequencyLaw:
    """Angular frequency omega + mod_amplitude * sin(2 pi mod_hz t)."""

    omega: float = OMEGA_0
    mod_amplitude: float = 0.0  # rad/s
    mod_hz: float = 0.0


@dataclass(frozen=True)
class WaveformScenario:
    amplitudes: Tuple[float, ...]
    phase_offsets: Tuple[float, ...]
    frequency_law: FrequencyLaw = FrequencyLaw()
    amplitude_law: AmplitudeLaw = AmplitudeLaw()
    # (order, per-phase relative amplitudes)
    harmonics: Tuple[Tuple[int, Tuple[float, ...]], ...] = ()
    theta0: float = 0.0
    name: str = "custom"

    def __post_init__(self):
        n = len(self.amplitudes)
        if n < 2:
            raise ValueError("a scenario needs at least 2 phases")
        if len(self.phase_offsets) != n:
            raise ValueError("phase_offsets must have one entry per phase")
        if any(a < 0 for a in self.amplitudes):
            raise ValueError("amplitudes must be non-negative")
        for order, weights in self.harmonics:
            if order < 2:
                raise ValueError(f"harmonic order must be >= 2, got {order}")
            if len(weights) != n:
                raise ValueError("harmonic weights must have one entry per phase")

    @property
    def n_phases(self) -> int:
        return len(self.amplitudes)

    def theta(self, t):
        """Fundamental phase angle theta_a(t) in closed form."""
        t = np.asarray(t, dtype=float)
        law = self.frequency_law
        out = self.theta0 + law.omega * t
        if law.mod_amplitude and law.mod_hz:
            big = 2.0 * np.pi * law.mod_hz
            out = out + law.mod_amplitude / big * (1.0 - np.cos(big * t))
        return out

    def omega(self, t):
        t = np.asarray(t, dtype=float)
        law = self.frequency_law
        return law.omega + law.mod_amplitude * np.sin(2.0 * np.pi * law.mod_hz * t)

    def envelope(self, t):
        """Common amplitude factor 1 + depth sin(rate t)."""
        t = np.asarray(t, dtype=float)
        law = self.amplitude_law
        return 1.0 + law.depth * np.sin(law.rate * t)


def _three_phase(**kw) -> WaveformScenario:
    kw.setdefault("amplitudes", (V_NOMINAL,) * 3)
    kw.setdefault("phase_offsets", (0.0, ALPHA, -ALPHA))
    kw.setdefault("theta0", np.pi / 6)
    return WaveformScenario(**kw)


def builtin_scenario(name: str) -> WaveformScenario:
    key = name.upper()
    if key == "E1":
        return _three_phase(name="E1")
    if key == "E2":
        return _three_phase(name="E2", frequency_law=FrequencyLaw(omega=1.2 * OMEGA_0))
    if key == "E3":
        return _three_phase(name="E3", amplitude_law=AmplitudeLaw(depth=0.2, rate=0.2 * OMEGA_0))
    if key == "E4":
        return _three_phase(
            name="E4",
            frequency_law=FrequencyLaw(omega=OMEGA_0, mod_amplitude=2.0 * np.pi, mod_hz=10.0),
        )
    if key == "E5":
        return _three_phase(name="E5", amplitudes=(V_NOMINAL, 1.2 * V_NOMINAL, 0.8 * V_NOMINAL))
    if key == "E6":
        return _three_phase(name="E6", harmonics=((5, (0.1, 0.2, 0.1)),))
    if key == "SIX":
        return WaveformScenario(
            name="SIX",
            amplitudes=(V_NOMINAL,) * 6,
            phase_offsets=tuple(h * BETA for h in range(6)),
            theta0=0.0,
        )
    raise ValueError(f"unknown scenario {name!r}; valid names: {', '.join(SCENARIO_NAMES)}")


# --- truncated Taylor series, coefficient arrays shaped (order + 1, ...) ---

def _linear_sin_series(phase, rate, order):
    """Taylor coefficients of sin(phase + rate * tau) around tau = 0."""
    k = np.arange(order + 1).reshape((-1,) + (1,) * np.ndim(phase))
    fact = np.array([math.factorial(i) for i in range(order + 1)], dtype=float)
    fact = fact.reshape(k.shape)
    return rate**k / fact * np.sin(phase + k * np.pi / 2)


def _sin_cos_series(u):
    """Taylor coefficients of sin(u(tau)), cos(u(tau)) from those of u."""
    s = np.zeros_like(u)
    c = np.zeros_like(u)
    s[0], c[0] = np.sin(u[0]), np.cos(u[0])
    for k in range(1, u.shape[0]):
        j = np.arange(1, k + 1).reshape((-1,) + (1,) * (u.ndim - 1))
        s[k] = np.sum(j * u[1 : k + 1] * c[k - 1 :: -1][: k], axis=0) / k
        c[k] = -np.sum(j * u[1 : k + 1] * s[k - 1 :: -1][: k], axis=0) / k
    return s, c


def _cauchy(a, b):
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape))
    for k in range(out.shape[0]):
        out[k] = sum(a[i] * b[k - i] for i in range(k + 1))
    return out


def derivatives(scenario: WaveformScenario, t, max_order: int = 3) -> np.ndarray:
    """Closed-form derivatives 0..max_order; shape (max_order + 1, len(t), n)."""
    if max_order < 0:
        raise ValueError("max_order must be non-negative")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    K = max_order
    law = scenario.frequency_law

    theta = np.zeros((K + 1, t.size))
    theta[0] = scenario.theta(t)
    if K >= 1:
        theta[1] = law.omega
    if law.mod_amplitude and law.mod_hz:
        big = 2.0 * np.pi * law.mod_hz
        cos_series = _linear_sin_series(big * t + np.pi / 2, big, K)
        theta[1:] -= law.mod_amplitude / big * cos_series[1:]

    amp_law = scenario.amplitude_law
    env = np.zeros((K + 1, t.size))
    env[0] = 1.0
    if amp_law.depth:
        env += amp_law.depth * _linear_sin_series(amp_law.rate * t, amp_law.rate, K)

    n = scenario.n_phases
    offsets = np.asarray(scenario.phase_offsets)
    base = theta[:, :, None] * np.ones(n)
    base[0] -= offsets
    wave, _ = _sin_cos_series(base)
    for order, weights in scenario.harmonics:
        hs, _ = _sin_cos_series(order * base)
        wave = wave + np.asarray(weights) * hs

    series = _cauchy(env[:, :, None], wave) * np.asarray(scenario.amplitudes)
    fact = np.array([math.factorial(i) for i in range(K + 1)], dtype=float)
    return series * fact[:, None, None]


def evaluate(scenario: WaveformScenario, t: float, deriv_order: int = 0) -> np.ndarray:
    """Value of the ``deriv_order``-th time derivative at a single instant."""
    if deriv_order < 0:
        raise ValueError("deriv_order must be non-negative")
    return derivatives(scenario, [t], deriv_order)[deriv_order, 0]


@dataclass
class SampledSeries:
    dt: float
    t0: float
    samples: np.ndarray  # (k, n)
    # analytic derivative channels keyed by order
    channels: Dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 2:
            raise ValueError(f"samples must be (k, n), got shape {self.samples.shape}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    def __len__(self) -> int:
        return self.samples.shape[0]


def sample_series(
    scenario: WaveformScenario,
    t0: float,
    duration: float,
    dt: float,
    with_analytic: bool = False,
    max_order: int = 3,
) -> SampledSeries:
    """Uniform samples on [t0, t0 + duration], endpoints included."""
    if duration <= 0 or dt <= 0:
        raise ValueError(f"duration and dt must be positive, got {duration}, {dt}")
    count = int(round(duration / dt)) + 1
    t = t0 + dt * np.arange(count)
    if with_analytic:
        d = derivatives(scenario, t, max_order)
        return SampledSeries(dt, t0, d[0], {k: d[k] for k in range(1, max_order + 1)})
    return SampledSeries(dt, t0, derivatives(scenario, t, 0)[0])


def differentiate(series: SampledSeries, order: int = 1) -> SampledSeries:
    """Repeated central differencing; the ``order`` samples at each end are NaN."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if len(series) < 2 * order + 1:
        raise ValueError(f"need at least {2 * order + 1} samples for order {order}, got {len(series)}")
    x = series.samples
    for _ in range(order):
        d = np.full_like(x, np.nan)
        d[1:-1] = (x[2:] - x[:-2]) / (2.0 * series.dt)
        x = d
    return SampledSeries(series.dt, series.t0, x)


def finite_difference_stack(series: SampledSeries, max_order: int, allow_high_order: bool = False):
    """[v, v', ..., v^(max_order)] by repeated central differencing."""
    if max_order > 3 and not allow_high_order:
        raise ValueError(
            f"finite-difference order {max_order} > 3 amplifies noise; "
            "pass allow_high_order=True to proceed"
        )
    out = [series.samples]
    cur = series
    for _ in range(max_order):
        cur = differentiate(cur, 1)
        out.append(cur.samples)
    return out


class CsvFormatError(ValueError):
    pass


def _fmt(x: float) -> str:
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else repr(float(x))


@contextlib.contextmanager
def _open_out(target):
    if isinstance(target, io.TextIOBase):
        yield target
    else:
        with open(target, "w", newline="", encoding="utf-8") as f:
            yield f


def write_csv(series: SampledSeries, path, with_channels: bool = True) -> None:
    n = series.dim
    header = ["t"] + [f"v{i + 1}" for i in range(n)]
    orders = sorted(series.channels) if with_channels else []
    for k in orders:
        header += [f"v{i + 1}_d{k}" for i in range(n)]
    t = series.times
    with _open_out(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for j in range(len(series)):
            row = [_fmt(t[j])] + [_fmt(x) for x in series.samples[j]]
            for k in orders:
                row += [_fmt(x) for x in series.channels[k][j]]
            w.writerow(row)


def write_rows(header: Sequence[str], rows, path) -> None:
    """Write analysis rows; floats use shortest round-trip repr, NaN as empty."""
    with _open_out(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) if isinstance(x, float) else x for x in row])


def read_csv(path, rel_jitter: float = 1e-9) -> SampledSeries:
    path = Path(path)
    header: Optional[list] = None
    times: list = []
    values: list = []
    with open(path, newline="", encoding="utf-8") as f:
        for lineno, row in enumerate(csv.reader(f), start=1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if header is None:
                header = [c.strip() for c in row]
                _check_header(header, path, lineno)
                continue
            if len(row) != len(header):
                raise CsvFormatError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}"
                )
            try:
                nums = [float(x) for x in row]
            except ValueError as exc:
                raise CsvFormatError(f"{path}:{lineno}: {exc}") from None
            if not all(math.isfinite(x) for x in nums):
                raise CsvFormatError(f"{path}:{lineno}: non-finite field")
            times.append((lineno, nums[0]))
            values.append(nums[1:])
    if header is None:
        raise CsvFormatError(f"{path}: missing header")
    if len(times) < 2:
        raise CsvFormatError(f"{path}: need at least 2 samples, got {len(times)}")

    t = np.array([x for _, x in times])
    dt = (t[-1] - t[0]) / (len(t) - 1)
    if dt <= 0:
        raise CsvFormatError(f"{path}: timestamps must be strictly increasing")
    steps = np.diff(t)
    bad = np.flatnonzero(np.abs(steps - dt) > rel_jitter * max(abs(dt), np.max(np.abs(t))))
    if bad.size:
        lineno = times[bad[0] + 1][0]
        raise CsvFormatError(f"{path}:{lineno}: non-uniform time step {steps[bad[0]]!r} (expected {dt!r})")

    data = np.array(values)
    n = sum(1 for c in header[1:] if "_d" not in c)
    channels = {}
    for col in range(n, data.shape[1], n):
        order = int(header[1 + col].split("_d")[1])
        channels[order] = data[:, col : col + n]
    return SampledSeries(dt, float(t[0]), data[:, :n], channels)


def _check_header(header, path, lineno):
    if header[0] != "t":
        raise CsvFormatError(f"{path}:{lineno}: first column must be 't', got {header[0]!r}")
    names = header[1:]
    n = sum(1 for c in names if "_d" not in c)
    if n < 2 or names[:n] != [f"v{i + 1}" for i in range(n)]:
        raise CsvFormatError(f"{path}:{lineno}: expected header t,v1,...,vn")
    rest = names[n:]
    if len(rest) % n:
        raise CsvFormatError(f"{path}:{lineno}: derivative columns must come in groups of {n}")
    for g in range(0, len(rest), n):
        order = rest[g].split("_d")[-1]
        if not order.isdigit() or int(order) < 1 or rest[g : g + n] != [f"v{i + 1}_d{order}" for i in range(n)]:
            raise CsvFormatError(f"{path}:{lineno}: malformed derivative columns {rest[g:g + n]}")
