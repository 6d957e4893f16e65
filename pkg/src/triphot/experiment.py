"""Model of the two-beam pair-interference apparatus.

Two co-polarized pair sources are joined on a polarizing beamsplitter with a
relative phase phi, producing (|2,0> + e^{i phi} |0,2>)/sqrt(2) in the ideal
case.  A retardation plate under test transforms the state, an optional
analysis block (polarizer plus half-wave plate at pi/8) selects one Fock
amplitude, and two detectors behind a polarizing beamsplitter count
coincidences.  Imperfections enter through per-arm pair amplitude
transmissions (t20, t02), Gaussian jitter of phi (finite mutual coherence),
detector efficiencies and an additive accidental-coincidence rate.

Both an analytic rate predictor and a seeded Monte Carlo counter are
provided, together with the closed-form fringe laws for half- and
quarter-wave plates, sweep generation, period detection and fringe
visibility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import optics, qutrit
from .errors import DegenerateTableError, ZeroStateError
from .optics import PlateSpec

ANALYSIS_CHOICES = ("none", "x", "y")


@dataclass(frozen=True)
class SourceSpec:
    """Joined two-beam pair source.

    phase:        relative phase phi between the |2,0> and |0,2> beams
    t20, t02:     per-arm two-photon amplitude transmissions in [0, 1]
    phase_jitter: standard deviation of Gaussian jitter added to phi
    pair_rate:    surviving pairs per second entering the plate
    """

    phase: float = 0.0
    t20: float = 1.0
    t02: float = 1.0
    phase_jitter: float = 0.0
    pair_rate: float = 1.0

    def __post_init__(self):
        for name in ("t20", "t02"):
            t = getattr(self, name)
            if not (0.0 <= t <= 1.0):
                raise ValueError(f"{name} must be in [0, 1], got {t!r}")
        if self.t20 == 0.0 and self.t02 == 0.0:
            raise ValueError("t20 and t02 cannot both be zero")
        if self.phase_jitter < 0.0:
            raise ValueError(f"phase_jitter must be >= 0, got {self.phase_jitter!r}")
        if self.pair_rate <= 0.0:
            raise ValueError(f"pair_rate must be > 0, got {self.pair_rate!r}")
        if not np.isfinite(self.phase):
            raise ValueError("phase must be finite")


@dataclass(frozen=True)
class ExperimentConfig:
    source: SourceSpec
    plate: PlateSpec
    analysis: str = "none"
    eta1: float = 1.0
    eta2: float = 1.0
    accidental_rate: float = 0.0

    def __post_init__(self):
        if self.analysis not in ANALYSIS_CHOICES:
            raise ValueError(f"analysis must be one of {ANALYSIS_CHOICES}, got {self.analysis!r}")
        for name in ("eta1", "eta2"):
            eta = getattr(self, name)
            if not (0.0 <= eta <= 1.0):
                raise ValueError(f"{name} must be in [0, 1], got {eta!r}")
        if self.accidental_rate < 0.0:
            raise ValueError(f"accidental_rate must be >= 0, got {self.accidental_rate!r}")

    @property
    def mode(self) -> str:
        return {"none": "direct_xy", "x": "analysis_x", "y": "analysis_y"}[self.analysis]


@dataclass(frozen=True)
class SweepTable:
    """Rates on a grid of one swept parameter ('phi' or 'chi', radians)."""

    parameter: str
    values: np.ndarray
    rates: np.ndarray
    config: ExperimentConfig

    def __post_init__(self):
        if self.parameter not in ("phi", "chi"):
            raise ValueError(f"parameter must be 'phi' or 'chi', got {self.parameter!r}")
        values = np.asarray(self.values, dtype=float)
        rates = np.asarray(self.rates, dtype=float)
        if values.ndim != 1 or values.shape != rates.shape:
            raise ValueError("values and rates must be 1-d arrays of equal length")
        if values.size >= 2 and not np.all(np.diff(values) > 0):
            raise ValueError("parameter values must be strictly increasing")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "rates", rates)


@dataclass(frozen=True)
class CountRecord:
    t_start: float
    coincidences: int

    def __post_init__(self):
        if self.coincidences < 0:
            raise ValueError("coincidences must be nonnegative")


def source_state(src: SourceSpec, jitter_draw: float = 0.0) -> np.ndarray:
    """Pair state leaving the interferometer for one jitter realization."""
    if src.t20 == 0.0 and src.t02 == 0.0:
        raise ZeroStateError("both source arms are blocked")
    return qutrit.make_state(
        src.t20, 0.0, src.t02 * np.exp(1j * (src.phase + jitter_draw))
    )


def hwp_law(chi: float, phi: float):
    """Closed-form Fock weights after a half-wave plate on the source state.

    Returns (|c1|^2, |c2|^2, |c3|^2) with
    |c2|^2 = sin^2(4 chi) sin^2(phi/2) and |c1|^2 = |c3|^2 = (1 - |c2|^2)/2.
    """
    c2sq = np.sin(4.0 * chi) ** 2 * np.sin(phi / 2.0) ** 2
    side = (1.0 - c2sq) / 2.0
    return side, c2sq, side


def qwp_law(chi: float, phi: float) -> float:
    """Closed-form |c2|^2 after a quarter-wave plate on the source state:
    sin^2(2 chi) (cos(phi/2) + cos(2 chi) sin(phi/2))^2."""
    return np.sin(2.0 * chi) ** 2 * (
        np.cos(phi / 2.0) + np.cos(2.0 * chi) * np.sin(phi / 2.0)
    ) ** 2


_ANALYSIS_CHAIN = {
    "x": lambda: optics.lift(optics.half_wave(np.pi / 8)) @ optics.lift(optics.polarizer("x")),
    "y": lambda: optics.lift(optics.half_wave(np.pi / 8)) @ optics.lift(optics.polarizer("y")),
}


def _chain_matrix(plate: PlateSpec, analysis: str) -> np.ndarray:
    """Full pair operator from the interferometer output to the beamsplitter."""
    k = optics.lift(optics.retarder(plate.retardance, plate.angle))
    if analysis != "none":
        k = _ANALYSIS_CHAIN[analysis]() @ k
    return k


def _fringe_amplitudes(cfg: ExperimentConfig, plate: PlateSpec):
    """Coefficients (alpha, beta) so that one pair with source-phase angle
    theta produces a coincidence with probability
    |alpha + beta e^{i theta}|^2 * eta1 * eta2."""
    k = _chain_matrix(plate, cfg.analysis)
    norm = math.hypot(cfg.source.t20, cfg.source.t02)
    alpha = k[1, 0] * cfg.source.t20 / norm
    beta = k[1, 2] * cfg.source.t02 / norm
    return alpha, beta


def predict_rate(cfg: ExperimentConfig, phi: float | None = None, chi: float | None = None) -> float:
    """Expected coincidence rate (counts/second), jitter-averaged exactly.

    The per-pair coincidence probability is a single harmonic in the source
    phase, so Gaussian jitter of width sigma damps the interference term by
    exp(-sigma^2/2).  With sigma = 0 the value equals the deterministic
    pipeline probability times the pair rate, plus accidentals.
    """
    if phi is not None and chi is not None:
        raise ValueError("override at most one of phi and chi")
    plate = cfg.plate if chi is None else replace(cfg.plate, angle=chi)
    phase = cfg.source.phase if phi is None else float(phi)
    alpha, beta = _fringe_amplitudes(cfg, plate)
    damp = math.exp(-0.5 * cfg.source.phase_jitter**2)
    mean_p = (
        abs(alpha) ** 2
        + abs(beta) ** 2
        + 2.0 * damp * (np.conj(alpha) * beta * np.exp(1j * phase)).real
    )
    return cfg.source.pair_rate * mean_p * cfg.eta1 * cfg.eta2 + cfg.accidental_rate


def sweep(cfg: ExperimentConfig, parameter: str, start: float, stop: float, steps: int) -> SweepTable:
    """Predicted rates on a uniform, endpoint-inclusive grid of phi or chi."""
    if parameter not in ("phi", "chi"):
        raise ValueError(f"parameter must be 'phi' or 'chi', got {parameter!r}")
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    if not stop > start:
        raise ValueError("stop must exceed start")
    values = np.linspace(start, stop, steps)
    if parameter == "phi":
        rates = np.array([predict_rate(cfg, phi=v) for v in values])
    else:
        rates = np.array([predict_rate(cfg, chi=v) for v in values])
    return SweepTable(parameter=parameter, values=values, rates=rates, config=cfg)


def simulate_counts(
    cfg: ExperimentConfig, seed: int, duration: float, bin_width: float = 1.0
) -> list[CountRecord]:
    """Seeded Monte Carlo of binned coincidence counting.

    Per bin: the pair number is Poisson(pair_rate * bin), each pair draws its
    phase jitter and a coincidence Bernoulli with the pipeline probability,
    and accidentals add Poisson(accidental_rate * bin).  Each bin consumes an
    independent child stream of the seed, so the output is reproducible and
    independent of evaluation order.
    """
    if duration <= 0.0 or bin_width <= 0.0:
        raise ValueError("duration and bin_width must be positive")
    n_bins = int(math.floor(duration / bin_width + 1e-9))
    if n_bins < 1:
        raise ValueError("duration shorter than one bin")
    alpha, beta = _fringe_amplitudes(cfg, cfg.plate)
    eta = cfg.eta1 * cfg.eta2
    phase = cfg.source.phase
    sigma = cfg.source.phase_jitter
    mean_pairs = cfg.source.pair_rate * bin_width
    mean_acc = cfg.accidental_rate * bin_width

    records = []
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(n_bins)):
        rng = np.random.default_rng(child)
        n_pairs = int(rng.poisson(mean_pairs))
        hits = 0
        if n_pairs > 0:
            theta = phase + (rng.normal(0.0, sigma, n_pairs) if sigma > 0.0 else 0.0)
            p = np.abs(alpha + beta * np.exp(1j * theta)) ** 2 * eta
            hits = int(np.count_nonzero(rng.random(n_pairs) < p))
        if mean_acc > 0.0:
            hits += int(rng.poisson(mean_acc))
        records.append(CountRecord(t_start=i * bin_width, coincidences=hits))
    return records


def fundamental_period(rates: np.ndarray, dx: float) -> float:
    """Smallest period of a uniformly sampled signal covering one circular span.

    Uses the circular autocorrelation: the fundamental period is the smallest
    positive lag whose autocorrelation matches the zero-lag value.  The
    samples must cover the circular domain exactly once without the duplicate
    endpoint.  Returns n*dx when no smaller period exists.
    """
    v = np.asarray(rates, dtype=float)
    n = v.size
    if n < 2 or dx <= 0.0:
        raise ValueError("need at least two samples with positive spacing")
    v = v - v.mean()
    power = float(v @ v)
    if power < 1e-300:
        raise DegenerateTableError("constant signal has no period")
    spectrum = np.abs(np.fft.rfft(v)) ** 2
    acf = np.fft.irfft(spectrum, n=n)
    hits = np.nonzero(acf[1:] >= acf[0] * (1.0 - 1e-9))[0]
    lag = int(hits[0]) + 1 if hits.size else n
    return lag * dx


def visibility(table: SweepTable, period: float | None = None) -> float:
    """Fringe visibility (max - min)/(max + min) from a single-harmonic fit.

    A least-squares fit of a0 + a1 cos + b1 sin with the known period is used
    instead of raw extrema so Monte Carlo noise does not bias the result.
    For phi sweeps the period defaults to 2*pi; chi sweeps need an explicit
    period (e.g. from `fundamental_period`).
    """
    if table.values.size == 0:
        raise DegenerateTableError("empty table")
    if period is None:
        if table.parameter != "phi":
            raise ValueError("chi sweeps need an explicit period")
        period = 2.0 * np.pi
    span = float(table.values[-1] - table.values[0])
    if span < period * (1.0 - 1e-9):
        raise ValueError("table must sample at least one full period")
    omega = 2.0 * np.pi / period
    x = table.values
    design = np.column_stack([np.ones_like(x), np.cos(omega * x), np.sin(omega * x)])
    (a0, a1, b1), *_ = np.linalg.lstsq(design, table.rates, rcond=None)
    amplitude = math.hypot(a1, b1)
    vmax, vmin = a0 + amplitude, a0 - amplitude
    if vmax + vmin <= 1e-300:
        raise DegenerateTableError("fitted fringe has zero mean rate")
    return (vmax - vmin) / (vmax + vmin)


def calibrate_loss_for_visibility(v: float) -> float:
    """Arm amplitude ratio r = t02/t20 <= 1 giving fringe visibility v.

    Inverts v = 2r/(1 + r^2): r = (1 - sqrt(1 - v^2))/v.
    """
    if not (0.0 < v <= 1.0):
        raise ValueError(f"visibility must be in (0, 1], got {v!r}")
    return (1.0 - math.sqrt(max(1.0 - v * v, 0.0))) / v


def plate_prob_grid(delta: float, chis: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Pipeline Fock weights |c_i|^2 over a (chi, phi) grid for one retardance.

    Lift-and-apply evaluated on the ideal source state; returns an array of
    shape (len(chis), len(phis), 3).  Vectorized over phi for speed; the
    arithmetic path is identical to apply(lift(retarder(...)), source_state).
    """
    chis = np.asarray(chis, dtype=float)
    phis = np.asarray(phis, dtype=float)
    states = np.zeros((3, phis.size), dtype=complex)
    states[0] = 1.0 / np.sqrt(2.0)
    states[2] = np.exp(1j * phis) / np.sqrt(2.0)
    out = np.empty((chis.size, phis.size, 3))
    for i, chi in enumerate(chis):
        g = optics.lift(optics.retarder(delta, chi))
        out[i] = (np.abs(g @ states) ** 2).T
    return out
