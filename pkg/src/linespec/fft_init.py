"""Frequency initialization from a zero-padded FFT, plus the FFT baseline.

The estimator seeds its hidden layer from the spectrum of the data: compute
an L = l_factor * N point FFT, keep local spectral maxima that clear a
constant-false-alarm-rate gate, add the stronger neighbor bin of each peak
(off-grid tones split their energy over two bins), and fit initial
amplitudes by least squares.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IllConditioned, InvalidDimension, Overdetermined
from .optimizer import NetworkState
from .signal_model import TWO_PI, Sinusoid, as_samples, design_matrix


@dataclass(frozen=True)
class InitConfig:
    """Zero-padding factor and false-alarm level of the peak gate.

    ``peak_gate_epsilon`` is the per-bin false-alarm probability of the
    pre-gate that separates spectral peaks from noise ripples. The default
    is strict (1e-9): weak spurious peaks that sit on the sidelobes of a
    strong tone survive gradient training as locked local optima, so they
    must be rejected at birth rather than pruned later.
    """

    l_factor: int = 4
    peak_gate_epsilon: float = 1e-9

    def __post_init__(self):
        if self.l_factor < 1:
            raise InvalidDimension("l_factor must be at least 1")
        if not 0.0 < self.peak_gate_epsilon < 1.0:
            raise InvalidDimension("peak_gate_epsilon must lie in (0, 1)")


@dataclass(frozen=True)
class CandidateSet:
    """Strictly increasing initial frequencies in [0, 2*pi)."""

    omegas: np.ndarray

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.omegas, dtype=float))
        if w.size and (np.any(w < 0.0) or np.any(w >= TWO_PI)):
            raise InvalidDimension("candidate frequencies must lie in [0, 2*pi)")
        if w.size > 1 and not np.all(np.diff(w) > 0):
            raise InvalidDimension("candidate frequencies must be strictly increasing")
        object.__setattr__(self, "omegas", w)

    def __len__(self) -> int:
        return self.omegas.size


def zero_padded_fft(observed, cfg: InitConfig) -> np.ndarray:
    """L-point DFT of the signal zero-padded to L = l_factor * N."""
    y = as_samples(observed)
    return np.fft.fft(y, cfg.l_factor * y.size)


def noise_floor_estimate(spectrum_mag: np.ndarray, n_samples: int) -> float:
    """Per-sample noise variance from the median of the squared spectrum.

    Under pure noise each |y^f_k|^2 is exponential with mean N * sigma2, so
    the median divided by (N * ln 2) estimates sigma2 robustly even when a
    few bins carry strong tones.
    """
    mag2 = np.asarray(spectrum_mag, dtype=float) ** 2
    return float(np.median(mag2)) / (n_samples * math.log(2.0))


def find_peaks(spectrum_mag, noise_floor: float, cfg: InitConfig) -> list[int]:
    """Bins that are circular local maxima and clear the false-alarm gate.

    A bin k qualifies when |y^f_k| > |y^f_{k-1}|, |y^f_k| >= |y^f_{k+1}|
    (circular indexing), and |y^f_k|^2 > noise_floor * N * ln(1/epsilon),
    the level a noise bin exceeds with probability epsilon.
    """
    mag = np.asarray(spectrum_mag, dtype=float)
    big_l = mag.size
    if big_l < 3:
        raise InvalidDimension("spectrum must have at least 3 bins")
    n_samples = big_l // cfg.l_factor
    gate = noise_floor * n_samples * math.log(1.0 / cfg.peak_gate_epsilon)
    left = np.roll(mag, 1)
    right = np.roll(mag, -1)
    keep = (mag > left) & (mag >= right) & (mag**2 > gate)
    return [int(k) for k in np.nonzero(keep)[0]]


def augment_adjacent(peaks, spectrum_mag, cfg: InitConfig) -> CandidateSet:
    """Add the stronger neighbor of each peak bin, dedupe, convert to radians.

    Ties between the two neighbors go to bin k+1 so the result is
    deterministic for symmetric (on-grid) peaks.
    """
    mag = np.asarray(spectrum_mag, dtype=float)
    big_l = mag.size
    bins: set[int] = set()
    for k in peaks:
        if not 0 <= k < big_l:
            raise InvalidDimension("peak bin outside the spectrum")
        bins.add(k)
        lo, hi = (k - 1) % big_l, (k + 1) % big_l
        bins.add(hi if mag[hi] >= mag[lo] else lo)
    omegas = np.array(sorted(TWO_PI * k / big_l for k in bins))
    return CandidateSet(omegas)


def ls_amplitudes(candidates: CandidateSet, observed) -> np.ndarray:
    """Least-squares amplitudes for the candidate frequencies.

    Solves min ||y - A alpha|| through a QR factorization. Raises
    Overdetermined when there are more candidates than samples and
    IllConditioned when the design matrix condition number exceeds 1e12
    (near-duplicate candidates); the caller is expected to drop the weaker
    duplicate and retry.
    """
    y = as_samples(observed)
    m = len(candidates)
    if m == 0:
        return np.zeros(0, dtype=np.complex128)
    if m > y.size:
        raise Overdetermined(f"{m} candidates exceed {y.size} samples")
    A = design_matrix(candidates.omegas, y.size)
    if np.linalg.cond(A) > 1e12:
        raise IllConditioned("candidate frequencies are numerically duplicated")
    q, r = np.linalg.qr(A)
    return np.linalg.solve(r, q.conj().T @ y)


def _drop_weaker_of_closest_pair(bins: list[int], mag: np.ndarray, big_l: int) -> list[int]:
    """Remove the weaker-magnitude member of the closest candidate pair."""
    order = sorted(bins)
    gaps = []
    for i in range(len(order)):
        j = (i + 1) % len(order)
        gap = (order[j] - order[i]) % big_l
        gaps.append((gap, order[i], order[j]))
    _, ka, kb = min(gaps)
    drop = ka if mag[ka] <= mag[kb] else kb
    return [k for k in order if k != drop]


def initialize(observed, cfg: InitConfig | None = None) -> NetworkState:
    """Seed a network state from the zero-padded spectrum.

    Composes zero_padded_fft, find_peaks, augment_adjacent, and
    ls_amplitudes. An empty candidate set (pure noise under the gate) yields
    an M = 0 state. Candidate collisions that make the least squares
    ill conditioned are resolved by dropping the weaker-magnitude member of
    the closest pair and refitting.
    """
    if cfg is None:
        cfg = InitConfig()
    y = as_samples(observed)
    spectrum = zero_padded_fft(y, cfg)
    mag = np.abs(spectrum)
    big_l = mag.size
    floor = noise_floor_estimate(mag, y.size)
    peaks = find_peaks(mag, floor, cfg)
    bins: set[int] = set()
    for k in peaks:
        bins.add(k)
        lo, hi = (k - 1) % big_l, (k + 1) % big_l
        bins.add(hi if mag[hi] >= mag[lo] else lo)
    ordered = sorted(bins)
    while len(ordered) > y.size:
        ordered = _drop_weaker_of_closest_pair(ordered, mag, big_l)
    while True:
        if not ordered:
            return NetworkState.empty()
        omegas = np.array([TWO_PI * k / big_l for k in ordered])
        try:
            alphas = ls_amplitudes(CandidateSet(omegas), y)
            break
        except IllConditioned:
            if len(ordered) == 1:
                return NetworkState.empty()
            ordered = _drop_weaker_of_closest_pair(ordered, mag, big_l)
    return NetworkState.from_parameters(omegas, alphas)


def periodogram_estimate(observed, cfg: InitConfig | None = None) -> list[Sinusoid]:
    """Plain FFT estimator: gated peak bins with amplitudes y^f_k / N."""
    if cfg is None:
        cfg = InitConfig()
    y = as_samples(observed)
    spectrum = zero_padded_fft(y, cfg)
    mag = np.abs(spectrum)
    floor = noise_floor_estimate(mag, y.size)
    peaks = find_peaks(mag, floor, cfg)
    big_l = mag.size
    return [Sinusoid(spectrum[k] / y.size, TWO_PI * k / big_l) for k in peaks]
