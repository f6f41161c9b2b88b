"""Complex sinusoid-in-noise signal model.

A length-N observation is modeled as y = x + e where x is a sum of complex
sinusoids, x(n) = sum_k alpha_k * exp(j * omega_k * n), and e is circularly
symmetric complex Gaussian noise. This module provides the steering vectors
(atoms), design matrices, synthetic signal generation at a controlled SNR,
and the small value types shared across the library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput, InvalidDimension

TWO_PI = 2.0 * math.pi


def wrap_angle(omega: float) -> float:
    """Map an angular frequency to the canonical interval [0, 2*pi).

    Tiny negative inputs round up to exactly 2*pi under fmod; those fold
    back to 0 so the half-open interval contract holds for every input.
    """
    wrapped = float(np.mod(omega, TWO_PI))
    return 0.0 if wrapped >= TWO_PI else wrapped


@dataclass(frozen=True)
class Sinusoid:
    """One complex sinusoid: amplitude alpha and angular frequency omega.

    The frequency is wrapped into [0, 2*pi) at construction; any real input
    is accepted.
    """

    amplitude: complex
    omega: float

    def __post_init__(self):
        amp = complex(self.amplitude)
        w = float(self.omega)
        if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
            raise DegenerateInput("sinusoid amplitude must be finite")
        if not math.isfinite(w):
            raise DegenerateInput("sinusoid frequency must be finite")
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "omega", wrap_angle(w))

    @property
    def normalized_freq(self) -> float:
        """Frequency as a fraction of the sample rate, omega / (2*pi)."""
        return self.omega / TWO_PI


@dataclass(frozen=True)
class Signal:
    """A length-N vector of complex samples."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.complex128)
        if s.ndim != 1 or s.size < 1:
            raise InvalidDimension("signal must be a nonempty 1-d vector")
        if not np.all(np.isfinite(s)):
            raise DegenerateInput("signal samples must be finite")
        object.__setattr__(self, "samples", s)

    @property
    def n_samples(self) -> int:
        return self.samples.size

    def __len__(self) -> int:
        return self.samples.size


@dataclass(frozen=True)
class NoiseSpec:
    """Noise variance and RNG seed for reproducible signal synthesis.

    ``sigma2`` is the total per-sample variance of the circularly symmetric
    complex Gaussian noise (real and imaginary parts each carry sigma2 / 2).
    """

    sigma2: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.sigma2 < 0:
            raise DegenerateInput("noise variance must be nonnegative")


def as_samples(observed) -> np.ndarray:
    """Coerce a Signal or array-like into a 1-d complex sample vector."""
    if isinstance(observed, Signal):
        return observed.samples
    s = np.asarray(observed, dtype=np.complex128)
    if s.ndim != 1 or s.size < 1:
        raise InvalidDimension("observed data must be a nonempty 1-d vector")
    return s


def atom(omega: float, n_samples: int) -> np.ndarray:
    """Unit-modulus steering vector [1, e^{j w}, ..., e^{j w (N-1)}]."""
    if n_samples < 1:
        raise InvalidDimension("atom needs at least one sample")
    n = np.arange(n_samples)
    return np.exp(1j * omega * n)


def design_matrix(omegas, n_samples: int) -> np.ndarray:
    """N x M matrix whose column i is atom(omegas[i], n_samples)."""
    w = np.atleast_1d(np.asarray(omegas, dtype=float))
    if w.size == 0:
        raise InvalidDimension("design matrix needs at least one frequency")
    if n_samples < 1:
        raise InvalidDimension("design matrix needs at least one sample")
    n = np.arange(n_samples)
    return np.exp(1j * np.outer(n, w))


def synthesize(components, n_samples: int, noise: NoiseSpec) -> Signal:
    """Generate y = sum_k alpha_k * atom(omega_k) + e deterministically.

    ``components`` is an iterable of Sinusoid (or (amplitude, omega) pairs).
    The noise draw is fully determined by ``noise.seed``.
    """
    if n_samples < 1:
        raise InvalidDimension("cannot synthesize an empty signal")
    comps = [c if isinstance(c, Sinusoid) else Sinusoid(c[0], c[1]) for c in components]
    x = np.zeros(n_samples, dtype=np.complex128)
    if comps:
        A = design_matrix([c.omega for c in comps], n_samples)
        x = A @ np.array([c.amplitude for c in comps])
    if noise.sigma2 > 0:
        rng = np.random.default_rng(noise.seed)
        scale = math.sqrt(noise.sigma2 / 2.0)
        e = scale * (rng.standard_normal(n_samples) + 1j * rng.standard_normal(n_samples))
        x = x + e
    return Signal(x)


def noise_var_for_snr(clean, snr_db: float) -> float:
    """Per-sample noise variance that puts the clean signal at ``snr_db``.

    Solves 10*log10(||x||^2 / (N * sigma2)) = snr_db, so
    sigma2 = ||x||^2 / (N * 10^(snr_db / 10)).
    """
    x = as_samples(clean)
    power = float(np.vdot(x, x).real)
    if power == 0.0:
        raise DegenerateInput("cannot set an SNR for an all-zero signal")
    return power / (x.size * 10.0 ** (snr_db / 10.0))
