"""Signal model: atoms, synthesis, SNR accounting, input validation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linespec.errors import DegenerateInput, InvalidDimension
from linespec.signal_model import (
    TWO_PI,
    NoiseSpec,
    Signal,
    Sinusoid,
    as_samples,
    atom,
    design_matrix,
    noise_var_for_snr,
    synthesize,
    wrap_angle,
)


def test_atom_matches_direct_exponential():
    w = 1.2345
    n = 7
    a = atom(w, n)
    expected = np.array([np.exp(1j * w * k) for k in range(n)])
    np.testing.assert_allclose(a, expected, rtol=0, atol=1e-15)
    assert a[0] == 1.0 + 0.0j


def test_design_matrix_columns_are_atoms():
    omegas = [0.1, 2.0, 5.9]
    A = design_matrix(omegas, 9)
    assert A.shape == (9, 3)
    for i, w in enumerate(omegas):
        np.testing.assert_array_equal(A[:, i], atom(w, 9))


@given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
def test_wrap_angle_lands_in_fundamental_interval(w):
    wrapped = wrap_angle(w)
    assert 0.0 <= wrapped < TWO_PI
    assert math.isclose(math.cos(wrapped), math.cos(w), abs_tol=1e-6)
    assert math.isclose(math.sin(wrapped), math.sin(w), abs_tol=1e-6)


def test_sinusoid_wraps_frequency_and_exposes_normalized():
    s = Sinusoid(1.0 + 2.0j, TWO_PI + 0.5)
    assert math.isclose(s.omega, 0.5, rel_tol=1e-12)
    assert math.isclose(s.normalized_freq, 0.5 / TWO_PI, rel_tol=1e-12)


def test_sinusoid_rejects_non_finite():
    with pytest.raises(DegenerateInput):
        Sinusoid(complex("inf"), 1.0)
    with pytest.raises(DegenerateInput):
        Sinusoid(1.0, float("nan"))


def test_signal_validation():
    with pytest.raises(InvalidDimension):
        Signal(np.zeros((2, 2)))
    with pytest.raises(InvalidDimension):
        Signal(np.zeros(0))
    with pytest.raises(DegenerateInput):
        Signal(np.array([1.0, np.inf]))


def test_as_samples_accepts_signal_and_lists():
    sig = Signal(np.array([1.0 + 1j, 2.0]))
    np.testing.assert_array_equal(as_samples(sig), sig.samples)
    out = as_samples([1.0, 2.0, 3.0])
    assert out.dtype == np.complex128
    with pytest.raises(InvalidDimension):
        as_samples([])


def test_noiseless_synthesis_is_exact_superposition():
    comps = [Sinusoid(2.0 - 1j, 0.7), Sinusoid(0.5j, 2.9)]
    sig = synthesize(comps, 16, NoiseSpec())
    expected = design_matrix([0.7, 2.9], 16) @ np.array([2.0 - 1j, 0.5j])
    np.testing.assert_allclose(sig.samples, expected, rtol=0, atol=1e-14)


def test_synthesis_accepts_amplitude_frequency_pairs():
    a = synthesize([(1.0 + 0j, 1.0)], 8, NoiseSpec())
    b = synthesize([Sinusoid(1.0, 1.0)], 8, NoiseSpec())
    np.testing.assert_array_equal(a.samples, b.samples)


def test_synthesis_is_seed_reproducible_and_seed_sensitive():
    comps = [Sinusoid(1.0, 1.0)]
    y1 = synthesize(comps, 32, NoiseSpec(sigma2=0.1, seed=5)).samples
    y2 = synthesize(comps, 32, NoiseSpec(sigma2=0.1, seed=5)).samples
    y3 = synthesize(comps, 32, NoiseSpec(sigma2=0.1, seed=6)).samples
    np.testing.assert_array_equal(y1, y2)
    assert np.any(y1 != y3)


def test_noise_variance_splits_between_parts():
    big = 200_000
    sig = synthesize([], big, NoiseSpec(sigma2=4.0, seed=0))
    assert abs(np.var(sig.samples.real) - 2.0) < 0.05
    assert abs(np.var(sig.samples.imag) - 2.0) < 0.05


def test_noise_var_for_snr_matches_definition():
    x = synthesize([Sinusoid(3.0, 1.1)], 64, NoiseSpec()).samples
    for snr_db in (-10.0, 0.0, 17.0):
        sigma2 = noise_var_for_snr(x, snr_db)
        power = float(np.vdot(x, x).real)
        achieved = 10.0 * math.log10(power / (64 * sigma2))
        assert math.isclose(achieved, snr_db, abs_tol=1e-12)


def test_noise_var_for_snr_rejects_zero_signal():
    with pytest.raises(DegenerateInput):
        noise_var_for_snr(np.zeros(8), 10.0)


def test_noise_spec_rejects_negative_variance():
    with pytest.raises(DegenerateInput):
        NoiseSpec(sigma2=-1.0)


@settings(max_examples=25)
@given(
    st.integers(min_value=1, max_value=32),
    st.floats(min_value=0.0, max_value=TWO_PI, exclude_max=True),
)
def test_atom_has_unit_modulus_everywhere(n, w):
    np.testing.assert_allclose(np.abs(atom(w, n)), 1.0, rtol=0, atol=1e-12)
