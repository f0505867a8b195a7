import numpy as np
import pytest

from paprsim import (
    ConfigError,
    FirDesignSpec,
    OfdmParams,
    alternation_count,
    amplitude_response,
    default_hpf_spec,
    design_equiripple,
    frequency_response,
)
from paprsim.fir_design import weighted_error

from oracles import chebyshev_lp_ripple

LOWPASS = FirDesignSpec(31, ((0.0, 0.20), (0.26, 0.5)), (1.0, 0.0), (1.0, 1.0))
IMAGE_LPF = FirDesignSpec(31, ((0.0, 0.0625), (0.25, 0.5)), (1.0, 0.0), (1.0, 1.0))
DEFAULT_HPF = default_hpf_spec(OfdmParams())


def test_allpass_is_impulse():
    fir = design_equiripple(FirDesignSpec(21, ((0.0, 0.5),), (1.0,), (1.0,)))
    impulse = np.zeros(21)
    impulse[10] = 1.0
    assert np.allclose(fir.taps, impulse, atol=1e-9)
    assert fir.ripple < 1e-9


def test_lowpass_ripple_matches_lp_oracle():
    fir = design_equiripple(LOWPASS)
    oracle = chebyshev_lp_ripple(LOWPASS, n_grid=2048)
    assert fir.ripple == pytest.approx(oracle, rel=0.01)


@pytest.mark.parametrize("spec", [LOWPASS, IMAGE_LPF, DEFAULT_HPF], ids=["lp", "image", "hpf"])
def test_alternation_count(spec):
    fir = design_equiripple(spec)
    assert alternation_count(fir) >= (spec.num_taps + 1) // 2 + 1


@pytest.mark.parametrize("spec", [LOWPASS, IMAGE_LPF, DEFAULT_HPF], ids=["lp", "image", "hpf"])
def test_symmetry_exact(spec):
    fir = design_equiripple(spec)
    assert np.array_equal(fir.taps, fir.taps[::-1])


def test_default_hpf_stopband_attenuation():
    fir = design_equiripple(DEFAULT_HPF)
    stop_lo, stop_hi = DEFAULT_HPF.bands[0]
    grid = np.linspace(stop_lo, stop_hi, 4096)
    attenuation = -20.0 * np.log10(np.max(np.abs(amplitude_response(fir, grid))))
    assert attenuation >= 40.0


def test_linear_phase():
    fir = design_equiripple(LOWPASS)
    grid = np.linspace(0.0, 0.5, 1000)
    h = frequency_response(fir, grid)
    delay_term = 2.0 * np.pi * grid * fir.group_delay
    residual = np.angle(h * np.exp(1j * delay_term))
    keep = np.abs(h) > 1e-8
    # Phase is 0 or pi after removing the linear term.
    assert np.max(np.abs(np.sin(residual[keep]))) < 1e-6


def test_frequency_response_impulse():
    fir = design_equiripple(FirDesignSpec(21, ((0.0, 0.5),), (1.0,), (1.0,)))
    grid = np.linspace(0.0, 0.5, 64)
    assert np.allclose(np.abs(frequency_response(fir, grid)), 1.0, atol=1e-9)


def test_frequency_response_two_tap_closed_form():
    # H(f) for taps [0.5, 0.5] is cos(pi f) with linear phase.
    from paprsim.fir_design import FirFilter

    fir = FirFilter(taps=np.array([0.5, 0.5]), spec=LOWPASS, ripple=1.0)
    h = frequency_response(fir, [0.0, 0.5])
    assert abs(h[0] - 1.0) < 1e-12
    assert abs(h[1]) < 1e-12


def test_stored_ripple_matches_dense_grid():
    for spec in (LOWPASS, DEFAULT_HPF):
        fir = design_equiripple(spec)
        _, err = weighted_error(fir, 4096)
        assert np.max(np.abs(err)) == pytest.approx(fir.ripple, rel=0.01)


def test_amplitude_matches_magnitude():
    fir = design_equiripple(LOWPASS)
    grid = np.linspace(0.0, 0.5, 500)
    assert np.allclose(np.abs(amplitude_response(fir, grid)),
                       np.abs(frequency_response(fir, grid)), atol=1e-10)


def test_levelled_delta_monotone_non_decreasing():
    # The exchange's levelled reference error grows toward the minimax value.
    for spec in (LOWPASS, IMAGE_LPF, DEFAULT_HPF):
        fir = design_equiripple(spec)
        deltas = np.array(fir.delta_history)
        assert np.all(np.diff(deltas) >= -1e-12)
        assert deltas[-1] == pytest.approx(fir.ripple, rel=0.01)


def test_weighted_design_ripple_ratio():
    spec = FirDesignSpec(41, ((0.0, 0.18), (0.24, 0.5)), (1.0, 0.0), (1.0, 10.0))
    fir = design_equiripple(spec)
    freqs, err = weighted_error(fir, 4096)
    pass_err = np.max(np.abs(err[freqs <= 0.18])) / 1.0
    stop_err = np.max(np.abs(err[freqs >= 0.24])) / 10.0
    # Weighted errors equalize, so raw band errors differ by the weight ratio.
    assert pass_err / stop_err == pytest.approx(10.0, rel=0.05)


def test_spec_validation():
    with pytest.raises(ConfigError):
        FirDesignSpec(30, ((0.0, 0.2), (0.3, 0.5)), (1.0, 0.0), (1.0, 1.0))  # even taps
    with pytest.raises(ConfigError):
        FirDesignSpec(31, ((0.0, 0.3), (0.2, 0.5)), (1.0, 0.0), (1.0, 1.0))  # overlap
    with pytest.raises(ConfigError):
        FirDesignSpec(31, ((0.0, 0.2), (0.2, 0.5)), (1.0, 0.0), (1.0, 1.0))  # empty gap
    with pytest.raises(ConfigError):
        FirDesignSpec(31, ((0.0, 0.6),), (1.0,), (1.0,))  # edge beyond 0.5
    with pytest.raises(ConfigError):
        FirDesignSpec(31, ((0.0, 0.2),), (1.0,), (0.0,))  # zero weight


def test_infeasible_hpf_band_plan():
    # Carrier at BW/2 puts the default stopband edge at or below DC.
    with pytest.raises(ConfigError):
        default_hpf_spec(OfdmParams(carrier_hz=0.5e6, bandwidth_hz=1e6, oversample=8))
