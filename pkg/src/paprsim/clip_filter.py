"""Amplitude clipping at a clipping ratio and the composed frequency-domain filter.

The clip level is A = CR * sigma where sigma is the RMS of the unclipped
signal; passband clipping is the hard three-branch limiter and baseband
clipping limits magnitude while preserving phase. The composed filter takes
one clipped OFDM symbol (N*L passband samples, no prefix), transforms it,
zeroes every bin outside the occupied band and its conjugate image, scales
the surviving bins by the high-pass filter's zero-phase amplitude response,
and transforms back to a real signal.

The filter multiplies by the zero-phase amplitude rather than the causal
complex response: inside an FFT/IFFT pair a linear-phase multiplication
would circularly delay the symbol and misalign it with its cyclic prefix,
while the amplitude response applies the same magnitude shaping with no
shift.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fir_design
from .errors import ConfigError, ShapeError
from .ofdm_chain import BasebandSignal, OfdmParams, PassbandSignal


@dataclass(frozen=True)
class ClipConfig:
    """Clip level bookkeeping: amplitude = cr * sigma."""

    cr: float
    sigma: float

    def __post_init__(self):
        if self.cr <= 0:
            raise ConfigError("clipping ratio cr must be positive")
        if self.sigma <= 0:
            raise ConfigError("sigma must be positive")

    @property
    def amplitude(self) -> float:
        return self.cr * self.sigma


def rms(signal) -> float:
    """Root mean square of the sample magnitudes."""
    if isinstance(signal, (PassbandSignal, BasebandSignal)):
        samples = signal.samples
    else:
        samples = np.asarray(signal)
    if samples.size == 0:
        raise ShapeError("rms of an empty signal is undefined")
    return float(np.sqrt(np.mean(np.abs(samples) ** 2)))


def clip_passband(signal: PassbandSignal, amplitude: float) -> PassbandSignal:
    """Hard-limit real samples to [-amplitude, +amplitude]."""
    if amplitude <= 0:
        raise ConfigError("clip amplitude must be positive")
    return PassbandSignal(np.clip(signal.samples, -amplitude, amplitude), signal.sample_hz)


def clip_baseband(signal: BasebandSignal, amplitude: float) -> BasebandSignal:
    """Limit complex sample magnitudes to ``amplitude``, preserving phase."""
    if amplitude <= 0:
        raise ConfigError("clip amplitude must be positive")
    x = signal.samples
    mag = np.abs(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(mag > amplitude, amplitude / mag, 1.0)
    return BasebandSignal(x * scale, signal.sample_hz)


def _band_gains(params: OfdmParams, hpf: fir_design.FirFilter) -> np.ndarray:
    """Real symmetric per-bin multiplier: 0 out of band, HPF amplitude in band.

    The occupied band is [f_c - BW/2, f_c + BW/2] plus its negative-frequency
    image; all other bins are the zero-insertion region translated to
    passband and are forced back to exactly zero.
    """
    total = params.n_oversampled
    freqs = np.fft.fftfreq(total, d=1.0 / params.sample_hz)
    lo = params.carrier_hz - params.bandwidth_hz / 2
    hi = params.carrier_hz + params.bandwidth_hz / 2
    guard = 1e-9 * params.sample_hz
    in_band = (np.abs(freqs) >= lo - guard) & (np.abs(freqs) <= hi + guard)
    gains = np.zeros(total)
    gains[in_band] = fir_design.amplitude_response(
        hpf, np.abs(freqs[in_band]) / params.sample_hz
    )
    return gains


def _composed_rows(
    samples: np.ndarray, params: OfdmParams, hpf: fir_design.FirFilter
) -> np.ndarray:
    gains = _band_gains(params, hpf)
    spectrum = np.fft.fft(samples, axis=-1) * gains
    return np.fft.ifft(spectrum, axis=-1).real


def composed_filter(
    signal: PassbandSignal, params: OfdmParams, hpf: fir_design.FirFilter
) -> PassbandSignal:
    """FFT, out-of-band re-zeroing plus in-band high-pass scaling, IFFT.

    Operates on exactly one OFDM symbol of N*L samples (prefix excluded).
    The gain vector is real and even in frequency, so conjugate symmetry is
    preserved and the output is real.
    """
    if len(signal) != params.n_oversampled:
        raise ShapeError(
            f"signal length {len(signal)} != n_subcarriers * oversample = {params.n_oversampled}"
        )
    return PassbandSignal(_composed_rows(signal.samples, params, hpf), signal.sample_hz)


def default_hpf_spec(
    params: OfdmParams,
    num_taps: int = 81,
    stop_edge: float | None = None,
    pass_edge: float | None = None,
) -> fir_design.FirDesignSpec:
    """Band plan for the composed filter's high-pass.

    Defaults pass the whole occupied band [f_c - BW/2, f_s/2] and stop
    [0, f_c - 0.75 BW], attenuating low-frequency clipping distortion below
    the band. Edges are normalized to the sample rate and can be overridden
    from the experiment config.
    """
    if stop_edge is None:
        stop_edge = (params.carrier_hz - 0.75 * params.bandwidth_hz) / params.sample_hz
    if pass_edge is None:
        pass_edge = (params.carrier_hz - 0.5 * params.bandwidth_hz) / params.sample_hz
    if stop_edge <= 0 or pass_edge <= stop_edge:
        raise ConfigError(
            "high-pass band plan is infeasible for these parameters; "
            "set explicit hpf stop/pass edges"
        )
    return fir_design.FirDesignSpec(
        num_taps=num_taps,
        bands=((0.0, stop_edge), (pass_edge, 0.5)),
        desired=(0.0, 1.0),
        weights=(1.0, 1.0),
    )
