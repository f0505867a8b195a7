"""Oversampled-IFFT OFDM modulation, cyclic prefix, and passband conversion.

The transmit direction builds one OFDM symbol from N frequency-domain
constellation points: zero-insertion oversampling to N*L bins, a unitary
inverse DFT (scale 1/sqrt(L*N)), optional cyclic prefix, and real passband
upconversion with a sqrt(2) factor that preserves mean power. The receive
direction mirrors each step. Frequency frames are plain complex ndarrays;
time-domain signals carry their sample rate in small wrapper types.

Zero-insertion layout: bins 0..N/2 hold the first half of the original
frame and the top N/2 bins hold the second half starting at X[N/2], so the
edge value X[N/2] appears at both band edges and N*(L-1) - 1 interior bins
are exactly zero. The demodulator reads the canonical N positions back, so
the round trip is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import fir_design
from .errors import ConfigError, ShapeError

#: Tap count of the receiver's image-reject low-pass (see ``downconvert``).
IMAGE_REJECT_TAPS = 31


@dataclass(frozen=True)
class OfdmParams:
    """Physical-layer parameter set for one OFDM configuration.

    The sample rate is always bandwidth_hz * oversample, and the occupied
    band [carrier_hz - BW/2, carrier_hz + BW/2] must fit between DC and
    Nyquist. ``cp_len`` counts non-oversampled samples; the transmitted
    prefix is cp_len * oversample samples long.
    """

    n_subcarriers: int = 128
    oversample: int = 8
    bandwidth_hz: float = 1e6
    carrier_hz: float = 2e6
    cp_len: int = 32

    def __post_init__(self):
        if self.n_subcarriers < 2:
            raise ConfigError("n_subcarriers must be >= 2")
        if self.n_subcarriers % 2:
            raise ConfigError("n_subcarriers must be even")
        if self.oversample < 1:
            raise ConfigError("oversample must be >= 1")
        if self.bandwidth_hz <= 0:
            raise ConfigError("bandwidth_hz must be positive")
        if not 0 <= self.cp_len <= self.n_subcarriers:
            raise ConfigError("cp_len must satisfy 0 <= cp_len <= n_subcarriers")
        if self.carrier_hz < self.bandwidth_hz / 2:
            raise ConfigError(
                "carrier_hz must be >= bandwidth_hz / 2 so the occupied band stays above DC"
            )
        if self.carrier_hz + self.bandwidth_hz / 2 > self.sample_hz / 2:
            raise ConfigError(
                "carrier_hz + bandwidth_hz / 2 must not exceed sample_hz / 2 "
                f"(got {self.carrier_hz + self.bandwidth_hz / 2:g} > {self.sample_hz / 2:g})"
            )

    @property
    def sample_hz(self) -> float:
        return self.bandwidth_hz * self.oversample

    @property
    def subcarrier_spacing_hz(self) -> float:
        return self.bandwidth_hz / self.n_subcarriers

    @property
    def symbol_interval_s(self) -> float:
        return 1.0 / self.subcarrier_spacing_hz

    @property
    def n_oversampled(self) -> int:
        return self.n_subcarriers * self.oversample

    @property
    def cp_oversampled(self) -> int:
        return self.cp_len * self.oversample


def _as_1d(samples, dtype, what: str) -> np.ndarray:
    arr = np.asarray(samples, dtype=dtype)
    if arr.ndim != 1:
        raise ShapeError(f"{what} must be one-dimensional")
    return arr


@dataclass(frozen=True)
class BasebandSignal:
    """Complex baseband sample sequence with its sample rate."""

    samples: np.ndarray
    sample_hz: float

    def __post_init__(self):
        object.__setattr__(self, "samples", _as_1d(self.samples, complex, "baseband samples"))

    def __len__(self) -> int:
        return self.samples.size


@dataclass(frozen=True)
class PassbandSignal:
    """Real passband sample sequence with its sample rate."""

    samples: np.ndarray
    sample_hz: float

    def __post_init__(self):
        object.__setattr__(self, "samples", _as_1d(self.samples, float, "passband samples"))

    def __len__(self) -> int:
        return self.samples.size


def inserted_zero_bins(n_subcarriers: int, oversample: int) -> np.ndarray:
    """Indices of the oversampling zero-insertion region in an N*L frame."""
    n = n_subcarriers
    return np.arange(n // 2 + 1, n * oversample - n // 2)


def _extend_rows(frames: np.ndarray, oversample: int) -> np.ndarray:
    n = frames.shape[-1]
    out = np.zeros(frames.shape[:-1] + (n * oversample,), dtype=complex)
    out[..., : n // 2 + 1] = frames[..., : n // 2 + 1]
    out[..., n * oversample - n // 2 :] = frames[..., n // 2 :]
    return out


def oversample_extend(frame, oversample: int) -> np.ndarray:
    """Insert mid-spectrum zeros, growing an N-bin frame to N*L bins."""
    frame = _as_1d(frame, complex, "frequency frame")
    if frame.size % 2:
        raise ConfigError("frame length N must be even")
    if oversample < 1:
        raise ConfigError("oversample factor must be >= 1")
    return _extend_rows(frame, oversample)


def _modulate_rows(frames: np.ndarray) -> np.ndarray:
    # Unitary inverse DFT: numpy's ifft scales by 1/n, we want 1/sqrt(n).
    n = frames.shape[-1]
    return np.fft.ifft(frames, axis=-1) * np.sqrt(n)


def ofdm_modulate(frame, params: OfdmParams) -> BasebandSignal:
    """Inverse-transform an oversampled frame into N*L baseband samples."""
    frame = _as_1d(frame, complex, "frequency frame")
    if frame.size != params.n_oversampled:
        raise ShapeError(
            f"frame length {frame.size} != n_subcarriers * oversample = {params.n_oversampled}"
        )
    return BasebandSignal(_modulate_rows(frame), params.sample_hz)


def _demodulate_rows(samples: np.ndarray, n_subcarriers: int) -> np.ndarray:
    n = n_subcarriers
    total = samples.shape[-1]
    spectrum = np.fft.fft(samples, axis=-1) / np.sqrt(total)
    out = np.empty(samples.shape[:-1] + (n,), dtype=complex)
    out[..., : n // 2 + 1] = spectrum[..., : n // 2 + 1]
    out[..., n // 2 + 1 :] = spectrum[..., total - n // 2 + 1 :]
    return out


def ofdm_demodulate(signal: BasebandSignal, params: OfdmParams) -> np.ndarray:
    """Forward-transform N*L baseband samples and read the N data bins."""
    if len(signal) != params.n_oversampled:
        raise ShapeError(
            f"signal length {len(signal)} != n_subcarriers * oversample = {params.n_oversampled}"
        )
    return _demodulate_rows(signal.samples, params.n_subcarriers)


def add_cyclic_prefix(signal: BasebandSignal, cp_samples: int) -> BasebandSignal:
    """Prepend a copy of the last cp_samples samples."""
    if cp_samples < 0 or cp_samples > len(signal):
        raise ShapeError(f"cp_samples = {cp_samples} exceeds signal length {len(signal)}")
    if cp_samples == 0:
        return signal
    x = signal.samples
    return BasebandSignal(np.concatenate([x[-cp_samples:], x]), signal.sample_hz)


def remove_cyclic_prefix(signal: BasebandSignal, cp_samples: int) -> BasebandSignal:
    """Drop the first cp_samples samples."""
    if cp_samples < 0 or cp_samples >= len(signal):
        raise ShapeError(f"cp_samples = {cp_samples} must be < signal length {len(signal)}")
    if cp_samples == 0:
        return signal
    return BasebandSignal(signal.samples[cp_samples:], signal.sample_hz)


def _carrier(n: int, carrier_hz: float, sample_hz: float) -> np.ndarray:
    m = np.arange(n)
    return np.exp(2j * np.pi * carrier_hz * m / sample_hz)


def _upconvert_rows(samples: np.ndarray, carrier_hz: float, sample_hz: float) -> np.ndarray:
    return np.sqrt(2.0) * np.real(samples * _carrier(samples.shape[-1], carrier_hz, sample_hz))


def upconvert(signal: BasebandSignal, carrier_hz: float) -> PassbandSignal:
    """Shift complex baseband to a real passband at carrier_hz.

    The sqrt(2) factor keeps mean power equal between the two domains. The
    full band-fit check (carrier + BW/2 below Nyquist) lives in OfdmParams;
    here only the carrier itself is validated against Nyquist.
    """
    if not 0 <= carrier_hz <= signal.sample_hz / 2:
        raise ConfigError(
            f"carrier_hz = {carrier_hz:g} outside [0, sample_hz / 2 = {signal.sample_hz / 2:g}]"
        )
    return PassbandSignal(
        _upconvert_rows(signal.samples, carrier_hz, signal.sample_hz), signal.sample_hz
    )


@lru_cache(maxsize=None)
def image_reject_lowpass(
    pass_edge: float, stop_edge: float, num_taps: int = IMAGE_REJECT_TAPS
) -> fir_design.FirFilter:
    """Equiripple low-pass used by ``downconvert``; cached per band plan."""
    spec = fir_design.FirDesignSpec(
        num_taps=num_taps,
        bands=((0.0, pass_edge), (stop_edge, 0.5)),
        desired=(1.0, 0.0),
        weights=(1.0, 1.0),
    )
    return fir_design.design_equiripple(spec)


def _image_filter_for(params: OfdmParams) -> fir_design.FirFilter:
    # Passband edge at BW/2, stopband from the carrier down-mixed image side.
    return image_reject_lowpass(
        pass_edge=(params.bandwidth_hz / 2) / params.sample_hz,
        stop_edge=params.carrier_hz / params.sample_hz,
    )


def _filter_rows(samples: np.ndarray, taps: np.ndarray) -> np.ndarray:
    """Linear convolution along the last axis, via FFT, full length."""
    n = samples.shape[-1] + taps.size - 1
    nfft = 1 << (n - 1).bit_length()
    spectrum = np.fft.fft(samples, nfft, axis=-1) * np.fft.fft(taps, nfft)
    return np.fft.ifft(spectrum, axis=-1)[..., :n]


def _downconvert_rows(
    samples: np.ndarray, carrier_hz: float, sample_hz: float, taps: np.ndarray
) -> np.ndarray:
    mixed = np.sqrt(2.0) * samples * np.conj(_carrier(samples.shape[-1], carrier_hz, sample_hz))
    delay = (taps.size - 1) // 2
    return _filter_rows(mixed, taps)[..., delay : delay + samples.shape[-1]]


def downconvert(signal: PassbandSignal, carrier_hz: float, params: OfdmParams) -> BasebandSignal:
    """Mix a real passband signal down to complex baseband.

    Multiplies by sqrt(2) exp(-j 2 pi f_c m / f_s), then low-pass filters to
    the occupied band to reject the 2 f_c image. The filter is linear phase
    and its group delay is compensated by trimming, so output sample m lines
    up with input sample m. The first and last group_delay samples carry the
    filter's edge transients; callers that need exact block edges should keep
    a cyclic prefix around the block (see harness receive path).
    """
    if not 0 <= carrier_hz <= signal.sample_hz / 2:
        raise ConfigError(
            f"carrier_hz = {carrier_hz:g} outside [0, sample_hz / 2 = {signal.sample_hz / 2:g}]"
        )
    taps = _image_filter_for(params).taps
    out = _downconvert_rows(signal.samples, carrier_hz, signal.sample_hz, taps)
    return BasebandSignal(out, signal.sample_hz)
