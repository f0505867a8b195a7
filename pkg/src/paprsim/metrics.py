"""PAPR, empirical CCDF estimation, and bit-error counting."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MetricError, ShapeError
from .ofdm_chain import BasebandSignal, PassbandSignal


@dataclass(frozen=True)
class CcdfCurve:
    """Empirical complementary CDF: P(value > threshold) per threshold."""

    thresholds_db: np.ndarray
    prob_exceed: np.ndarray
    sample_count: int


@dataclass(frozen=True)
class BerPoint:
    ebn0_db: float
    bit_errors: int
    bits_total: int

    def __post_init__(self):
        if self.bits_total <= 0:
            raise ShapeError("bits_total must be positive")
        if not 0 <= self.bit_errors <= self.bits_total:
            raise ShapeError("bit_errors must lie in [0, bits_total]")

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits_total


def _papr_db_rows(power: np.ndarray) -> np.ndarray:
    return 10.0 * np.log10(np.max(power, axis=-1) / np.mean(power, axis=-1))


def papr_db(signal) -> float:
    """Peak-to-average power ratio in dB over one symbol's samples."""
    if isinstance(signal, (PassbandSignal, BasebandSignal)):
        samples = signal.samples
    else:
        samples = np.asarray(signal)
    if samples.size == 0:
        raise ShapeError("papr of an empty signal is undefined")
    power = np.abs(samples) ** 2
    if np.max(power) == 0:
        raise MetricError("papr of an all-zero signal is undefined")
    return float(_papr_db_rows(power))


def estimate_ccdf(papr_values, thresholds_db) -> CcdfCurve:
    """Fraction of samples strictly above each threshold."""
    values = np.asarray(papr_values, dtype=float).reshape(-1)
    thresholds = np.asarray(thresholds_db, dtype=float).reshape(-1)
    if values.size == 0:
        raise ShapeError("cannot estimate a CCDF from zero samples")
    if thresholds.size == 0 or np.any(np.diff(thresholds) <= 0):
        raise ShapeError("thresholds must be non-empty and strictly ascending")
    ordered = np.sort(values)
    n_at_or_below = np.searchsorted(ordered, thresholds, side="right")
    prob = (values.size - n_at_or_below) / values.size
    prob.setflags(write=False)
    thresholds.setflags(write=False)
    return CcdfCurve(thresholds_db=thresholds, prob_exceed=prob, sample_count=values.size)


def ccdf_quantile(curve: CcdfCurve, p: float) -> float:
    """Smallest threshold whose exceedance probability is <= p.

    Linearly interpolates between the bracketing grid thresholds. Raises
    when p falls outside the probability range the curve actually achieves.
    """
    if not 0 < p < 1:
        raise MetricError("p must lie strictly between 0 and 1")
    prob = curve.prob_exceed
    t = curve.thresholds_db
    if p >= prob[0]:
        raise MetricError(
            f"p = {p:g} is at or above the largest achieved exceedance {prob[0]:g}; "
            f"achievable range is ({prob[-1]:g}, {prob[0]:g})"
        )
    if p < prob[-1]:
        raise MetricError(
            f"p = {p:g} is below the smallest achieved exceedance {prob[-1]:g}; "
            f"achievable range is ({prob[-1]:g}, {prob[0]:g})"
        )
    idx = int(np.argmax(prob <= p))
    if prob[idx] == p or prob[idx - 1] == prob[idx]:
        return float(t[idx])
    frac = (prob[idx - 1] - p) / (prob[idx - 1] - prob[idx])
    return float(t[idx - 1] + frac * (t[idx] - t[idx - 1]))


@dataclass(frozen=True)
class BitErrorCount:
    """Error tally from one compare; combined into BerPoint by the harness."""

    bit_errors: int
    bits_total: int

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits_total


def count_bit_errors(tx_bits, rx_bits) -> BitErrorCount:
    """Hamming distance between equal-length bit sequences."""
    tx = np.asarray(tx_bits).reshape(-1)
    rx = np.asarray(rx_bits).reshape(-1)
    if tx.size == 0:
        raise ShapeError("cannot count errors over empty bit sequences")
    if tx.size != rx.size:
        raise ShapeError(f"bit sequence lengths differ: {tx.size} vs {rx.size}")
    errors = int(np.count_nonzero(tx != rx))
    return BitErrorCount(bit_errors=errors, bits_total=tx.size)
