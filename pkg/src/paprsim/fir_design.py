"""Equiripple linear-phase FIR design by Remez exchange.

Only type-I filters (odd length, even symmetry) are designed, which covers
both the composed filter's high-pass and the receiver's image-reject
low-pass. The amplitude response of such a filter is a cosine polynomial

    A(f) = a[0] + sum_{n=1..R-1} a[n] cos(2 pi f n),   R = (num_taps + 1) / 2,

and the design problem is the weighted Chebyshev approximation of the
desired piecewise-constant response over the union of bands. The exchange
iterates on R + 1 reference frequencies: solve for the levelled error
``delta`` on the reference set, interpolate the implied A(f) barycentrically
on a dense grid, then move the reference to the extrema of the weighted
error. Iteration stops when the reference set is stable or delta changes by
less than 1e-6 relative, with a hard cap of 50 passes.

Frequencies are normalized to the sample rate, so the usable axis is
[0, 0.5].
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DesignError

GRID_DENSITY = 16  # dense-grid points per tap
MAX_ITERATIONS = 50
DELTA_RTOL = 1e-6


@dataclass(frozen=True)
class FirDesignSpec:
    """Band-defined design target for a type-I equiripple filter.

    ``bands`` are (low, high) edges in normalized frequency, ascending and
    non-overlapping with non-empty transition gaps; ``desired`` and
    ``weights`` give the per-band target gain and error weight.
    """

    num_taps: int
    bands: tuple[tuple[float, float], ...]
    desired: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if self.num_taps < 3 or self.num_taps % 2 == 0:
            raise ConfigError("num_taps must be an odd integer >= 3")
        if not (len(self.bands) == len(self.desired) == len(self.weights)):
            raise ConfigError("bands, desired, and weights must have equal lengths")
        prev_hi = None
        for lo, hi in self.bands:
            if not (0.0 <= lo < hi <= 0.5):
                raise ConfigError(f"band ({lo}, {hi}) must satisfy 0 <= lo < hi <= 0.5")
            if prev_hi is not None and lo <= prev_hi:
                raise ConfigError("bands must be ascending with non-empty transition gaps")
            prev_hi = hi
        if any(w <= 0 for w in self.weights):
            raise ConfigError("weights must be positive")


@dataclass(frozen=True)
class FirFilter:
    """Designed filter: symmetric taps, originating spec, and achieved ripple.

    ``ripple`` is the maximum weighted error measured on the design grid.
    ``delta_history`` records |delta|, the levelled reference error, at each
    exchange pass; it grows monotonically toward the minimax error, which is
    the classic progress measure of the exchange. ``error_history`` records
    the dense-grid max weighted error per pass (an upper bound on the
    minimax; not monotone in general).
    """

    taps: np.ndarray
    spec: FirDesignSpec
    ripple: float
    delta_history: tuple[float, ...] = ()
    error_history: tuple[float, ...] = ()

    @property
    def group_delay(self) -> int:
        return (len(self.taps) - 1) // 2


def _dense_grid(spec: FirDesignSpec, total_points: int):
    """Uniform grid over the band union with per-band endpoint inclusion."""
    widths = [hi - lo for lo, hi in spec.bands]
    total_width = sum(widths)
    freqs, desired, weights, slices = [], [], [], []
    start = 0
    for (lo, hi), d, w, width in zip(spec.bands, spec.desired, spec.weights, widths):
        n = max(2, int(round(total_points * width / total_width)))
        freqs.append(np.linspace(lo, hi, n))
        desired.append(np.full(n, d, dtype=float))
        weights.append(np.full(n, w, dtype=float))
        slices.append(slice(start, start + n))
        start += n
    return np.concatenate(freqs), np.concatenate(desired), np.concatenate(weights), slices


def _barycentric_weights(x: np.ndarray) -> np.ndarray:
    diffs = x[:, None] - x[None, :]
    np.fill_diagonal(diffs, 1.0)
    return 1.0 / np.prod(diffs, axis=1)


def _local_maxima(mag: np.ndarray, band_slices) -> np.ndarray:
    """Indices of local maxima of |error|, found per band so band edges count."""
    out = []
    for sl in band_slices:
        seg = mag[sl]
        n = seg.size
        if n == 1:
            out.append(sl.start)
            continue
        left_ok = np.empty(n, dtype=bool)
        right_ok = np.empty(n, dtype=bool)
        left_ok[0], left_ok[1:] = True, seg[1:] >= seg[:-1]
        right_ok[-1], right_ok[:-1] = True, seg[:-1] >= seg[1:]
        out.extend(sl.start + np.nonzero(left_ok & right_ok)[0])
    return np.array(sorted(out), dtype=int)


def _select_extrema(err: np.ndarray, candidates: np.ndarray, target: int) -> np.ndarray:
    """Reduce alternation candidates to exactly ``target`` reference points."""
    # Merge consecutive candidates with the same error sign, keeping the largest.
    kept: list[int] = []
    for idx in candidates:
        if kept and np.sign(err[idx]) == np.sign(err[kept[-1]]):
            if abs(err[idx]) > abs(err[kept[-1]]):
                kept[-1] = idx
        else:
            kept.append(idx)
    # Trim surplus alternations from the ends, dropping the smaller extremum.
    while len(kept) > target:
        if abs(err[kept[0]]) <= abs(err[kept[-1]]):
            kept.pop(0)
        else:
            kept.pop()
    return np.array(kept, dtype=int)


def design_equiripple(spec: FirDesignSpec) -> FirFilter:
    """Design a type-I equiripple filter for ``spec`` via Remez exchange."""
    n_coeffs = (spec.num_taps + 1) // 2
    n_ref = n_coeffs + 1
    freqs, desired, weights, slices = _dense_grid(spec, GRID_DENSITY * spec.num_taps)
    if freqs.size < n_ref:
        raise ConfigError(
            f"design grid has {freqs.size} points but {n_ref} references are needed"
        )
    x_grid = np.cos(2.0 * np.pi * freqs)
    cos_matrix = np.cos(2.0 * np.pi * np.outer(freqs, np.arange(n_coeffs)))
    flat_scale = max(1.0, float(np.max(np.abs(desired) * weights)))

    ref = np.unique(np.round(np.linspace(0, freqs.size - 1, n_ref)).astype(int))
    if ref.size < n_ref:
        raise ConfigError("design grid too coarse for the requested tap count")

    amplitude = np.zeros_like(freqs)
    history: list[float] = []
    delta_history: list[float] = []
    delta = np.inf
    converged = False
    for _ in range(MAX_ITERATIONS):
        x_ref = x_grid[ref]
        gamma = _barycentric_weights(x_ref)
        signs = np.where(np.arange(n_ref) % 2 == 0, 1.0, -1.0)
        delta_new = (gamma @ desired[ref]) / (gamma @ (signs / weights[ref]))
        delta_history.append(abs(float(delta_new)))
        levelled = desired[ref] - signs * delta_new / weights[ref]

        # Barycentric evaluation of the implied amplitude over the dense grid.
        # Grid frequencies are distinct, so x collisions happen only at the
        # reference points themselves; patch those entries afterwards.
        with np.errstate(divide="ignore", invalid="ignore"):
            kernel = gamma[None, :] / (x_grid[:, None] - x_ref[None, :])
            amplitude = (kernel @ levelled) / kernel.sum(axis=1)
        amplitude[ref] = levelled

        err = weights * (desired - amplitude)
        history.append(float(np.max(np.abs(err))))

        if history[-1] <= 1e-12 * flat_scale:
            converged = True  # target is exactly representable (e.g. all-pass)
            break
        # The current reference alternates at +-delta by construction, so
        # including it guarantees enough alternating candidates survive.
        candidates = np.union1d(_local_maxima(np.abs(err), slices), ref)
        new_ref = _select_extrema(err, candidates, n_ref)
        if new_ref.size < n_ref:
            raise DesignError(
                f"exchange lost alternation structure ({new_ref.size} of {n_ref} "
                f"references); last delta {abs(delta_new):.6e}"
            )
        stable = new_ref.size == ref.size and np.array_equal(new_ref, ref)
        delta_stable = abs(abs(delta_new) - abs(delta)) <= DELTA_RTOL * abs(delta_new) + 1e-15
        ref, delta = new_ref, delta_new
        if stable or delta_stable:
            converged = True
            break

    if not converged:
        raise DesignError(
            f"Remez exchange did not converge in {MAX_ITERATIONS} iterations; "
            f"last delta {abs(delta):.6e}"
        )

    # Recover cosine coefficients from the converged amplitude samples. The
    # amplitude is exactly representable, so least squares is just a stable
    # change of basis.
    coeffs, *_ = np.linalg.lstsq(cos_matrix, amplitude, rcond=None)
    taps = np.zeros(spec.num_taps)
    mid = (spec.num_taps - 1) // 2
    taps[mid] = coeffs[0]
    half = coeffs[1:] / 2.0
    taps[mid + 1 :] = half
    taps[:mid] = half[::-1]

    achieved = weights * (desired - cos_matrix @ coeffs)
    ripple = float(np.max(np.abs(achieved)))
    taps.setflags(write=False)
    return FirFilter(
        taps=taps,
        spec=spec,
        ripple=ripple,
        delta_history=tuple(delta_history),
        error_history=tuple(history),
    )


def frequency_response(fir: FirFilter, grid) -> np.ndarray:
    """Complex response H(f) = sum_n h[n] exp(-j 2 pi f n) on a normalized grid."""
    f = np.asarray(grid, dtype=float)
    n = np.arange(len(fir.taps))
    return np.exp(-2j * np.pi * np.outer(f, n)) @ fir.taps


def amplitude_response(fir: FirFilter, grid) -> np.ndarray:
    """Real zero-phase amplitude A(f) of a symmetric filter on a normalized grid."""
    f = np.asarray(grid, dtype=float)
    mid = fir.group_delay
    m = np.arange(1, mid + 1)
    return fir.taps[mid] + 2.0 * (np.cos(2.0 * np.pi * np.outer(f, m)) @ fir.taps[mid + 1 :])


def weighted_error(fir: FirFilter, total_points: int = 4096):
    """Weighted approximation error of the design, on a fresh dense grid."""
    freqs, desired, weights, _ = _dense_grid(fir.spec, total_points)
    return freqs, weights * (desired - amplitude_response(fir, freqs))


def alternation_count(fir: FirFilter, total_points: int = 4096, tol: float = 0.01) -> int:
    """Number of alternating error extrema that touch the ripple level.

    Counts maximal runs of near-ripple points (within ``tol`` relative of the
    stored ripple) whose error signs alternate along the frequency axis.
    """
    _, err = weighted_error(fir, total_points)
    touching = np.nonzero(np.abs(err) >= (1.0 - tol) * fir.ripple)[0]
    count = 0
    last_sign = 0.0
    for idx in touching:
        sign = np.sign(err[idx])
        if sign != last_sign:
            count += 1
            last_sign = sign
    return count
