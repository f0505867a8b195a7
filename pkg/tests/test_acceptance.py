"""Acceptance suite: one test per top-level requirement, each printing a
PASS/FAIL line with the measured numbers (run with -s to see them live).

The heavyweight sweeps (the full PAPR CCDF experiment and the fixed-point
BER trend grid) run once as session fixtures and are shared by the tests
that read them.
"""
import numpy as np
import pytest
from scipy.special import erfc

from paprsim import (
    ExperimentSpec,
    ModScheme,
    OfdmParams,
    alternation_count,
    clip_passband,
    default_hpf_spec,
    design_equiripple,
    experiment_hpf,
    run_ber_experiment,
    run_papr_experiment,
    simulate_chain_ber,
)
from paprsim.clip_filter import _composed_rows
from paprsim.constellation import SCHEME_NAMES
from paprsim.fir_design import FirDesignSpec
from paprsim.harness import (
    _cell_rng,
    _clip_magnitude_rows,
    _papr_db_rows,
    _random_bits,
    _tx_baseband_frames,
    envelope_magnitude,
)
from paprsim.ofdm_chain import (
    IMAGE_REJECT_TAPS,
    PassbandSignal,
    _upconvert_rows,
    oversample_extend,
)

from oracles import chebyshev_lp_ripple, direct_oversampled_idft

PARAMS = OfdmParams()  # reference set: N=128, L=8, 1 MHz band, 2 MHz carrier, cp 32
TREND_EBN0_DB = 12.0  # fixed moderate operating point for the BER trend grid
CR_GRID = (0.8, 1.0, 1.2, 1.4, 1.6)
QPSK_REFERENCE_DB = {0.8: 5.11, 1.0: 5.18, 1.2: 5.65, 1.4: 6.04, 1.6: 6.51}


def report(ok: bool, name: str, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    print(line)
    assert ok, line


@pytest.fixture(scope="session")
def papr_result():
    return run_papr_experiment(ExperimentSpec())


@pytest.fixture(scope="session")
def ber_trend_result():
    return run_ber_experiment(ExperimentSpec(ebn0_grid_db=(TREND_EBN0_DB,)))


def binom_sigma(ber: float, total: int) -> float:
    p = min(max(ber, 1.0 / total), 1.0 - 1.0 / total)
    return float(np.sqrt(p * (1.0 - p) / total))


def test_01_zero_noise_loopback_ber_is_zero():
    worst = {}
    for name in SCHEME_NAMES:
        scheme = ModScheme.from_name(name)
        bits_needed = 1000 * PARAMS.n_subcarriers * scheme.bits_per_symbol
        errors, total = simulate_chain_ber(PARAMS, scheme, min_bits=bits_needed, seed=101)
        worst[name] = (errors, total)
    bad = {k: v for k, v in worst.items() if v[0] != 0}
    report(
        not bad,
        "zero-noise loopback",
        f"bit errors over 1000 symbols per scheme: "
        f"{ {k: v[0] for k, v in worst.items()} }",
    )


def test_02_unclipped_qpsk_papr_window(papr_result):
    quantiles = [
        row.papr_db_unclipped for row in papr_result.rows if row.scheme == "qpsk"
    ]
    ok = all(10.5 <= q <= 12.5 for q in quantiles)
    report(
        ok,
        "unclipped QPSK PAPR at CCDF 1e-3",
        f"quantiles over 1e4 symbols: {[f'{q:.2f}' for q in quantiles]} dB "
        "(window 10.5 .. 12.5)",
    )


def test_03_papr_quantiles_monotone_and_qpsk_reference(papr_result):
    rows = {(r.scheme, r.cr): r for r in papr_result.rows}
    mono_bad = []
    for name in SCHEME_NAMES:
        values = [rows[(name, cr)].papr_db_clipped_filtered for cr in CR_GRID]
        if not all(values[i] <= values[i + 1] + 1e-9 for i in range(len(values) - 1)):
            mono_bad.append((name, [round(v, 3) for v in values]))
    qpsk_err = {
        cr: rows[("qpsk", cr)].papr_db_clipped_filtered - ref
        for cr, ref in QPSK_REFERENCE_DB.items()
    }
    ref_bad = {cr: round(e, 2) for cr, e in qpsk_err.items() if abs(e) > 1.0}
    reduction_ok = all(
        r.papr_db_clipped_filtered < r.papr_db_unclipped for r in papr_result.rows
    )
    detail = (
        f"monotonicity violations: {mono_bad or 'none'}; QPSK offsets vs "
        f"5.11/5.18/5.65/6.04/6.51 dB: {[f'{qpsk_err[cr]:+.2f}' for cr in CR_GRID]} "
        f"(tolerance +-1.0 dB); reduction strict in every cell: {reduction_ok}"
    )
    report(not mono_bad and not ref_bad and reduction_ok,
           "clipped+filtered PAPR quantiles", detail)


def test_04_ber_trends_at_fixed_ebn0(ber_trend_result):
    rows = {(r.scheme, r.cr): r for r in ber_trend_result.rows}
    failures = []

    for name in SCHEME_NAMES:
        for lo, hi in zip(CR_GRID, CR_GRID[1:]):
            a, b = rows[(name, lo)], rows[(name, hi)]
            guard = 2.0 * np.hypot(binom_sigma(a.ber, a.bits_total),
                                   binom_sigma(b.ber, b.bits_total))
            if b.ber > a.ber + guard:
                failures.append(f"{name}: ber rose {a.ber:.4f}->{b.ber:.4f} at cr {lo}->{hi}")

    pair_lines = []
    for psk_name, qam_name in (("8psk", "8qam"), ("16psk", "16qam"), ("32psk", "32qam")):
        for cr in CR_GRID:
            p, q = rows[(psk_name, cr)], rows[(qam_name, cr)]
            guard = 2.0 * np.hypot(binom_sigma(p.ber, p.bits_total),
                                   binom_sigma(q.ber, q.bits_total))
            mark = "ok" if q.ber <= p.ber + guard else "VIOLATION"
            pair_lines.append(
                f"{qam_name} vs {psk_name} cr={cr}: {q.ber:.5f} vs {p.ber:.5f} [{mark}]"
            )
            if q.ber > p.ber + guard:
                failures.append(pair_lines[-1])

    detail = (
        f"operating point Eb/N0 = {TREND_EBN0_DB} dB, >= 2e5 bits per cell; "
        f"{len(failures)} violation(s)"
    )
    if failures:
        detail += ": " + "; ".join(failures)
    report(not failures, "BER trends (monotone in CR, M-QAM <= M-PSK)", detail)


def test_05_awgn_calibration_unclipped_qpsk():
    params = OfdmParams(cp_len=0)  # guard airtime off: Eb/N0 on the textbook axis
    scheme = ModScheme("psk", 4)
    offsets = {}
    for ebn0 in (0.0, 2.0, 4.0, 6.0):
        theory = 0.5 * erfc(np.sqrt(10 ** (ebn0 / 10.0)))
        assert theory >= 1e-3
        errors, total = simulate_chain_ber(
            params, scheme, ebn0_db=ebn0, min_bits=200_000, seed=505
        )
        offsets[ebn0] = (errors / total) / theory - 1.0
    ok = all(abs(v) <= 0.15 for v in offsets.values())
    report(
        ok,
        "AWGN calibration (QPSK vs 0.5 erfc(sqrt(Eb/N0)))",
        "relative offsets: " + ", ".join(f"{k:g} dB: {v:+.1%}" for k, v in offsets.items()),
    )


def test_06_clip_hard_bound_and_idempotence():
    rng = _cell_rng(606, 0, 0)
    scheme = ModScheme("psk", 4)
    total_frames = 100_000
    chunk_frames = 2_500
    amplitude = None
    worst = 0.0
    idempotent = True
    for start in range(0, total_frames, chunk_frames):
        bits = _random_bits(rng, chunk_frames, PARAMS.n_subcarriers * 2)
        baseband = _tx_baseband_frames(bits, scheme, PARAMS, cp=False)
        passband = _upconvert_rows(baseband, PARAMS.carrier_hz, PARAMS.sample_hz)
        if amplitude is None:
            amplitude = float(np.sqrt(np.mean(passband**2)))  # CR = 1.0
        for row in (passband[0], passband[-1]):
            sig = PassbandSignal(row, PARAMS.sample_hz)
            once = clip_passband(sig, amplitude)
            twice = clip_passband(once, amplitude)
            idempotent &= bool(np.array_equal(once.samples, twice.samples))
        clipped = np.clip(passband, -amplitude, amplitude)
        worst = max(worst, float(np.max(np.abs(clipped))))
    ok = worst <= amplitude and idempotent
    report(
        ok,
        "clip hard bound over 1e5 frames",
        f"max |sample| after clip = {worst!r} vs A = {amplitude!r}; "
        f"idempotent = {idempotent}",
    )


def test_07_peak_regrowth_after_filtering():
    rng = _cell_rng(707, 0, 0)
    scheme = ModScheme("psk", 4)
    hpf = experiment_hpf(ExperimentSpec())
    bits = _random_bits(rng, 1000, PARAMS.n_subcarriers * 2)
    baseband = _tx_baseband_frames(bits, scheme, PARAMS, cp=False)
    amplitude = float(np.sqrt(np.mean(np.abs(baseband) ** 2)))  # CR = 1.0
    clipped = _clip_magnitude_rows(baseband, amplitude)
    filtered = _composed_rows(
        _upconvert_rows(clipped, PARAMS.carrier_hz, PARAMS.sample_hz), PARAMS, hpf
    )
    envelope = envelope_magnitude(filtered, PARAMS)
    fraction = float(np.mean(np.max(envelope, axis=1) > amplitude))
    report(
        fraction >= 0.01,
        "peak regrowth at CR = 1.0",
        f"{fraction:.1%} of 1000 frames exceed the clip level after filtering (need >= 1%)",
    )


def test_08_equiripple_designs_vs_oracle():
    hpf_spec = default_hpf_spec(PARAMS)
    lpf_spec = FirDesignSpec(
        IMAGE_REJECT_TAPS,
        ((0.0, (PARAMS.bandwidth_hz / 2) / PARAMS.sample_hz),
         (PARAMS.carrier_hz / PARAMS.sample_hz, 0.5)),
        (1.0, 0.0),
        (1.0, 1.0),
    )
    lines = []
    ok = True
    for label, spec in (("hpf", hpf_spec), ("image-lpf", lpf_spec)):
        fir = design_equiripple(spec)
        need = (spec.num_taps + 1) // 2 + 1
        got_alt = alternation_count(fir)
        oracle = chebyshev_lp_ripple(spec, n_grid=2048)
        rel = abs(fir.ripple - oracle) / oracle
        lines.append(
            f"{label}: alternations {got_alt}/{need}, ripple {fir.ripple:.3e} "
            f"vs LP oracle {oracle:.3e} ({rel:.2%})"
        )
        ok &= got_alt >= need and rel <= 0.01
    from paprsim.fir_design import amplitude_response

    hpf = design_equiripple(hpf_spec)
    stop = np.linspace(*hpf_spec.bands[0], 4096)
    attenuation = -20.0 * np.log10(np.max(np.abs(amplitude_response(hpf, stop))))
    lines.append(f"hpf stopband attenuation {attenuation:.1f} dB (need >= 40)")
    ok &= attenuation >= 40.0
    report(ok, "equiripple designs", "; ".join(lines))


def test_09_transform_identities():
    rng = np.random.default_rng(909)
    worst_rt, worst_parseval, worst_direct = 0.0, 0.0, 0.0
    from paprsim import map_bits, ofdm_demodulate, ofdm_modulate

    scheme = ModScheme("qam", 16)
    for _ in range(25):
        bits = rng.integers(0, 2, PARAMS.n_subcarriers * scheme.bits_per_symbol)
        frame = map_bits(bits, scheme)
        ext = oversample_extend(frame, PARAMS.oversample)
        signal = ofdm_modulate(ext, PARAMS)
        back = ofdm_demodulate(signal, PARAMS)
        worst_rt = max(worst_rt, float(np.max(np.abs(back - frame))))
        energy_f = float(np.sum(np.abs(ext) ** 2))
        energy_t = float(np.sum(np.abs(signal.samples) ** 2))
        worst_parseval = max(worst_parseval, abs(energy_f - energy_t) / energy_f)
        direct = direct_oversampled_idft(ext)
        worst_direct = max(
            worst_direct,
            float(np.max(np.abs(signal.samples - direct)) / np.max(np.abs(direct))),
        )
    ok = worst_rt < 1e-9 and worst_parseval < 1e-9 and worst_direct < 1e-9
    report(
        ok,
        "transform identities",
        f"round trip {worst_rt:.2e}, Parseval {worst_parseval:.2e}, "
        f"direct-sum match {worst_direct:.2e} (all < 1e-9)",
    )


def test_10_run_determinism(tmp_path):
    from paprsim.cli import main

    cfg = tmp_path / "det.cfg"
    cfg.write_text(
        "schemes = qpsk, qam\n"
        "cr_values = 0.8, 1.6\n"
        "n_symbols = 1000\n"
        "ebn0_grid_db = 8\n"
        "bits_per_point = 20000\n",
        encoding="utf-8",
    )
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main([str(cfg), "--output-dir", str(out_a), "-q"]) == 0
    assert main([str(cfg), "--output-dir", str(out_b), "-q"]) == 0
    names_a = sorted(p.name for p in out_a.iterdir())
    names_b = sorted(p.name for p in out_b.iterdir())
    identical = names_a == names_b and all(
        (out_a / n).read_bytes() == (out_b / n).read_bytes() for n in names_a
    )
    report(
        identical,
        "run determinism",
        f"two identical runs produced {len(names_a)} byte-identical CSV files",
    )
