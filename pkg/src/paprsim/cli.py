"""Command-line front end: parse a config file, run experiments, write CSVs.

Config format: one ``key = value`` assignment per line, ``#`` starts a
comment, blank lines ignored. Lists are comma separated. Every key is
optional; an empty file runs the reference parameter set end to end. See
configs/reference.cfg for a fully annotated example and the README for the
key table.

Exit codes: 0 success, 1 configuration problem, 2 runtime failure,
3 output I/O failure.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from .constellation import SCHEME_NAMES, ModScheme
from .errors import ConfigError, PaprSimError
from .harness import (
    BerRow,
    ExperimentSpec,
    PaprRow,
    emit_csv,
    run_ber_experiment,
    run_papr_experiment,
    write_ber_curve_csv,
    write_ccdf_csv,
)
from .ofdm_chain import OfdmParams

_EXPERIMENT_KINDS = ("papr", "ber", "both")


@dataclass(frozen=True)
class RunConfig:
    """Validated run description: what to simulate and where to write."""

    experiment: str = "both"
    spec: ExperimentSpec = ExperimentSpec()
    output_dir: Path = Path("results")
    write_curves: bool = True
    verbosity: int = 1


def _parse_scalar(key: str, raw: str, kind):
    try:
        if kind is bool:
            lowered = raw.lower()
            if lowered in ("true", "yes", "1", "on"):
                return True
            if lowered in ("false", "no", "0", "off"):
                return False
            raise ValueError(raw)
        return kind(raw)
    except ValueError:
        raise ConfigError(f"{key} must be a {kind.__name__}, got {raw!r}") from None


def _parse_list(key: str, raw: str, kind):
    items = [part.strip() for part in raw.split(",") if part.strip()]
    if not items:
        raise ConfigError(f"{key} must be a non-empty comma-separated list")
    return tuple(_parse_scalar(key, item, kind) for item in items)


def _read_key_values(path: Path) -> dict[str, str]:
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    pairs: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line.strip()!r}")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line.strip()!r}")
        if key in pairs:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        pairs[key] = value
    return pairs


# Per-key parsers; the two maps split keys between OfdmParams and ExperimentSpec.
_INT = lambda k, v: _parse_scalar(k, v, int)  # noqa: E731
_FLOAT = lambda k, v: _parse_scalar(k, v, float)  # noqa: E731

_PARAM_KEYS = {
    "n_subcarriers": _INT,
    "oversample": _INT,
    "bandwidth_hz": _FLOAT,
    "carrier_hz": _FLOAT,
    "cp_len": _INT,
}
_SPEC_KEYS = {
    "cr_values": lambda k, v: _parse_list(k, v, float),
    "ccdf_read_point": _FLOAT,
    "n_symbols": _INT,
    "ebn0_grid_db": lambda k, v: _parse_list(k, v, float),
    "bits_per_point": _INT,
    "seed": _INT,
    "hpf_num_taps": _INT,
    "hpf_stop_edge": _FLOAT,
    "hpf_pass_edge": _FLOAT,
}


def parse_config(path) -> RunConfig:
    """Load and fully validate a config file; defaults fill absent keys."""
    pairs = _read_key_values(Path(path))

    experiment = pairs.pop("experiment", "both").lower()
    if experiment not in _EXPERIMENT_KINDS:
        raise ConfigError(f"experiment must be one of {_EXPERIMENT_KINDS}, got {experiment!r}")

    schemes = tuple(ModScheme.from_name(n) for n in _parse_list(
        "schemes", pairs.pop("schemes", ",".join(SCHEME_NAMES)), str))

    param_kwargs = {}
    for key, parse in _PARAM_KEYS.items():
        if key in pairs:
            param_kwargs[key] = parse(key, pairs.pop(key))
    spec_kwargs = {}
    for key, parse in _SPEC_KEYS.items():
        if key in pairs:
            spec_kwargs[key] = parse(key, pairs.pop(key))

    output_dir = Path(pairs.pop("output_dir", "results"))
    write_curves = _parse_scalar("write_curves", pairs.pop("write_curves", "true"), bool)
    verbosity = _parse_scalar("verbosity", pairs.pop("verbosity", "1"), int)

    if pairs:
        raise ConfigError(f"unknown config key {sorted(pairs)[0]!r}")

    params = OfdmParams(**param_kwargs)  # sample_hz is always bandwidth * oversample
    spec = ExperimentSpec(params=params, schemes=schemes, **spec_kwargs)
    return RunConfig(
        experiment=experiment,
        spec=spec,
        output_dir=output_dir,
        write_curves=write_curves,
        verbosity=verbosity,
    )


def _cr_tag(cr: float) -> str:
    return f"{cr:g}".replace(".", "p")


def _run_and_write(cfg: RunConfig) -> list[Path]:
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    progress = (lambda msg: print(f"  running {msg}", file=sys.stderr)) if cfg.verbosity > 1 else None
    written: list[Path] = []

    if cfg.experiment in ("papr", "both"):
        result = run_papr_experiment(cfg.spec, progress=progress)
        written.append(emit_csv(result.rows, out / "papr_table.csv",
                                columns=[f.name for f in PaprRow.__dataclass_fields__.values()]))
        if cfg.write_curves:
            for (scheme, cr), curves in result.curves.items():
                tag = f"{scheme}_cr{_cr_tag(cr)}"
                written.append(write_ccdf_csv(curves.clipped, out / f"papr_ccdf_{tag}.csv"))
                written.append(
                    write_ccdf_csv(curves.unclipped, out / f"papr_ccdf_{tag}_unclipped.csv")
                )
        if cfg.verbosity > 0:
            _print_papr_summary(result)

    if cfg.experiment in ("ber", "both"):
        result = run_ber_experiment(cfg.spec, progress=progress)
        written.append(emit_csv(result.rows, out / "ber_table.csv",
                                columns=[f.name for f in BerRow.__dataclass_fields__.values()]))
        if cfg.write_curves:
            for scheme in cfg.spec.schemes:
                for cr in cfg.spec.cr_values:
                    points = [
                        (row.ebn0_db, row.ber, row.bits_total)
                        for row in result.rows
                        if row.scheme == scheme.name and row.cr == cr
                    ]
                    tag = f"{scheme.name}_cr{_cr_tag(cr)}"
                    written.append(write_ber_curve_csv(points, out / f"ber_curve_{tag}.csv"))
        if cfg.verbosity > 0:
            print(f"ber: {len(result.rows)} rows -> {out / 'ber_table.csv'}")

    return written


def _print_papr_summary(result) -> None:
    print("papr quantiles (dB, clipped+filtered / unclipped):")
    for row in result.rows:
        diff = "" if row.difference_db is None else f"  diff={row.difference_db:+.3f}"
        print(
            f"  {row.scheme:>6} cr={row.cr:<4g} "
            f"{row.papr_db_clipped_filtered:6.3f} / {row.papr_db_unclipped:6.3f}{diff}"
        )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="paprsim",
        description="OFDM peak-power reduction experiments: clipping plus "
        "composed frequency-domain filtering, with PAPR CCDF and BER sweeps.",
    )
    parser.add_argument("config", nargs="?", help="config file (key = value lines); "
                        "omit to run the reference defaults")
    parser.add_argument("--output-dir", help="override the output directory")
    parser.add_argument("--seed", type=int, help="override the master seed")
    parser.add_argument("--experiment", choices=_EXPERIMENT_KINDS, help="override experiment kind")
    verb = parser.add_mutually_exclusive_group()
    verb.add_argument("-q", "--quiet", action="store_true", help="suppress the run summary")
    verb.add_argument("-v", "--verbose", action="store_true", help="print per-cell progress")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        cfg = parse_config(args.config) if args.config else RunConfig()
        if args.seed is not None:
            cfg = replace(cfg, spec=replace(cfg.spec, seed=args.seed))
        if args.output_dir is not None:
            cfg = replace(cfg, output_dir=Path(args.output_dir))
        if args.experiment is not None:
            cfg = replace(cfg, experiment=args.experiment)
        if args.quiet:
            cfg = replace(cfg, verbosity=0)
        elif args.verbose:
            cfg = replace(cfg, verbosity=2)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    try:
        written = _run_and_write(cfg)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except PaprSimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if cfg.verbosity > 0:
        print(f"wrote {len(written)} files to {cfg.output_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
