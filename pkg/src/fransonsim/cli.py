"""Batch front-end: scan presets or custom grids, emit CSV/SVG, fit datasets.

Subcommands:
    scan    run a preset or custom scan, write a CSV (and optional SVG)
    fit     fit a CSV dataset with one of the fringe models
    report  run every preset, sample counts, fit, and print a summary table

Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 numeric or
fit error.
"""

import argparse
import csv
import dataclasses
import io
import json
import math
import sys

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from . import counts as counts_mod
from . import scenarios
from .coincidence import BiphotonSource
from .counts import CountingConfig, FitModel
from .errors import EngineError, SchemaError
from .scenarios import Preset, ScanSpec, StageConfig
from .spectral import SpectralKind, SpectralModel

CSV_HEADER = ["position", "probability", "counts", "uncertainty"]

_SPECTRAL_KINDS = {
    "sinc_squared": SpectralKind.SINC_SQUARED,
    "gaussian": SpectralKind.GAUSSIAN,
    "rectangular": SpectralKind.RECTANGULAR,
}

DEFAULTS = {
    "source": {
        "pump_wavelength_nm": 406.2,
        "center_wavelength_u_nm": 812.4,
        "center_wavelength_l_nm": 812.4,
        "spectral_kind": "sinc_squared",
        "correlation_width_um": 200.0,
        "visibility": 0.92,
        "dx0_mm": 0.0,
    },
    "stages": {
        "dx1_um": 0.0,
        "dx2_um": 0.0,
        "dx3_um": 0.0,
        "theta1_deg": 45.0,
        "theta2_deg": 45.0,
        "geometry_factor": 1.0,
    },
    "counting": {
        "plateau_rate_hz": 2000.0,
        "bin_duration_s": 1.0,
        "accidental_rate_hz": 0.0,
        "seed": 20662,
    },
    "output": {
        "csv": None,
        "svg": None,
    },
}

def _check_number(block, key, value, low=None, high=None, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{block}.{key} must be a number, got {value!r}")
    if integer and not isinstance(value, int):
        raise SchemaError(f"{block}.{key} must be an integer, got {value!r}")
    if low is not None and value < low:
        raise SchemaError(f"{block}.{key} must be >= {low}, got {value!r}")
    if high is not None and value > high:
        raise SchemaError(f"{block}.{key} must be <= {high}, got {value!r}")
    return value


def _check_grid_or_number(block, key, value):
    if isinstance(value, dict):
        unknown = set(value) - {"start", "stop", "num"}
        if unknown:
            raise SchemaError(f"unknown key {block}.{key}.{sorted(unknown)[0]}")
        for sub in ("start", "stop", "num"):
            if sub not in value:
                raise SchemaError(f"{block}.{key} grid needs '{sub}'")
        _check_number(f"{block}.{key}", "start", value["start"])
        _check_number(f"{block}.{key}", "stop", value["stop"])
        _check_number(f"{block}.{key}", "num", value["num"], low=2, integer=True)
        if not value["stop"] > value["start"]:
            raise SchemaError(f"{block}.{key}.stop must exceed start")
        return dict(value)
    return _check_number(block, key, value)


@dataclasses.dataclass
class RunConfig:
    source: dict
    stages: dict
    counting: dict
    output: dict
    explicit: frozenset


def parse_config(text: str) -> RunConfig:
    """Validate a JSON config document; unknown keys and bad values raise."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("config root must be a JSON object")

    unknown = set(doc) - set(DEFAULTS)
    if unknown:
        raise SchemaError(f"unknown key {sorted(unknown)[0]!r}")

    merged = {block: dict(vals) for block, vals in DEFAULTS.items()}
    explicit = set()
    for block, values in doc.items():
        if not isinstance(values, dict):
            raise SchemaError(f"{block!r} must be a JSON object")
        unknown = set(values) - set(DEFAULTS[block])
        if unknown:
            raise SchemaError(f"unknown key {block}.{sorted(unknown)[0]}")
        for key, value in values.items():
            merged[block][key] = value
            explicit.add(f"{block}.{key}")

    src = merged["source"]
    _check_number("source", "pump_wavelength_nm", src["pump_wavelength_nm"], low=1e-3)
    _check_number("source", "center_wavelength_u_nm", src["center_wavelength_u_nm"], low=1e-3)
    _check_number("source", "center_wavelength_l_nm", src["center_wavelength_l_nm"], low=1e-3)
    if src["spectral_kind"] not in _SPECTRAL_KINDS:
        raise SchemaError(
            "source.spectral_kind must be one of "
            f"{sorted(_SPECTRAL_KINDS)}, got {src['spectral_kind']!r}")
    _check_number("source", "correlation_width_um", src["correlation_width_um"], low=1e-9)
    if not (isinstance(src["visibility"], (int, float))
            and not isinstance(src["visibility"], bool)
            and 0.0 <= src["visibility"] <= 1.0):
        raise SchemaError(
            f"source.visibility must be in [0,1], got {src['visibility']!r}")
    _check_number("source", "dx0_mm", src["dx0_mm"])

    # if the user pinned both center wavelengths, hold them to the pump
    if ("source.center_wavelength_u_nm" in explicit
            or "source.center_wavelength_l_nm" in explicit):
        inv_sum = 1.0 / src["center_wavelength_u_nm"] + 1.0 / src["center_wavelength_l_nm"]
        inv_pump = 1.0 / src["pump_wavelength_nm"]
        if abs(inv_sum - inv_pump) / inv_pump > 1e-6:
            raise SchemaError(
                "source.center_wavelength_u_nm/l_nm violate pump energy "
                f"conservation by {abs(inv_sum - inv_pump) / inv_pump:.2e} relative")

    stages = merged["stages"]
    for key in ("dx1_um", "dx2_um", "dx3_um", "theta2_deg"):
        stages[key] = _check_grid_or_number("stages", key, stages[key])
    _check_number("stages", "theta1_deg", stages["theta1_deg"])
    _check_number("stages", "geometry_factor", stages["geometry_factor"], low=1e-12)

    cnt = merged["counting"]
    _check_number("counting", "plateau_rate_hz", cnt["plateau_rate_hz"], low=1e-12)
    _check_number("counting", "bin_duration_s", cnt["bin_duration_s"], low=1e-12)
    _check_number("counting", "accidental_rate_hz", cnt["accidental_rate_hz"], low=0.0)
    _check_number("counting", "seed", cnt["seed"], low=0, integer=True)

    out = merged["output"]
    for key in ("csv", "svg"):
        if out[key] is not None and not isinstance(out[key], str):
            raise SchemaError(f"output.{key} must be a string path or null")

    return RunConfig(merged["source"], merged["stages"], merged["counting"],
                     merged["output"], frozenset(explicit))


def _default_config() -> RunConfig:
    return parse_config("{}")


def _source_from_config(cfg: RunConfig) -> BiphotonSource:
    src = cfg.source
    pump = src["pump_wavelength_nm"] * 1e-9
    width = src["correlation_width_um"] * 1e-6 / SPEED_OF_LIGHT
    model = SpectralModel(_SPECTRAL_KINDS[src["spectral_kind"]], width)
    lam_u = src["center_wavelength_u_nm"] * 1e-9
    lam_l = src["center_wavelength_l_nm"] * 1e-9
    # snap the pair to exact energy conservation, preserving their splitting
    f_u, f_l = SPEED_OF_LIGHT / lam_u, SPEED_OF_LIGHT / lam_l
    delta_f = f_u - f_l
    f_half = SPEED_OF_LIGHT / pump / 2.0
    return BiphotonSource(
        pump, SPEED_OF_LIGHT / (f_half + delta_f / 2.0),
        SPEED_OF_LIGHT / (f_half - delta_f / 2.0), model,
        delta_x0=src["dx0_mm"] * 1e-3, visibility=src["visibility"])


def _preset_overrides(cfg: RunConfig) -> dict:
    """Keyword overrides for preset_scan from explicitly configured keys."""
    over = {}
    if "source.pump_wavelength_nm" in cfg.explicit:
        over["pump_wavelength"] = cfg.source["pump_wavelength_nm"] * 1e-9
    if "source.correlation_width_um" in cfg.explicit:
        over["correlation_length"] = cfg.source["correlation_width_um"] * 1e-6
    if "source.visibility" in cfg.explicit:
        over["visibility"] = cfg.source["visibility"]
    if "source.dx0_mm" in cfg.explicit:
        over["dx0"] = cfg.source["dx0_mm"] * 1e-3
    if "stages.theta1_deg" in cfg.explicit:
        over["theta1"] = math.radians(cfg.stages["theta1_deg"])
    if "stages.geometry_factor" in cfg.explicit:
        over["geometry_factor"] = cfg.stages["geometry_factor"]
    return over


def _custom_spec(cfg: RunConfig) -> ScanSpec:
    stages = cfg.stages
    grids = [k for k in ("dx1_um", "dx2_um", "dx3_um", "theta2_deg")
             if isinstance(stages[k], dict)]
    if len(grids) != 1:
        raise SchemaError(
            "a custom scan needs exactly one stage grid among "
            "stages.dx1_um/dx2_um/dx3_um/theta2_deg")
    key = grids[0]
    spec_grid = stages[key]
    unit = 1e-6 if key.endswith("_um") else math.pi / 180.0
    grid = np.linspace(spec_grid["start"] * unit, spec_grid["stop"] * unit,
                       int(spec_grid["num"]))
    varied = key.removesuffix("_um").removesuffix("_deg")

    def scalar(k, unit):
        return (stages[k] if not isinstance(stages[k], dict) else 0.0) * unit

    fixed = StageConfig(
        dx0=cfg.source["dx0_mm"] * 1e-3,
        dx1=scalar("dx1_um", 1e-6),
        dx2=scalar("dx2_um", 1e-6),
        dx3=scalar("dx3_um", 1e-6),
        theta1=math.radians(stages["theta1_deg"]),
        theta2=scalar("theta2_deg", math.pi / 180.0),
        geometry_factor=stages["geometry_factor"],
    )
    return ScanSpec(Preset.CUSTOM, varied, grid, fixed,
                    _source_from_config(cfg), sign=1)


def _format_float(value: float) -> str:
    return format(value, ".17g")


def write_csv(path, records=None, scan=None):
    """CSV with the fixed header; counts columns stay empty without records."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    if records is not None:
        for position, probability, rec in zip(
                scan.positions, scan.probabilities, records):
            writer.writerow([_format_float(position), _format_float(probability),
                             str(rec.counts), _format_float(rec.uncertainty)])
    else:
        for position, probability in zip(scan.positions, scan.probabilities):
            writer.writerow([_format_float(position), _format_float(probability),
                             "", ""])
    with open(path, "w", newline="") as handle:
        handle.write(buffer.getvalue())


def read_csv(path):
    """Parse a scan CSV back into (positions, probabilities, counts or None)."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty CSV") from None
        if header != CSV_HEADER:
            raise SchemaError(
                f"{path}: expected header {','.join(CSV_HEADER)}, got "
                f"{','.join(header)}")
        positions, probabilities, count_values = [], [], []
        has_counts = None
        for line, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise SchemaError(f"{path}:{line}: expected 4 columns")
            try:
                positions.append(float(row[0]))
                probabilities.append(float(row[1]))
            except ValueError as exc:
                raise SchemaError(f"{path}:{line}: {exc}") from exc
            row_has_counts = row[2] != ""
            if has_counts is None:
                has_counts = row_has_counts
            elif has_counts != row_has_counts:
                raise SchemaError(f"{path}:{line}: mixed empty/filled counts")
            if row_has_counts:
                try:
                    count_values.append(int(row[2]))
                except ValueError as exc:
                    raise SchemaError(f"{path}:{line}: {exc}") from exc
    if not positions:
        raise SchemaError(f"{path}: no data rows")
    counts = np.array(count_values) if has_counts else None
    return np.array(positions), np.array(probabilities), counts


def write_svg(path, scan, records=None, title=""):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "fransonsim"
    angle_scan = scan.spec.varied == "theta2"
    x = scan.positions if angle_scan else scan.positions * 1e6
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.plot(x, scan.probabilities, color="tab:blue", lw=1.2,
            label="coincidence probability")
    ax.set_ylabel("coincidence probability")
    if records is not None:
        ax2 = ax.twinx()
        ax2.errorbar(x, [r.counts for r in records],
                     yerr=[r.uncertainty for r in records],
                     fmt=".", ms=3, color="tab:red", alpha=0.6,
                     label="sampled counts")
        ax2.set_ylabel("counts per bin")
    ax.set_xlabel("analyzer angle (rad)" if angle_scan
                  else f"{scan.spec.varied} (um)")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def command_scan(args) -> int:
    cfg = _load_config(args)
    if args.seed is not None:
        cfg.counting["seed"] = args.seed

    if args.preset == "custom":
        spec = _custom_spec(cfg)
    else:
        spec = scenarios.preset_scan(args.preset, sign=args.sign,
                                     **_preset_overrides(cfg))
    scan = scenarios.run_scan(spec)

    records = None
    if args.counts:
        counting = CountingConfig(
            plateau_rate=cfg.counting["plateau_rate_hz"],
            bin_duration=cfg.counting["bin_duration_s"],
            accidental_rate=cfg.counting["accidental_rate_hz"],
            rng_seed=cfg.counting["seed"])
        records = counts_mod.sample_counts(scan, counting)

    out = args.out or cfg.output["csv"] or f"{args.preset}.csv"
    write_csv(out, records=records, scan=scan)
    print(f"wrote {len(scan)} points to {out}")

    svg = args.svg or cfg.output["svg"]
    if svg:
        write_svg(svg, scan, records, title=args.preset)
        print(f"wrote plot to {svg}")
    return 0


_FIT_MODELS = ("hom", "beat", "polarization", "envelope")


def command_fit(args) -> int:
    cfg = _load_config(args)
    positions, probabilities, count_values = read_csv(args.infile)

    accidentals = (cfg.counting["accidental_rate_hz"]
                   * cfg.counting["bin_duration_s"])
    if count_values is not None:
        records = [counts_mod.CountRecord(p, 0.0, int(n), math.sqrt(int(n)))
                   for p, n in zip(positions, count_values)]
        data = records
    else:
        spec = ScanSpec(Preset.CUSTOM, "dx1", positions,
                        StageConfig(), _source_from_config(_default_config()))
        data = scenarios.ScanResult(spec, positions, probabilities,
                                    np.ones_like(positions, bool),
                                    np.ones_like(positions, bool))
        accidentals = 0.0

    lam = 2.0 * cfg.source["pump_wavelength_nm"] * 1e-9
    report = {"model": args.model, "input": args.infile}
    if args.model == "hom":
        est = counts_mod.estimate_visibility(data, FitModel.TRIANGLE_PEAK_DIP)
        report["visibility"] = est.visibility
        report["sigma_visibility"] = est.sigma
        print(f"visibility = {est.visibility:.4f} +- {est.sigma:.4f}")
        if accidentals > 0.0 and count_values is not None:
            corrected = counts_mod.estimate_visibility(
                data, FitModel.TRIANGLE_PEAK_DIP, accidentals_per_bin=accidentals)
            report["visibility_accidental_corrected"] = corrected.visibility
            print(f"visibility (accidentals subtracted) = "
                  f"{corrected.visibility:.4f} +- {corrected.sigma:.4f}")
    elif args.model == "beat":
        est = counts_mod.estimate_beat_frequency(data, lam)
        report["delta_f_hz"] = est.delta_f
        report["sigma_delta_f_hz"] = est.sigma_delta_f
        report["delta_lambda_m"] = est.delta_lambda
        print(f"beat frequency = {est.delta_f / 1e12:.4f} +- "
              f"{est.sigma_delta_f / 1e12:.4f} THz")
        print(f"wavelength splitting = {est.delta_lambda * 1e9:.3f} nm")
    elif args.model == "polarization":
        est = counts_mod.estimate_visibility(data, FitModel.POLARIZATION_CURVE)
        report["visibility"] = est.visibility
        report["sigma_visibility"] = est.sigma
        print(f"polarization visibility = {est.visibility:.4f} +- {est.sigma:.4f}")
    elif args.model == "envelope":
        est = counts_mod.fit_envelope_center(data)
        report["center_m"] = est.center
        report["sigma_center_m"] = est.sigma_center
        report["half_width_m"] = est.width
        print(f"envelope center = {est.center * 1e6:.2f} +- "
              f"{est.sigma_center * 1e6:.2f} um")
        print(f"envelope half width = {est.width * 1e6:.2f} um")
    else:
        raise SchemaError(f"unknown fit model {args.model!r}")

    if args.out:
        with open(args.out, "w") as handle:
            json.dump(report, handle, indent=2)
            handle.write("\n")
        print(f"wrote report to {args.out}")
    return 0


def command_report(args) -> int:
    cfg = _load_config(args)
    if args.seed is not None:
        cfg.counting["seed"] = args.seed
    counting = CountingConfig(
        plateau_rate=cfg.counting["plateau_rate_hz"],
        bin_duration=cfg.counting["bin_duration_s"],
        accidental_rate=cfg.counting["accidental_rate_hz"],
        rng_seed=cfg.counting["seed"])
    overrides = _preset_overrides(cfg)

    rows = []
    summary = {}
    for name, sign in (("fig2a", 1), ("fig2a", -1), ("fig2b", None),
                       ("fig2c", None), ("fig2d", None), ("fig3", 1),
                       ("fig3", -1), ("fig4", None)):
        spec = scenarios.preset_scan(name, sign=sign, **overrides)
        scan = scenarios.run_scan(spec)
        records = counts_mod.sample_counts(scan, counting)
        label = name if sign is None else f"{name} {'peak' if sign > 0 else 'dip'}"
        configured = spec.source.visibility
        if name in ("fig2a", "fig4"):
            est = counts_mod.estimate_visibility(records, FitModel.TRIANGLE_PEAK_DIP)
            rows.append((label, "visibility", configured, est.visibility, est.sigma))
        if name == "fig3":
            beat = counts_mod.estimate_beat_frequency(
                records, spec.source.degenerate_wavelength)
            rows.append((label, "visibility", configured,
                         beat.visibility, beat.sigma_visibility))
            rows.append((label, "beat freq (THz)",
                         abs(spec.source.delta_omega) / (2e12 * math.pi),
                         beat.delta_f / 1e12, beat.sigma_delta_f / 1e12))
        if name == "fig2c":
            est = counts_mod.estimate_visibility(records, FitModel.SINUSOID)
            rows.append((label, "visibility", configured, est.visibility, est.sigma))
            rows.append((label, "period (nm)",
                         spec.source.degenerate_wavelength * 1e9,
                         est.period * 1e9, (est.sigma_period or 0.0) * 1e9))
        if name == "fig2d":
            est = counts_mod.estimate_visibility(records, FitModel.POLARIZATION_CURVE)
            rows.append((label, "visibility", configured, est.visibility, est.sigma))
        if name == "fig4":
            env = counts_mod.fit_envelope_center(records)
            rows.append((label, "center (mm)", spec.source.delta_x0 * 1e3,
                         env.center * 1e3, env.sigma_center * 1e3))

    print(f"{'scan':<12} {'quantity':<16} {'configured':>11} "
          f"{'estimated':>11} {'sigma':>9}")
    for label, quantity, configured, estimated, sigma in rows:
        print(f"{label:<12} {quantity:<16} {configured:>11.4f} "
              f"{estimated:>11.4f} {sigma:>9.4f}")
        summary.setdefault(label, {})[quantity] = {
            "configured": configured, "estimated": estimated, "sigma": sigma}

    if args.out:
        with open(args.out, "w") as handle:
            json.dump(summary, handle, indent=2)
            handle.write("\n")
        print(f"wrote report to {args.out}")
    return 0


def _load_config(args) -> RunConfig:
    if getattr(args, "config", None):
        with open(args.config) as handle:
            return parse_config(handle.read())
    return _default_config()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fransonsim",
        description="Franson-interferometer two-photon fringe simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="run a preset or custom scan")
    scan.add_argument("--preset", default="fig2a",
                      choices=["fig2a", "fig2b", "fig2c", "fig2d",
                               "fig3", "fig4", "custom"])
    scan.add_argument("--sign", type=int, choices=[1, -1], default=None,
                      help="peak (+1) or dip (-1) analyzer combination")
    scan.add_argument("--config", help="JSON config path")
    scan.add_argument("--counts", action="store_true",
                      help="sample Poisson counts into the CSV")
    scan.add_argument("--out", help="CSV output path")
    scan.add_argument("--svg", help="SVG plot output path")
    scan.add_argument("--seed", type=int, help="override the counting seed")
    scan.set_defaults(func=command_scan)

    fit = sub.add_parser("fit", help="fit a CSV dataset")
    fit.add_argument("--in", dest="infile", required=True, help="input CSV")
    fit.add_argument("--model", required=True, choices=_FIT_MODELS)
    fit.add_argument("--config", help="JSON config path")
    fit.add_argument("--out", help="JSON report path")
    fit.set_defaults(func=command_fit)

    report = sub.add_parser("report", help="reproduce all presets and fit them")
    report.add_argument("--config", help="JSON config path")
    report.add_argument("--seed", type=int, help="override the counting seed")
    report.add_argument("--out", help="JSON report path")
    report.set_defaults(func=command_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
