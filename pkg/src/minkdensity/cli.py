"""Command-line front end: config files in, CSV/JSON reports out.

Subcommands: sweep | field | content | check.  Each run reads one JSON
config document, echoes it fully into a manifest next to the outputs, and
is deterministic for a fixed seed and any worker count.  Exit codes:
0 success, 1 config validation, 2 runtime failure, 3 property-check
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, estimators as est, mincontent, processes as proc, reporting
from .geometry import Point, Window, point


class ConfigError(ValueError):
    """Invalid configuration; message names the field and the constraint."""


class CheckFailure(RuntimeError):
    """A property suite found a violation."""


# --------------------------------------------------------------------------
# Config parsing
# --------------------------------------------------------------------------


def _get(obj: dict, key: str, path: str, required=True, default=None):
    if key in obj:
        return obj[key]
    if required:
        raise ConfigError(f"{path}.{key}: required field is missing")
    return default


def _positive(value, path: str) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{path}: must be a number, got {value!r}") from None
    if not out > 0:
        raise ConfigError(f"{path}: must be > 0, got {out}")
    return out


def _positive_int(value, path: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ConfigError(f"{path}: must be an integer >= 1, got {value!r}")
    return value


def parse_window(obj, path: str) -> Window:
    if not isinstance(obj, dict) or "lo" not in obj or "hi" not in obj:
        raise ConfigError(f"{path}: expected an object with 'lo' and 'hi' corner arrays")
    lo, hi = obj["lo"], obj["hi"]
    if not isinstance(lo, list) or not isinstance(hi, list) or len(lo) != len(hi):
        raise ConfigError(f"{path}: 'lo' and 'hi' must be equal-length coordinate arrays")
    if len(lo) not in (1, 2):
        raise ConfigError(f"{path}: dimension must be 1 or 2, got {len(lo)}")
    try:
        return Window(Point(tuple(lo)), Point(tuple(hi)))
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def parse_density(obj, path: str):
    kind = _get(obj, "kind", path)
    w = parse_window(_get(obj, "window", path), f"{path}.window")
    try:
        if kind == "uniform_box":
            return proc.UniformBox(w)
        if kind == "affine_x":
            slope = float(_get(obj, "slope", path))
            return proc.AffineX(w, slope)
        if kind == "gaussian":
            mean = _get(obj, "mean", path)
            sigma = _positive(_get(obj, "sigma", path), f"{path}.sigma")
            return proc.GaussianTruncated(Point(tuple(mean)), sigma, w)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    raise ConfigError(
        f"{path}.kind: unknown density {kind!r}; expected uniform_box, affine_x or gaussian"
    )


def parse_count(obj, path: str):
    kind = _get(obj, "kind", path)
    try:
        if kind == "deterministic":
            return proc.Deterministic(_positive_int(_get(obj, "value", path), f"{path}.value"))
        if kind == "geometric":
            return proc.GeometricOnPositives(float(_get(obj, "p", path)))
        if kind == "one_plus_poisson":
            return proc.OnePlusPoisson(float(_get(obj, "rate", path)))
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    raise ConfigError(
        f"{path}.kind: unknown count law {kind!r}; expected deterministic, geometric "
        "or one_plus_poisson"
    )


def parse_length(obj, path: str):
    kind = _get(obj, "kind", path)
    try:
        if kind == "fixed":
            return proc.FixedLength(_positive(_get(obj, "value", path), f"{path}.value"))
        if kind == "uniform":
            return proc.UniformLength(
                _positive(_get(obj, "lo", path), f"{path}.lo"),
                _positive(_get(obj, "hi", path), f"{path}.hi"),
            )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    raise ConfigError(f"{path}.kind: unknown length law {kind!r}; expected fixed or uniform")


def parse_grain_law(obj, path: str):
    kind = _get(obj, "kind", path)
    centers = parse_density(_get(obj, "centers", path), f"{path}.centers")
    try:
        if kind == "segments":
            return proc.SegmentLaw(centers, parse_length(_get(obj, "length", path), f"{path}.length"))
        if kind == "circles":
            return proc.CircleLaw(centers, _positive(_get(obj, "radius", path), f"{path}.radius"))
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    raise ConfigError(f"{path}.kind: unknown grain law {kind!r}; expected segments or circles")


def parse_model(obj, path: str = "model") -> proc.ModelSpec:
    kind = _get(obj, "kind", path)
    try:
        if kind == "random_point":
            return proc.RandomPointModel(parse_density(_get(obj, "density", path), f"{path}.density"))
        if kind == "grain_union":
            return proc.GrainUnionModel(
                parse_count(_get(obj, "count", path), f"{path}.count"),
                parse_grain_law(_get(obj, "grain", path), f"{path}.grain"),
            )
        if kind == "poisson_line":
            return proc.PoissonLineModel(_positive(_get(obj, "intensity", path), f"{path}.intensity"))
        if kind == "poisson_segment":
            return proc.PoissonSegmentModel(
                _positive(_get(obj, "center_intensity", path), f"{path}.center_intensity"),
                parse_length(_get(obj, "length", path), f"{path}.length"),
            )
        if kind == "birth_growth":
            rate = _positive(_get(obj, "rate", path), f"{path}.rate")
            slope = obj.get("rate_slope")
            nucleation = proc.ConstantRate(rate) if slope is None else proc.AffineRate(rate, float(slope))
            return proc.BirthGrowthModel(
                nucleation,
                _positive(_get(obj, "growth_speed", path), f"{path}.growth_speed"),
                _positive(_get(obj, "horizon", path), f"{path}.horizon"),
                _get(obj, "target", path, required=False, default="boundary"),
            )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    raise ConfigError(
        f"{path}.kind: unknown model {kind!r}; expected random_point, grain_union, "
        "poisson_line, poisson_segment or birth_growth"
    )


def parse_estimator(obj, path: str = "estimator") -> est.EstimatorConfig:
    radii = _get(obj, "radii", path)
    if not isinstance(radii, list) or not radii:
        raise ConfigError(f"{path}.radii: expected a non-empty descending array of radii in (0, 1]")
    try:
        return est.EstimatorConfig(
            radii=tuple(float(r) for r in radii),
            replicates=_positive_int(_get(obj, "replicates", path), f"{path}.replicates"),
            grid_per_axis=_positive_int(
                _get(obj, "grid_per_axis", path, required=False, default=10), f"{path}.grid_per_axis"
            ),
            seed=int(_get(obj, "seed", path)),
            region=parse_window(_get(obj, "region", path), f"{path}.region"),
            clip_window=parse_window(_get(obj, "window", path), f"{path}.window"),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from None
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: {path} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config: top level must be a JSON object")
    return cfg


def _apply_overrides(cfg: dict, seed: int | None) -> dict:
    if seed is not None:
        cfg = json.loads(json.dumps(cfg))
        cfg.setdefault("estimator", {})["seed"] = seed
    return cfg


def _emit_manifest(command: str, cfg: dict, out_dir: Path, outputs: list[str]) -> None:
    seed = cfg.get("estimator", {}).get("seed", cfg.get("seed", 0))
    manifest = reporting.RunManifest(
        version=__version__,
        command=command,
        config=cfg,
        master_seed=int(seed),
        outputs=tuple(outputs),
    )
    reporting.write_manifest(manifest, out_dir / "manifest.json")


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def cmd_sweep(cfg: dict, out_dir: Path, workers: int = 1) -> int:
    model = parse_model(_get(cfg, "model", "config"))
    config = parse_estimator(_get(cfg, "estimator", "config"))
    opts = _get(cfg, "sweep", "config", required=False, default={})
    kind = opts.get("estimator_kind", "enlargement")
    if kind not in ("enlargement", "ball_average", "integrated"):
        raise ConfigError(
            f"sweep.estimator_kind: unknown kind {kind!r}; expected enlargement, "
            "ball_average or integrated"
        )
    out_name = opts.get("output", "sweep.csv")
    report = est.radius_sweep(model, config, kind, workers=workers)
    out_dir.mkdir(parents=True, exist_ok=True)
    reporting.write_sweep_csv(report, out_dir / out_name)
    _emit_manifest("sweep", cfg, out_dir, [out_name])
    print(f"sweep: wrote {out_dir / out_name} ({len(report.rows)} radii)")
    return 0


def cmd_field(cfg: dict, out_dir: Path, workers: int = 1) -> int:
    model = parse_model(_get(cfg, "model", "config"))
    config = parse_estimator(_get(cfg, "estimator", "config"))
    opts = _get(cfg, "field", "config", required=False, default={})
    radius = opts.get("radius", config.radii[-1])
    if not 0.0 < float(radius) <= 1.0:
        raise ConfigError(f"field.radius: must lie in (0, 1], got {radius}")
    out_name = opts.get("output", "field.json")
    field = est.density_field(model, config, float(radius), workers=workers)
    out_dir.mkdir(parents=True, exist_ok=True)
    reporting.write_field_json(field, out_dir / out_name)
    _emit_manifest("field", cfg, out_dir, [out_name])
    print(f"field: wrote {out_dir / out_name} (grid {field.shape}, r={radius})")
    return 0


def cmd_content(cfg: dict, out_dir: Path, workers: int = 1) -> int:
    opts = _get(cfg, "content", "config")
    name = _get(opts, "fixture", "content")
    if name not in mincontent.FIXTURES:
        known = ", ".join(sorted(mincontent.FIXTURES))
        raise ConfigError(f"content.fixture: unknown fixture {name!r}; expected one of {known}")
    radii = _get(opts, "radii", "content")
    if not isinstance(radii, list) or not radii:
        raise ConfigError("content.radii: expected a non-empty descending array")
    cells = opts.get("cells_per_radius", 20)
    if not isinstance(cells, int) or cells < 1:
        raise ConfigError(f"content.cells_per_radius: must be an integer >= 1, got {cells!r}")
    fixture = mincontent.FIXTURES[name]
    try:
        report = mincontent.content_sweep(fixture.set, fixture.region, [float(r) for r in radii], cells)
    except ValueError as exc:
        raise ConfigError(f"content.radii: {exc}") from None
    out_name = opts.get("output", "content.csv")
    out_dir.mkdir(parents=True, exist_ok=True)
    reporting.write_sweep_csv(report, out_dir / out_name)
    _emit_manifest("content", cfg, out_dir, [out_name])
    print(f"content: fixture {name} exact={fixture.exact:.6g}, wrote {out_dir / out_name}")
    return 0


def cmd_check(cfg: dict, out_dir: Path, workers: int = 1) -> int:
    model = parse_model(_get(cfg, "model", "config"))
    opts = _get(cfg, "check", "config", required=False, default={})
    realizations = _positive_int(opts.get("realizations", 100), "check.realizations")
    radii = opts.get("radii", [0.05, 0.1, 0.5, 1.0])
    resolution = _positive_int(opts.get("resolution", 192), "check.resolution")
    seed = int(opts.get("seed", cfg.get("estimator", {}).get("seed", 0)))
    sample_window = parse_window(
        opts.get("window", {"lo": [0.0, 0.0], "hi": [1.0, 1.0]}), "check.window"
    )

    batch = est.sample_batch(model, sample_window, seed, realizations, workers=workers)
    failures = 0
    checked = 0
    skipped = 0
    for s in batch.sets:
        for r in radii:
            result = est.covering_bound_check(s, float(r), resolution)
            if result is None:
                skipped += 1
                continue
            checked += 1
            if not result.ok:
                failures += 1
    summary: dict = {
        "covering": {
            "realizations": realizations,
            "radii": list(radii),
            "checked": checked,
            "skipped_empty": skipped,
            "failures": failures,
        }
    }

    if isinstance(model, proc.GrainUnionModel):
        fx = opts.get("factorization", {})
        q = fx.get("x", list(sample_window.center.coords))
        fr = float(fx.get("radius", 0.05))
        fm = _positive_int(fx.get("replicates", 10000), "check.factorization.replicates")
        ratios = est.factorization_ratios(model, Point(tuple(q)), fr, fm, seed)
        summary["factorization"] = {
            "radius": fr,
            "union_ratio": [ratios.union_ratio.value, ratios.union_ratio.stderr],
            "count_ratio": [ratios.count_ratio.value, ratios.count_ratio.stderr],
            "factored_ratio": [ratios.factored_ratio.value, ratios.factored_ratio.stderr],
            "overlap_ratio": [ratios.overlap_ratio.value, ratios.overlap_ratio.stderr],
        }

    out_name = opts.get("output", "check.json")
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / out_name).write_text(json.dumps(summary, indent=1, sort_keys=True) + "\n")
    _emit_manifest("check", cfg, out_dir, [out_name])
    print(
        f"check: covering bound ok on {checked - failures}/{checked} "
        f"({skipped} empty skipped), wrote {out_dir / out_name}"
    )
    if failures:
        raise CheckFailure(f"covering bound violated on {failures} of {checked} checks")
    return 0


def run_from_manifest(manifest_path, out_dir, workers: int = 1) -> int:
    """Re-run the command recorded in a manifest; outputs are byte-identical."""
    manifest = reporting.read_manifest(manifest_path)
    dispatch = {"sweep": cmd_sweep, "field": cmd_field, "content": cmd_content, "check": cmd_check}
    if manifest.command not in dispatch:
        raise ConfigError(f"manifest.command: unknown command {manifest.command!r}")
    return dispatch[manifest.command](manifest.config, Path(out_dir), workers)


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------

CONFIG_REFERENCE = """\
config file (JSON object), shared sections:

  model.kind               one of random_point | grain_union | poisson_line |
                           poisson_segment | birth_growth
    random_point.density     density spec (see below)
    grain_union.count        {kind: deterministic, value>=1} |
                             {kind: geometric, 0<p<1} |
                             {kind: one_plus_poisson, rate>=0}
    grain_union.grain        {kind: segments, centers: <density>, length: <length>} |
                             {kind: circles, centers: <density>, radius>0}
    poisson_line.intensity   mean line length per unit area, > 0
    poisson_segment.center_intensity  segment centers per unit area, > 0
    poisson_segment.length   {kind: fixed, value>0} | {kind: uniform, 0<lo<=hi}
    birth_growth.rate        nucleation rate, > 0 (rate_slope optional)
    birth_growth.growth_speed, birth_growth.horizon   > 0
    birth_growth.target      boundary | solid

  density spec             {kind: uniform_box, window} |
                           {kind: affine_x, window, slope (|slope|*half_width<=1)} |
                           {kind: gaussian, mean, sigma>0, window}
  window                   {lo: [..], hi: [..]} with lo < hi per axis, d in {1,2}

  estimator.radii          strictly descending, each in (0, 1] (the regime in
                           which sampled realizations remain complete)
  estimator.replicates     Monte Carlo sample size, >= 1
  estimator.grid_per_axis  cells per axis over the region, >= 1 (default 10)
  estimator.seed           master seed, >= 0
  estimator.region         evaluation window A
  estimator.window         clip window, must strictly contain the region

per-command sections:

  sweep.estimator_kind     enlargement | ball_average | integrated
  sweep.output             CSV filename (default sweep.csv)
  field.radius             r in (0, 1] (default: smallest estimator radius)
  field.output             JSON filename (default field.json)
  content.fixture          one of: <FIXTURES>
  content.radii            strictly descending radii
  content.cells_per_radius grid density per radius (default 20)
  check.realizations       sampled realizations for the covering suite
  check.radii              radii in (0, 2) for the covering bound
  check.resolution         quadrature cells per axis (default 192)
  check.window             sampling window (default unit box)
  check.factorization      {x, radius, replicates} for union models
""".replace("<FIXTURES>", ", ".join(sorted(mincontent.FIXTURES)))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minkdensity",
        description="Density estimation for random closed sets via enlargement coverage.",
        epilog=CONFIG_REFERENCE,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"minkdensity {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "sweep": "radius sweep of a density estimator, written as CSV",
        "field": "local density field over a grid, written as JSON",
        "content": "deterministic Minkowski-content sweep on a catalogue fixture",
        "check": "covering-bound and union-factorization property suites",
    }
    for name, help_text in specs.items():
        p = sub.add_parser(
            name,
            help=help_text,
            epilog=CONFIG_REFERENCE,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        p.add_argument("--config", required=True, help="path to the JSON run config")
        p.add_argument("--seed", type=int, default=None, help="override estimator.seed (u64)")
        p.add_argument("--workers", type=int, default=1, help="parallel replicate workers; output is identical for every value")
        p.add_argument("--out", default=".", help="output directory (default: current)")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    dispatch = {"sweep": cmd_sweep, "field": cmd_field, "content": cmd_content, "check": cmd_check}
    try:
        cfg = load_config(args.config)
        cfg = _apply_overrides(cfg, args.seed)
        if args.workers < 1:
            raise ConfigError(f"--workers: must be >= 1, got {args.workers}")
        return dispatch[args.command](cfg, Path(args.out), args.workers)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except CheckFailure as exc:
        print(f"property check failed: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
