"""Command-line interface: ``semiquat frenet|involute|verify|project|example``."""
from __future__ import annotations

import io
import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from .config import RunConfig, parse_grid
from .curves import write_rows
from .errors import ConfigError, SemiQuatError
from .semialgebra import MetricContext
from . import verify as V


def _num(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def to_json(obj, indent: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, np.bool_)):
        return _num(bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{to_json(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(to_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + to_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _table_json(cols, rows) -> str:
    return to_json({"columns": cols, "rows": [[None if v == "" else v for v in r] for r in rows]}) + "\n"


def _emit_table(cols, rows, cfg: RunConfig, path: str | None = None):
    path = path if path is not None else cfg.output_path
    if cfg.output_format == "json":
        text = _table_json(cols, rows)
        if path:
            Path(path).parent.mkdir(parents=True, exist_ok=True)
            Path(path).write_text(text, encoding="utf-8")
        else:
            click.echo(text, nl=False)
    elif path:
        write_rows(path, cols, rows)
    else:
        buf = io.StringIO()
        import csv

        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([v if isinstance(v, str) else _num(v) for v in r])
        click.echo(buf.getvalue(), nl=False)


def _config(ctx_obj, overrides: dict) -> RunConfig:
    base = RunConfig.load(ctx_obj["config"]) if ctx_obj.get("config") else RunConfig()
    d = base.to_dict()
    d["tolerances"] = dict(base.tolerances)
    for key in ("curve", "c", "fd_step"):
        if overrides.get(key) is not None:
            d[key] = overrides[key]
    if overrides.get("grid") is not None:
        d["sample_grid"] = list(parse_grid(overrides["grid"]))
    if overrides.get("metric") is not None:
        d["metric"] = MetricContext.named(overrides["metric"]).to_dict()
    if overrides.get("out") is not None:
        d["output"]["path"] = overrides["out"]
    if overrides.get("fmt") is not None:
        d["output"]["format"] = overrides["fmt"]
    return RunConfig.from_dict(d)


def common_options(f):
    opts = [
        click.option("--config", "config", type=click.Path(dir_okay=False), help="JSON run configuration."),
        click.option("--curve", help="Builtin curve name (example31, exptrig) or a CSV table path."),
        click.option("--c", "c", type=float, help="Involute constant c."),
        click.option("--grid", help="Sample grid a:b:n."),
        click.option("--metric", type=click.Choice(["default", "paper24"]), help="Metric preset."),
        click.option("--fd-step", "fd_step", type=float, help="Use finite differences with this step."),
        click.option("--out", help="Output path (a directory for `project`)."),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), help="Output format."),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _run(fn):
    try:
        return fn()
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    except SemiQuatError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(3)


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Semi-real quaternionic curves in E^2_4: frames, involutes and checks."""


@main.command()
@common_options
def frenet(**kw):
    """Frenet apparatus along the sample grid."""
    def go():
        cfg = _config(kw, kw)
        _emit_table(*V.frenet_table(cfg), cfg)
    _run(go)


@main.command()
@common_options
def involute(**kw):
    """Involute positions, distance and tangency residuals."""
    def go():
        cfg = _config(kw, kw)
        _emit_table(*V.involute_table(cfg), cfg)
    _run(go)


@main.command()
@common_options
def verify(**kw):
    """Run the theorem checks; exit code 0 iff all pass."""
    def go():
        cfg = _config(kw, kw)
        report = V.run_verify(cfg)
        doc = dict(report)
        doc["config_echo"] = cfg.to_dict()
        text = to_json(doc) + "\n"
        if cfg.output_path:
            Path(cfg.output_path).parent.mkdir(parents=True, exist_ok=True)
            Path(cfg.output_path).write_text(text, encoding="utf-8")
        else:
            click.echo(text, nl=False)
        return V.overall_pass(report)
    ok = _run(go)
    sys.exit(0 if ok else 1)


@main.command()
@common_options
@click.option("--drop-axis", "drop_axis", type=int, default=4, show_default=True,
              help="Quaternion component (1-4) left out of the 4D projections.")
def project(drop_axis, **kw):
    """Projection data for the curve, its involute and the associated spatial curves."""
    def go():
        if drop_axis not in (1, 2, 3, 4):
            raise ConfigError(f"--drop-axis must be in 1..4, got {drop_axis}")
        cfg = _config(kw, kw)
        tables = V.project_tables(cfg, drop_axis)
        ext = cfg.output_format
        for name, (cols, rows) in tables.items():
            if cfg.output_path:
                _emit_table(cols, rows, cfg, str(Path(cfg.output_path) / f"{name}.{ext}"))
            else:
                click.echo(f"# {name}")
                _emit_table(cols, rows, cfg, path="")
    _run(go)


@main.command()
@common_options
def example(**kw):
    """Summary of the worked example (apparatus, involute, associated curves)."""
    def go():
        cfg = _config(kw, kw)
        text = to_json(V.example_summary(cfg)) + "\n"
        if cfg.output_path:
            Path(cfg.output_path).write_text(text, encoding="utf-8")
        else:
            click.echo(text, nl=False)
    _run(go)


if __name__ == "__main__":  # pragma: no cover
    main()
