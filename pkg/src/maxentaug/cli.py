"""Command-line interface: augment, sweep, bench, preset-dump.

Exit codes: 0 success, 1 partial failure (skipped images), 2 invalid
config or manifest.
"""

from __future__ import annotations

import sys

import click

from . import __version__
from .config import PRESET_NAMES, dumps_config, load_config, preset
from .errors import ConfigError, InvalidParameterError, ManifestError
from .pipeline import SWEEP_DEFAULTS, run_augment, run_bench, run_sweep


def _resolve_config(config_path, preset_name):
    if config_path and preset_name:
        raise ConfigError("use either --config or --preset, not both")
    if config_path:
        return load_config(config_path), "custom"
    name = preset_name or "default"
    return preset(name), name


def _config_options(fn):
    fn = click.option("--config", "config_path", type=click.Path(exists=True), default=None,
                      help="Config file (flat key = value format).")(fn)
    fn = click.option("--preset", "preset_name", type=click.Choice(PRESET_NAMES), default=None,
                      help="Named preset (default: 'default').")(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True, help="Root RNG seed.")(fn)
    fn = click.option("--workers", type=int, default=1, show_default=True)(fn)
    return fn


@click.group()
@click.version_option(version=__version__, prog_name="maxentaug")
def cli():
    """Deterministic mixture-of-max-entropy-transformations image augmentation."""


@cli.command()
@click.argument("manifest", type=click.Path(exists=True))
@_config_options
@click.option("--out", "out_dir", type=click.Path(), required=True, help="Output directory.")
@click.option("--copies", type=int, default=1, show_default=True,
              help="Augmented copies per manifest image.")
def augment(manifest, config_path, preset_name, seed, workers, out_dir, copies):
    """Augment every image in MANIFEST into --out."""
    try:
        cfg, _ = _resolve_config(config_path, preset_name)
        summary = run_augment(manifest, cfg, out_dir, seed=seed, workers=workers, copies=copies)
    except (ConfigError, ManifestError) as exc:
        raise SystemExit(_fail(exc))
    click.echo(f"processed {summary['processed']}, failed {summary['failed']}")
    for failure in summary["failures"]:
        click.echo(f"skipped: {failure}", err=True)
    if summary["failed"]:
        sys.exit(1)


@cli.command()
@click.argument("image", type=click.Path(exists=True))
@click.option("--family", type=click.Choice(sorted(SWEEP_DEFAULTS)), required=True)
@click.option("--values", default=None,
              help="Comma-separated smoothness values (default: figure sweep lists).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True, help="Grid PNG path.")
def sweep(image, family, values, seed, out_path):
    """Render a smoothness-sweep grid (original + transformed variants)."""
    try:
        parsed = [int(v) for v in values.split(",")] if values else None
    except ValueError:
        raise SystemExit(_fail(ConfigError(f"cannot parse --values {values!r}")))
    try:
        run_sweep(image, family, out_path, values=parsed, seed=seed)
    except (ConfigError, ManifestError, InvalidParameterError) as exc:
        raise SystemExit(_fail(exc))
    click.echo(f"wrote {out_path}")


@cli.command()
@click.argument("manifest", type=click.Path(exists=True))
@_config_options
@click.option("--duration", type=float, default=4.0, show_default=True,
              help="Total measurement time in seconds.")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Also write the report to this file.")
def bench(manifest, config_path, preset_name, seed, workers, duration, out_path):
    """Measure decode vs decode+augment throughput."""
    del seed  # benchmark timing does not depend on the seed
    try:
        cfg, name = _resolve_config(config_path, preset_name)
        report = run_bench(manifest, cfg, workers=workers, duration=duration, preset_name=name)
    except (ConfigError, ManifestError) as exc:
        raise SystemExit(_fail(exc))
    text = report.to_text()
    click.echo(text, nl=False)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


@cli.command("preset-dump")
@click.option("--preset", "preset_name", type=click.Choice(PRESET_NAMES), default="default",
              show_default=True)
def preset_dump(preset_name):
    """Print a preset in the config file format."""
    try:
        click.echo(dumps_config(preset(preset_name)), nl=False)
    except ConfigError as exc:
        raise SystemExit(_fail(exc))


def _fail(exc) -> int:
    click.echo(f"error: {exc}", err=True)
    return 2


if __name__ == "__main__":
    cli()
