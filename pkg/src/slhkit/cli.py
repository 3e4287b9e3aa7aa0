"""Command-line front end.

Commands: check, eval, limit, compose, zoo.  Exit codes are part of the
contract: 0 success, 1 validation or assumption failure, 2 numerical
failure, 3 I/O failure.  The default tolerance (1e-9) can be overridden
with the SLHKIT_TOL environment variable or per-command --tol.
"""

from __future__ import annotations

import os
import sys

import click
import numpy as np

from . import adiabatic, modelfile, svgplot, zoo
from .adiabatic import ScaledSLHFamily
from .characteristic import (
    FrequencyGrid,
    char_op,
    char_op_allpass,
    char_op_stratonovich,
    sweep,
)
from .errors import BadParam, ShapeError, SingularMatrix, SlhkitError
from .model import SLHModel, series_product, validate
from .stratonovich import (
    StratonovichCoefficients,
    ito_to_stratonovich,
    stratonovich_to_ito,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3


def _default_tol() -> float:
    raw = os.environ.get("SLHKIT_TOL")
    if raw is None:
        return 1e-9
    try:
        return float(raw)
    except ValueError:
        raise click.ClickException(f"SLHKIT_TOL is not a number: {raw!r}")


def _read(path):
    try:
        return modelfile.read_model(path)
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(EXIT_IO)
    except modelfile.ModelFileError as exc:
        click.echo(f"error: {path}: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        click.echo(f"error: cannot write {path}: {exc}", err=True)
        sys.exit(EXIT_IO)


def _parse_complex(text: str, what: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise click.ClickException(f"cannot parse {what} {text!r}; use 're' or 're,im'")


@click.group()
def main():
    """Characteristic operators of quantum input-plant-output models."""


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


@main.command("check")
@click.argument("path")
@click.option("--tol", type=float, default=None, help="validation tolerance")
def cmd_check(path, tol):
    """Validate a model file; families also get an assumption report."""
    tol = tol if tol is not None else _default_tol()
    obj = _read(path)
    failed = False
    if isinstance(obj, SLHModel):
        report = validate(obj, tol)
        click.echo(f"kind: slh  n_inputs={obj.n_inputs} dim={obj.dim}")
        click.echo(f"S unitarity residual:  {report.s_unitarity:.3e}")
        click.echo(f"H Hermiticity residual: {report.h_hermiticity:.3e}")
        for msg in report.messages:
            click.echo(f"  {msg}")
        failed = not report.passed(tol)
    elif isinstance(obj, ScaledSLHFamily):
        report = adiabatic.check_assumptions(obj, tol)
        click.echo(f"kind: family  n_inputs={obj.n_inputs} dim={obj.dim} "
                   f"slow={list(obj.partition.slow_indices)}")
        for name, val in report.structural.items():
            click.echo(f"structure {name}: {val:.3e}")
        for name, val in report.hermiticity.items():
            click.echo(f"hermiticity {name}: {val:.3e}")
        click.echo(f"S unitarity residual: {report.s_unitarity:.3e}")
        click.echo(f"A_ff condition estimate: {report.aff_condition:.3e} "
                   f"(invertible: {report.aff_invertible})")
        for name, val in report.k_identity_residuals.items():
            click.echo(f"K identity {name}: {val:.3e}")
        failed = not report.passed(tol)
    elif isinstance(obj, StratonovichCoefficients):
        res = obj.hermiticity_residual()
        click.echo(f"kind: stratonovich  n_inputs={obj.n_inputs} dim={obj.dim}")
        click.echo(f"Hermiticity residual: {res:.3e}")
        failed = res > tol
    click.echo("FAIL" if failed else "PASS")
    sys.exit(EXIT_VALIDATION if failed else EXIT_OK)


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


@main.command("eval")
@click.argument("path")
@click.option("--s", "s_point", default=None, help="single point 're,im'")
@click.option("--sweep", "sweep_spec", default=None, help="grid 'min:max:count'")
@click.option("--axis", type=click.Choice(["imaginary", "real"]), default="imaginary")
@click.option("--method", type=click.Choice(["direct", "allpass", "stratonovich"]),
              default="direct")
@click.option("--out", "out_path", default=None, help="CSV output path")
@click.option("--plot", "plot_path", default=None, help="SVG output path")
@click.option("--entry", "entry_spec", default="0,0",
              help="row,col of the full-matrix entry traced in the plot")
def cmd_eval(path, s_point, sweep_spec, axis, method, out_path, plot_path, entry_spec):
    """Evaluate the characteristic operator over a point or a grid."""
    obj = _read(path)
    if isinstance(obj, StratonovichCoefficients):
        model = stratonovich_to_ito(obj)
    elif isinstance(obj, SLHModel):
        model = obj
    else:
        click.echo("error: eval needs an slh or stratonovich file; "
                   "use 'limit' for families", err=True)
        sys.exit(EXIT_VALIDATION)

    if (s_point is None) == (sweep_spec is None):
        raise click.ClickException("give exactly one of --s or --sweep")
    if s_point is not None:
        # one arbitrary complex point, evaluated outside the grid machinery
        if plot_path:
            raise click.ClickException("--plot needs a --sweep grid")
        z = _parse_complex(s_point, "--s")
        evaluators = {
            "direct": lambda s: char_op(model, s),
            "allpass": lambda s: char_op_allpass(model, s),
            "stratonovich": lambda s: char_op_stratonovich(
                ito_to_stratonovich(model), s),
        }
        try:
            matrices = [evaluators[method](z).data]
            statuses = ["ok"]
        except SingularMatrix as exc:
            matrices = [None]
            statuses = [str(exc)]
        except SlhkitError as exc:  # e.g. no Stratonovich form exists
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_NUMERICAL)
        s_values = [z]
        grid_points = [z]
    else:
        try:
            lo, hi, count = sweep_spec.split(":")
            lo, hi, count = float(lo), float(hi), int(count)
        except ValueError:
            raise click.ClickException("--sweep must be 'min:max:count'")
        if count < 1:
            raise click.ClickException("--sweep count must be >= 1")
        try:
            grid = FrequencyGrid(axis=axis, points=np.linspace(lo, hi, count))
            result = sweep(model, grid, method=method)
        except ShapeError as exc:
            raise click.ClickException(str(exc))
        except SlhkitError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_NUMERICAL)
        s_values, matrices, statuses = modelfile.from_sweep_result(result)
        grid_points = list(grid.points)

    n_ok = sum(1 for v in matrices if v is not None)
    click.echo(f"evaluated {len(s_values)} point(s), "
               f"{len(s_values) - n_ok} singular")
    if out_path:
        try:
            modelfile.write_sweep_csv(out_path, s_values, matrices, statuses,
                                      model.n_inputs, model.dim)
        except OSError as exc:
            click.echo(f"error: cannot write {out_path}: {exc}", err=True)
            sys.exit(EXIT_IO)
        click.echo(f"wrote {out_path}")
    if plot_path:
        try:
            r, c = (int(v) for v in entry_spec.split(","))
        except ValueError:
            raise click.ClickException("--entry must be 'row,col'")
        nm = model.n_inputs * model.dim
        if not (0 <= r < nm and 0 <= c < nm):
            raise click.ClickException(f"--entry out of range for a {nm}x{nm} matrix")
        vals = [v[r, c] if v is not None else complex("nan")
                for v in matrices]
        _write_text(plot_path, svgplot.magnitude_phase_svg(
            grid_points, vals,
            x_label="omega" if axis == "imaginary" else "s"))
        click.echo(f"wrote {plot_path}")
    if n_ok == 0:
        click.echo("error: all grid points singular", err=True)
        sys.exit(EXIT_NUMERICAL)
    sys.exit(EXIT_OK)


# ---------------------------------------------------------------------------
# limit
# ---------------------------------------------------------------------------


@main.command("limit")
@click.argument("path")
@click.option("--emit", "emit_path", default=None,
              help="write the reduced slow model here when decoupled")
@click.option("--study", "study_spec", default=None,
              help="comma-separated k values for a convergence study")
@click.option("--s", "s_point", default="1,0", help="evaluation point 're,im'")
@click.option("--tol", type=float, default=None)
def cmd_limit(path, emit_path, study_spec, s_point, tol):
    """Assumption report, limit model, decoupling verdict for a family file."""
    tol = tol if tol is not None else _default_tol()
    obj = _read(path)
    if not isinstance(obj, ScaledSLHFamily):
        click.echo("error: limit needs a family file", err=True)
        sys.exit(EXIT_VALIDATION)
    report = adiabatic.check_assumptions(obj, tol)
    click.echo(f"assumptions: {'PASS' if report.passed(tol) else 'FAIL'}")
    for name, val in report.structural.items():
        click.echo(f"  structure {name}: {val:.3e}")
    click.echo(f"  A_ff condition estimate: {report.aff_condition:.3e}")
    if not report.passed(tol):
        sys.exit(EXIT_VALIDATION)

    limit = adiabatic.limit_slh(obj, tol)
    click.echo(f"Shat unitarity residual: {limit.shat_unitarity:.3e}")
    click.echo(f"Hhat form agreement:     {limit.hhat_alt_residual:.3e}")
    click.echo(f"decoupling residual:     {limit.decoupling_residual:.3e}")
    click.echo(f"decoupled: {limit.decoupled}")
    if limit.decoupled and emit_path:
        _write_text(emit_path, modelfile.dumps(limit.slow_model))
        click.echo(f"wrote reduced slow model to {emit_path}")
    elif emit_path:
        click.echo("not decoupled; no slow model written")

    if study_spec:
        try:
            ks = [float(v) for v in study_spec.split(",") if v]
        except ValueError:
            raise click.ClickException("--study must be comma-separated numbers")
        s = _parse_complex(s_point, "--s")
        try:
            study = adiabatic.convergence_study(obj, s, ks)
        except SingularMatrix as exc:
            click.echo(f"error: convergence study failed: {exc}", err=True)
            sys.exit(EXIT_NUMERICAL)
        click.echo("k, error")
        for k, err in study.rows():
            click.echo(f"{k:g}, {err:.6e}")
        if study.slope is not None:
            click.echo(f"log-log slope: {study.slope:.3f}")
        else:
            click.echo("log-log slope: not fitted (need >= 3 points with k >= 100)")
    sys.exit(EXIT_OK)


# ---------------------------------------------------------------------------
# compose
# ---------------------------------------------------------------------------


@main.command("compose")
@click.argument("downstream_path")
@click.argument("upstream_path")
@click.option("--out", "out_path", required=True)
def cmd_compose(downstream_path, upstream_path, out_path):
    """Series product: feed the upstream model's output into the downstream."""
    B = _read(downstream_path)
    A = _read(upstream_path)
    if not isinstance(B, SLHModel) or not isinstance(A, SLHModel):
        click.echo("error: compose needs two slh model files", err=True)
        sys.exit(EXIT_VALIDATION)
    try:
        composed = series_product(B, A)
    except ShapeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    _write_text(out_path, modelfile.dumps(composed))
    click.echo(f"wrote {out_path} (n_inputs={composed.n_inputs}, dim={composed.dim})")
    sys.exit(EXIT_OK)


# ---------------------------------------------------------------------------
# zoo
# ---------------------------------------------------------------------------

_PARAM_ALIASES = {
    "γ": "gamma", "ω": "omega", "ω0": "omega0",
    "κ": "kappa", "κ1": "kappa1", "κ2": "kappa2", "κ3": "kappa3",
    "Δ": "delta", "α": "alpha", "β": "beta",
    "\U0001d5c0": "g", "χ0": "chi0",
    "φ+": "phi_plus", "φ-": "phi_minus",
}

_INT_PARAMS = {"n_max", "n_max_cavity", "n_max_mirror", "dim", "n_inputs"}
_COMPLEX_PARAMS = {"alpha", "beta"}


@main.command("zoo")
@click.argument("name")
@click.argument("params", nargs=-1)
@click.option("--out", "out_path", default=None)
def cmd_zoo(name, params, out_path):
    """Emit a built-in model; 'zoo list' prints the available entries."""
    if name == "list":
        for entry_name in zoo.names():
            e = zoo.entry(entry_name)
            click.echo(f"{entry_name:20s} [{e.kind:6s}] {e.summary}")
        sys.exit(EXIT_OK)
    kwargs = {}
    for raw in params:
        if "=" not in raw:
            click.echo(f"error: parameters look like name=value, got {raw!r}", err=True)
            sys.exit(EXIT_VALIDATION)
        key, value = raw.split("=", 1)
        key = _PARAM_ALIASES.get(key, key)
        try:
            if key in _INT_PARAMS:
                kwargs[key] = int(value)
            elif key in _COMPLEX_PARAMS:
                kwargs[key] = _parse_complex(value, key)
            else:
                kwargs[key] = float(value)
        except (ValueError, click.ClickException):
            click.echo(f"error: cannot parse value for {key}: {value!r}", err=True)
            sys.exit(EXIT_VALIDATION)
    try:
        obj = zoo.build(name, **kwargs)
    except (BadParam, SlhkitError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    text = modelfile.dumps(obj)
    if out_path:
        _write_text(out_path, text)
        click.echo(f"wrote {out_path}")
    else:
        click.echo(text, nl=False)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
