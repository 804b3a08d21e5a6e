"""Command line front end: ``sweep``, ``resonances``, ``verify`` and ``presets``.

Exit codes: 0 success, 2 configuration or input error, 3 geometry error,
4 verification failure.
"""
from __future__ import annotations

import argparse
import cmath
import csv
import io
import math
import sys
import warnings

import numpy as np

from . import presets as _presets
from .exceptions import (
    ConfigError,
    GeometryError,
    GridError,
    IllConditionedError,
    PresetIntegrityError,
)
from .layers import (
    SPEED_OF_LIGHT,
    DeltaBarrier,
    Dielectric,
    DispersionModel,
    Gap,
    LayerStack,
    SquareBarrier,
)
from .oracle import match_interfaces, single_barrier_closed_form
from .scattering import scatter
from .spectra import default_grid, mode_spacing, resonances, sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GEOMETRY = 3
EXIT_VERIFY = 4

VERIFY_TOL = 1e-9

CSV_COLUMNS = (
    "k_per_mm",
    "f_GHz",
    "abs_T",
    "abs_R",
    "arg_T_unwrapped_rad",
    "phi1_rad",
    "phibar2_rad",
    "delta_phi_rad",
    "trace_half_re",
    "band_flag",
    "t_monodromy",
    "t_wigner",
    "speed_ratio",
    "d_pen_mm",
)

# accepted keys per element kind
_SCHEMA = {
    "barrier": ("width_mm", "kappa0_per_mm"),
    "delta": ("lambda_per_mm",),
    "gap": ("width_mm",),
    "dielectric": ("width_mm", "n"),
}


# -- stack configuration text ------------------------------------------------


def _number(text, key, lineno):
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{key}={text!r} is not a number", lineno) from None
    if not math.isfinite(value):
        raise ConfigError(f"{key} must be finite", lineno)
    return value


def _parse_line(line: str, lineno: int):
    fields = {}
    for token in line.split():
        key, sep, value = token.partition("=")
        if not sep or not key or not value:
            raise ConfigError(f"expected key=value, got {token!r}", lineno)
        if key in fields:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        fields[key] = value
    return fields


def parse_stack_config(text: str) -> LayerStack:
    """Build a stack from line-oriented ``key=value`` text.

    One element per line, left to right::

        kind=barrier width_mm=3.0 kappa0_per_mm=1.0
        kind=delta lambda_per_mm=5
        kind=gap width_mm=1.0
        kind=dielectric width_mm=5.0 n=1.61

    An optional ``origin_mm=...`` line places the left edge.  ``#`` starts a
    comment.  Unknown kinds and keys are rejected.

    Raises
    ------
    ConfigError
        Malformed lines, unknown kinds or keys, missing values.
    GeometryError
        Negative widths or other invalid element parameters; the message
        names the line.
    """
    layers = []
    origin = 0.0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = _parse_line(line, lineno)
        if "kind" not in fields:
            if set(fields) == {"origin_mm"}:
                origin = _number(fields["origin_mm"], "origin_mm", lineno)
                continue
            raise ConfigError("missing kind=", lineno)
        kind = fields.pop("kind")
        if kind not in _SCHEMA:
            raise ConfigError(
                f"unknown kind {kind!r} (expected one of {', '.join(_SCHEMA)})", lineno
            )
        wanted = _SCHEMA[kind]
        unknown = sorted(set(fields) - set(wanted))
        if unknown:
            raise ConfigError(f"unknown key(s) for {kind}: {', '.join(unknown)}", lineno)
        missing = [key for key in wanted if key not in fields]
        if missing:
            raise ConfigError(f"missing key(s) for {kind}: {', '.join(missing)}", lineno)
        vals = {key: _number(fields[key], key, lineno) for key in wanted}
        try:
            layers.append(_make_layer(kind, vals))
        except GeometryError as exc:
            raise GeometryError(str(exc), lineno) from None
    try:
        stack = LayerStack(tuple(layers), origin=origin)
        stack.check_geometry()
    except GeometryError as exc:
        raise GeometryError(str(exc)) from None
    return stack


def _make_layer(kind, vals):
    if kind == "barrier":
        if vals["width_mm"] < 0:
            raise GeometryError(f"negative barrier width {vals['width_mm']}")
        return SquareBarrier(vals["width_mm"] / 2, vals["kappa0_per_mm"])
    if kind == "delta":
        return DeltaBarrier(vals["lambda_per_mm"])
    if kind == "gap":
        return Gap(vals["width_mm"])
    if vals["width_mm"] < 0:
        raise GeometryError(f"negative dielectric width {vals['width_mm']}")
    return Dielectric(vals["width_mm"] / 2, vals["n"])


def serialize_stack(stack: LayerStack) -> str:
    """Inverse of :func:`parse_stack_config`; floats are written with ``repr``."""
    lines = []
    if stack.origin != 0:
        lines.append(f"origin_mm={stack.origin!r}")
    for layer in stack.layers:
        if isinstance(layer, SquareBarrier):
            lines.append(
                f"kind=barrier width_mm={layer.width!r} kappa0_per_mm={layer.kappa0!r}"
            )
        elif isinstance(layer, DeltaBarrier):
            lines.append(f"kind=delta lambda_per_mm={layer.strength!r}")
        elif isinstance(layer, Gap):
            lines.append(f"kind=gap width_mm={layer.width!r}")
        else:
            lines.append(f"kind=dielectric width_mm={layer.width!r} n={layer.n!r}")
    return "\n".join(lines) + "\n"


# -- run configuration --------------------------------------------------------


def _resolve(args):
    """Stack, dispersion, grid, cell and preset (or None) for a command."""
    if bool(args.preset) == bool(args.config):
        raise ConfigError("give exactly one of --preset or --config")
    preset = None
    if args.preset:
        try:
            preset = _presets.build(
                args.preset, layer_model=args.layer_model, kappa0=args.kappa0
            )
        except KeyError as exc:
            raise ConfigError(exc.args[0]) from None
        stack, dispersion, cell = preset.stack, preset.dispersion, preset.cell
    else:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc.strerror}") from None
        stack = parse_stack_config(text)
        dispersion = DispersionModel.electromagnetic()
        cell = None
    if args.dispersion == "em":
        dispersion = DispersionModel.electromagnetic()
    elif args.dispersion == "particle":
        dispersion = DispersionModel.massive_particle()

    if args.kmin is None and args.kmax is None and preset is not None:
        grid = preset.grid
        if args.points is not None:
            grid = np.linspace(grid[0], grid[-1], args.points)
    else:
        if args.kmin is None or args.kmax is None:
            raise ConfigError("--kmin and --kmax are required without a preset window")
        if not (0 < args.kmin < args.kmax):
            raise ConfigError("need 0 < kmin < kmax")
        if args.points is not None:
            if args.points < 3:
                raise ConfigError("--points must be at least 3")
            grid = np.linspace(args.kmin, args.kmax, args.points)
        else:
            grid = default_grid(stack, args.kmin, args.kmax)
    return stack, dispersion, grid, cell, preset


def _fmt(x) -> str:
    return f"{x:.12g}"


def write_csv(spectrum, fh) -> None:
    """Write one row per grid point with the fixed column set."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    f = spectrum.frequency_ghz
    for i, k in enumerate(spectrum.k):
        w.writerow(
            (
                _fmt(k),
                "" if f is None else _fmt(f[i]),
                _fmt(abs(spectrum.T[i])),
                _fmt(abs(spectrum.R[i])),
                _fmt(spectrum.unwrapped_phibar2[i]),
                _fmt(spectrum.phi1[i]),
                _fmt(spectrum.phibar2[i]),
                _fmt(spectrum.delta_phi[i]),
                _fmt(spectrum.trace_half[i]),
                spectrum.band[i],
                _fmt(spectrum.t_monodromy[i]),
                _fmt(spectrum.t_wigner[i]),
                _fmt(spectrum.speed_ratio[i]),
                _fmt(spectrum.d_pen[i]),
            )
        )


def _emit(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {out}: {exc.strerror}") from None


# -- commands -------------------------------------------------------------------


def cmd_sweep(args) -> int:
    stack, dispersion, grid, cell, _ = _resolve(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        spectrum = sweep(stack, grid, dispersion, cell=cell, workers=args.workers)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    buf = io.StringIO()
    write_csv(spectrum, buf)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_resonances(args) -> int:
    stack, dispersion, grid, cell, preset = _resolve(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        spectrum = sweep(stack, grid, dispersion, cell=cell, workers=args.workers)
    peaks = resonances(spectrum, prominence=args.prominence)
    em = dispersion.kind == "em"
    lines = [f"# {len(peaks)} resonance(s), d_total = {stack.width:.12g} mm"]
    lines.append("k_per_mm,f_GHz,T2_peak")
    for p in peaks:
        f = "" if p.f_ghz is None else _fmt(p.f_ghz)
        lines.append(f"{_fmt(p.k)},{f},{_fmt(p.transmittance)}")
    if em and stack.width > 0:
        lines.append(
            f"# naive c/(2 d_total) = {_fmt(SPEED_OF_LIGHT / (2 * stack.width))} GHz"
        )
        if preset is not None and preset.d_cav:
            lines.append(
                f"# naive c/(2 d_cav)   = {_fmt(SPEED_OF_LIGHT / (2 * preset.d_cav))} GHz"
            )
        if len(peaks) >= 2:
            near = (
                preset.annotations.get("k_c_per_mm", spectrum.k.mean())
                if preset is not None
                else spectrum.k.mean()
            )
            dk = mode_spacing(peaks, near)
            lines.append(
                f"# mode spacing near k={near:.6g}: {_fmt(SPEED_OF_LIGHT * dk / (2 * math.pi))} GHz"
            )
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _single_barrier(stack):
    if len(stack.layers) == 1 and isinstance(stack.layers[0], SquareBarrier):
        return stack.layers[0]
    return None


def cmd_verify(args) -> int:
    stack, _, grid, _, _ = _resolve(args)
    max_t = max_r = 0.0
    skipped = 0
    for k in grid:
        res = scatter(stack, k)
        t, r = res.T, res.R
        if args.corrupt:
            t = t * (1 + args.corrupt)
        try:
            t_o, r_o = match_interfaces(stack, k)
        except IllConditionedError:
            skipped += 1
            continue
        max_t = max(max_t, abs(t - t_o))
        max_r = max(max_r, abs(r - r_o))
    ok = max_t < VERIFY_TOL and max_r < VERIFY_TOL
    lines = [
        f"points: {len(grid)} (skipped ill-conditioned: {skipped})",
        f"max |dT| = {max_t:.3e}",
        f"max |dR| = {max_r:.3e}",
    ]
    barrier = _single_barrier(stack)
    if barrier is not None and stack.origin == 0:
        worst = 0.0
        for k in grid:
            if k >= barrier.kappa0:
                continue
            _, phibar2, _ = single_barrier_closed_form(barrier.kappa0, barrier.halfwidth, k)
            arg_it = cmath.phase(1j * scatter(stack, k).T)
            diff = (phibar2 - arg_it + math.pi) % (2 * math.pi) - math.pi
            worst = max(worst, abs(diff))
        lines.append(f"closed-form phase max |d arg(iT)| = {worst:.3e}")
        ok = ok and worst < VERIFY_TOL
    lines.append(f"{'PASS' if ok else 'FAIL'} (tolerance {VERIFY_TOL:g})")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_presets(args) -> int:
    lines = [f"{name:26s} {_presets.DESCRIPTIONS[name]}" for name in _presets.PRESET_IDS]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monodromy",
        description="Transfer-matrix scattering, phases and delay times of 1D stacks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("stack")
    src.add_argument("--preset", help="preset id (see the presets command)")
    src.add_argument("--config", help="stack configuration file")
    src.add_argument("--layer-model", choices=("dielectric", "barrier"), default="dielectric",
                     help="Perspex model for the Nimtz presets")
    src.add_argument("--kappa0", type=float, help="barrier height (1/mm) for presets")
    g = common.add_argument_group("grid")
    g.add_argument("--kmin", type=float)
    g.add_argument("--kmax", type=float)
    g.add_argument("--points", type=int)
    common.add_argument("--dispersion", choices=("em", "particle"),
                        help="override the dispersion model")
    common.add_argument("--workers", type=int, default=None,
                        help="processes for per-point evaluation")
    common.add_argument("--out", default="-", help="output file (default stdout)")

    p = sub.add_parser("sweep", parents=[common], help="write a CSV sweep")
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("resonances", parents=[common], help="list transmission peaks")
    p.add_argument("--prominence", type=float, default=0.1,
                   help="peak prominence as a fraction of the |T|^2 range")
    p.set_defaults(func=cmd_resonances)
    p = sub.add_parser("verify", parents=[common], help="compare against interface matching")
    p.add_argument("--corrupt", type=float, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("presets", help="list preset ids")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, GridError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GeometryError, PresetIntegrityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY


if __name__ == "__main__":
    sys.exit(main())
