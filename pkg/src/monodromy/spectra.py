"""k-sweeps, phase unwrapping, delay times, band structure and resonances."""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .exceptions import CausalityWarning, GridError
from .layers import (
    DeltaBarrier,
    Dielectric,
    DispersionModel,
    Gap,
    LayerStack,
    SquareBarrier,
    element_matrix,
)
from .scattering import ScatteringResult, scatter
from .transfer import product, trace_half

EDGE_TOL = 1e-9
POINTS_PER_TURN = 40


@dataclass(frozen=True)
class Resonance:
    k: float
    transmittance: float
    f_ghz: float | None = None


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Scattering results on an ordered k-grid plus derived delay quantities.

    Array attributes share the grid's length.  ``t_monodromy`` uses the
    common reflection/transmission phase; ``t_monodromy_trans`` adds the
    unwrapped reflection-transmission offset ``delta_phi``.  The first and
    last entries of every derivative are one-sided (``lower_accuracy``).
    """

    stack: LayerStack
    dispersion: DispersionModel
    k: np.ndarray
    results: tuple
    T: np.ndarray
    R: np.ndarray
    phi1: np.ndarray
    phibar2: np.ndarray
    delta_phi: np.ndarray
    unwrapped_phibar2: np.ndarray
    unwrapped_delta_phi: np.ndarray
    trace_half: np.ndarray
    band: np.ndarray
    t_monodromy: np.ndarray
    t_monodromy_trans: np.ndarray
    t_wigner: np.ndarray
    speed_ratio: np.ndarray
    d_pen: np.ndarray
    lower_accuracy: np.ndarray

    @property
    def d(self) -> float:
        return self.stack.width

    @property
    def transmittance(self) -> np.ndarray:
        return np.abs(self.T) ** 2

    @property
    def group_speed(self) -> np.ndarray:
        return self.dispersion.group_speed(self.k)

    @property
    def frequency_ghz(self):
        return self.dispersion.frequency_ghz(self.k)

    def causality_violations(self) -> np.ndarray:
        """Interior indices with ``t_monodromy <= 0`` (empty for a causal sweep)."""
        if self.d == 0:
            return np.array([], dtype=int)
        bad = self.t_monodromy[1:-1] <= 0
        return np.flatnonzero(bad) + 1


def check_grid(grid) -> np.ndarray:
    k = np.asarray(grid, dtype=float)
    if k.ndim != 1 or k.size < 3:
        raise GridError("grid needs at least 3 points")
    if not np.all(np.isfinite(k)) or np.any(k <= 0):
        raise GridError("grid values must be positive and finite")
    if np.any(np.diff(k) <= 0):
        raise GridError("grid must be strictly increasing")
    return k


def optical_width(stack: LayerStack) -> float:
    """Rough upper bound on the phase slope ``d(arg T)/dk`` away from resonances."""
    total = 0.0
    for layer in stack.layers:
        if isinstance(layer, Dielectric):
            total += layer.n * layer.width
        else:
            total += layer.width
    return total


def default_grid(stack: LayerStack, kmin: float, kmax: float, points: int = 1000):
    """Uniform grid with at least 40 points per 2 pi of expected phase change.

    The phase change is estimated as twice ``(kmax - kmin)`` times the optical
    width plus ``pi`` per scatterer, the factor two leaving room for the
    extra delay near resonances.
    """
    if not (0 < kmin < kmax):
        raise GridError("need 0 < kmin < kmax")
    n_scatter = sum(not isinstance(layer, Gap) for layer in stack.layers)
    phase = 2 * (kmax - kmin) * optical_width(stack) + math.pi * n_scatter
    n = max(int(points), 3, math.ceil(POINTS_PER_TURN * phase / (2 * math.pi)))
    return np.linspace(kmin, kmax, n)


def unwrap(phases) -> np.ndarray:
    """Remove ``2 pi`` jumps so adjacent differences lie in ``(-pi, pi]``.

    The first element is brought into ``(-pi, pi]``.  The grid must be fine
    enough that the true change between samples is below ``pi``.
    """
    p = np.array(phases, dtype=float)
    if p.size == 0:
        return p
    if not -math.pi < p[0] <= math.pi:
        p[0] = -((-p[0] + math.pi) % (2 * math.pi) - math.pi)
    return np.unwrap(p)


def derivative(y, k) -> np.ndarray:
    """Second-order finite differences, central inside, one-sided at the ends."""
    return np.gradient(np.asarray(y, dtype=float), np.asarray(k, dtype=float), edge_order=2)


def cell_trace(cell, k: float) -> float:
    """Half trace of the cell monodromy matrix (real for lossless cells)."""
    return trace_half(product(element_matrix(layer, k) for layer in cell)).real


def band_structure(cell, grid) -> np.ndarray:
    """``"allowed"``, ``"forbidden"`` or ``"edge"`` per grid point.

    ``cell`` is the sequence of layers forming one period.  Allowed means
    ``|Tr M / 2| < 1``, an edge lies within ``1e-9`` of 1.
    """
    th = np.array([cell_trace(cell, k) for k in np.asarray(grid, dtype=float)])
    return _band_flags(th)


def _band_flags(th: np.ndarray) -> np.ndarray:
    a = np.abs(th)
    return np.where(
        np.abs(a - 1) <= EDGE_TOL, "edge", np.where(a < 1, "allowed", "forbidden")
    )


def _scatter_chunk(args):
    stack, ks = args
    return [scatter(stack, k) for k in ks]


def _scatter_all(stack, k, workers):
    if not workers or workers <= 1:
        return [scatter(stack, kk) for kk in k]
    chunks = np.array_split(k, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_scatter_chunk, [(stack, c) for c in chunks])
    return [r for part in parts for r in part]


def sweep(
    stack: LayerStack,
    grid,
    dispersion: DispersionModel | None = None,
    cell=None,
    workers: int | None = None,
) -> Spectrum:
    """Scatter ``stack`` at every grid point and derive the delay quantities.

    Parameters
    ----------
    stack : LayerStack
    grid : array_like
        Strictly increasing positive wavenumbers, at least three.
    dispersion : DispersionModel, optional
        Defaults to electromagnetic.
    cell : sequence of layers, optional
        One period used for the band flags; the whole stack by default.
    workers : int, optional
        Process count for the per-point evaluations.  Results do not depend on
        it.

    Returns
    -------
    Spectrum
    """
    k = check_grid(grid)
    dispersion = dispersion or DispersionModel.electromagnetic()
    results: list[ScatteringResult] = _scatter_all(stack, k, workers)
    d = stack.width

    T = np.array([r.T for r in results])
    R = np.array([r.R for r in results])
    phi1 = np.array([r.phi1 for r in results])
    phibar2 = np.array([r.phibar2 for r in results])
    delta_phi = np.array([r.delta_phi for r in results])
    phibar2_u = unwrap(phibar2)
    # delta_phi is defined modulo pi
    delta_u = np.unwrap(delta_phi, period=math.pi)

    v = dispersion.group_speed(k)
    slope = derivative(phibar2_u + d * k, k)
    t_mon = slope / v
    t_trans = derivative(phibar2_u + d * k + delta_u, k) / v
    t_wig = (d + derivative(phibar2_u - phi1, k)) / v
    if d > 0:
        with np.errstate(divide="ignore"):
            ratio = np.where(slope > 0, d / np.where(slope > 0, slope, 1.0), np.nan)
    else:
        ratio = np.ones_like(k)
    d_pen = slope / 2

    if cell is None:
        th = np.array([trace_half(r.matrix).real for r in results])
    else:
        th = np.array([cell_trace(cell, kk) for kk in k])

    lower = np.zeros(k.size, dtype=bool)
    lower[[0, -1]] = True
    spectrum = Spectrum(
        stack=stack,
        dispersion=dispersion,
        k=k,
        results=tuple(results),
        T=T,
        R=R,
        phi1=phi1,
        phibar2=phibar2,
        delta_phi=delta_phi,
        unwrapped_phibar2=phibar2_u,
        unwrapped_delta_phi=delta_u,
        trace_half=th,
        band=_band_flags(th),
        t_monodromy=t_mon,
        t_monodromy_trans=t_trans,
        t_wigner=t_wig,
        speed_ratio=ratio,
        d_pen=d_pen,
        lower_accuracy=lower,
    )
    bad = spectrum.causality_violations()
    if bad.size:
        warnings.warn(
            f"non-positive monodromy time at {bad.size} grid points "
            f"(first k={k[bad[0]]:.6g})",
            CausalityWarning,
            stacklevel=2,
        )
    return spectrum


def monodromy_time(spectrum: Spectrum, i: int, channel: str = "reflection") -> float:
    """Delay ``d(phibar2 + d k)/dk / v`` at grid index ``i``.

    ``channel="transmission"`` adds the derivative of the unwrapped
    reflection-transmission offset, which only matters for asymmetric stacks.
    Endpoints use one-sided differences (see ``spectrum.lower_accuracy``).
    """
    if channel == "reflection":
        return float(spectrum.t_monodromy[i])
    if channel == "transmission":
        return float(spectrum.t_monodromy_trans[i])
    raise ValueError(f"unknown channel {channel!r}")


def wigner_time(spectrum: Spectrum, i: int) -> float:
    """``(d + 2 d(eta)/dk) / v`` with ``eta = (phibar2 - phi1) / 2``."""
    return float(spectrum.t_wigner[i])


def scattering_phase(spectrum: Spectrum) -> np.ndarray:
    """``eta = (phibar2 - phi1) / 2`` from the unwrapped transmission phase."""
    return (spectrum.unwrapped_phibar2 - spectrum.phi1) / 2


def advance_speed(spectrum: Spectrum, i: int) -> tuple[float, float]:
    """``(speed ratio, penetration depth)`` at grid index ``i``.

    The ratio is ``(d / t_monodromy) / v``; the penetration depth
    ``(d + d(phibar2)/dk) / 2``.  A non-positive delay is reported through a
    :class:`~monodromy.exceptions.CausalityWarning` and yields ``nan``.
    """
    t = spectrum.t_monodromy[i]
    if spectrum.d > 0 and not t > 0:
        warnings.warn(
            f"non-positive monodromy time {t:.3e} at k={spectrum.k[i]:.6g}",
            CausalityWarning,
            stacklevel=2,
        )
    return float(spectrum.speed_ratio[i]), float(spectrum.d_pen[i])


def band_intervals(k, band) -> list[tuple[str, int, int]]:
    """Runs of equal band flags as ``(flag, start, stop)`` index ranges.

    ``"edge"`` points are attached to the following run.
    """
    flags = [b if b != "edge" else None for b in band]
    out = []
    start = 0
    current = None
    for i, f in enumerate(flags):
        if f is None:
            continue
        if current is None:
            current = f
        elif f != current:
            out.append((current, start, i))
            start, current = i, f
    if current is not None:
        out.append((current, start, len(flags)))
    return out


def resonances(spectrum: Spectrum, prominence: float = 0.1) -> list[Resonance]:
    """Transmission peaks refined by a three-point parabola.

    A peak must rise above the higher of its two flanking minima by
    ``prominence`` times the full range of ``|T|**2`` on the grid.
    """
    t2 = spectrum.transmittance
    span = float(t2.max() - t2.min())
    if span <= 1e-12:
        return []
    peaks, _ = find_peaks(t2, prominence=prominence * span)
    out = []
    k = spectrum.k
    for i in peaks:
        kp, tp = _parabolic_peak(k[i - 1 : i + 2], t2[i - 1 : i + 2])
        f = spectrum.dispersion.frequency_ghz(kp)
        out.append(Resonance(k=kp, transmittance=min(tp, 1.0), f_ghz=f))
    return out


def _parabolic_peak(x, y) -> tuple[float, float]:
    (x0, x1, x2), (y0, y1, y2) = x, y
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2**2 * (y0 - y1) + x1**2 * (y2 - y0) + x0**2 * (y1 - y2)) / denom
    if a >= 0:
        return float(x1), float(y1)
    xv = -b / (2 * a)
    c = y0 - a * x0**2 - b * x0
    return float(xv), float(a * xv**2 + b * xv + c)


def mode_spacing(peaks: list[Resonance], near_k: float) -> float:
    """Spacing of the two adjacent resonances nearest to ``near_k``, in k.

    This is the free spectral range of a cavity, the quantity the naive
    ``c / (2 d)`` estimate refers to.
    """
    ks = np.array([p.k for p in peaks])
    if ks.size < 2:
        raise ValueError("need at least two resonances")
    mids = (ks[1:] + ks[:-1]) / 2
    j = int(np.argmin(np.abs(mids - near_k)))
    return float(ks[j + 1] - ks[j])
