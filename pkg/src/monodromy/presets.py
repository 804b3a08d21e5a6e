"""Ready-made stacks for the single-barrier, Nimtz and Kiang configurations."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import PresetIntegrityError
from .layers import (
    SPEED_OF_LIGHT,
    DeltaBarrier,
    Dielectric,
    DispersionModel,
    Gap,
    LayerStack,
    SquareBarrier,
)

PERSPEX_INDEX = 1.61
NIMTZ_KAPPA0 = 0.28  # 1/mm, puts the 9.15 GHz carrier below the barrier top
BARRIER_KAPPA0 = 2.5  # 1/mm, default height for the 1 mm and 3 mm barriers
CARRIER_GHZ = 9.15
QUOTED_CARRIER_K = 0.1769  # 1/mm, the value quoted alongside 9.15 GHz
DEFAULT_POINTS = 1000

PRESET_IDS = (
    "Fig4SingleBarrier",
    "Fig5NimtzSingle",
    "Fig6DoubleBarrier",
    "NimtzSetupA",
    "NimtzSetupB_TwoBarrier",
    "NimtzSetupB_EightBarrier",
    "Kiang10Delta",
)

DESCRIPTIONS = {
    "Fig4SingleBarrier": "one square barrier, 3 mm wide",
    "Fig5NimtzSingle": "one square barrier, 6 mm wide, low height",
    "Fig6DoubleBarrier": "two 1 mm barriers around a 1 mm cavity",
    "NimtzSetupA": "6.0 mm Perspex lattices (air 12.0 mm), 130 mm cavity",
    "NimtzSetupB_TwoBarrier": "one 5.0 mm Perspex layer per side, 189 mm cavity, d = 199 mm",
    "NimtzSetupB_EightBarrier": "four 5.0 mm layers per side (air 8.5 mm), 189 mm cavity, d = 280 mm",
    "Kiang10Delta": "ten delta barriers, strength x spacing = 5, particle dispersion",
}


@dataclass(frozen=True, eq=False)
class Preset:
    """A stack with its dispersion, default grid and one period for band flags.

    ``d_cav`` is the central cavity length where one exists; ``annotations``
    holds reference markers (carrier frequency and wavenumbers) that are not
    inputs to the physics.
    """

    name: str
    stack: LayerStack
    dispersion: DispersionModel
    grid: np.ndarray
    cell: tuple
    d_cav: float | None = None
    annotations: dict = field(default_factory=dict)

    @property
    def d(self) -> float:
        return self.stack.width

    def naive_resonances_ghz(self) -> dict:
        """``c / (2 d)`` for the cavity alone and for the whole stack, in GHz."""
        out = {"d_total": SPEED_OF_LIGHT / (2 * self.d)}
        if self.d_cav:
            out["d_cav"] = SPEED_OF_LIGHT / (2 * self.d_cav)
        return out


def carrier_k(f_ghz: float = CARRIER_GHZ) -> float:
    """Vacuum wavenumber (1/mm) of a frequency in GHz."""
    return 2 * math.pi * f_ghz / SPEED_OF_LIGHT


def _check_width(name: str, stack: LayerStack, expected: float) -> None:
    stack.check_geometry()
    if abs(stack.width - expected) > 1e-9 * max(1.0, expected):
        raise PresetIntegrityError(
            f"{name}: total width {stack.width!r} mm, expected {expected!r} mm"
        )


def _grid(kmin, kmax, points):
    return np.linspace(kmin, kmax, int(points))


def _lattice_layer(thickness, layer_model, kappa0):
    if layer_model == "dielectric":
        return Dielectric(thickness / 2, PERSPEX_INDEX)
    if layer_model == "barrier":
        return SquareBarrier(thickness / 2, NIMTZ_KAPPA0 if kappa0 is None else kappa0)
    raise ValueError(f"unknown layer model {layer_model!r}")


def _nimtz(name, thickness, air, cavity, per_lattice, layer_model, kappa0, points):
    layer = _lattice_layer(thickness, layer_model, kappa0)
    lattice = [layer]
    for _ in range(per_lattice - 1):
        lattice += [Gap(air), layer]
    stack = LayerStack(tuple(lattice + [Gap(cavity)] + lattice))
    expected = 2 * (per_lattice * thickness + (per_lattice - 1) * air) + cavity
    _check_width(name, stack, expected)
    return Preset(
        name=name,
        stack=stack,
        dispersion=DispersionModel.electromagnetic(),
        grid=_grid(0.10, 0.25, points),
        cell=(layer, Gap(air)),
        d_cav=cavity,
        annotations={
            "f_c_GHz": CARRIER_GHZ,
            "k_c_per_mm": carrier_k(),
            "k_quoted_per_mm": QUOTED_CARRIER_K,
            "layer_model": layer_model,
            "layers_per_lattice": per_lattice,
        },
    )


def build(
    name: str,
    layer_model: str = "dielectric",
    kappa0: float | None = None,
    points: int = DEFAULT_POINTS,
    layers_per_lattice: int | None = None,
) -> Preset:
    """Construct preset ``name``.

    Parameters
    ----------
    name : str
        One of :data:`PRESET_IDS`.
    layer_model : {"dielectric", "barrier"}
        How Perspex layers of the Nimtz presets are modelled: a lossless slab
        of index 1.61, or a square barrier of height ``kappa0``.
    kappa0 : float, optional
        Barrier height (1/mm).  Defaults to 2.5 for the 1 mm and 3 mm
        barriers, 0.28 for the 6 mm barrier and the Nimtz barrier model.
    points : int
        Size of the default grid.
    layers_per_lattice : int, optional
        Layers on each side of the Nimtz cavity (1 for setup A by default).

    Raises
    ------
    KeyError
        Unknown preset.
    PresetIntegrityError
        If the assembled stack misses its documented total width.
    """
    if name == "Fig4SingleBarrier":
        k0 = BARRIER_KAPPA0 if kappa0 is None else kappa0
        stack = LayerStack((SquareBarrier(1.5, k0),))
        _check_width(name, stack, 3.0)
        return Preset(name, stack, DispersionModel.electromagnetic(),
                      _grid(0.05, 5.0, points), stack.layers,
                      annotations={"kappa0_per_mm": k0})
    if name == "Fig5NimtzSingle":
        k0 = NIMTZ_KAPPA0 if kappa0 is None else kappa0
        stack = LayerStack((SquareBarrier(3.0, k0),))
        _check_width(name, stack, 6.0)
        return Preset(name, stack, DispersionModel.electromagnetic(),
                      _grid(0.01, 0.56, points), stack.layers,
                      annotations={"kappa0_per_mm": k0})
    if name == "Fig6DoubleBarrier":
        k0 = BARRIER_KAPPA0 if kappa0 is None else kappa0
        b = SquareBarrier(0.5, k0)
        stack = LayerStack((b, Gap(1.0), b))
        _check_width(name, stack, 3.0)
        return Preset(name, stack, DispersionModel.electromagnetic(),
                      _grid(0.05, 5.0, points), stack.layers, d_cav=1.0,
                      annotations={"kappa0_per_mm": k0})
    if name == "NimtzSetupA":
        n = 1 if layers_per_lattice is None else layers_per_lattice
        return _nimtz(name, 6.0, 12.0, 130.0, n, layer_model, kappa0, points)
    if name == "NimtzSetupB_TwoBarrier":
        p = _nimtz(name, 5.0, 8.5, 189.0, 1, layer_model, kappa0, points)
        _check_width(name, p.stack, 199.0)
        return p
    if name == "NimtzSetupB_EightBarrier":
        p = _nimtz(name, 5.0, 8.5, 189.0, 4, layer_model, kappa0, points)
        _check_width(name, p.stack, 280.0)
        return p
    if name == "Kiang10Delta":
        delta = DeltaBarrier(5.0)
        layers = [delta]
        for _ in range(9):
            layers += [Gap(1.0), delta]
        stack = LayerStack(tuple(layers))
        _check_width(name, stack, 9.0)
        kmax = 5 * math.pi
        return Preset(name, stack, DispersionModel.massive_particle(),
                      _grid(kmax / points, kmax, points), (delta, Gap(1.0)),
                      annotations={"strength_times_spacing": 5.0})
    raise KeyError(f"unknown preset {name!r}; known: {', '.join(PRESET_IDS)}")
