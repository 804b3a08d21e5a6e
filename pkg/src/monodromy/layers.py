"""Stack elements, stack geometry and the per-element transfer matrices.

Units are millimetres for lengths and 1/mm for wavenumbers, barrier heights
and delta strengths.  A square barrier of height ``kappa0`` has the local
decay constant ``kappa = sqrt(kappa0**2 - k**2)``; a dielectric layer of
index ``n`` is the same slab with ``kappa = i n k``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Union

from .exceptions import GeometryError, NumericDomainError
from .transfer import TransferMatrix

SPEED_OF_LIGHT = 299.792458  # mm/ns
THRESHOLD_KAPPA = 1e-6  # 1/mm, below this sinh(z)/z is summed as a series


@dataclass(frozen=True)
class SquareBarrier:
    halfwidth: float
    kappa0: float

    def __post_init__(self):
        if not (self.halfwidth >= 0 and math.isfinite(self.halfwidth)):
            raise GeometryError(f"barrier halfwidth must be >= 0, got {self.halfwidth}")
        if not (self.kappa0 >= 0 and math.isfinite(self.kappa0)):
            raise GeometryError(f"barrier height must be >= 0, got {self.kappa0}")

    @property
    def width(self) -> float:
        return 2 * self.halfwidth


@dataclass(frozen=True)
class DeltaBarrier:
    strength: float

    def __post_init__(self):
        if not math.isfinite(self.strength):
            raise GeometryError(f"delta strength must be finite, got {self.strength}")

    halfwidth = 0.0
    width = 0.0


@dataclass(frozen=True)
class Dielectric:
    halfwidth: float
    n: float

    def __post_init__(self):
        if not (self.halfwidth >= 0 and math.isfinite(self.halfwidth)):
            raise GeometryError(f"dielectric halfwidth must be >= 0, got {self.halfwidth}")
        if not (self.n >= 1 and math.isfinite(self.n)):
            raise GeometryError(f"refractive index must be >= 1, got {self.n}")

    @property
    def width(self) -> float:
        return 2 * self.halfwidth


@dataclass(frozen=True)
class Gap:
    width: float

    def __post_init__(self):
        if not (self.width >= 0 and math.isfinite(self.width)):
            raise GeometryError(f"gap width must be >= 0, got {self.width}")

    halfwidth = property(lambda self: self.width / 2)


Layer = Union[SquareBarrier, DeltaBarrier, Dielectric, Gap]


@dataclass(frozen=True)
class LayerStack:
    """Ordered, left-to-right sequence of elements starting at ``origin``.

    Free gaps are explicit elements; barrier centres and the spacings between
    neighbouring scatterers are derived from the list.
    """

    layers: tuple = ()
    origin: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        for i, layer in enumerate(self.layers):
            if not isinstance(layer, (SquareBarrier, DeltaBarrier, Dielectric, Gap)):
                raise GeometryError(f"element {i} is not a layer: {layer!r}")
        if not math.isfinite(self.origin):
            raise GeometryError("stack origin must be finite")

    def __len__(self):
        return len(self.layers)

    @property
    def width(self) -> float:
        return math.fsum(layer.width for layer in self.layers)

    @property
    def left_edge(self) -> float:
        return self.origin

    @property
    def right_edge(self) -> float:
        return self.origin + self.width

    def edges(self) -> list[tuple[float, float]]:
        """``(left, right)`` position of every element."""
        out = []
        x = self.origin
        for layer in self.layers:
            out.append((x, x + layer.width))
            x += layer.width
        return out

    def scatterers(self) -> list[int]:
        """Indices of the non-gap elements."""
        return [i for i, layer in enumerate(self.layers) if not isinstance(layer, Gap)]

    def centers(self) -> list[float]:
        """Centres ``a_i`` of the scatterers."""
        edges = self.edges()
        return [(edges[i][0] + edges[i][1]) / 2 for i in self.scatterers()]

    def spacings(self) -> list[float]:
        """Free distances between neighbouring scatterers, edge to edge."""
        edges = self.edges()
        idx = self.scatterers()
        return [edges[j][0] - edges[i][1] for i, j in zip(idx, idx[1:])]

    def check_geometry(self, tol: float = 1e-9) -> None:
        """Verify the edge/centre bookkeeping against the total width.

        ``d`` must equal both ``right - left`` and the sum of element widths,
        and every derived spacing must be non-negative.
        """
        idx = self.scatterers()
        centers = self.centers()
        for j, (a_j, a_next) in enumerate(zip(centers, centers[1:])):
            eps_j = self.layers[idx[j]].halfwidth
            eps_next = self.layers[idx[j + 1]].halfwidth
            delta = (a_next - eps_next) - (a_j + eps_j)
            if delta < -tol:
                raise GeometryError(f"scatterers {idx[j]} and {idx[j + 1]} overlap")
        total = math.fsum(layer.width for layer in self.layers)
        if abs((self.right_edge - self.left_edge) - total) > tol * max(1.0, total):
            raise GeometryError("total width disagrees with the element widths")


@dataclass(frozen=True)
class DispersionModel:
    """Map wavenumber to group speed and (for light) frequency.

    ``kind`` is ``"em"`` (speed of light, times in ns) or ``"particle"``
    (``v = hbar_over_m * k``, natural units).
    """

    kind: str = "em"
    hbar_over_m: float = 1.0
    c: float = field(default=SPEED_OF_LIGHT)

    def __post_init__(self):
        if self.kind not in ("em", "particle"):
            raise ValueError(f"unknown dispersion kind {self.kind!r}")
        if self.kind == "particle" and not self.hbar_over_m > 0:
            raise ValueError("hbar_over_m must be positive")

    @classmethod
    def electromagnetic(cls) -> DispersionModel:
        return cls("em")

    @classmethod
    def massive_particle(cls, hbar_over_m: float = 1.0) -> DispersionModel:
        return cls("particle", hbar_over_m)

    def group_speed(self, k):
        if self.kind == "em":
            return self.c + 0 * k
        return self.hbar_over_m * k

    def frequency_ghz(self, k):
        """``f = c k / 2 pi``; ``None`` for massive particles."""
        if self.kind != "em":
            return None
        return self.c * k / (2 * math.pi)


def _check_k(k: float) -> float:
    if not (math.isfinite(k) and k > 0):
        raise NumericDomainError(f"wavenumber must be positive and finite, got {k}")
    return float(k)


def kappa(kappa0: float, k: float) -> complex:
    """Decay constant ``sqrt(kappa0**2 - k**2)``.

    The branch has ``Re >= 0`` and ``Im >= 0`` when purely imaginary, so
    above the barrier top ``kappa = i sqrt(k**2 - kappa0**2)``.
    """
    k = _check_k(k)
    return cmath.sqrt(complex((kappa0 - k) * (kappa0 + k), 0.0))


def _sinhc(z: complex, kap: complex) -> complex:
    if abs(kap) < THRESHOLD_KAPPA or z == 0:
        z2 = z * z
        return 1 + z2 / 6 + z2 * z2 / 120
    return cmath.sinh(z) / z


def _slab(kappa_sq: complex, kap: complex, halfwidth: float, k: float) -> TransferMatrix:
    # (1/sigma) sinh and sigma sinh written through sinh(z)/z, z = 2 kappa eps,
    # so kappa -> 0 is a removable point
    z = 2 * kap * halfwidth
    s = _sinhc(z, kap) * 2 * halfwidth
    inv_sigma_sh = k * s
    sigma_sh = kappa_sq / k * s
    x = cmath.cosh(z)
    y = (inv_sigma_sh - sigma_sh) / 2
    v = (inv_sigma_sh + sigma_sh) / 2
    return TransferMatrix(x + 1j * y, -v, -v, x - 1j * y)


def barrier_matrix(layer: SquareBarrier, k: float) -> TransferMatrix:
    """Monodromy matrix of a square barrier of width ``2 eps`` and height ``kappa0``.

    Diagonal ``cosh(2 kappa eps) +/- (i/2)(1/sigma - sigma) sinh(2 kappa eps)``,
    off-diagonal ``-(1/2)(1/sigma + sigma) sinh(2 kappa eps)`` with
    ``sigma = kappa / k``.  Above the barrier top ``kappa`` is imaginary and
    the same expressions continue analytically.
    """
    k = _check_k(k)
    kap = kappa(layer.kappa0, k)
    kappa_sq = (layer.kappa0 - k) * (layer.kappa0 + k)
    return _slab(kappa_sq, kap, layer.halfwidth, k)


def dielectric_matrix(layer: Dielectric, k: float) -> TransferMatrix:
    """Lossless dielectric slab: the barrier matrix with ``kappa = i n k``."""
    k = _check_k(k)
    kap = 1j * layer.n * k
    return _slab(-((layer.n * k) ** 2), kap, layer.halfwidth, k)


def delta_matrix(layer: DeltaBarrier, k: float) -> TransferMatrix:
    """Zero-width barrier ``psi'(0+) - psi'(0-) = lambda psi(0)``.

    Equal to the ``eps -> 0`` limit of :func:`barrier_matrix` at fixed
    ``lambda = 2 kappa0**2 eps``.
    """
    k = _check_k(k)
    b = layer.strength / (2 * k)
    return TransferMatrix(1 - 1j * b, -b, -b, 1 + 1j * b)


def gap_matrix(width: float, k: float) -> TransferMatrix:
    """Free propagation ``diag(exp(ik width), exp(-ik width))``."""
    k = _check_k(k)
    if not (width >= 0 and math.isfinite(width)):
        raise GeometryError(f"gap width must be >= 0, got {width}")
    ph = cmath.exp(1j * k * width)
    return TransferMatrix(ph, 0, 0, 1 / ph)


def element_matrix(layer: Layer, k: float) -> TransferMatrix:
    if isinstance(layer, SquareBarrier):
        return barrier_matrix(layer, k)
    if isinstance(layer, DeltaBarrier):
        return delta_matrix(layer, k)
    if isinstance(layer, Dielectric):
        return dielectric_matrix(layer, k)
    if isinstance(layer, Gap):
        return gap_matrix(layer.width, k)
    raise TypeError(f"not a layer: {layer!r}")
