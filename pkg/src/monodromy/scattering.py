"""Total transfer operator of a stack and its amplitudes and phases at one k.

Amplitude conventions: the incident wave is ``exp(ikx)`` measured from the
global origin, so ``T`` is the coefficient of ``exp(ikx)`` right of the stack
and ``R`` the coefficient of ``exp(-ikx)`` on the left.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .layers import LayerStack, element_matrix
from .transfer import (
    MonodromyComponents,
    TransferMatrix,
    components,
    multiply,
    product,
    trace_half,
)


@dataclass(frozen=True)
class ScatteringResult:
    k: float
    T: complex
    R: complex
    phi1: float
    phibar2: float
    delta_phi: float
    comps: MonodromyComponents
    d: float
    matrix: TransferMatrix

    @property
    def transmittance(self) -> float:
        return abs(self.T) ** 2

    @property
    def reflectance(self) -> float:
        return abs(self.R) ** 2


def assemble(stack: LayerStack, k: float) -> TransferMatrix:
    """Total monodromy matrix, last element leftmost in the product.

    Explicit :class:`~monodromy.layers.Gap` elements supply the free
    propagation factors between scatterers.
    """
    return product(element_matrix(layer, k) for layer in stack.layers)


def amplitudes(m: TransferMatrix, stack: LayerStack, k: float) -> tuple[complex, complex]:
    """Transmission and reflection amplitudes from the total matrix.

    ``T = exp(-ikd) / m22`` and ``R = i (m21 / m22) exp(2ik x_left)``; the
    factor ``i`` comes from the ``(A, iB)`` amplitude basis of the matrices.
    """
    # |m22|**2 = 1 + |m21|**2 for a canonical unimodular matrix
    assert abs(m.m22) >= 1 - 1e-8, "m22 below unit modulus"
    d = stack.width
    T = cmath.exp(-1j * k * d) / m.m22
    R = 1j * m.m21 / m.m22 * cmath.exp(2j * k * stack.left_edge)
    return T, R


def phase_decomposition(
    m: TransferMatrix, T: complex, R: complex
) -> tuple[float, float, float]:
    """Split into ``(phi1, phibar2, delta_phi)``.

    ``phi1 = arcsin|T|`` in ``[0, pi/2]``, ``phibar2`` the principal argument
    of ``T`` and ``delta_phi`` solves ``tan(delta_phi) = W / V`` on
    ``(-pi/2, pi/2]``.  ``delta_phi`` is 0 when ``V = W = 0``.
    """
    # atan2 keeps full precision near |T| = 1 where asin does not
    phi1 = math.atan2(abs(T), abs(R))
    phibar2 = cmath.phase(T)
    c = components(m)
    delta_phi = _offset_phase(c.v, c.w)
    return phi1, phibar2, delta_phi


def _offset_phase(v: float, w: float) -> float:
    if v == 0 and w == 0:
        return 0.0
    if v == 0:
        return math.copysign(math.pi / 2, w)
    out = math.atan(w / v)
    return math.pi / 2 if out == -math.pi / 2 else out


def scatter(stack: LayerStack, k: float) -> ScatteringResult:
    """Amplitudes and phase decomposition of ``stack`` at wavenumber ``k``."""
    m = assemble(stack, k)
    T, R = amplitudes(m, stack, k)
    phi1, phibar2, delta_phi = phase_decomposition(m, T, R)
    return ScatteringResult(
        k=float(k),
        T=T,
        R=R,
        phi1=phi1,
        phibar2=phibar2,
        delta_phi=delta_phi,
        comps=components(m),
        d=stack.width,
        matrix=m,
    )


def black_box_phases(m: TransferMatrix) -> tuple[float, float]:
    """Phases of the equivalent single-barrier ("black box") operator.

    With ``m22 = exp(-i(phi1 + phi2)) / sin(phi1)`` this returns
    ``phi1 = arcsin(1/|m22|)`` and ``phi2 = -arg(m22) - phi1``, so that
    ``arg T = phi1 + phi2 - kd`` modulo ``2 pi``.
    """
    # |m22|**2 = 1 + |m21|**2, so this is arcsin(1/|m22|) without cancellation
    phi1 = math.atan2(1.0, abs(m.m21))
    phi2 = -cmath.phase(m.m22) - phi1
    return phi1, phi2


def _chebyshev_u(n: int, x: complex) -> complex:
    """``U_n(x)`` by the three-term recurrence; ``U_{-1} = 0``."""
    if n < 0:
        return 0
    prev, cur = 0, 1
    for _ in range(n):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def cayley_hamilton_power(cell: TransferMatrix, n: int) -> TransferMatrix:
    """``cell**n`` as ``cell * sin(n phi)/sin(phi) - I * sin((n-1) phi)/sin(phi)``.

    ``cos(phi)`` is the half trace; in forbidden bands ``phi`` is complex and
    taken with ``Im(phi) >= 0``.  Within ``1e-6`` of a band edge, where the
    ratios are 0/0, the Chebyshev recurrence supplies the same polynomials.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"power must be a positive integer, got {n}")
    n = int(n)
    x = trace_half(cell)
    phi = np.arccos(complex(x))
    if phi.imag < 0:
        phi = -phi
    s = cmath.sin(phi)
    if abs(s) < 1e-6:
        a = _chebyshev_u(n - 1, x)
        b = _chebyshev_u(n - 2, x)
    else:
        a = cmath.sin(n * phi) / s
        b = cmath.sin((n - 1) * phi) / s
    return TransferMatrix(
        cell.m11 * a - b, cell.m12 * a, cell.m21 * a, cell.m22 * a - b
    )


def iterated_power(cell: TransferMatrix, n: int) -> TransferMatrix:
    out = cell
    for _ in range(n - 1):
        out = multiply(cell, out)
    return out
