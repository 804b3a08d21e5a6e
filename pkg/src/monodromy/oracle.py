"""Reference solutions that never touch the transfer-matrix product.

:func:`match_interfaces` writes the piecewise stationary solution region by
region and imposes the matching conditions at every interface as one dense
linear system.  :func:`single_barrier_closed_form` evaluates the textbook
one-barrier phases directly.
"""
from __future__ import annotations

import cmath
import math

import numpy as np
import scipy.linalg

from .exceptions import IllConditionedError, NumericDomainError
from .layers import DeltaBarrier, Dielectric, Gap, LayerStack, SquareBarrier, kappa

COND_LIMIT = 1e13


def _regions(stack: LayerStack, k: float):
    """Finite-width regions and the delta strength sitting on each interface.

    Returns ``(regions, jumps)``; a region is ``(q, x_left, x_right)`` with the
    local solution ``A exp(q (x - x_right)) + B exp(-q (x - x_left))`` (see
    :func:`_basis` for thin regions).  The outer free half-spaces are included
    at both ends.
    """
    ik = 1j * k
    regions = [(ik, -math.inf, stack.left_edge)]
    jumps = []
    pending = 0.0
    x = stack.left_edge
    for layer in stack.layers:
        if isinstance(layer, DeltaBarrier):
            pending += layer.strength
            continue
        w = layer.width
        if w == 0:
            continue
        if isinstance(layer, Gap):
            q = ik
        elif isinstance(layer, SquareBarrier):
            q = kappa(layer.kappa0, k)
        elif isinstance(layer, Dielectric):
            q = 1j * layer.n * k
        else:
            raise TypeError(f"not a layer: {layer!r}")
        jumps.append(pending)
        pending = 0.0
        regions.append((q, x, x + w))
        x += w
    jumps.append(pending)
    regions.append((ik, stack.right_edge, math.inf))
    return regions, jumps


def _basis(q, x_left, x_right, x):
    """Values and slopes of the two local basis functions at ``x``.

    Thin regions (``|q| width <= 1``) use ``cosh(q s)`` and ``sinh(q s)/q``
    with ``s = x - x_left`` instead, which stay independent as ``q -> 0``.
    """
    if not math.isinf(x_left) and not math.isinf(x_right):
        w = x_right - x_left
        if abs(q) * w <= 1:
            s = x - x_left
            z = q * s
            sinhc = cmath.sinh(z) / z if z != 0 else 1.0
            return (cmath.cosh(z), s * sinhc), (q * q * s * sinhc, cmath.cosh(z))
    if math.isinf(x_right):
        grow = 0.0
    else:
        grow = cmath.exp(q * (x - x_right))
    if math.isinf(x_left):
        decay = 0.0
    else:
        decay = cmath.exp(-q * (x - x_left))
    return (grow, decay), (q * grow, -q * decay)


def match_interfaces(stack: LayerStack, k: float) -> tuple[complex, complex]:
    """``(T, R)`` from continuity of the wave and its slope at every interface.

    A delta of strength ``lambda`` at an interface adds
    ``psi'(+) - psi'(-) = lambda psi``.  Unit incidence ``exp(ikx)`` from the
    left, nothing incoming from the right.

    Raises
    ------
    IllConditionedError
        If the linear system is numerically singular (condition > 1e13),
        which happens only at a vanishing decay constant.
    """
    if not (math.isfinite(k) and k > 0):
        raise NumericDomainError(f"wavenumber must be positive and finite, got {k}")
    regions, jumps = _regions(stack, k)
    nreg = len(regions)
    # unknowns: R, (A_j, B_j) for inner regions, T
    n_unknown = 2 * (nreg - 2) + 2
    a = np.zeros((n_unknown, n_unknown), dtype=complex)
    rhs = np.zeros(n_unknown, dtype=complex)

    def columns(j):
        if j == 0:
            return [None, 0]  # incoming amplitude is known, R is unknown 0
        if j == nreg - 1:
            return [n_unknown - 1, None]
        return [1 + 2 * (j - 1), 2 + 2 * (j - 1)]

    x = stack.left_edge
    row = 0
    for j in range(nreg - 1):
        x = regions[j][2]
        lam = jumps[j]
        left, right = regions[j], regions[j + 1]
        if j == 0:
            # left half-space written as exp(ikx) + R exp(-ikx) about the origin
            vals_l = (cmath.exp(1j * k * x), cmath.exp(-1j * k * x))
            ders_l = (1j * k * vals_l[0], -1j * k * vals_l[1])
            cols_l = [None, 0]
        else:
            vals_l, ders_l = _basis(*left, x)
            cols_l = columns(j)
        if j + 1 == nreg - 1:
            vals_r = (cmath.exp(1j * k * x), 0.0)
            ders_r = (1j * k * vals_r[0], 0.0)
            cols_r = [n_unknown - 1, None]
        else:
            vals_r, ders_r = _basis(*right, x)
            cols_r = columns(j + 1)
        # psi_r - psi_l = 0 ;  psi_r' - psi_l' - lam psi_l = 0
        for c, vl, dl in zip(cols_l, vals_l, ders_l):
            if c is None:
                rhs[row] += vl
                rhs[row + 1] += dl + lam * vl
            else:
                a[row, c] -= vl
                a[row + 1, c] -= dl + lam * vl
        for c, vr, dr in zip(cols_r, vals_r, ders_r):
            if c is None:
                continue
            a[row, c] += vr
            a[row + 1, c] += dr
        row += 2

    cond = np.linalg.cond(a)
    if not math.isfinite(cond) or cond > COND_LIMIT:
        raise IllConditionedError(
            f"interface system is singular at k={k} (cond={cond:.3e})", cond
        )
    sol = scipy.linalg.lu_solve(scipy.linalg.lu_factor(a), rhs)
    return complex(sol[-1]), complex(sol[0])


def single_barrier_closed_form(kappa0: float, halfwidth: float, k: float):
    """Textbook one-barrier ``(|T|, phibar2, eta)`` for a barrier at the origin.

    ``eta = -kd/2 + atan(tanh(kappa eps) / sigma)``,
    ``phi1 = atan(2 sigma / ((1 + sigma**2) sinh(2 kappa eps)))`` and
    ``phibar2 = 2 eta + phi1``, ``|T| = sin(phi1)``.

    This three-term ``phibar2`` equals ``arg(iT) = arg(T) + pi/2`` modulo
    ``2 pi``.  Above the barrier top (``kappa = i q``) both arctangents are
    continued as ``atan2`` of the real and imaginary parts, which keeps the
    identity exact modulo ``2 pi`` and ``phi1`` in ``[0, pi)``.
    """
    kap = kappa(kappa0, k)
    d = 2 * halfwidth
    if abs(kap) < 1e-12:
        # kappa -> 0: tanh(kappa eps)/sigma -> k eps, tan(phi1) -> 1/(k eps)
        eta = -k * d / 2 + math.atan(k * halfwidth)
        phi1 = math.atan2(1.0, k * halfwidth)
    elif kap.imag == 0:
        kap = kap.real
        sigma = kap / k
        eta = -k * d / 2 + math.atan(math.tanh(kap * halfwidth) / sigma)
        phi1 = math.atan2(2 * sigma, (1 + sigma**2) * math.sinh(2 * kap * halfwidth))
    else:
        q = kap.imag
        x = q * halfwidth
        eta = -k * d / 2 + math.atan2(k * math.sin(x), q * math.cos(x))
        phi1 = math.atan2(2 * q * k, (k * k - q * q) * math.sin(2 * x))
    return math.sin(phi1), 2 * eta + phi1, eta
