"""Complex 2x2 unimodular transfer (monodromy) matrices.

All matrices act on amplitude pairs ``(A, iB)`` where ``A`` multiplies the
right-moving wave ``exp(ik(x - x0))`` and ``B`` the left-moving one, both
referenced to the local edge ``x0``.  In that basis every lossless element
takes the canonical form::

    [[X + iY, -V - iW],
     [-V + iW, X - iY]]

with ``X**2 + Y**2 - V**2 - W**2 = 1``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import FormViolationError, NumericDomainError

UNIMODULAR_TOL = 1e-10
CANONICAL_TOL = 1e-10


@dataclass(frozen=True)
class TransferMatrix:
    m11: complex
    m12: complex
    m21: complex
    m22: complex

    def __post_init__(self):
        for name in ("m11", "m12", "m21", "m22"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @classmethod
    def identity(cls) -> TransferMatrix:
        return cls(1, 0, 0, 1)

    @classmethod
    def from_array(cls, a) -> TransferMatrix:
        a = np.asarray(a, dtype=complex)
        if a.shape != (2, 2):
            raise NumericDomainError(f"expected a 2x2 array, got shape {a.shape}")
        return cls(a[0, 0], a[0, 1], a[1, 0], a[1, 1])

    def to_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=complex)

    def is_finite(self) -> bool:
        return all(cmath.isfinite(z) for z in (self.m11, self.m12, self.m21, self.m22))

    def canonical_residual(self) -> float:
        """Distance from the ``m22 = conj(m11)``, ``m21 = conj(m12)`` structure."""
        return math.hypot(
            abs(self.m22 - self.m11.conjugate()), abs(self.m21 - self.m12.conjugate())
        )

    def is_canonical(self, tol: float = CANONICAL_TOL) -> bool:
        return self.canonical_residual() <= tol

    def is_unimodular(self, tol: float = UNIMODULAR_TOL) -> bool:
        return abs(determinant(self) - 1) <= tol

    def __matmul__(self, other: TransferMatrix) -> TransferMatrix:
        return multiply(self, other)


@dataclass(frozen=True)
class MonodromyComponents:
    """Real components ``(X, Y, V, W)`` of a canonical matrix."""

    x: float
    y: float
    v: float
    w: float

    def norm_residual(self) -> float:
        return self.x**2 + self.y**2 - self.v**2 - self.w**2 - 1.0


def multiply(a: TransferMatrix, b: TransferMatrix) -> TransferMatrix:
    """Matrix product ``a @ b``; ``b`` acts first."""
    if not (a.is_finite() and b.is_finite()):
        raise NumericDomainError("non-finite matrix entry in multiply")
    return TransferMatrix(
        a.m11 * b.m11 + a.m12 * b.m21,
        a.m11 * b.m12 + a.m12 * b.m22,
        a.m21 * b.m11 + a.m22 * b.m21,
        a.m21 * b.m12 + a.m22 * b.m22,
    )


def product(matrices) -> TransferMatrix:
    """Ordered product ``matrices[-1] @ ... @ matrices[0]``.

    The first matrix in the sequence is applied first, matching left-to-right
    traversal of a stack.
    """
    out = TransferMatrix.identity()
    for m in matrices:
        out = multiply(m, out)
    return out


def determinant(m: TransferMatrix) -> complex:
    return m.m11 * m.m22 - m.m12 * m.m21


def inverse(m: TransferMatrix) -> TransferMatrix:
    det = determinant(m)
    if det == 0 or not cmath.isfinite(det):
        raise NumericDomainError("matrix is singular")
    return TransferMatrix(m.m22 / det, -m.m12 / det, -m.m21 / det, m.m11 / det)


def trace_half(m: TransferMatrix) -> complex:
    """Half trace, the cosine of the Bloch phase of a cell."""
    return (m.m11 + m.m22) / 2


def components(m: TransferMatrix, tol: float = 1e-9) -> MonodromyComponents:
    """Extract ``(X, Y, V, W)`` from a canonical matrix.

    Raises
    ------
    FormViolationError
        If ``m`` departs from the canonical structure by more than ``tol``
        relative to its largest entry.
    """
    scale = max(1.0, abs(m.m11), abs(m.m12))
    residual = m.canonical_residual()
    if residual > tol * scale:
        raise FormViolationError(
            f"matrix is not in monodromy form (residual {residual:.3e})", residual
        )
    return MonodromyComponents(m.m11.real, m.m11.imag, -m.m12.real, -m.m12.imag)


def from_components(c: MonodromyComponents) -> TransferMatrix:
    return TransferMatrix(
        complex(c.x, c.y), complex(-c.v, -c.w), complex(-c.v, c.w), complex(c.x, -c.y)
    )
