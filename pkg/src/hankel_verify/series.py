"""Truncated power series with classical and q-derivatives.

Coefficients are stored as complex128 numpy arrays.  The module-level
``*_array`` kernels act along the last axis, so a stack of series with shape
``(batch, order + 1)`` is processed in one call; :class:`TruncatedSeries`
wraps a single 1-D coefficient vector and delegates to the same kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Iterable, Union

import numpy as np

from .errors import (
    CompositionWithNonvanishingInnerConstant,
    DivisionBySeriesWithVanishingConstantTerm,
    InvalidParameter,
    InvalidQParameter,
    SqrtOfNonpositiveConstantTerm,
)

DEFAULT_ORDER = 8
UNIT_TOLERANCE = 1e-10


@dataclass(frozen=True)
class QParameter:
    """The deformation parameter of q-calculus, restricted to ``0 < q < 1``."""

    value: float

    def __post_init__(self):
        q = float(self.value)
        if not (0.0 < q < 1.0):
            raise InvalidQParameter(f"q must lie in the open interval (0, 1), got {self.value!r}")
        object.__setattr__(self, "value", q)

    def __float__(self) -> float:
        return self.value


QLike = Union[float, QParameter]


def as_q(q: QLike) -> float:
    """Validate ``q`` and return it as a float."""
    if isinstance(q, QParameter):
        return q.value
    return QParameter(q).value


# ---------------------------------------------------------------------------
# array kernels (coefficient axis is the last axis)


def _trim(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = min(a.shape[-1], b.shape[-1])
    return a[..., :n], b[..., :n]


def mul_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = _trim(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
    n = a.shape[-1]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    for k in range(n):
        out[..., k:] += a[..., k : k + 1] * b[..., : n - k]
    return out


def div_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = _trim(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
    if np.any(np.abs(b[..., 0]) <= UNIT_TOLERANCE):
        raise DivisionBySeriesWithVanishingConstantTerm(
            "divisor series has a vanishing constant term"
        )
    n = a.shape[-1]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    b0 = b[..., 0]
    for k in range(n):
        acc = a[..., k] - np.sum(out[..., :k] * b[..., k:0:-1], axis=-1)
        out[..., k] = acc / b0
    return out


def sqrt_array(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    a0 = a[..., 0]
    if np.any(np.abs(a0.imag) > UNIT_TOLERANCE) or np.any(a0.real <= UNIT_TOLERANCE):
        raise SqrtOfNonpositiveConstantTerm("square root needs a real positive constant term")
    n = a.shape[-1]
    out = np.zeros_like(a)
    out[..., 0] = np.sqrt(a0.real)
    two_c0 = 2.0 * out[..., 0]
    for k in range(1, n):
        cross = np.sum(out[..., 1:k] * out[..., k - 1 : 0 : -1], axis=-1)
        out[..., k] = (a[..., k] - cross) / two_c0
    return out


def compose_array(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    outer, inner = _trim(np.asarray(outer, dtype=complex), np.asarray(inner, dtype=complex))
    if np.any(np.abs(inner[..., 0]) > UNIT_TOLERANCE):
        raise CompositionWithNonvanishingInnerConstant(
            "inner series must vanish at the origin"
        )
    inner = inner.copy()
    inner[..., 0] = 0.0
    n = outer.shape[-1]
    # Horner: (...((c_N w + c_{N-1}) w + ...) w + c_0
    acc = np.zeros(np.broadcast_shapes(outer.shape, inner.shape), dtype=complex)
    acc[..., 0] = outer[..., n - 1]
    for k in range(n - 2, -1, -1):
        acc = mul_array(acc, inner)
        acc[..., 0] += outer[..., k]
    return acc


def q_number(n: int, q: QLike) -> float:
    """Return ``[n]_q = 1 + q + ... + q**(n-1)``."""
    if n < 1:
        raise InvalidParameter(f"q-number needs n >= 1, got {n}")
    qv = as_q(q)
    return float(sum(qv**k for k in range(n)))


def q_numbers(order: int, q: float) -> np.ndarray:
    """``[0]_q, [1]_q, ..., [order]_q`` with ``[0]_q = 0``; ``q`` is not validated."""
    return np.concatenate(([0.0], np.cumsum(q ** np.arange(order))))


def q_derivative_array(a: np.ndarray, q: QLike) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    n = a.shape[-1]
    if n == 1:
        return np.zeros_like(a)
    weights = q_numbers(n - 1, as_q(q))[1:]
    return a[..., 1:] * weights


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """``c_0 + c_1 z + ... + c_N z**N`` with complex coefficients.

    Arithmetic between series of different orders truncates to the smaller
    order.  Instances are immutable; the coefficient array is read-only.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.size == 0:
            raise InvalidParameter("a series needs at least one coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[complex], order: int | None = None) -> "TruncatedSeries":
        """Build a series, zero-padding or truncating to ``order`` when given."""
        c = np.asarray(list(coeffs), dtype=complex)
        if order is not None:
            if order < 0:
                raise InvalidParameter("order must be >= 0")
            padded = np.zeros(order + 1, dtype=complex)
            m = min(order + 1, c.size)
            padded[:m] = c[:m]
            c = padded
        return cls(c)

    @classmethod
    def constant(cls, value: complex, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        return cls.from_coeffs([value], order)

    @classmethod
    def monomial(cls, degree: int, order: int = DEFAULT_ORDER, coeff: complex = 1.0) -> "TruncatedSeries":
        c = np.zeros(order + 1, dtype=complex)
        if degree <= order:
            c[degree] = coeff
        return cls(c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self) -> int:
        return self.coeffs.size

    def __getitem__(self, n: int) -> complex:
        return complex(self.coeffs[n])

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries.from_coeffs(self.coeffs, min(order, self.order))

    def allclose(self, other: "TruncatedSeries", atol: float = 1e-12) -> bool:
        a, b = _trim(self.coeffs, other.coeffs)
        return self.order == other.order and bool(np.allclose(a, b, rtol=0.0, atol=atol))

    def __repr__(self) -> str:
        terms = ", ".join(f"{c:.6g}" for c in self.coeffs)
        return f"TruncatedSeries([{terms}])"

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, Number):
            return TruncatedSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, -other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, Number):
            return TruncatedSeries(self.coeffs * other)
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return TruncatedSeries(self.coeffs / other)
        if isinstance(other, TruncatedSeries):
            return div(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return div(other, self)


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    x, y = _trim(a.coeffs, b.coeffs)
    return TruncatedSeries(x + y)


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the smaller order."""
    return TruncatedSeries(mul_array(a.coeffs, b.coeffs))


def div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Return ``c`` with ``c * b == a`` up to the common order.

    Raises :class:`DivisionBySeriesWithVanishingConstantTerm` when
    ``|b(0)| <= 1e-10``.
    """
    return TruncatedSeries(div_array(a.coeffs, b.coeffs))


def compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """Return ``outer(inner(z))``; ``inner`` must vanish at 0."""
    return TruncatedSeries(compose_array(outer.coeffs, inner.coeffs))


def sqrt(a: TruncatedSeries) -> TruncatedSeries:
    """Principal square root, ``s(0) = +sqrt(a(0))`` for real positive ``a(0)``."""
    return TruncatedSeries(sqrt_array(a.coeffs))


def q_derivative(f: TruncatedSeries, q: QLike) -> TruncatedSeries:
    """Jackson q-derivative ``(f(z) - f(qz)) / ((1 - q) z)``.

    The coefficient of ``z**(n-1)`` in the result is ``[n]_q`` times the
    coefficient of ``z**n`` in ``f``; the order drops by one (an order-0
    input yields the zero series of order 0).
    """
    return TruncatedSeries(q_derivative_array(f.coeffs, q))


def derivative(f: TruncatedSeries) -> TruncatedSeries:
    c = f.coeffs
    if c.size == 1:
        return TruncatedSeries(np.zeros(1))
    return TruncatedSeries(c[1:] * np.arange(1, c.size))
