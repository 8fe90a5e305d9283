"""Initial coefficients of starlike and q-starlike (lemniscate) functions.

Two independent routes are provided for the starlike class: the closed-form
polynomials in ``p1..p4`` and a power-series recursion that solves
``z f'(z) / f(z) = p(z)`` directly.  For the q-starlike class associated with
the lemniscate of Bernoulli the recursion solving
``z (D_q f)(z) / f(z) = phi(omega(z))`` is the source of truth; the long
closed form for ``a5`` is kept only as a cross-check.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import series as ser
from .caratheodory import PCoefficients
from .errors import InvalidParameter, SubordinationTargetInvalid
from .series import DEFAULT_ORDER, UNIT_TOLERANCE, QLike, TruncatedSeries, as_q


class ClassKind(enum.Enum):
    STAR = "star"
    QSTAR_LEMNISCATE = "qstar"


@dataclass(frozen=True)
class ClassTag:
    kind: ClassKind
    q: Optional[float] = None

    def __post_init__(self):
        if self.kind is ClassKind.QSTAR_LEMNISCATE:
            if self.q is None:
                raise InvalidParameter("the q-starlike class needs a q value")
            object.__setattr__(self, "q", as_q(self.q))
        elif self.q is not None:
            raise InvalidParameter("the starlike class takes no q value")

    @classmethod
    def star(cls) -> "ClassTag":
        return cls(ClassKind.STAR)

    @classmethod
    def qstar(cls, q: QLike) -> "ClassTag":
        return cls(ClassKind.QSTAR_LEMNISCATE, as_q(q))

    @property
    def is_star(self) -> bool:
        return self.kind is ClassKind.STAR

    @property
    def label(self) -> str:
        return "S*" if self.is_star else f"SL*_q(q={self.q!r})"


class CoefficientVector(NamedTuple):
    a2: complex
    a3: complex
    a4: complex
    a5: complex

    @classmethod
    def from_series(cls, f: TruncatedSeries) -> "CoefficientVector":
        """Read ``a2..a5`` off ``f(z) = z + a2 z**2 + ...``."""
        c = TruncatedSeries.from_coeffs(f.coeffs, max(f.order, 5)).coeffs
        return cls(*(complex(v) for v in c[2:6]))


def coeffs_star_closed(p: PCoefficients) -> CoefficientVector:
    p1, p2, p3, p4 = p
    a2 = p1
    a3 = (p2 + p1**2) / 2
    a4 = (p1**3 + 3 * p1 * p2 + 2 * p3) / 6
    a5 = (p1**4 + 6 * p1**2 * p2 + 3 * p2**2 + 8 * p1 * p3 + 6 * p4) / 24
    return CoefficientVector(a2, a3, a4, a5)


def coeffs_qstar_closed_a5(p: PCoefficients, q: QLike) -> complex:
    """Closed-form ``a5`` of the q-starlike lemniscate class in ``p1..p4``.

    Kept as an independent cross-check of :func:`coeffs_from_subordination`.
    """
    q = as_q(q)
    p1, p2, p3, p4 = p
    num = (
        512 * p1 * p3 * q**2 * (2 - 10 * q - 8 * q**2 - 9 * q**3 + 3 * q**4)
        + p1**4 * (8 - 140 * q + 802 * q**2 - 1435 * q**3 - 340 * q**4 - 1193 * q**5
                   + 1015 * q**6 - 320 * q**7 + 35 * q**8)
        + 32 * p1**2 * p2 * q * (6 - 68 * q + 175 * q**2 + 89 * q**3 + 148 * q**4 - 93 * q**5 + 15 * q**6)
        + 256 * q**2 * (1 + q + q**2) * (16 * p4 * q + p2**2 * (2 - 13 * q + 3 * q**2))
    )
    return num / (32768 * q**4 * (1 + q**2) * (1 + q + q**2))


def solve_starlike_recursion(g: np.ndarray, divisors: np.ndarray) -> np.ndarray:
    """Coefficients of ``f = z + a2 z**2 + ...`` from ``L f = g f``.

    ``g`` has constant term 1 (last axis = coefficient axis).  ``divisors[n]``
    is the factor in ``divisors[n] * a_n = sum_{m=1}^{n-1} g_m a_{n-m}``:
    ``n - 1`` for the classical derivative, ``[n]_q - 1`` for the q-derivative.
    Returns ``f`` coefficients of the same order as ``g``.
    """
    g = np.asarray(g, dtype=complex)
    order = g.shape[-1] - 1
    f = np.zeros(g.shape, dtype=complex)
    if order >= 1:
        f[..., 1] = 1.0
    for n in range(2, order + 1):
        d = divisors[n]
        assert d > 0, "recursion divisor must be positive"
        # sum_{m=1}^{n-1} g_m a_{n-m}, where a_k = f[k]
        acc = np.sum(g[..., 1:n] * f[..., n - 1 : 0 : -1], axis=-1)
        f[..., n] = acc / d
    return f


def star_divisors(order: int) -> np.ndarray:
    return np.arange(order + 1, dtype=float) - 1.0


def qstar_divisors(order: int, q: float) -> np.ndarray:
    return ser.q_numbers(order, q) - 1.0


def lemniscate_target(order: int, q: float) -> np.ndarray:
    """Coefficients of ``phi(w) = sqrt(2 (1 + w) / (2 + (1 - q) w))``."""
    num = np.zeros(order + 1, dtype=complex)
    den = np.zeros(order + 1, dtype=complex)
    num[:2] = 2.0
    den[0], den[1] = 2.0, 1.0 - q
    return ser.sqrt_array(ser.div_array(num, den))


def coefficients_from_p_array(p: np.ndarray, tag: ClassTag) -> np.ndarray:
    """Vectorized core of :func:`coeffs_from_subordination`.

    ``p`` holds p-function coefficients along the last axis (constant term 1);
    the return value holds the ``f`` coefficients, same shape.
    """
    p = np.asarray(p, dtype=complex)
    if np.any(np.abs(p[..., 0] - 1.0) > UNIT_TOLERANCE):
        raise SubordinationTargetInvalid("p(0) must equal 1")
    order = p.shape[-1] - 1
    if tag.is_star:
        return solve_starlike_recursion(p, star_divisors(order))
    one = np.zeros(order + 1, dtype=complex)
    one[0] = 1.0
    omega = ser.div_array(p - one, p + one)
    g = ser.compose_array(lemniscate_target(order, tag.q), omega)
    return solve_starlike_recursion(g, qstar_divisors(order, tag.q))


def coeffs_from_subordination(p: TruncatedSeries, tag: ClassTag) -> CoefficientVector:
    """``a2..a5`` of the class member generated by the p-function ``p``.

    For the starlike class ``p`` is ``z f'/f`` itself.  For the q-starlike
    class the Schwarz function ``omega = (p - 1)/(p + 1)`` is fed through the
    lemniscate map and ``z (D_q f)/f`` is matched against it.
    """
    if p.order < 5:
        p = TruncatedSeries.from_coeffs(p.coeffs, 5)
    f = coefficients_from_p_array(p.coeffs, tag)
    return CoefficientVector(*(complex(v) for v in f[2:6]))


def _extremal(tag: ClassTag, order: int) -> TruncatedSeries:
    if order < 7:
        raise InvalidParameter("extremal functions need order >= 7")
    if tag.is_star:
        # z f'/f = (1 + z^3)/(1 - z^3): all cube-power coefficients equal 2
        g = np.zeros(order + 1, dtype=complex)
        g[0] = 1.0
        g[3::3] = 2.0
        return TruncatedSeries(solve_starlike_recursion(g, star_divisors(order)))
    cube = np.zeros(order + 1, dtype=complex)
    cube[3] = 1.0
    g = ser.compose_array(lemniscate_target(order, tag.q), cube)
    return TruncatedSeries(solve_starlike_recursion(g, qstar_divisors(order, tag.q)))


def extremal_star(order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Series of ``z exp(int_0^z 2 t**2 / (1 - t**3) dt) = z + 2 z**4 / 3 + ...``."""
    return _extremal(ClassTag.star(), order)


def extremal_qstar(q: QLike, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Series of the function with ``z D_q f / f = phi(z**3)``; only ``a_{3k+1}`` survive."""
    return _extremal(ClassTag.qstar(q), order)


def extremal(tag: ClassTag, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    return _extremal(tag, order)
