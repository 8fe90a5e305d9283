"""Carathéodory-class coefficients: the (p1, lambda, mu, delta) parametrization
of p2, p3, p4 and samplers of genuine members of the class.

A function ``p(z) = 1 + p1 z + p2 z**2 + ...`` with positive real part on the
unit disk has ``|p_n| <= 2``.  With ``p1`` rotated onto ``[0, 2]`` the next
three coefficients are polynomial in ``p1`` and three points of the closed
unit disk.  The parametrization is used here as a map from the closed
polydisk; the bound ``|p_n| <= 2`` is checked as a property instead of being
assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidParameter
from .series import TruncatedSeries

DISK_TOLERANCE = 1e-12
P1_TWO_TOLERANCE = 1e-10


@dataclass(frozen=True)
class CaratheodoryParams:
    p1: float
    lam: complex = 0j
    mu: complex = 0j
    delta: complex = 0j

    def __post_init__(self):
        p1 = float(self.p1)
        if not (-DISK_TOLERANCE <= p1 <= 2.0 + DISK_TOLERANCE):
            raise InvalidParameter(f"p1 must lie in [0, 2], got {self.p1!r}")
        object.__setattr__(self, "p1", min(max(p1, 0.0), 2.0))
        for name in ("lam", "mu", "delta"):
            v = complex(getattr(self, name))
            if abs(v) > 1.0 + DISK_TOLERANCE:
                raise InvalidParameter(f"|{name}| must be <= 1, got {abs(v)!r}")
            object.__setattr__(self, name, v)


class PCoefficients(NamedTuple):
    p1: complex
    p2: complex
    p3: complex
    p4: complex

    def as_series(self, order: int = 8) -> TruncatedSeries:
        return TruncatedSeries.from_coeffs([1.0, *self], order)

    @classmethod
    def from_series(cls, p: TruncatedSeries) -> "PCoefficients":
        c = TruncatedSeries.from_coeffs(p.coeffs, max(p.order, 4)).coeffs
        return cls(*(complex(v) for v in c[1:5]))


def lemma_expand_arrays(p1, lam, mu, delta):
    """Vectorized p2, p3, p4 from ``(p1, lam, mu, delta)`` (broadcasting arrays)."""
    p1 = np.asarray(p1, dtype=float)
    lam = np.asarray(lam, dtype=complex)
    mu = np.asarray(mu, dtype=complex)
    delta = np.asarray(delta, dtype=complex)
    u = 4.0 - p1 * p1
    one_m_lam2 = 1.0 - np.abs(lam) ** 2
    one_m_mu2 = 1.0 - np.abs(mu) ** 2
    p2 = (p1**2 + lam * u) / 2.0
    p3 = (p1**3 + 2.0 * p1 * u * lam - p1 * u * lam**2 + 2.0 * u * one_m_lam2 * mu) / 4.0
    p4 = (
        p1**4
        + u * lam * (p1**2 * (lam**2 - 3.0 * lam + 3.0) + 4.0 * lam)
        - 4.0 * u * one_m_lam2 * (p1 * (lam - 1.0) * mu + np.conj(lam) * mu**2 - one_m_mu2 * delta)
    ) / 8.0
    return p2, p3, p4


def lemma_expand(params: CaratheodoryParams) -> PCoefficients:
    p2, p3, p4 = lemma_expand_arrays(params.p1, params.lam, params.mu, params.delta)
    return PCoefficients(complex(params.p1), complex(p2), complex(p3), complex(p4))


def solve_lambda(p: PCoefficients) -> complex:
    """Invert the p2 relation: ``lam = (2 p2 - p1**2) / (4 - p1**2)``.

    ``p1`` must already be real and non-negative (see
    :func:`rotate_to_real_p1`).  Undefined at ``p1 = 2``, where every
    coefficient is forced to 2; callers branch on that case.
    """
    p1 = p.p1.real if isinstance(p.p1, complex) else float(p.p1)
    if abs(2.0 - p1) <= P1_TWO_TOLERANCE:
        raise InvalidParameter("lambda is undefined at p1 = 2")
    return (2.0 * complex(p.p2) - p1 * p1) / (4.0 - p1 * p1)


def rotate_to_real_p1(p: PCoefficients) -> PCoefficients:
    """Coefficients of ``p(e^{i theta} z)`` with theta chosen so ``p1 >= 0``."""
    p1 = complex(p.p1)
    if abs(p1) == 0.0:
        return PCoefficients(*(complex(v) for v in p))
    theta = -np.angle(p1)
    rotated = [complex(v) * np.exp(1j * n * theta) for n, v in enumerate(p, start=1)]
    rotated[0] = complex(abs(p1), 0.0)
    return PCoefficients(*rotated)


def p_function_from_atoms(weights, angles, order: int) -> TruncatedSeries:
    """``sum_j w_j (1 + e^{i a_j} z) / (1 - e^{i a_j} z)`` truncated at ``order``.

    The weights must be non-negative and sum to one; coefficient ``n >= 1``
    equals ``2 sum_j w_j e^{i n a_j}``.
    """
    w = np.asarray(weights, dtype=float)
    a = np.asarray(angles, dtype=float)
    if w.shape != a.shape or w.ndim != 1 or w.size == 0:
        raise InvalidParameter("weights and angles must be equal-length 1-D sequences")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise InvalidParameter("weights must be non-negative and sum to 1")
    n = np.arange(1, order + 1)
    coeffs = np.empty(order + 1, dtype=complex)
    coeffs[0] = 1.0
    coeffs[1:] = 2.0 * np.exp(1j * np.outer(n, a)) @ w
    return TruncatedSeries(coeffs)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_p_function(seed, atoms: int = 3, order: int = 8) -> TruncatedSeries:
    """Draw a random member of the Carathéodory class as a convex combination
    of ``atoms`` extreme points with Dirichlet weights and uniform angles.

    ``seed`` is an integer or an existing :class:`numpy.random.Generator`
    (PCG64); the result is deterministic given the seed.
    """
    if atoms < 1:
        raise InvalidParameter("atoms must be >= 1")
    if order < 4:
        raise InvalidParameter("order must be >= 4")
    rng = _rng(seed)
    weights = rng.dirichlet(np.ones(atoms)) if atoms > 1 else np.ones(1)
    angles = rng.uniform(0.0, 2.0 * np.pi, size=atoms)
    return p_function_from_atoms(weights, angles, order)


def sample_p_batch(rng: np.random.Generator, size: int, atoms: int = 3, order: int = 8) -> np.ndarray:
    """Coefficient arrays of ``size`` sampled p-functions, shape ``(size, order+1)``."""
    weights = rng.dirichlet(np.ones(atoms), size=size) if atoms > 1 else np.ones((size, 1))
    angles = rng.uniform(0.0, 2.0 * np.pi, size=(size, atoms))
    n = np.arange(1, order + 1)
    phases = np.exp(1j * n[None, :, None] * angles[:, None, :])
    out = np.empty((size, order + 1), dtype=complex)
    out[:, 0] = 1.0
    out[:, 1:] = 2.0 * np.einsum("snk,sk->sn", phases, weights)
    return out


def _disk_points(rng: np.random.Generator, size: int, boundary_fraction: float, zero_fraction: float):
    radius = np.sqrt(rng.random(size))
    u = rng.random(size)
    radius[u < boundary_fraction] = 1.0
    radius[(u >= boundary_fraction) & (u < boundary_fraction + zero_fraction)] = 0.0
    return radius * np.exp(2j * np.pi * rng.random(size))


def random_params(rng: np.random.Generator, size: int, boundary_fraction: float = 0.2,
                  endpoint_fraction: float = 0.05):
    """Draw parameter arrays ``(p1, lam, mu, delta)`` covering the closed domain.

    A fraction of draws is pinned to the boundary circle (and to the centre)
    of each disk, and to the endpoints ``p1 = 0, 2``, so degenerate faces of
    the parameter set are exercised as well as the interior.
    """
    p1 = 2.0 * rng.random(size)
    u = rng.random(size)
    p1[u < endpoint_fraction] = 0.0
    p1[(u >= endpoint_fraction) & (u < 2 * endpoint_fraction)] = 2.0
    lam = _disk_points(rng, size, boundary_fraction, endpoint_fraction)
    mu = _disk_points(rng, size, boundary_fraction, endpoint_fraction)
    delta = _disk_points(rng, size, boundary_fraction, endpoint_fraction)
    return p1, lam, mu, delta
