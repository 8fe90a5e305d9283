"""The third Hankel determinant and its surrogate upper envelopes.

``surrogate_star`` and ``surrogate_qstar`` are real polynomials on the cuboid
``[0, 2] x [0, 1] x [0, 1]`` in ``(p, x, y) = (p1, |lam|, |mu|)``.  They
dominate ``|H3(1)|`` of every class member with those moduli, which is what
the Monte-Carlo sweep in :func:`domination_sweep` checks.  ``H3(1)`` itself
is always computed by composing the parametrization, the coefficient
recursion and the determinant, never from an expanded polynomial.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .caratheodory import CaratheodoryParams, lemma_expand_arrays, random_params
from .classes import ClassTag, coefficients_from_p_array
from .errors import InvalidParameter
from .series import as_q

CUBOID_TOLERANCE = 1e-12
DOMINATION_SLACK = 1e-9
WORK_ORDER = 5
SWEEP_CHUNK = 10_000


@dataclass(frozen=True)
class CuboidPoint:
    p: float
    x: float
    y: float

    def __post_init__(self):
        for name, hi in (("p", 2.0), ("x", 1.0), ("y", 1.0)):
            v = float(getattr(self, name))
            if not (-CUBOID_TOLERANCE <= v <= hi + CUBOID_TOLERANCE):
                raise InvalidParameter(f"{name}={v!r} lies outside [0, {hi:g}]")
            object.__setattr__(self, name, v)

    def __iter__(self):
        return iter((self.p, self.x, self.y))

    def as_dict(self) -> dict:
        return {"p": self.p, "x": self.x, "y": self.y}


class SurrogateTerms(NamedTuple):
    """The four brackets ``term1 + term2 y + term3 y**2 + term4 (1 - y**2)``."""

    term1: np.ndarray
    term2: np.ndarray
    term3: np.ndarray
    term4: np.ndarray

    def combine(self, y) -> np.ndarray:
        return self.term1 + self.term2 * y + self.term3 * y**2 + self.term4 * (1 - y**2)


def h3(a) -> complex:
    """``a3 (a2 a4 - a3**2) - a4 (a4 - a2 a3) + a5 (a3 - a2**2)``.

    ``a`` is any 4-sequence ``(a2, a3, a4, a5)``; the entries may be arrays.
    """
    a2, a3, a4, a5 = a
    return a3 * (a2 * a4 - a3**2) - a4 * (a4 - a2 * a3) + a5 * (a3 - a2**2)


def sharp_bound(tag: ClassTag) -> float:
    """Closed-form maximum of ``|H3(1)|``: 4/9, or ``(1+q)^2 / (16 q^2 (1+q+q^2)^2)``."""
    if tag.is_star:
        return 4.0 / 9.0
    q = tag.q
    return (1 + q) ** 2 / (16 * q**2 * (1 + q + q**2) ** 2)


def h3_from_param_arrays(p1, lam, mu, delta, tag: ClassTag) -> np.ndarray:
    p1 = np.asarray(p1, dtype=float)
    p2, p3, p4 = lemma_expand_arrays(p1, lam, mu, delta)
    shape = np.broadcast_shapes(p1.shape, p2.shape, p3.shape, p4.shape)
    pc = np.zeros(shape + (WORK_ORDER + 1,), dtype=complex)
    pc[..., 0] = 1.0
    pc[..., 1] = p1
    pc[..., 2] = p2
    pc[..., 3] = p3
    pc[..., 4] = p4
    # p5 does not reach a5, so the trailing zero is harmless
    f = coefficients_from_p_array(pc, tag)
    return h3((f[..., 2], f[..., 3], f[..., 4], f[..., 5]))


def h3_from_params(params: CaratheodoryParams, tag: ClassTag) -> complex:
    return complex(h3_from_param_arrays(params.p1, params.lam, params.mu, params.delta, tag))


def star_terms(p, x) -> SurrogateTerms:
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    u = 4 - p**2
    w = u * (1 - x**2)
    s1 = (2 * p**2 * x**2 * u**2 + 10 * p**2 * x**3 * u**2 + p**2 * x**4 * u**2
          + 3 * p**4 * x * u + 3 * p**4 * x**2 * u + 36 * p**2 * x**2 * u + 9 * p**4 * x**3 * u)
    s2 = w * (12 * p**3 + p * x * u * (20 + 4 * x) + 36 * p**3 * x)
    s3 = w * (32 * u + 4 * x**2 * u + 36 * p**2 * x)
    s4 = w * (36 * p**2 + 36 * x * u)
    return SurrogateTerms(s1, s2, s3, s4)


def surrogate_star(p, x, y):
    """Upper envelope for the starlike class; ``S(0, 0, 1) = 4/9``."""
    return star_terms(p, x).combine(np.asarray(y, dtype=float)) / 1152


def qstar_constant_a(q: float) -> float:
    return (55 - 308 * q + 1349 * q**2 - 698 * q**3 + 620 * q**4 - 46 * q**5
            - 25 * q**6 - 20 * q**7 + q**8)


def qstar_normalizer(q: float) -> float:
    return 4194304 * q**2 * (1 + q**2) * (1 + q + q**2) ** 2


def qstar_terms(p, x, q: float) -> SurrogateTerms:
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    u = 4 - p**2
    w = u * (1 - x**2)
    sq = (1 + q + q**2) ** 2
    t1 = qstar_constant_a(q) * p**6 + p**2 * u * x * (
        8 * (15 - 183 * q + 804 * q**2 - 434 * q**3 + 242 * q**4 + 20 * q**5 + 3 * q**6 - 3 * q**7) * p**2
        + 64 * (45 + 66 * q + 262 * q**2 + 28 * q**3 + 62 * q**4 + 6 * q**5 + 3 * q**6) * u * x
        + 512 * (7 + 15 * q - 3 * q**2 + 17 * q**3 + 5 * q**4 - q**5) * u * x**2
        + 2048 * (7 - q) * sq * x
        + 4096 * u * x**3
        + 512 * (7 - q) * sq * p**2 * x**2
        + 128 * (22 + 50 * q + 35 * q**2 + 59 * q**3 + 20 * q**4 + q**5 + q**6) * p**2 * x
    ) + 2048 * (5 - q) * sq * u**2 * x**3
    t2 = w * (
        256 * (6 + 2 * q + 41 * q**2 - 15 * q**3 - 5 * q**5 - q**6) * p**3
        + 2048 * (7 - q) * sq * p**3 * x
        + p * u * x * (2048 * (6 + 12 * q + 5 * q**2 + 12 * q**3 + 4 * q**4 - q**5) + 16384 * q**2 * x)
    )
    t3 = w * (2048 * (7 - q) * sq * p**2 * x + u * (16384 * q**2 * x**2 + 16384 * (1 + q**2) * (1 + q) ** 2))
    t4 = w * sq * ((14336 - 2048 * q) * p**2 + 16384 * u * x)
    return SurrogateTerms(t1, t2, t3, t4)


def surrogate_qstar(p, x, y, q):
    """Upper envelope for the q-starlike lemniscate class."""
    q = as_q(q)
    return qstar_terms(p, x, q).combine(np.asarray(y, dtype=float)) / qstar_normalizer(q)


def surrogate(tag: ClassTag, p, x, y):
    if tag.is_star:
        return surrogate_star(p, x, y)
    return surrogate_qstar(p, x, y, tag.q)


class DominationResult(NamedTuple):
    h3_modulus: float
    surrogate_value: float
    dominated: bool


def check_domination(params: CaratheodoryParams, tag: ClassTag) -> DominationResult:
    """Compare ``|H3(1)|`` with the surrogate at ``(p1, |lam|, |mu|)``."""
    h = abs(h3_from_params(params, tag))
    pt = CuboidPoint(params.p1, min(abs(params.lam), 1.0), min(abs(params.mu), 1.0))
    s = float(surrogate(tag, *pt))
    return DominationResult(h, s, h <= s + DOMINATION_SLACK)


@dataclass
class SampleSummary:
    """Aggregate of a Monte-Carlo domination sweep for one class."""

    count: int
    seed: int
    max_observed_h3: float
    min_slack: float
    max_bound_excess: float
    domination_violations: int
    bound_violations: int
    worst_params: dict

    @property
    def ok(self) -> bool:
        return self.domination_violations == 0 and self.bound_violations == 0

    def as_dict(self) -> dict:
        return asdict(self)


def worker_count() -> int:
    """Worker cap from ``HANKEL_VERIFY_THREADS``, default the CPU count."""
    raw = os.environ.get("HANKEL_VERIFY_THREADS")
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise InvalidParameter(f"HANKEL_VERIFY_THREADS must be an integer >= 1, got {raw!r}") from None
    if n < 1:
        raise InvalidParameter(f"HANKEL_VERIFY_THREADS must be an integer >= 1, got {raw!r}")
    return n


def _sweep_chunk(tag: ClassTag, seq: np.random.SeedSequence, size: int) -> dict:
    rng = np.random.default_rng(seq)
    p1, lam, mu, delta = random_params(rng, size)
    h = np.abs(h3_from_param_arrays(p1, lam, mu, delta, tag))
    s = surrogate(tag, p1, np.minimum(np.abs(lam), 1.0), np.minimum(np.abs(mu), 1.0))
    slack = s - h
    bound = sharp_bound(tag)
    i = int(np.argmin(slack))
    return {
        "max_h3": float(h.max()),
        "min_slack": float(slack[i]),
        "max_excess": float((h - bound).max()),
        "dom_viol": int(np.count_nonzero(slack < -DOMINATION_SLACK)),
        "bound_viol": int(np.count_nonzero(h > bound + DOMINATION_SLACK)),
        "worst": {"p1": float(p1[i]), "lam": [float(lam[i].real), float(lam[i].imag)],
                  "mu": [float(mu[i].real), float(mu[i].imag)],
                  "delta": [float(delta[i].real), float(delta[i].imag)]},
    }


def domination_sweep(tag: ClassTag, samples: int, seed: int = 42, workers: int | None = None) -> SampleSummary:
    """Draw ``samples`` random parameter tuples and test domination and the sharp bound.

    Samples are split into fixed-size chunks, each seeded from
    ``SeedSequence(seed).spawn``; chunk results are reduced in chunk order,
    so the summary does not depend on the number of workers.
    """
    if samples < 1:
        raise InvalidParameter("samples must be >= 1")
    sizes = [SWEEP_CHUNK] * (samples // SWEEP_CHUNK)
    if samples % SWEEP_CHUNK:
        sizes.append(samples % SWEEP_CHUNK)
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda a: _sweep_chunk(tag, *a), zip(seqs, sizes)))
    else:
        parts = [_sweep_chunk(tag, s, n) for s, n in zip(seqs, sizes)]
    worst = min(parts, key=lambda r: r["min_slack"])
    return SampleSummary(
        count=samples,
        seed=seed,
        max_observed_h3=max(r["max_h3"] for r in parts),
        min_slack=worst["min_slack"],
        max_bound_excess=max(r["max_excess"] for r in parts),
        domination_violations=sum(r["dom_viol"] for r in parts),
        bound_violations=sum(r["bound_viol"] for r in parts),
        worst_params=worst["worst"],
    )
