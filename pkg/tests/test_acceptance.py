"""Acceptance criteria, one test per criterion.

Each test is named ``test_acNN_*``; the summary hook in ``conftest.py``
prints one PASS/FAIL line per criterion at the end of the run.
"""

import json
import time

import numpy as np
import pytest

from hankel_verify.bounds import domination_sweep, h3, sharp_bound
from hankel_verify.caratheodory import PCoefficients, sample_p_batch
from hankel_verify.classes import (
    ClassTag,
    CoefficientVector,
    coefficients_from_p_array,
    coeffs_from_subordination,
    coeffs_qstar_closed_a5,
    coeffs_star_closed,
    extremal_qstar,
    extremal_star,
)
from hankel_verify.cli import main
from hankel_verify.optimize import edge_scan, face_scan, grid_spacing, star_field, verify_sharp_bound
from hankel_verify.series import TruncatedSeries

STAR = ClassTag.star()
Q_SET = (0.1, 0.3, 0.5, 0.7, 0.9)

CRITERIA = {
    1: "sharp bound 4/9 for S*, argmax at (0,0,1), < 10 s",
    2: "S* extremal: a4 = 2/3 and |H3(1)| = 4/9",
    3: "sharp bound (1+q)^2/(16q^2(1+q+q^2)^2) for q in {0.1,...,0.9}, < 60 s",
    4: "SL*_q extremal: a2 = a3 = a5 = 0 and |H3(1)| equals the bound",
    5: "q -> 1 limit: bound at q = 1 - 1e-4 within 1e-3 of 1/36",
    6: "S* face/edge table: x=1 face, edges (p,0,0) and (0,x,0)",
    7: "oracle equivalence of closed forms and recursion on 10^3 samples",
    8: "domination and global bound on 10^5 samples per class and q, < 120 s",
    9: "Koebe: coefficients (2,3,4,5) and H3(1) = 0",
    10: "byte-identical JSON reports for identical runs",
}


def qbound(q):
    return (1 + q) ** 2 / (16 * q**2 * (1 + q + q**2) ** 2)


def test_ac01_star_sharp_bound():
    start = time.perf_counter()
    r = verify_sharp_bound(STAR)
    elapsed = time.perf_counter() - start
    assert abs(r.max_value - 4 / 9) <= 1e-6
    spacing = grid_spacing(r.grid_initial)
    assert np.max(np.abs(np.array(tuple(r.argmax)) - [0, 0, 1])) <= spacing
    assert elapsed < 10


def test_ac02_star_sharpness():
    f = extremal_star()
    assert abs(f[4] - 2 / 3) <= 1e-12
    assert abs(abs(h3(CoefficientVector.from_series(f))) - 4 / 9) <= 1e-12


def test_ac03_qstar_sharp_bound():
    start = time.perf_counter()
    for q in Q_SET:
        r = verify_sharp_bound(ClassTag.qstar(q))
        assert abs(r.max_value - qbound(q)) <= 1e-6, q
    assert abs(verify_sharp_bound(ClassTag.qstar(0.5)).max_value - 9 / 49) <= 1e-6
    assert time.perf_counter() - start < 60


def test_ac04_qstar_sharpness():
    for q in Q_SET:
        f = extremal_qstar(q)
        assert f[2] == 0 and f[3] == 0 and f[5] == 0
        assert abs(abs(h3(CoefficientVector.from_series(f))) - qbound(q)) <= 1e-10, q


def test_ac05_q_to_one_limit():
    r = verify_sharp_bound(ClassTag.qstar(1 - 1e-4))
    assert abs(r.max_value - 1 / 36) <= 1e-3


def test_ac06_face_edge_table():
    edges = edge_scan(star_field())
    faces = {e.id: e for e in face_scan(star_field(), edge_table=edges)}
    edges = {e.id: e for e in edges}
    x1 = faces["x=1"]
    assert abs(x1.value - 0.319595) <= 1e-4
    assert abs(x1.point.p - 1.42948) <= 1e-3
    e = edges["x=0,y=0"]
    assert abs(e.value - 1 / 8) <= 1e-4 and abs(e.point.p - np.sqrt(2)) <= 1e-3
    e = edges["p=0,y=0"]
    assert abs(e.value - 1 / (3 * np.sqrt(3))) <= 1e-4 and abs(e.point.x - 1 / np.sqrt(3)) <= 1e-3


def test_ac07_oracle_equivalence():
    rng = np.random.default_rng(20240607)
    batch = sample_p_batch(rng, 1000, atoms=5)
    rec = coefficients_from_p_array(batch, STAR)[:, 2:6]
    closed = np.array([coeffs_star_closed(PCoefficients(*row[1:5])) for row in batch])
    assert np.max(np.abs(rec - closed)) <= 1e-12

    qs = rng.uniform(0.05, 0.95, 1000)
    residuals = []
    for row, q in zip(batch, qs):
        a5 = coeffs_from_subordination(TruncatedSeries(row), ClassTag.qstar(q)).a5
        residuals.append(abs(a5 - coeffs_qstar_closed_a5(PCoefficients(*row[1:5]), q)))
    worst = max(residuals)
    print(f"SL*_q a5 closed form vs recursion: max residual {worst:.3e}")
    assert worst <= 1e-9, f"a5 discrepancy flagged: residual {worst:.3e}"


def test_ac08_domination_sweep():
    start = time.perf_counter()
    tags = [STAR] + [ClassTag.qstar(q) for q in Q_SET]
    for tag in tags:
        s = domination_sweep(tag, 100_000, seed=42)
        assert s.count == 100_000
        assert s.domination_violations == 0, tag.label
        assert s.bound_violations == 0, tag.label
        assert s.min_slack >= -1e-9
        assert s.max_observed_h3 <= sharp_bound(tag) + 1e-9
    assert time.perf_counter() - start < 120


def test_ac09_koebe():
    a = coeffs_from_subordination(TruncatedSeries.from_coeffs([1] + [2] * 8), STAR)
    assert np.max(np.abs(np.array(a) - [2, 3, 4, 5])) <= 1e-12
    assert abs(h3(a)) <= 1e-12


@pytest.mark.parametrize("argv", [
    ["verify-star"],
    ["verify-qstar", "--q", "0.5"],
])
def test_ac10_determinism(tmp_path, argv):
    outs = [tmp_path / "a.json", tmp_path / "b.json"]
    for out in outs:
        assert main([*argv, "--seed", "42", "--out", str(out)]) == 0
    assert outs[0].read_bytes() == outs[1].read_bytes()
    json.loads(outs[0].read_text())
