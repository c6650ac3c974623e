"""Acceptance suite: one marked test (or parametrized family) per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary lists
a PASS/FAIL line for every criterion test.
"""

import time

import numpy as np
import pytest

from geninv.inverses import uc_inverse
from geninv.kinematics import ArmModel, RoverModel, arm_jacobian, rover_jacobian, rover_partition
from geninv.scenarios import REGISTRY, TABLE1, TABLE2, reported_rates, reported_states
from geninv.simulation import compare_runs, run
from geninv.verify import run_suite
from oracles import min_norm_solution

criterion = pytest.mark.criterion

SEED = 0
TRIALS = 200


@pytest.fixture(scope="module")
def arm_mp_m():
    start = time.perf_counter()
    result = run(REGISTRY["arm-mp-m"].config)
    return result, time.perf_counter() - start


@pytest.fixture(scope="module")
def rover_runs():
    return {key: run(REGISTRY[f"rover-{key[0]}-{key[1]}"].config) for key in TABLE2}


# 1 -------------------------------------------------------------------------

@criterion(1, "arm MP meters joint rates, first 11 steps")
def test_criterion_1_table_rates(arm_mp_m):
    result, elapsed = arm_mp_m
    rates = reported_rates(result)
    for k, (t, th1, th2, ld) in enumerate(TABLE1):
        assert result.records[k].t == pytest.approx(t)
        assert abs(rates[k, 0] - th1) <= 0.02, (t, rates[k, 0], th1)
        assert abs(rates[k, 1] - th2) <= 0.02, (t, rates[k, 1], th2)
        assert abs(abs(rates[k, 2]) - abs(ld)) <= 0.002, (t, rates[k, 2], ld)
        assert rates[k, 2] > 0
    assert elapsed < 1.0


@criterion(1, "arm MP meters joint rates, first 11 steps")
def test_criterion_1_minimal_norm_oracle(arm_mp_m):
    result, _ = arm_mp_m
    q = ArmModel().q
    for rec in result.records[:11]:
        expected = min_norm_solution(arm_jacobian(ArmModel().with_state(q)), (2.0, -2.0, 0.0))
        np.testing.assert_allclose(rec.qdot, expected, atol=1e-9)
        q = rec.q


# 2 -------------------------------------------------------------------------

@criterion(2, "arm MP meters final state")
def test_criterion_2_final_state(arm_mp_m):
    result, _ = arm_mp_m
    th1, th2, length = reported_states(result)[-1]
    assert abs(th1 - 27.379) <= 0.1
    assert abs(th2 - 29.483) <= 0.1
    assert abs(length - 0.875) <= 0.005


# 3 -------------------------------------------------------------------------

@criterion(3, "arm MP centimeters divergence")
def test_criterion_3_diverges_at_coarse_step():
    assert run(REGISTRY["arm-mp-cm"].config).divergence.diverged is True


@criterion(3, "arm MP centimeters divergence")
def test_criterion_3_stable_at_fine_step():
    assert run(REGISTRY["arm-mp-cm-dt1e-4"].config).divergence.diverged is False


# 4 -------------------------------------------------------------------------

@criterion(4, "arm UC unit invariance")
def test_criterion_4_uc_unit_invariance():
    m = run(REGISTRY["arm-uc-m"].config)
    cm = run(REGISTRY["arm-uc-cm"].config)
    gaps = np.abs(m.normalized_qdot - cm.normalized_qdot).max(axis=1)
    assert len(gaps) == 100
    assert np.all(gaps <= 1e-9), gaps.max()


# 5 -------------------------------------------------------------------------

@criterion(5, "rover t=0 rates, nine cells")
@pytest.mark.parametrize("inverse,frame", list(TABLE2), ids=[f"{i}-{f}" for i, f in TABLE2])
def test_criterion_5_table_cell(rover_runs, inverse, frame):
    actual = rover_runs[(inverse, frame)].normalized_qdot[0]
    expected = np.array(TABLE2[(inverse, frame)])
    gap = np.abs(actual - expected)
    assert np.all(gap <= 1e-3), f"actual={np.round(actual, 4).tolist()} max gap={gap.max():.4f}"


@criterion(5, "rover t=0 rates, nine cells")
def test_criterion_5_intermediate():
    w = rover_partition(rover_jacobian(RoverModel())).w
    np.testing.assert_allclose(uc_inverse(w) @ [2.0, 0.0], [-1.8182, 2.0], atol=1e-4)


# 6 -------------------------------------------------------------------------

def _t0_gap(a, b):
    return float(np.abs(a.normalized_qdot[0] - b.normalized_qdot[0]).max())


@criterion(6, "mixed inverse invariance across frames")
def test_criterion_6_mixed_identical(rover_runs):
    ref = rover_runs[("mixed", "m")]
    for frame in ("cm", "cm-rot30"):
        other = rover_runs[("mixed", frame)]
        assert len(other.records) == 100
        assert compare_runs(ref.records, other.records, other.config.transform) <= 1e-6


@criterion(6, "mixed inverse invariance across frames")
def test_criterion_6_mp_differs_across_units(rover_runs):
    assert _t0_gap(rover_runs[("mp", "m")], rover_runs[("mp", "cm")]) > 0.1


@criterion(6, "mixed inverse invariance across frames")
def test_criterion_6_uc_differs_across_rotation(rover_runs):
    gap = _t0_gap(rover_runs[("uc", "cm")], rover_runs[("uc", "cm-rot30")])
    assert gap > 0.1, f"t=0 gap {gap:.4f}"


# 7 -------------------------------------------------------------------------

PROPERTY_SUITES = ["penrose", "mp-rotation", "uc-consistency", "balance", "kron"]


@pytest.fixture(scope="module")
def suite_reports():
    start = time.perf_counter()
    reports = {name: run_suite(name, seed=SEED, trials=TRIALS) for name in PROPERTY_SUITES}
    return reports, time.perf_counter() - start


@criterion(7, "property suites, 200 trials at 1e-8")
@pytest.mark.parametrize("suite", PROPERTY_SUITES)
def test_criterion_7_suite(suite_reports, suite):
    report = suite_reports[0][suite]
    assert report["trials"] == TRIALS and report["tolerance"] == 1e-8
    assert report["pass"], report["failures"]


@criterion(7, "property suites, 200 trials at 1e-8")
def test_criterion_7_runtime(suite_reports):
    assert suite_reports[1] < 30.0
