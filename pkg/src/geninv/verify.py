"""Randomized property suites and published-table reproductions.

Each suite returns a JSON-serializable report with an overall ``pass`` flag.
Deviations are scaled by ``max(1, norm of the reference)`` so they stay
meaningful for badly scaled inputs.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import ortho_group

from .balance import scale_decompose
from .inverses import check_rotation_consistency, check_unit_consistency, uc_inverse
from .kinematics import RoverModel, rover_jacobian, rover_partition
from .matrix import kron, pinv
from .scenarios import REGISTRY, TABLE2, evaluate
from .simulation import run

__all__ = ["SUITES", "run_suite"]

TOL = 1e-8


def _rel(err, ref) -> float:
    return float(np.max(np.abs(err), initial=0.0) / max(1.0, np.max(np.abs(ref), initial=0.0)))


def _uniform(rng, m, n, zero_fraction=0.0):
    a = rng.uniform(-1.0, 1.0, size=(m, n))
    if zero_fraction:
        a[rng.random((m, n)) < zero_fraction] = 0.0
    return a


def _orthonormal(rng, n):
    return ortho_group.rvs(n, random_state=rng) if n > 1 else np.array([[rng.choice([-1.0, 1.0])]])


def _collect(name, trials, tol, deviations):
    worst = max((d for d, _ in deviations), default=0.0)
    failures = [info for d, info in deviations if not d <= tol][:5]
    return {"suite": name, "pass": not failures, "trials": trials, "tolerance": tol,
            "max_deviation": worst, "failures": failures}


def suite_penrose(rng, trials):
    devs = []
    for _ in range(trials):
        m, n = rng.integers(1, 9, size=2)
        a = _uniform(rng, m, n)
        p = pinv(a)
        d = max(_rel(a @ p @ a - a, a), _rel(p @ a @ p - p, p),
                _rel((a @ p).T - a @ p, a @ p), _rel((p @ a).T - p @ a, p @ a))
        devs.append((d, {"shape": [int(m), int(n)]}))
    return _collect("penrose", trials, TOL, devs)


def suite_mp_rotation(rng, trials):
    devs = []
    for _ in range(trials):
        m, n = rng.integers(1, 7, size=2)
        a = _uniform(rng, m, n)
        u, v = _orthonormal(rng, m), _orthonormal(rng, n)
        d = check_rotation_consistency("mp", a, u, v) / max(1.0, np.abs(pinv(a)).max())
        devs.append((d, {"shape": [int(m), int(n)]}))
    return _collect("mp-rotation", trials, TOL, devs)


def suite_uc_consistency(rng, trials):
    devs = []
    for _ in range(trials):
        m, n = rng.integers(1, 7, size=2)
        a = _uniform(rng, m, n, zero_fraction=0.2)
        d_diag = 10.0 ** rng.uniform(-3, 3, size=n)
        e_diag = 10.0 ** rng.uniform(-3, 3, size=m)
        x = uc_inverse(a)
        ref = d_diag[:, None] * x / e_diag[None, :]
        dev = check_unit_consistency("uc", a, d_diag, e_diag) / max(1.0, np.abs(ref).max())
        axioms = max(_rel(a @ x @ a - a, a), _rel(x @ a @ x - x, x))
        devs.append((max(dev, axioms), {"shape": [int(m), int(n)]}))
    return _collect("uc-consistency", trials, TOL, devs)


def suite_balance(rng, trials):
    devs = []
    for _ in range(trials):
        m, n = rng.integers(1, 9, size=2)
        a = _uniform(rng, m, n, zero_fraction=0.3)
        dec = scale_decompose(a)
        s = dec.s
        nz = s != 0
        logs = np.where(nz, np.log(np.abs(np.where(nz, s, 1.0))), 0.0)
        row_prod = np.abs(np.exp(logs.sum(axis=1)[nz.any(axis=1)]) - 1.0)
        col_prod = np.abs(np.exp(logs.sum(axis=0)[nz.any(axis=0)]) - 1.0)
        d0 = 10.0 ** rng.uniform(-3, 3, size=m)
        e0 = 10.0 ** rng.uniform(-3, 3, size=n)
        equiv = np.max(np.abs(scale_decompose(d0[:, None] * a * e0[None, :]).s - s), initial=0.0)
        exact_ok = (np.array_equal(nz, a != 0) and np.array_equal(np.sign(s), np.sign(a))
                    and _rel(dec.reconstruct() - a, a) <= 1e-10)
        d = max(np.max(row_prod, initial=0.0), np.max(col_prod, initial=0.0), equiv,
                0.0 if exact_ok else np.inf)
        devs.append((float(d), {"shape": [int(m), int(n)]}))
    return _collect("balance", trials, TOL, devs)


def suite_kron(rng, trials):
    devs = []
    for _ in range(trials):
        shapes = rng.integers(1, 5, size=(3, 2))
        a, b, c = (_uniform(rng, *s) for s in shapes)
        # mixed product needs conformant right factors
        c2 = _uniform(rng, a.shape[1], rng.integers(1, 5))
        d2 = _uniform(rng, b.shape[1], rng.integers(1, 5))
        b_alt = _uniform(rng, *b.shape)
        k = 2.0 * rng.uniform(-1, 1)
        structural = max(
            _rel(kron(a, b) @ kron(c2, d2) - kron(a @ c2, b @ d2), kron(a @ c2, b @ d2)),
            _rel(kron(a, b).T - kron(a.T, b.T), a),
            _rel(kron(a, b + b_alt) - kron(a, b) - kron(a, b_alt), a),
            _rel(kron(k * a, b) - k * kron(a, b), a),
            _rel(kron(kron(a, b), c) - kron(a, kron(b, c)), a),
        )
        mp = _rel(pinv(kron(a, b)) - kron(pinv(a), pinv(b)), kron(pinv(a), pinv(b)))
        t1_ref = kron(uc_inverse(a), uc_inverse(b))
        theorem1 = _rel(uc_inverse(kron(a, b)) - t1_ref, t1_ref)
        small = [_uniform(rng, *rng.integers(1, 4, size=2)) for _ in range(3)]
        t2_ref = kron(kron(uc_inverse(small[0]), uc_inverse(small[1])), uc_inverse(small[2]))
        theorem2 = _rel(uc_inverse(kron(kron(small[0], small[1]), small[2])) - t2_ref, t2_ref)
        d = max(structural, mp, theorem1, theorem2)
        devs.append((d, {"shapes": shapes.tolist(), "structural": structural, "mp": mp,
                         "theorem1": theorem1, "theorem2": theorem2}))
    return _collect("kron", trials, TOL, devs)


def suite_table1(rng, trials):
    reports = [evaluate(REGISTRY["arm-mp-m"])]
    return {"suite": "table1", "pass": all(r["pass"] for r in reports), "scenarios": reports}


def suite_table2(rng, trials):
    cells = []
    for inverse, frame in TABLE2:
        spec = REGISTRY[f"rover-{inverse}-{frame}"]
        cells.append(evaluate(spec, run(spec.config)))
    # hand-derivable intermediate: W^-U applied to the first two target components
    part = rover_partition(rover_jacobian(RoverModel()))
    w_inv_v = uc_inverse(part.w) @ np.array([2.0, 0.0])
    inter_dev = float(np.max(np.abs(w_inv_v - [-1.8182, 2.0])))
    intermediate = {"label": "W^-1 v1", "actual": w_inv_v.tolist(),
                    "expected": [-1.8182, 2.0], "deviation": inter_dev,
                    "pass": inter_dev <= 1e-4}
    ok = all(c["pass"] for c in cells) and intermediate["pass"]
    return {"suite": "table2", "pass": ok, "cells": cells, "intermediate": intermediate}


SUITES = {
    "penrose": suite_penrose,
    "mp-rotation": suite_mp_rotation,
    "uc-consistency": suite_uc_consistency,
    "balance": suite_balance,
    "kron": suite_kron,
    "table1": suite_table1,
    "table2": suite_table2,
}


def run_suite(name: str, seed: int = 0, trials: int = 200) -> dict:
    """Run one suite, or every suite for ``name == "all"``."""
    if name == "all":
        reports = [run_suite(s, seed, trials) for s in SUITES]
        return {"suite": "all", "pass": all(r["pass"] for r in reports), "seed": seed,
                "reports": reports}
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}, all")
    rng = np.random.default_rng(seed)
    report = SUITES[name](rng, trials)
    report["seed"] = seed
    return report
