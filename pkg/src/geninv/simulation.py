"""Fixed-step resolved-rate control with explicit Euler integration.

Each step solves ``qdot = inv(J(q)) @ v`` with the selected generalized
inverse and advances ``q += qdot * dt``. A run can be posed in other units or
a rotated frame through a :class:`~geninv.kinematics.FrameTransform`; the
integration then happens entirely in the transformed coordinates.
"""

from __future__ import annotations

import math
from functools import cached_property
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .balance import BalanceSettings
from .inverses import BlockPartition, InverseKind, mixed_inverse, uc_inverse
from .kinematics import (
    ArmModel,
    FrameTransform,
    RoverModel,
    arm_jacobian,
    arm_unit_transform,
    rover_frame_transform,
    rover_jacobian,
)
from .matrix import InvalidInputError, pinv

__all__ = [
    "SimulationConfig",
    "TrajectoryRecord",
    "DivergenceReport",
    "SimulationResult",
    "step",
    "run",
    "compare_runs",
]

ARM_TARGET = (2.0, -2.0, 0.0)
ROVER_TARGET = (2.0, 0.0, -1.0, 0.0, 0.0)


@dataclass(frozen=True)
class SimulationConfig:
    """One experiment.

    ``v`` and the model parameters are in baseline units (meters, unrotated
    frame); ``unit_scale`` and ``theta_prime`` describe the frame the
    controller actually works in.
    """

    model: str = "arm"
    inverse: str = "mp"
    split: int | None = None
    v: tuple = ARM_TARGET
    dt: float = 1e-3
    duration: float = 0.1
    unit_scale: float = 1.0
    theta_prime: float = 0.0
    balance: BalanceSettings = field(default_factory=BalanceSettings)
    arm: ArmModel = field(default_factory=ArmModel)
    rover: RoverModel = field(default_factory=RoverModel)
    divergence_factor: float = 50.0
    settle_fraction: float = 0.1
    baseline_max: tuple | None = None

    def __post_init__(self):
        if self.model not in ("arm", "rover"):
            raise InvalidInputError(f"unknown model {self.model!r}")
        kind = InverseKind(self.inverse)
        object.__setattr__(self, "inverse", kind.value)
        if kind is InverseKind.MIXED and self.split is None:
            object.__setattr__(self, "split", 2 if self.model == "rover" else None)
            if self.split is None:
                raise InvalidInputError("mixed inverse requires a split")
        if not self.dt > 0:
            raise InvalidInputError("dt must be positive")
        if not self.duration >= self.dt:
            raise InvalidInputError("duration must be at least one step")
        v = tuple(float(x) for x in self.v)
        if len(v) != self.n_joints or not all(math.isfinite(x) for x in v):
            raise InvalidInputError(f"target velocity must have {self.n_joints} finite entries")
        object.__setattr__(self, "v", v)
        if not (math.isfinite(self.unit_scale) and self.unit_scale > 0):
            raise InvalidInputError("unit_scale must be positive")
        if self.model == "arm" and self.theta_prime != 0:
            raise InvalidInputError("the planar arm has no frame rotation")

    @property
    def n_joints(self) -> int:
        return 3 if self.model == "arm" else 5

    @property
    def n_steps(self) -> int:
        ratio = self.duration / self.dt
        nearest = round(ratio)
        return int(nearest) if abs(ratio - nearest) < 1e-9 * max(1.0, ratio) else math.ceil(ratio)

    @cached_property
    def transform(self) -> FrameTransform:
        if self.model == "arm":
            return arm_unit_transform(self.unit_scale)
        return rover_frame_transform(self.unit_scale, self.theta_prime)

    @property
    def angle_mask(self) -> tuple:
        return ArmModel.angle_mask if self.model == "arm" else RoverModel.angle_mask

    def initial_state(self) -> np.ndarray:
        """Initial joint state in the transformed coordinates."""
        base = self.arm.q if self.model == "arm" else self.rover.q
        return self.transform.denormalize(base)

    def jacobian(self, q) -> np.ndarray:
        """Transformed-frame Jacobian at transformed-frame state ``q``."""
        tf = self.transform
        base_q = tf.normalize(q)
        if self.model == "arm":
            j = arm_jacobian(self.arm.with_state(base_q))
        else:
            j = rover_jacobian(self.rover.with_state(base_q))
        return tf.jacobian(j)

    def target(self) -> np.ndarray:
        return self.transform.target(self.v)

    def baseline(self) -> "SimulationConfig":
        """Same experiment in meters, unrotated, at dt = 1e-3."""
        return replace(self, unit_scale=1.0, theta_prime=0.0, dt=1e-3, baseline_max=None)


@dataclass(frozen=True)
class TrajectoryRecord:
    t: float
    qdot: np.ndarray
    q: np.ndarray
    achieved_v: np.ndarray
    residual: float


@dataclass(frozen=True)
class DivergenceReport:
    """Divergence verdict for a run.

    Rates are compared in baseline units against ``threshold`` (the
    divergence factor times the baseline run's per-joint peak); crossings
    during the first ``settle_fraction`` of the run are ignored.
    """

    max_abs_qdot: tuple
    threshold: tuple
    diverged: bool
    first_divergence_time: float | None


@dataclass
class SimulationResult:
    config: SimulationConfig
    records: list
    divergence: DivergenceReport
    balance_iterations: int = 0
    balance_converged: bool = True

    @property
    def qdot(self) -> np.ndarray:
        return np.array([r.qdot for r in self.records])

    @property
    def normalized_qdot(self) -> np.ndarray:
        return self.config.transform.normalize(self.qdot)

    @property
    def final_state(self) -> np.ndarray:
        """Final joint state in baseline units."""
        return self.config.transform.normalize(self.records[-1].q)


def _solve(j, v, config: SimulationConfig, diagnostics: list | None = None):
    kind = InverseKind(config.inverse)
    if kind is InverseKind.MP:
        inv = pinv(j)
    elif kind is InverseKind.UC:
        inv, dec = uc_inverse(j, config.balance, return_decomposition=True)
        decs = [dec]
    else:
        inv, decs = mixed_inverse(BlockPartition.from_matrix(j, config.split),
                                  config.balance, return_decomposition=True)
    if diagnostics is not None and kind is not InverseKind.MP:
        diagnostics.extend(decs)
    return inv @ v


def step(q, config: SimulationConfig, diagnostics: list | None = None):
    """One Euler step in transformed coordinates. Returns ``(qdot, next_q)``."""
    q = np.asarray(q, dtype=np.float64)
    qdot = _solve(config.jacobian(q), config.target(), config, diagnostics)
    return qdot, q + qdot * config.dt


def _integrate(config: SimulationConfig):
    q = config.initial_state()
    v = config.target()
    records = []
    diagnostics: list = []
    for k in range(config.n_steps):
        j = config.jacobian(q)
        qdot = _solve(j, v, config, diagnostics)
        achieved = j @ qdot
        q = q + qdot * config.dt
        records.append(TrajectoryRecord(
            t=k * config.dt, qdot=qdot, q=q, achieved_v=achieved,
            residual=float(np.linalg.norm(achieved - v)),
        ))
    iterations = max((d.iterations for d in diagnostics), default=0)
    converged = all(d.converged for d in diagnostics)
    return records, iterations, converged


def _divergence(config, records, baseline_max) -> DivergenceReport:
    rates = np.abs(config.transform.normalize(np.array([r.qdot for r in records])))
    threshold = config.divergence_factor * np.asarray(baseline_max, dtype=np.float64)
    times = np.array([r.t for r in records])
    settle = config.settle_fraction * config.duration
    crossed = np.any(rates > threshold, axis=1) & (times >= settle - 1e-12)
    first = float(times[crossed][0]) if crossed.any() else None
    return DivergenceReport(
        max_abs_qdot=tuple(float(x) for x in rates.max(axis=0)),
        threshold=tuple(float(x) for x in threshold),
        diverged=bool(crossed.any()),
        first_divergence_time=first,
    )


def run(config: SimulationConfig) -> SimulationResult:
    """Simulate ``config`` and judge divergence against its baseline run.

    The baseline peak rates come from ``config.baseline_max`` when given,
    otherwise from simulating :meth:`SimulationConfig.baseline`.
    """
    records, iterations, converged = _integrate(config)
    baseline_max = config.baseline_max
    if baseline_max is None:
        if config.unit_scale == 1.0 and config.theta_prime == 0.0 and config.dt == 1e-3:
            base_records = records
        else:
            base_records = _integrate(config.baseline())[0]
        baseline_max = np.abs(np.array([r.qdot for r in base_records])).max(axis=0)
    report = _divergence(config, records, baseline_max)
    return SimulationResult(config, records, report, iterations, converged)


def compare_runs(a: Sequence[TrajectoryRecord], b: Sequence[TrajectoryRecord],
                 normalizer: FrameTransform | None = None) -> float:
    """Largest per-step max-abs gap between ``a.qdot`` and normalized ``b.qdot``."""
    if len(a) != len(b):
        raise InvalidInputError(f"runs differ in length: {len(a)} vs {len(b)}")
    if not a:
        return 0.0
    qa = np.array([r.qdot for r in a])
    qb = np.array([r.qdot for r in b])
    if normalizer is not None:
        qb = normalizer.normalize(qb)
    return float(np.max(np.abs(qa - qb)))
