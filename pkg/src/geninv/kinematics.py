"""Planar 3-DOF arm and 5-DOF rover: forward maps, Jacobians, unit/frame transforms.

Angles are radians throughout; degrees only appear at reporting boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import block_diag

from .inverses import BlockPartition
from .matrix import InvalidInputError, as_matrix, diag_from, rotation_embed

__all__ = [
    "ArmModel",
    "RoverModel",
    "FrameTransform",
    "arm_forward",
    "arm_jacobian",
    "rover_forward",
    "rover_jacobian",
    "rover_partition",
    "arm_unit_transform",
    "rover_frame_transform",
]


def _state(q, size, name):
    q = np.asarray(q, dtype=np.float64).reshape(-1)
    if q.shape != (size,):
        raise InvalidInputError(f"{name} state must have {size} entries, got {q.size}")
    if not np.all(np.isfinite(q)):
        raise InvalidInputError(f"{name} state must be finite")
    return q


@dataclass(frozen=True, eq=False)
class ArmModel:
    """Two revolute joints and one prismatic joint, planar.

    ``q = [theta1, theta2, l]``; link lengths and ``l`` share one length unit.
    """

    a1: float = 1.0
    a2: float = 1.1
    q: np.ndarray = field(default_factory=lambda: np.array([np.pi / 6, np.pi / 6, 0.7]))

    angle_mask = (True, True, False)

    def __post_init__(self):
        object.__setattr__(self, "q", _state(self.q, 3, "arm"))
        if not (self.a1 > 0 and self.a2 > 0):
            raise InvalidInputError("link lengths must be positive")

    def with_state(self, q) -> "ArmModel":
        return replace(self, q=q)


@dataclass(frozen=True, eq=False)
class RoverModel:
    """Rover base position plus a rotating, extendable arm at fixed inclination.

    ``q = [theta1, l, x1, y1, z1]``.
    """

    theta0: float = np.pi / 4
    q: np.ndarray = field(
        default_factory=lambda: np.array([np.pi / 4, 1.1, 0.0, 0.0, 0.0]))

    angle_mask = (True, False, False, False, False)

    def __post_init__(self):
        object.__setattr__(self, "q", _state(self.q, 5, "rover"))
        if not np.isfinite(self.theta0):
            raise InvalidInputError("theta0 must be finite")

    def with_state(self, q) -> "RoverModel":
        return replace(self, q=q)


def arm_forward(model: ArmModel) -> np.ndarray:
    t1, t2, l = model.q
    s1, c1 = np.sin(t1), np.cos(t1)
    s12, c12 = np.sin(t1 + t2), np.cos(t1 + t2)
    x = model.a1 * c1 + model.a2 * c12 + l * s12
    y = model.a1 * s1 + model.a2 * s12 - l * c12
    return np.array([x, y, 0.0])


def arm_jacobian(model: ArmModel) -> np.ndarray:
    t1, t2, l = model.q
    a1, a2 = model.a1, model.a2
    s1, c1 = np.sin(t1), np.cos(t1)
    s12, c12 = np.sin(t1 + t2), np.cos(t1 + t2)
    return np.array([
        [-a1 * s1 - a2 * s12 + l * c12, -a2 * s12 + l * c12, s12],
        [a1 * c1 + a2 * c12 + l * s12, a2 * c12 + l * s12, -c12],
        [0.0, 0.0, 0.0],
    ])


def rover_forward(model: RoverModel) -> np.ndarray:
    t1, l, x1, y1, z1 = model.q
    s0, c0 = np.sin(model.theta0), np.cos(model.theta0)
    return np.array([
        x1 + l * s0 * np.cos(t1),
        y1 + l * s0 * np.sin(t1),
        z1 - l * c0,
        0.0,
        0.0,
    ])


def rover_jacobian(model: RoverModel) -> np.ndarray:
    t1, l = model.q[:2]
    s0, c0 = np.sin(model.theta0), np.cos(model.theta0)
    s1, c1 = np.sin(t1), np.cos(t1)
    j = np.zeros((5, 5))
    j[0, :2] = [-l * s0 * s1, s0 * c1]
    j[1, :2] = [l * s0 * c1, s0 * s1]
    j[2, 1] = -c0
    j[:3, 2:] = np.eye(3)
    return j


def rover_partition(j) -> BlockPartition:
    """Split the rover Jacobian: (theta1, l) are unit-consistent, (x1, y1, z1) rotational."""
    j = as_matrix(j, "j")
    if j.shape != (5, 5):
        raise InvalidInputError(f"rover Jacobian must be 5x5, got {j.shape}")
    return BlockPartition.from_matrix(j.copy(), 2)


@dataclass(frozen=True)
class FrameTransform:
    """How a problem posed in other units/frame relates to the baseline one.

    The transformed system is ``(v_left @ v) = (j_left @ J @ j_right) @ qdot_t``
    and ``solution_normalizer @ qdot_t`` expresses its solution in baseline
    units. States transform the same way as rates.
    """

    v_left: np.ndarray
    j_left: np.ndarray
    j_right: np.ndarray
    solution_normalizer: np.ndarray

    def jacobian(self, j) -> np.ndarray:
        return self.j_left @ j @ self.j_right

    def target(self, v) -> np.ndarray:
        return self.v_left @ np.asarray(v, dtype=np.float64)

    def normalize(self, qdot) -> np.ndarray:
        return np.asarray(qdot) @ self.solution_normalizer.T

    def denormalize(self, q) -> np.ndarray:
        return np.asarray(q) / np.diag(self.solution_normalizer)


def arm_unit_transform(c: float) -> FrameTransform:
    """Meters to a length unit ``c`` times smaller (c=100 for centimeters)."""
    if not c > 0:
        raise InvalidInputError("unit scale must be positive")
    return FrameTransform(
        v_left=c * np.eye(3),
        j_left=np.eye(3),
        j_right=diag_from([c, c, 1.0]),
        solution_normalizer=diag_from([1.0, 1.0, 1.0 / c]),
    )


def rover_frame_transform(c: float, theta_prime: float = 0.0) -> FrameTransform:
    """Unit change by ``c`` combined with rotating the task-space xy frame by ``theta_prime``."""
    if not c > 0:
        raise InvalidInputError("unit scale must be positive")
    rot = block_diag(rotation_embed(theta_prime, 2), np.eye(3))
    return FrameTransform(
        v_left=c * rot,
        j_left=rot,
        j_right=diag_from([c, 1.0, 1.0, 1.0, 1.0]),
        solution_normalizer=diag_from([1.0] + [1.0 / c] * 4),
    )
