import numpy as np
import pytest

from geninv.inverses import uc_inverse
from geninv.kinematics import (
    ArmModel,
    RoverModel,
    arm_forward,
    arm_jacobian,
    arm_unit_transform,
    rover_forward,
    rover_frame_transform,
    rover_jacobian,
    rover_partition,
)
from geninv.matrix import InvalidInputError
from oracles import central_difference

ARM_J0 = np.array([[-1.10262794, -0.60262794, 0.8660254],
                   [2.02224319, 1.15621778, -0.5],
                   [0.0, 0.0, 0.0]])


def test_arm_initial_forward():
    np.testing.assert_allclose(arm_forward(ArmModel()), [2.02224319, 1.10262794, 0.0], atol=1e-8)


def test_arm_forward_folded():
    q = [np.pi / 2, -np.pi / 2, 0.0]
    np.testing.assert_allclose(arm_forward(ArmModel().with_state(q)), [1.1, 1.0, 0.0], atol=1e-12)


def test_arm_jacobian_values():
    np.testing.assert_allclose(arm_jacobian(ArmModel()), ARM_J0, atol=1e-8)


def test_arm_jacobian_matches_finite_difference(rng):
    for _ in range(20):
        q = rng.uniform(-np.pi, np.pi, size=3)
        q[2] = rng.uniform(0, 2)
        model = ArmModel().with_state(q)
        fd = central_difference(lambda x: arm_forward(model.with_state(x)), q)
        np.testing.assert_allclose(arm_jacobian(model), fd, atol=1e-7)


def test_rover_jacobian_matches_finite_difference(rng):
    for _ in range(20):
        q = rng.uniform(-1, 1, size=5)
        q[1] = rng.uniform(0.1, 2)
        model = RoverModel().with_state(q)
        fd = central_difference(lambda x: rover_forward(model.with_state(x)), q)
        np.testing.assert_allclose(rover_jacobian(model), fd, atol=1e-7)


def test_rover_initial_blocks():
    p = rover_partition(rover_jacobian(RoverModel()))
    np.testing.assert_allclose(p.w, [[-0.55, 0.5], [0.55, 0.5]], atol=1e-12)
    np.testing.assert_allclose(p.x, [[1, 0, 0], [0, 1, 0]])
    np.testing.assert_allclose(p.y, [[0, -np.sqrt(0.5)], [0, 0], [0, 0]], atol=1e-12)
    np.testing.assert_allclose(p.z, [[0, 0, 1], [0, 0, 0], [0, 0, 0]])


def test_rover_w_intermediate():
    w = rover_partition(rover_jacobian(RoverModel())).w
    np.testing.assert_allclose(uc_inverse(w) @ [2.0, 0.0], [-1.8182, 2.0], atol=1e-4)


def test_rover_partition_shape():
    with pytest.raises(InvalidInputError):
        rover_partition(np.eye(4))


def test_model_state_validation():
    with pytest.raises(InvalidInputError):
        ArmModel(q=[0.0, 0.0])
    with pytest.raises(InvalidInputError):
        RoverModel(q=[0.0, np.nan, 0, 0, 0])


def test_arm_unit_transform_is_cm_model():
    # the transformed Jacobian equals the Jacobian of the arm built in centimeters
    t = arm_unit_transform(100.0)
    cm = ArmModel(a1=100.0, a2=110.0, q=[np.pi / 6, np.pi / 6, 70.0])
    np.testing.assert_allclose(t.jacobian(ARM_J0), arm_jacobian(cm), atol=1e-5)
    np.testing.assert_allclose(t.target([2, -2, 0]), [200, -200, 0])
    np.testing.assert_allclose(t.normalize([1.0, 2.0, 300.0]), [1.0, 2.0, 3.0])
    np.testing.assert_allclose(t.denormalize([1.0, 2.0, 3.0]), [1.0, 2.0, 300.0])


def test_rover_transform_rotation():
    t = rover_frame_transform(100.0, np.radians(30))
    np.testing.assert_allclose(t.target([2, 0, -1, 0, 0]),
                               [173.20508076, 100.0, -100.0, 0.0, 0.0], atol=1e-7)
    j = rover_jacobian(RoverModel())
    jt = t.jacobian(j)
    np.testing.assert_allclose(jt[2:], j[2:] @ t.j_right)


def test_rover_transform_identity():
    t = rover_frame_transform(1.0)
    for m in (t.v_left, t.j_left, t.j_right, t.solution_normalizer):
        np.testing.assert_array_equal(m, np.eye(5))


@pytest.mark.parametrize("c", [0.0, -1.0])
def test_transforms_reject_bad_scale(c):
    with pytest.raises(InvalidInputError):
        arm_unit_transform(c)
    with pytest.raises(InvalidInputError):
        rover_frame_transform(c)


def test_transformed_solution_maps_back():
    # exact solutions of the transformed system normalize to exact baseline solutions
    t = rover_frame_transform(100.0, 0.4)
    j = rover_jacobian(RoverModel())
    v = np.array([2.0, 0, -1, 0, 0])
    qt = np.linalg.lstsq(t.jacobian(j), t.target(v), rcond=None)[0]
    np.testing.assert_allclose(j @ t.normalize(qt), v, atol=1e-12)
