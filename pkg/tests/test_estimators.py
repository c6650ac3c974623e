import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from geninv import GeneralizedInverse, MatrixBalancer, pinv, uc_inverse
from geninv.inverses import mixed_inverse, BlockPartition


def test_params_round_trip():
    est = GeneralizedInverse(kind="mixed", split=2, tol=1e-20)
    params = est.get_params()
    assert params["kind"] == "mixed" and params["split"] == 2 and params["tol"] == 1e-20
    twin = clone(est)
    assert twin.get_params() == params
    est.set_params(kind="uc")
    assert est.kind == "uc"


@pytest.mark.parametrize("kind", ["mp", "uc"])
def test_transform_matches_functional(rng, kind):
    a = rng.uniform(-1, 1, size=(4, 3))
    est = GeneralizedInverse(kind=kind).fit(a)
    ref = pinv(a) if kind == "mp" else uc_inverse(a)
    np.testing.assert_allclose(est.inverse_, ref)
    y = rng.normal(size=(6, 4))
    np.testing.assert_allclose(est.transform(y), y @ ref.T)
    np.testing.assert_allclose(est.inverse_transform(est.transform(y)), y @ (a @ ref).T)


def test_mixed_estimator(rng):
    a = rng.uniform(-1, 1, size=(5, 5)) + 2 * np.eye(5)
    est = GeneralizedInverse(kind="mixed", split=2).fit(a)
    np.testing.assert_allclose(est.inverse_, mixed_inverse(BlockPartition.from_matrix(a, 2)))
    assert len(est.decompositions_) == 2
    with pytest.raises(ValueError):
        GeneralizedInverse(kind="mixed").fit(a)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        GeneralizedInverse().transform(np.ones((1, 2)))
    with pytest.raises(NotFittedError):
        MatrixBalancer().transform(np.ones((2, 2)))


def test_transform_shape_check(rng):
    est = GeneralizedInverse().fit(rng.normal(size=(3, 2)))
    with pytest.raises(ValueError):
        est.transform(np.ones((1, 2)))


def test_balancer_round_trip(rng):
    a = rng.uniform(-1, 1, size=(3, 4)) * 10.0 ** rng.uniform(-3, 3, size=(3, 1))
    bal = MatrixBalancer().fit(a)
    np.testing.assert_allclose(bal.transform(a), bal.core_, atol=1e-12)
    other = rng.normal(size=(3, 4))
    np.testing.assert_allclose(bal.inverse_transform(bal.transform(other)), other)
    assert bal.converged_ and bal.n_iter_ >= 1
    with pytest.raises(ValueError):
        bal.transform(np.ones((4, 3)))


def test_balancer_fit_transform_rejects_nan():
    with pytest.raises(ValueError):
        MatrixBalancer().fit(np.array([[1.0, np.nan]]))
