import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from fermient.estimators import EntanglementMaximizer, GeometricEntanglement
from fermient.measure import NormalizationError
from fermient.models import dimer_curves, dimer_ground_state_analytic
from fermient.validation import check_mode_count, check_state_vector

from oracles import random_state


def test_params_and_clone():
    est = GeometricEntanglement(partition="1,2|3,4", entropy=True)
    assert est.get_params() == {"partition": "1,2|3,4", "normalize": False, "entropy": True}
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    twin.set_params(partition="1|2|3|4")
    assert est.partition == "1,2|3,4"


def test_transform_columns():
    X = np.stack([dimer_ground_state_analytic(a) for a in (1.0, 2.0)])
    est = GeometricEntanglement(partition="1,2|3,4", entropy=True)
    out = est.fit_transform(X)
    assert out.shape == (2, 4)
    assert list(est.get_feature_names_out()) == ["tensor_norm", "sep_norm", "E", "S_vn"]
    assert out[1, 2] == pytest.approx(dimer_curves(2.0)["E_s"], abs=1e-12)
    assert out[1, 3] == pytest.approx(dimer_curves(2.0)["E_vn"], abs=1e-12)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        GeometricEntanglement().transform(np.eye(16)[:1])


def test_rejects_wrong_width(rng):
    est = GeometricEntanglement().fit(random_state(rng, 16)[None])
    with pytest.raises(ValueError):
        est.transform(random_state(rng, 8)[None])


def test_entropy_needs_bipartition(rng):
    with pytest.raises(ValueError):
        GeometricEntanglement(entropy=True).fit(random_state(rng, 16)[None])


def test_normalize_option(rng):
    X = 3 * random_state(rng, 16)[None]
    with pytest.raises(NormalizationError):
        GeometricEntanglement().fit(X)
    out = GeometricEntanglement(normalize=True).fit_transform(X)
    ref = GeometricEntanglement().fit_transform(X / 3)
    assert np.allclose(out, ref)


def test_pipeline(rng):
    X = np.stack([random_state(rng, 16) for _ in range(3)])
    pipe = make_pipeline(FunctionTransformer(lambda A: A * 2), GeometricEntanglement(normalize=True))
    assert pipe.fit_transform(X).shape == (3, 3)


def test_maximizer():
    est = EntanglementMaximizer(partition="1,2|3,4", restarts=2, max_iter=3000, random_state=1).fit()
    assert est.score() == pytest.approx(np.sqrt(60) - 6, abs=1e-6)
    assert est.best_state_.shape == (16,)
    assert len(est.records_) == 2
    with pytest.raises(NotFittedError):
        EntanglementMaximizer().score()


@pytest.mark.parametrize("bad", [np.ones((2, 2)), np.array([1.0, np.nan]), np.ones(3), np.zeros(4)])
def test_check_state_vector_rejects(bad):
    with pytest.raises(ValueError):
        check_state_vector(bad)


def test_check_mode_count():
    assert check_mode_count(4) == 4
    with pytest.raises(ValueError):
        check_mode_count(0)
