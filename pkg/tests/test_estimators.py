import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from hosc.estimators import HigherOrderSpectralClustering, MotifAdjacency
from hosc.metrics import miscluster_rate
from hosc.motif import build_motif_matrix
from hosc.spectral import spectral_cluster
from hosc.wsbm import Uniform, sample, simple_form_params


@pytest.fixture(scope="module")
def planted():
    params = simple_form_params(60, 2, 0.8, 0.6, Uniform(0.01, 1.0))
    labels = params.labels()
    return sample(params, labels, 5), labels


def test_params_round_trip():
    est = HigherOrderSpectralClustering(n_clusters=3, method="edge", n_init=4, random_state=1)
    params = est.get_params()
    assert params["n_clusters"] == 3 and params["method"] == "edge"
    twin = clone(est)
    assert twin.get_params() == params
    twin.set_params(motif="wedge")
    assert twin.motif == "wedge" and est.motif == "triangle"


def test_fit_attributes(planted):
    g, truth = planted
    est = HigherOrderSpectralClustering(n_clusters=2, random_state=0).fit(g)
    assert est.labels_.shape == (60,)
    assert est.embedding_.shape == (60, 2)
    assert est.cluster_centers_.shape == (2, 2)
    assert est.eigenvalues_[0] >= est.eigenvalues_[1]
    assert est.n_features_in_ == 60
    np.testing.assert_array_equal(est.affinity_matrix_, build_motif_matrix(g).values)
    assert miscluster_rate(est.labels_, truth) < 0.2


def test_matches_functional_pipeline(planted):
    g, _ = planted
    est = HigherOrderSpectralClustering(n_clusters=2, n_init=5, random_state=3)
    expected = spectral_cluster(build_motif_matrix(g).values, 2, restarts=5, seed=3)
    np.testing.assert_array_equal(est.fit_predict(g.weights), expected)


def test_pipeline_motif_then_edge_method(planted):
    g, _ = planted
    pipe = make_pipeline(MotifAdjacency("triangle"),
                         HigherOrderSpectralClustering(n_clusters=2, method="edge", random_state=0))
    direct = HigherOrderSpectralClustering(n_clusters=2, method="motif", random_state=0).fit_predict(g)
    np.testing.assert_array_equal(pipe.fit_predict(g.weights), direct)


def test_estimate_connectivity_requires_fit(planted):
    g, _ = planted
    est = HigherOrderSpectralClustering(n_clusters=2, random_state=0)
    with pytest.raises(NotFittedError):
        est.estimate_connectivity()
    B = est.fit(g).estimate_connectivity()
    assert B.shape == (2, 2)
    assert np.allclose(B, B.T)


@pytest.mark.parametrize("bad", [{"method": "laplacian"}, {"eigen_order": "smallest"}, {"motif": "square"}])
def test_invalid_parameters(planted, bad):
    g, _ = planted
    with pytest.raises(ValueError):
        HigherOrderSpectralClustering(**bad).fit(g)
