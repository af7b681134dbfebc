"""scikit-learn compatible estimators.

``X`` is always a precomputed weighted adjacency matrix of shape
``(n_nodes, n_nodes)`` (array, scipy sparse matrix or :class:`WeightedGraph`),
in the spirit of ``affinity="precomputed"`` in :mod:`sklearn.cluster`.

>>> from sklearn.pipeline import make_pipeline
>>> pipe = make_pipeline(MotifAdjacency("triangle"),
...                      HigherOrderSpectralClustering(2, method="edge"))
"""

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils import check_random_state
from sklearn.utils.validation import check_is_fitted

from .graph import WeightedGraph
from .motif import MotifKind, build_motif_matrix
from .spectral import EIGEN_ORDERS, lloyd_kmeans, spectral_embedding
from .validation import check_adjacency, check_n_clusters


def _to_graph(X):
    return X if isinstance(X, WeightedGraph) else WeightedGraph(check_adjacency(X))


class MotifAdjacency(TransformerMixin, BaseEstimator):
    """Map a weighted adjacency matrix to its weighted motif adjacency matrix.

    Parameters
    ----------
    motif : {"triangle", "wedge", "clique4"}, default="triangle"
    """

    def __init__(self, motif="triangle"):
        self.motif = motif

    def fit(self, X, y=None):
        MotifKind.parse(self.motif)
        self.n_features_in_ = _to_graph(X).n
        return self

    def transform(self, X):
        return build_motif_matrix(_to_graph(X), self.motif).values


class HigherOrderSpectralClustering(ClusterMixin, BaseEstimator):
    """Spectral clustering of a weighted network, motif-based or edge-based.

    With ``method="motif"`` the adjacency is first turned into a weighted motif
    adjacency matrix; ``method="edge"`` embeds the adjacency directly. Nodes are
    then embedded with the top ``n_clusters`` eigenvectors and grouped with
    multi-restart Lloyd k-means.

    Parameters
    ----------
    n_clusters : int, default=2
    method : {"motif", "edge"}, default="motif"
    motif : {"triangle", "wedge", "clique4"}, default="triangle"
        Ignored when ``method="edge"``.
    eigen_order : {"algebraic", "magnitude"}, default="algebraic"
        Whether "leading" eigenvectors are those of the largest eigenvalues or
        of the largest absolute eigenvalues.
    n_init : int, default=20
        Number of k-means++ restarts.
    max_iter : int, default=300
    random_state : int, RandomState instance or None, default=None

    Attributes
    ----------
    affinity_matrix_ : ndarray of shape (n_nodes, n_nodes)
        Matrix that was embedded (motif matrix or adjacency).
    eigenvalues_ : ndarray of shape (n_clusters,)
    embedding_ : ndarray of shape (n_nodes, n_clusters)
    labels_ : ndarray of shape (n_nodes,)
    cluster_centers_ : ndarray of shape (n_clusters, n_clusters)
    inertia_ : float
    n_iter_ : int
    """

    def __init__(self, n_clusters=2, method="motif", motif="triangle", eigen_order="algebraic",
                 n_init=20, max_iter=300, random_state=None):
        self.n_clusters = n_clusters
        self.method = method
        self.motif = motif
        self.eigen_order = eigen_order
        self.n_init = n_init
        self.max_iter = max_iter
        self.random_state = random_state

    def _seed(self):
        if isinstance(self.random_state, (int, np.integer)) and self.random_state >= 0:
            return int(self.random_state)
        return int(check_random_state(self.random_state).randint(2**31 - 1))

    def fit(self, X, y=None):
        if self.method not in ("motif", "edge"):
            raise ValueError(f"method must be 'motif' or 'edge', got {self.method!r}")
        if self.eigen_order not in EIGEN_ORDERS:
            raise ValueError(f"eigen_order must be one of {EIGEN_ORDERS}, got {self.eigen_order!r}")
        g = _to_graph(X)
        K = check_n_clusters(self.n_clusters, g.n)
        if self.method == "motif":
            A = build_motif_matrix(g, self.motif).values
        else:
            A = np.array(g.weights)
        pairs = spectral_embedding(A, K, which=self.eigen_order)
        km = lloyd_kmeans(pairs.vectors, K, restarts=self.n_init, seed=self._seed(), max_iter=self.max_iter)
        self.n_features_in_ = g.n
        self.affinity_matrix_ = A
        self.eigenvalues_ = pairs.values
        self.embedding_ = pairs.vectors
        self.labels_ = km.labels
        self.cluster_centers_ = km.centers
        self.inertia_ = km.objective
        self.n_iter_ = km.n_iter
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_

    def estimate_connectivity(self):
        """Block means of :attr:`affinity_matrix_` under the fitted labels."""
        from .metrics import estimate_connectivity

        check_is_fitted(self, "labels_")
        return estimate_connectivity(self.affinity_matrix_, self.labels_, self.n_clusters)
