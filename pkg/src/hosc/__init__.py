"""Higher-order (motif-based) spectral clustering for weighted networks."""

from .estimators import HigherOrderSpectralClustering, MotifAdjacency
from .graph import WeightedGraph, labels_to_membership
from .io import load_edge_list, load_labels, write_edge_list, write_labels
from .metrics import (
    adjusted_rand_index,
    estimate_connectivity,
    miscluster_rate,
    modularity,
    normalized_mutual_information,
    spectral_deviation,
    theoretical_bounds,
)
from .motif import MotifKind, MotifMatrix, build_motif_matrix, build_motif_matrix_bruteforce
from .spectral import lloyd_kmeans, spectral_cluster, top_k_eigen
from .wsbm import (
    ChiSquared,
    Constant,
    Exponential,
    Uniform,
    WsbmParams,
    analytic_eigengap,
    population_eigvecs,
    population_matrices,
    population_motif_moments,
    sample,
    simple_form_params,
    two_level_params,
)

__version__ = "0.1.0"
