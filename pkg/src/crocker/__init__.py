"""Topological summaries of time-varying point clouds.

Crocker plots, alpha-smoothed crocker plots and crocker stacks, built on
Vietoris-Rips persistent homology, plus a Vicsek flocking simulator and a
K-medoids pipeline for recovering the noise parameter from simulations.
"""

from .analysis import Accuracy, ClusterResult, clustering_accuracy, euclidean_distance_matrix, k_medoids_pam, pca_reduce
from .complex import Filtration, Simplex, betti_numbers_at, build_vr_filtration
from .distances import bottleneck_distance, erosion_distance, p_bottleneck, per_time_bottleneck, sup_bottleneck
from .errors import InvalidInput, IoError
from .metric import (PointCloud, TimeVaryingPointCloud, gh_upper_bound, hausdorff_distance,
                     pairwise_distances, time_aggregate)
from .persistence import Barcode, PersistenceInterval, compute_ph, rank_between, rank_function
from .summaries import (CrockerPlot, CrockerStack, ScaleGrid, TimeVaryingBarcode, alpha_smoothed_plot,
                        concat_dims, crocker_plot, crocker_stack, vectorize, vectorize_stack)
from .vicsek import SimulationTrace, VicsekParams, order_parameter, simulate, to_point_clouds

__version__ = "0.1.0"
