"""Eigenvector-based supracentralities of discrete-time temporal networks."""

__version__ = "0.1.0"

from .asymptotics import (StrongLimit, WeakLimit, sin_squared_weights, stride_permutation,
                          strong_limit, weak_limit)
from .coupling import (InterlayerCoupling, directed_chain_teleport, is_strongly_connected,
                       load_custom, read_custom, reverse, undirected_chain)
from .exceptions import (ConvergenceError, DanglingNodeError, DomainError, ParseError,
                         PreconditionError, SupraError)
from .layer_centrality import (LayerCentralityKind, LayerCentralitySet, PageRankMatrix,
                               authority_matrix, build_layer_set, eigenvector_matrix,
                               hub_matrix, pagerank_matrix)
from .supracentrality import (CentralityResult, SupraOperator, apply, check_preconditions,
                              dominant_eigenpair, extract, solve, sweep)
from .temporal_net import (IngestOptions, NodeRegistry, TemporalNetwork, aggregate,
                           load_edge_list, read_edge_list, validate)
