"""Partition-density community detection for bipartite networks.

Core pieces: the BipartiteGraph/Partition types, quality functions built
around bipartite partition density, the BiLPA label-propagation detector,
an exhaustive exact oracle, synthetic benchmark generators, and closed-form
evaluators for the resolution-limit benchmark families.
"""

from .analysis import (
    cross_check,
    cross_check_four_biclique,
    four_biclique_forms,
    ring_forms,
    sweep_rows,
)
from .bigraph import (
    BipartiteGraph,
    Partition,
    from_edge_list,
    graph_density,
    neighbors,
    parse_edge_list,
    read_edge_list,
    write_edge_list,
)
from .bilpa import (
    BilpaConfig,
    BilpaTrace,
    extract_membership,
    labeling_density,
    rearrange_matrix,
    run,
    update_side,
)
from .exact import DEFAULT_BUDGET, ExactResult, best_over_k, solve_model1, solve_model2
from .generators import (
    ClosedFormParams,
    biclique,
    chain_of_bicliques,
    four_biclique_network,
    merged_four_biclique_partition,
    merged_ring_partition,
    random_bipartite,
    ring_of_bicliques,
)
from .quality import (
    CommunityStats,
    QualityReport,
    barber_modularity,
    community_density,
    core_degree,
    delta_density,
    partition_density,
)

__version__ = "0.1.0"
