from apps.graphs.graph import (
    Graph,
    GraphKind,
    ball,
    check_separation,
    fraction_tree_like,
    graph_distance,
    read_edge_list,
    separation_violation,
    write_edge_list,
)
from apps.graphs.generators import erdos_renyi_giant, giant_fraction, hypercube, random_regular, torus, torus_coordinates, torus_vertex
from apps.graphs.trees import RootedTree, galton_watson, regular_tree

__all__ = [
    "Graph",
    "GraphKind",
    "RootedTree",
    "ball",
    "check_separation",
    "erdos_renyi_giant",
    "fraction_tree_like",
    "galton_watson",
    "giant_fraction",
    "graph_distance",
    "hypercube",
    "random_regular",
    "read_edge_list",
    "regular_tree",
    "separation_violation",
    "torus",
    "torus_coordinates",
    "torus_vertex",
    "write_edge_list",
]
