from gnn.graphs import (
    GraphBatch,
    GraphInstance,
    collate,
    cycle_graph,
    disjoint_union,
    dump_dataset,
    from_edges,
    load_dataset,
    make_synthetic_dataset,
    path_graph,
    permute,
    wl_colors,
)
from gnn.model import GinModel, gin_step, gin_step_0, graph_embedding, hyper_gin_step, readout
from gnn.trainer import GinReport, accuracy, build_model, train_gin

__all__ = [
    "GinModel",
    "GinReport",
    "GraphBatch",
    "GraphInstance",
    "accuracy",
    "build_model",
    "collate",
    "cycle_graph",
    "disjoint_union",
    "dump_dataset",
    "from_edges",
    "gin_step",
    "gin_step_0",
    "graph_embedding",
    "hyper_gin_step",
    "load_dataset",
    "make_synthetic_dataset",
    "path_graph",
    "permute",
    "readout",
    "train_gin",
    "wl_colors",
]
