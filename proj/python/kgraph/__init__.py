from ._core import (
    Error,
    adjusted_rand_index,
    ami,
    build_graph,
    consensus_matrix,
    features,
    fit,
    kmeans,
    load_ucr,
    nmi,
    noise_ratio,
    rand_index,
    spectral_clustering,
)

__all__ = [
    "Error",
    "adjusted_rand_index",
    "ami",
    "build_graph",
    "consensus_matrix",
    "features",
    "fit",
    "kmeans",
    "load_ucr",
    "nmi",
    "noise_ratio",
    "rand_index",
    "spectral_clustering",
]
