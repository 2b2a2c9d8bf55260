"""specgraph: graph classification from the ordered spectrum of the
normalized Laplacian.

A graph is embedded as its k smallest positive normalized-Laplacian
eigenvalues (ascending, zero-padded), a representation that is invariant to
node indexing. The package ships the full benchmark pipeline around that
embedding: TU-format dataset ingestion, a dense symmetric eigensolver,
random-forest / k-NN / ridge classifiers, stratified cross-validation, and
sweep drivers, all deterministic for fixed seeds.
"""

from .baselines import fit_predict_knn, fit_predict_ridge
from .errors import (
    BadArchiveError,
    ChecksumMismatchError,
    DownloadError,
    EigenConvergenceError,
    EmptyGraphError,
    FetchError,
    IngestError,
    InvalidEdgeError,
    NodeCapExceededError,
    SpecgraphError,
    SpectralConsistencyError,
)
from .evaluation import (
    ClassifierSpec,
    CvReport,
    FoldPlan,
    SweepRecord,
    auto_k,
    cross_validate,
    stratified_folds,
    sweep_embedding_dim,
    sweep_hyperparameters,
)
from .forest import (
    ForestConfig,
    ForestModel,
    balanced_class_weights,
    fit_forest,
    gini_impurity,
    load_forest,
    predict_forest,
    predict_scores,
    save_forest,
)
from .graphs import (
    ComponentLabeling,
    Graph,
    connected_components,
    from_edge_list,
    largest_connected_component,
)
from .spectral import (
    SpectralEmbedding,
    Spectrum,
    SymTridiag,
    build_normalized_laplacian,
    eigenvalues_symmetric,
    embed_dataset,
    householder_tridiagonal,
    resolve_embedding_dim,
    spectral_features,
    write_embedding_csv,
)
from .tu import (
    Dataset,
    class_bias,
    fetch_dataset,
    load_dataset,
    parse_tu_dataset,
    write_tu_dataset,
)

__version__ = "0.1.0"

__all__ = [
    "BadArchiveError", "ChecksumMismatchError", "ClassifierSpec",
    "ComponentLabeling", "CvReport", "Dataset", "DownloadError",
    "EigenConvergenceError", "EmptyGraphError", "FetchError", "FoldPlan",
    "ForestConfig", "ForestModel", "Graph", "IngestError", "InvalidEdgeError",
    "NodeCapExceededError", "SpecgraphError", "SpectralConsistencyError",
    "SpectralEmbedding", "Spectrum", "SweepRecord", "SymTridiag",
    "auto_k", "balanced_class_weights", "build_normalized_laplacian",
    "class_bias", "connected_components", "cross_validate", "embed_dataset",
    "eigenvalues_symmetric", "fetch_dataset", "fit_forest", "fit_predict_knn",
    "fit_predict_ridge", "from_edge_list", "gini_impurity",
    "householder_tridiagonal", "largest_connected_component", "load_dataset",
    "load_forest", "parse_tu_dataset", "predict_forest", "predict_scores",
    "resolve_embedding_dim", "save_forest", "spectral_features",
    "stratified_folds", "sweep_embedding_dim", "sweep_hyperparameters",
    "write_embedding_csv", "write_tu_dataset",
]
