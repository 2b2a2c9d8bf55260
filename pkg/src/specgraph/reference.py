"""Published reference results this harness reproduces.

The ``--check`` CLI mode compares measured accuracies against these values.
Classifier and splitter RNG streams legitimately differ between
implementations, so reproduction is judged within ACCURACY_TOLERANCE_PP
percentage points rather than bit-exactly.
"""

#: half-width of the acceptance band, in percentage points
ACCURACY_TOLERANCE_PP = 3.0

#: benchmark dataset order used in all result tables
BENCH_DATASETS = ("MUTAG", "PTC_MR", "ENZYMES", "PROTEINS_full", "DD", "NCI1")

#: published dataset statistics: graph and class counts are exact; the
#: average node and (both-direction) edge counts are printed as integers.
#: The PTC_MR edge average is printed as 15 at the source although the
#: distributed files contain ~14.7 undirected (~29.4 directed) edges per
#: graph on average; no counting convention reproduces that cell.
DATASET_STATS = {
    "MUTAG": {"n_graphs": 188, "n_classes": 2, "bias": 66.5,
              "avg_nodes": 18, "avg_edges": 39},
    "PTC_MR": {"n_graphs": 344, "n_classes": 2, "bias": 55.8,
               "avg_nodes": 14, "avg_edges": 15},
    "ENZYMES": {"n_graphs": 600, "n_classes": 6, "bias": 16.7,
                "avg_nodes": 33, "avg_edges": 124},
    "PROTEINS_full": {"n_graphs": 1113, "n_classes": 2, "bias": 59.6,
                      "avg_nodes": 39, "avg_edges": 146},
    "DD": {"n_graphs": 1178, "n_classes": 2, "bias": 58.7,
           "avg_nodes": 284, "avg_edges": 1431},
    "NCI1": {"n_graphs": 4110, "n_classes": 2, "bias": 50.0,
             "avg_nodes": 30, "avg_edges": 65},
}

#: spectral features + random forest, accuracy percent per dataset
RFC_ACCURACY = {
    "MUTAG": 88.4, "PTC_MR": 62.8, "ENZYMES": 43.7,
    "PROTEINS_full": 73.6, "DD": 75.4, "NCI1": 75.2,
}

#: spectral features + alternative classifiers, accuracy percent
CLASSIFIER_ACCURACY = {
    "rfc": RFC_ACCURACY,
    "1nn": {"MUTAG": 86.8, "PTC_MR": 59.3, "ENZYMES": 37.3,
            "PROTEINS_full": 65.6, "DD": 69.6, "NCI1": 68.3},
    "15nn": {"MUTAG": 85.7, "PTC_MR": 61.9, "ENZYMES": 33.7,
             "PROTEINS_full": 70.4, "DD": 75.0, "NCI1": 69.6},
    "ridge": {"MUTAG": 84.2, "PTC_MR": 59.6, "ENZYMES": 26.7,
              "PROTEINS_full": 71.5, "DD": 75.0, "NCI1": 62.2},
}

#: embedding-dimension sweep, accuracy percent per (k, dataset)
K_SWEEP_ACCURACY = {
    1: {"MUTAG": 76.2, "PTC_MR": 56.1, "ENZYMES": 23.8,
        "PROTEINS_full": 64.0, "DD": 57.2, "NCI1": 58.2},
    5: {"MUTAG": 86.8, "PTC_MR": 62.5, "ENZYMES": 39.0,
        "PROTEINS_full": 69.6, "DD": 73.9, "NCI1": 72.5},
    10: {"MUTAG": 86.8, "PTC_MR": 61.4, "ENZYMES": 42.8,
         "PROTEINS_full": 71.7, "DD": 75.5, "NCI1": 75.5},
    25: {"MUTAG": 88.4, "PTC_MR": 62.8, "ENZYMES": 42.7,
         "PROTEINS_full": 72.8, "DD": 75.7, "NCI1": 75.2},
    50: {"MUTAG": 88.4, "PTC_MR": 62.8, "ENZYMES": 43.7,
         "PROTEINS_full": 73.6, "DD": 75.1, "NCI1": 75.2},
}

#: the k values of the published sweep
K_SWEEP_VALUES = (1, 5, 10, 25, 50)
