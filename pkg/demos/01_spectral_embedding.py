"""A walk through the spectral embedding, from adjacency to feature vector.

Run: python demos/01_spectral_embedding.py
"""

import numpy as np

from specgraph import (
    build_normalized_laplacian,
    connected_components,
    eigenvalues_symmetric,
    from_edge_list,
    largest_connected_component,
    spectral_features,
)

np.set_printoptions(precision=4, suppress=True)

# A graph is just node count + edge list. Mirrored duplicates and self-loops
# in the input are cleaned up during construction.
triangle = from_edge_list(3, [(0, 1), (1, 0), (1, 2), (2, 0)])
print("triangle:", triangle.n_nodes, "nodes,", triangle.n_edges, "edges,",
      "degrees", triangle.degrees)

# The normalized Laplacian has ones on the diagonal and -1/sqrt(d_i d_j)
# on edges. Its eigenvalues always lie in [0, 2].
lap = build_normalized_laplacian(triangle)
print("\nnormalized Laplacian of the triangle:\n", lap)

spectrum = eigenvalues_symmetric(lap)
print("spectrum:", spectrum.eigenvalues, " (complete graph K3: 0, 3/2, 3/2)")

# The multiplicity of eigenvalue 0 counts connected components ...
two_pieces = from_edge_list(5, [(0, 1), (1, 2), (0, 2), (3, 4)])
lap2 = np.eye(5)
inv = 1.0 / np.sqrt(two_pieces.degrees.astype(float))
for u, v in two_pieces.edges:
    lap2[u, v] = lap2[v, u] = -inv[u] * inv[v]
ev = eigenvalues_symmetric(lap2).eigenvalues
print("\ntriangle + disjoint edge, eigenvalues:", ev)
print("eigenvalues below 1e-6:", int((ev < 1e-6).sum()),
      "== components:", connected_components(two_pieces).n_components)

# ... and an eigenvalue equal to 2 flags a bipartite structure.
square = from_edge_list(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
ev = eigenvalues_symmetric(build_normalized_laplacian(square)).eigenvalues
print("\n4-cycle (bipartite) spectrum:", ev)

# The embedding drops the zero eigenvalue of the largest connected component
# and zero-pads on the right to a fixed width, so graphs of different sizes
# share one feature space.
emb = spectral_features(two_pieces, k=4)
print("\nembedding of (triangle + edge) at k=4:", emb.values)
print("the largest component had", emb.source_nodes, "nodes:",
      largest_connected_component(two_pieces).n_nodes)

# Node indexing does not matter: the spectrum is a graph invariant.
relabeled = from_edge_list(5, [(4, 3), (3, 1), (4, 1), (0, 2)])
print("\nsame graph, nodes relabeled:", spectral_features(relabeled, k=4).values)
