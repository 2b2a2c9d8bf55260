"""Exception hierarchy for specgraph."""


class SpecgraphError(Exception):
    """Base class for all errors raised by this package."""


class InvalidEdgeError(SpecgraphError):
    """An edge references a node id outside [0, n_nodes)."""

    def __init__(self, edge, n_nodes):
        self.edge = (int(edge[0]), int(edge[1]))
        self.n_nodes = int(n_nodes)
        super().__init__(
            f"edge {self.edge} references a node outside [0, {self.n_nodes})"
        )


class EmptyGraphError(SpecgraphError):
    """Operation requires a graph with at least one node."""


class IngestError(SpecgraphError):
    """A dataset file could not be parsed. Carries file path and line number."""

    def __init__(self, path, line_no, message):
        self.path = str(path)
        self.line_no = int(line_no)
        super().__init__(f"{self.path}:{self.line_no}: {message}")


class FetchError(SpecgraphError):
    """Base class for dataset download/caching failures."""


class DownloadError(FetchError):
    """Network failure while downloading a dataset archive."""


class ChecksumMismatchError(FetchError):
    """Downloaded archive does not match the checksum recorded in the lockfile."""


class BadArchiveError(FetchError):
    """Downloaded file is not a valid zip archive or has an unexpected layout."""


class EigenConvergenceError(SpecgraphError):
    """Eigenvalue iteration failed to converge. Carries the matrix order."""

    def __init__(self, order):
        self.order = int(order)
        super().__init__(
            f"eigenvalue iteration did not converge for matrix of order {self.order}"
        )


class SpectralConsistencyError(SpecgraphError):
    """Internal consistency check failed (signals a solver or component bug)."""


class NodeCapExceededError(SpecgraphError):
    """Graph exceeds the dense-matrix node cap."""

    def __init__(self, n_nodes, cap):
        self.n_nodes = int(n_nodes)
        self.cap = int(cap)
        super().__init__(
            f"graph has {self.n_nodes} nodes, above the dense-solver cap of {self.cap}"
        )
