"""Minor mimicking networks and terminal-cut structure of planar graphs."""
from .graph import GraphError, PlanarGraph
from .fileio import parse_graph, read_graph, write_graph, format_graph
from .mincut import min_terminal_cut, components, boundary
from .elementary import enumerate_elementary, decompose, check_sparsifier, is_elementary
from .sparsifier import build_mimicking

__version__ = "0.1.0"
