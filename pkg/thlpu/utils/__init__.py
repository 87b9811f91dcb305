
from .logs import set_logger
from .misc import now_time, open_json, save_json, relative_gap
from .trees import canonical_edge, prufer_trees, is_spanning_tree, tree_paths, oriented_tree
