
from .separation import Cut, violation_general, separate_singleton, l_of_q, most_violated_for_j, \
    singleton_cut, add_cuts, write_cut_pool, read_cut_pool, point_arrays
from .loop import CutLoopParams, CutLoop, cut_loop
