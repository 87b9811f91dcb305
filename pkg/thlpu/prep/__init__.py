
from .instance import Instance, DerivedQuantities, build_instance, derive, read_instance, write_instance, \
    instance_from_dict, check_factors
from .phub import load_raw_phub, instance_from_phub
from .fixtures import example1, figure_instance, figure_solution, FIGURES
