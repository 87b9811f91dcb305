
from .bench import ExperimentSpec, ReportRow, GridRunner, run_grid, factor_triples, aggregate, run_variant
from .compare import compare_formulations, print_comparison
