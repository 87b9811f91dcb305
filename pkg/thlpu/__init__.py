
"""Tree-of-hubs location with upgrading: formulations, cuts, oracle and benchmarks."""

__version__ = '0.1.0'
