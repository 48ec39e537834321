"""
GSDO

Global surrogate search for bound- and blackbox-constrained derivative-free
optimization, with the analytic test bed and benchmarking harness used to
evaluate it.
"""

__version__ = "1.0.0"
__author__ = "derrikjb"
