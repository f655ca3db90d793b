"""
Integro-Differential Calculator - exact arithmetic and Fredholm analysis for
polynomial integro-differential operators over the rationals.

Library in src.algebra, batch command line in src.cli.
"""

__version__ = "0.1.0"
