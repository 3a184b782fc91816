"""
sqpack: solvers, bounds and an exact oracle for square min-sum bin packing.
"""

__version__ = "0.1.0"
