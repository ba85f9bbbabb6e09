"""Exact arithmetic for graded Dieudonne modules, Newton polygons and octonion weights."""

__version__ = "0.1.0"
