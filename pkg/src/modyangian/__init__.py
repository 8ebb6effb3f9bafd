"""Exact computations with the restricted Yangian of gl_2 in characteristic p."""

__version__ = "0.1.0"
