"""Collision-model simulation of collective decay, with channel metrics,
error bounds, a small circuit compiler, noise models, and simulated
tomography."""

__version__ = "0.1.0"
