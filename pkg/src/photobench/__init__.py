"""Benchmarking toolkit for integrated linear-optical interferometers.

Decompose unitaries onto triangular (Reck) and rectangular (Clements) meshes,
build logarithmic-depth Fourier and Sylvester networks, and score noisy,
lossy realizations by process fidelity and multiphoton total variation
distance.
"""
__version__ = "0.1.0"
