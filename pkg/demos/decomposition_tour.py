"""Compile a random unitary into triangular and square meshes.

Draws a Haar-random 6-mode unitary, decomposes it both ways, checks the
round trip and prints where every cell sits in the physical layout.
"""
import numpy as np

from photobench.decomposition import EliminationLog, clements_decompose, layout_geometry, reck_decompose, reconstruct
from photobench.linalg import haar_random_unitary
from photobench.noise import compile_mesh

m = 6
U = haar_random_unitary(m, np.random.default_rng(2))

for name, decompose in (("reck", reck_decompose), ("clements", clements_decompose)):
    log = EliminationLog(check_locality=True)
    plan = decompose(U, log=log)
    err = np.abs(reconstruct(plan) - U).max()
    mesh = compile_mesh(plan)
    print(f"{name:9s} cells={len(plan.cells):2d} depth={mesh.depth():2d} round-trip error={err:.1e}")
    if name == "clements":
        print(f"          {log.count('right')} column steps, {log.count('left')} row steps, "
              f"each touching {log.max_touched} lines")
    for i, layer in enumerate(layout_geometry(name, m), 1):
        print(f"          layer {i}: cells on modes {layer}")
