"""A log-depth butterfly network that performs the discrete Fourier transform.

Builds the 8-mode Fourier preset, shows the phase pattern, finds the output
relabeling that maps it onto the DFT matrix and confirms that uniform cell
loss leaves the gate fidelity untouched.
"""
import numpy as np

from photobench.fast import (
    fast_unitary_closed_form,
    fast_unitary_product,
    find_relabeling,
    fourier_matrix,
    fourier_preset,
    fourier_twiddles,
)
from photobench.metrics import fidelity
from photobench.noise import NoiseConfig, realize_noisy

n = 3
print("phase pattern for Hadamard-type splitters (units of pi):")
print(np.round(fourier_twiddles(n) / np.pi, 3))

p = fourier_preset(n)
U = fast_unitary_product(p)
print(f"closed form vs layer product: {np.abs(fast_unitary_closed_form(p) - U).max():.1e}")

rel = find_relabeling(fourier_matrix(2 ** n), U)
print("output relabeling (bit reversal):", rel.perm)

for eta in (0.1, 0.5, 2.0):
    T = realize_noisy(p, NoiseConfig(eta_db=eta))
    print(f"eta = {eta} dB/cell: transmitted power {np.linalg.norm(T) ** 2 / 2 ** n:.3f}, "
          f"fidelity {fidelity(U, T):.12f}")
