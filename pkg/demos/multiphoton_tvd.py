"""How phase and splitter noise distort three-photon output statistics.

For 8-mode Haar targets, averages the total variation distance between the
ideal and noisy collision-free output distributions over all input
configurations, for both universal meshes.
"""
from photobench.bench import ExperimentSpec, run_sweep

sigmas = (0.0, 0.005, 0.01, 0.02)
for n in (1, 2, 3):
    spec = ExperimentSpec(("clements", "reck"), "haar", (8,), sigmas, joint_sigma=True, samples=30, photons=n)
    res = run_sweep(spec)
    print(f"n = {n} photons")
    for s in sigmas:
        c, r = res.point("clements", 8, s, s), res.point("reck", 8, s, s)
        print(f"  sigma={s:<6g} clements {c.mean_tvd:.5f} +- {c.stderr_tvd:.5f}   "
              f"reck {r.mean_tvd:.5f} +- {r.stderr_tvd:.5f}")
