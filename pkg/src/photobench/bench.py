"""Monte-Carlo sweep harness: grids of noise and loss over designs and targets.

Randomness is split deterministically so results never depend on thread
count or execution order:

* Haar target ``t`` of size ``m`` comes from ``default_rng([seed, 0, m, t])``
  and is shared by every scheme and noise level (common random numbers).
* Noise for trial ``t`` at grid point ``p`` of ``scheme`` comes from
  ``default_rng([seed, 1, scheme_code, m, p, t])``.
* Sampled multiphoton inputs (large ``C(m, n)`` only) come from
  ``default_rng([seed, 2, m, n])``.
"""
import csv
import hashlib
import io
import json
import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from . import __version__
from .decomposition import decompose
from .fast import fast_unitary_product, fourier_matrix, fourier_preset, sylvester_matrix, sylvester_preset
from .fits import ExtrapolationWarning, fit_fidelity_loss, fit_fidelity_noise, fit_tvd3
from .linalg import haar_random_unitary
from .metrics import INPUT_BUDGET, SAMPLED_INPUTS, choose_inputs, fidelity, mean_tvd
from .noise import NoiseConfig, compile_mesh, noise_rng, realize_noisy, target_rng

SCHEMES = ("reck", "clements", "fast")
TARGETS = ("haar", "fourier", "sylvester")
CSV_COLUMNS = (
    "scheme", "target", "m", "sigma_bs", "sigma_ps", "eta_db", "samples",
    "mean_fidelity", "stderr_fidelity", "mean_tvd", "stderr_tvd", "seed", "spec_hash",
)

# Reference averages at m = 64, 128, 256: {(sigma_bs, sigma_ps): (fast, mean of C and R)}
REFERENCE_TABLE1 = {
    64: {
        (0.005, 0.001): (0.999, 0.994), (0.01, 0.001): (0.995, 0.975), (0.02, 0.001): (0.981, 0.904),
        (0.005, 0.01): (0.998, 0.984), (0.01, 0.01): (0.994, 0.966), (0.02, 0.01): (0.980, 0.895),
        (0.005, 0.02): (0.995, 0.956), (0.01, 0.02): (0.991, 0.939), (0.02, 0.02): (0.976, 0.870),
    },
    128: {
        (0.005, 0.001): (0.998, 0.987), (0.01, 0.001): (0.994, 0.950), (0.02, 0.001): (0.976, 0.817),
        (0.005, 0.01): (0.997, 0.969), (0.01, 0.01): (0.993, 0.933), (0.02, 0.01): (0.975, 0.803),
        (0.005, 0.02): (0.994, 0.917), (0.01, 0.02): (0.989, 0.882), (0.02, 0.02): (0.971, 0.759),
    },
    256: {
        (0.005, 0.001): (0.998, 0.975), (0.01, 0.001): (0.992, 0.903), (0.02, 0.001): (0.972, 0.667),
        (0.005, 0.01): (0.997, 0.938), (0.01, 0.01): (0.992, 0.870), (0.02, 0.01): (0.971, 0.644),
        (0.005, 0.02): (0.993, 0.838), (0.01, 0.02): (0.988, 0.770), (0.02, 0.02): (0.968, 0.575),
    },
}
TABLE1_SIGMA_BS = (0.005, 0.01, 0.02)
TABLE1_SIGMA_PS = (0.001, 0.01, 0.02)


class SpecError(ValueError):
    """An experiment spec that cannot be run; ``field`` names the culprit."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


def _floats(name, values):
    try:
        out = tuple(float(v) for v in values)
    except (TypeError, ValueError):
        raise SpecError(f"{name} must be a list of numbers", field=name) from None
    if not out:
        raise SpecError(f"{name} must not be empty", field=name)
    if any(not math.isfinite(v) or v < 0 for v in out):
        raise SpecError(f"{name} entries must be finite and >= 0", field=name)
    return out


@dataclass(frozen=True)
class ExperimentSpec:
    """A sweep over schemes, sizes, noise widths and losses.

    With ``joint_sigma`` the two noise widths move together: the grid uses
    ``sigma_bs = sigma_ps = s`` for each ``s`` in ``sigma_bs_list`` and
    ``sigma_ps_list`` is ignored. ``photons = 0`` skips the TVD metric.
    """

    schemes: tuple = ("clements",)
    target: str = "haar"
    m_list: tuple = (8,)
    sigma_bs_list: tuple = (0.0,)
    sigma_ps_list: tuple = (0.0,)
    eta_db_list: tuple = (0.0,)
    samples: int = 100
    photons: int = 0
    seed: int = 0
    joint_sigma: bool = False

    def __post_init__(self):
        schemes = tuple(self.schemes) if not isinstance(self.schemes, str) else (self.schemes,)
        if not schemes or any(s not in SCHEMES for s in schemes):
            raise SpecError(f"schemes must be a non-empty subset of {SCHEMES}, got {schemes}", field="schemes")
        if self.target not in TARGETS:
            raise SpecError(f"target must be one of {TARGETS}, got {self.target!r}", field="target")
        try:
            m_list = tuple(int(m) for m in self.m_list)
        except (TypeError, ValueError):
            raise SpecError("m_list must be a list of integers", field="m_list") from None
        if not m_list or any(m < 2 for m in m_list):
            raise SpecError("m_list entries must be integers >= 2", field="m_list")
        if self.target != "haar" and any(m & (m - 1) for m in m_list):
            raise SpecError(f"{self.target} targets need power-of-two sizes", field="m_list")
        if "fast" in schemes:
            if self.target == "haar":
                raise SpecError("the fast design cannot realize Haar-random targets", field="target")
        for name, v in (("samples", self.samples), ("photons", self.photons), ("seed", self.seed)):
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
                raise SpecError(f"{name} must be an integer, got {v!r}", field=name)
        if self.samples < 1:
            raise SpecError("samples must be >= 1", field="samples")
        if self.photons < 0 or self.photons > min(m_list):
            raise SpecError("photons must lie in 0..min(m_list)", field="photons")
        if self.seed < 0:
            raise SpecError("seed must be >= 0", field="seed")
        object.__setattr__(self, "schemes", schemes)
        object.__setattr__(self, "m_list", m_list)
        object.__setattr__(self, "sigma_bs_list", _floats("sigma_bs_list", self.sigma_bs_list))
        object.__setattr__(self, "sigma_ps_list", _floats("sigma_ps_list", self.sigma_ps_list))
        object.__setattr__(self, "eta_db_list", _floats("eta_db_list", self.eta_db_list))
        object.__setattr__(self, "joint_sigma", bool(self.joint_sigma))

    def noise_points(self):
        """Canonical list of ``(sigma_bs, sigma_ps, eta_db)`` grid points."""
        if self.joint_sigma:
            sig = [(s, s) for s in self.sigma_bs_list]
        else:
            sig = list(product(self.sigma_bs_list, self.sigma_ps_list))
        return [(sb, sp, eta) for (sb, sp), eta in product(sig, self.eta_db_list)]

    def to_json(self) -> dict:
        d = asdict(self)
        for key in ("schemes", "m_list", "sigma_bs_list", "sigma_ps_list", "eta_db_list"):
            d[key] = list(d[key])
        return d

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict):
            raise SpecError("experiment spec must be a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise SpecError(f"unknown key '{unknown[0]}' in experiment spec", field=unknown[0])
        return cls(**data)

    def spec_hash(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class PointResult:
    scheme: str
    target: str
    m: int
    sigma_bs: float
    sigma_ps: float
    eta_db: float
    fidelities: np.ndarray = field(repr=False)
    tvds: np.ndarray = field(default=None, repr=False)
    wall_time: float = 0.0

    @property
    def samples(self):
        return len(self.fidelities)

    @property
    def mean_fidelity(self):
        return float(np.mean(self.fidelities))

    @property
    def stderr_fidelity(self):
        return _stderr(self.fidelities)

    @property
    def mean_tvd(self):
        return None if self.tvds is None else float(np.mean(self.tvds))

    @property
    def stderr_tvd(self):
        return None if self.tvds is None else _stderr(self.tvds)


def _stderr(x):
    x = np.asarray(x, dtype=float)
    if len(x) < 2:
        return 0.0
    return float(np.std(x, ddof=1) / math.sqrt(len(x)))


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    points: list
    version: str = __version__

    @property
    def spec_hash(self):
        return self.spec.spec_hash()

    def point(self, scheme, m, sigma_bs=0.0, sigma_ps=0.0, eta_db=0.0) -> PointResult:
        for p in self.points:
            if (p.scheme, p.m) == (scheme, m) and np.allclose((p.sigma_bs, p.sigma_ps, p.eta_db), (sigma_bs, sigma_ps, eta_db)):
                return p
        raise KeyError((scheme, m, sigma_bs, sigma_ps, eta_db))

    def rows(self):
        for p in self.points:
            yield {
                "scheme": p.scheme,
                "target": p.target,
                "m": p.m,
                "sigma_bs": p.sigma_bs,
                "sigma_ps": p.sigma_ps,
                "eta_db": p.eta_db,
                "samples": p.samples,
                "mean_fidelity": p.mean_fidelity,
                "stderr_fidelity": p.stderr_fidelity,
                "mean_tvd": p.mean_tvd,
                "stderr_tvd": p.stderr_tvd,
                "seed": self.spec.seed,
                "spec_hash": self.spec_hash,
            }

    def to_csv(self) -> str:
        return rows_to_csv(self.rows())

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "spec_hash": self.spec_hash,
            "version": self.version,
            "tvd_convention": "collision-free outputs, not renormalised",
            "points": [dict(row, wall_time=p.wall_time) for row, p in zip(self.rows(), self.points)],
        }


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def write_csv(path, result):
    Path(path).write_text(result.to_csv())


def write_json(path, result):
    Path(path).write_text(json.dumps(result.to_json(), indent=1))


def fixed_target(target, m):
    if target == "fourier":
        return fourier_matrix(m)
    if target == "sylvester":
        return sylvester_matrix(m)
    raise ValueError(f"no fixed matrix for target {target!r}")


def fast_design(target, m):
    n = int(round(math.log2(m)))
    return fourier_preset(n) if target == "fourier" else sylvester_preset(n)


def build_design(scheme, target_matrix=None, target=None, m=None):
    """Return ``(mesh, reference unitary)`` for one scheme.

    Decomposed meshes reproduce ``target_matrix``; fast meshes reproduce
    the preset product, which equals the named target up to relabeling.
    """
    if scheme == "fast":
        params = fast_design(target, m)
        return compile_mesh(params), fast_unitary_product(params)
    return compile_mesh(decompose(target_matrix, scheme)), target_matrix


class _Runner:
    def __init__(self, spec: ExperimentSpec, design_cache=None):
        self.spec = spec
        self.points = spec.noise_points()
        self.cache = {} if design_cache is None else design_cache

    def design(self, scheme, m, trial):
        spec = self.spec
        if spec.target == "haar":
            U = haar_random_unitary(m, target_rng(spec.seed, m, trial))
            return build_design(scheme, U)
        key = (scheme, spec.target, m)
        if key not in self.cache:
            U = None if scheme == "fast" else fixed_target(spec.target, m)
            self.cache[key] = build_design(scheme, U, spec.target, m)
        return self.cache[key]

    def trial(self, scheme, m, trial, inputs):
        """Fidelities (and TVDs) of one trial at every noise point."""
        spec = self.spec
        mesh, ref = self.design(scheme, m, trial)
        fids = np.empty(len(self.points))
        tvds = np.empty(len(self.points)) if spec.photons else None
        for p, (sb, sp, eta) in enumerate(self.points):
            rng = noise_rng(spec.seed, scheme, m, p, trial)
            T = realize_noisy(mesh, NoiseConfig(sb, sp, eta), rng)
            fids[p] = fidelity(ref, T)
            if tvds is not None:
                tvds[p] = mean_tvd(ref, T, spec.photons, inputs=inputs)
        return fids, tvds


def run_sweep(spec: ExperimentSpec, threads=1, design_cache=None) -> ExperimentResult:
    """Run every grid point of ``spec``; output order is canonical (scheme, m, point)."""
    runner = _Runner(spec, design_cache)
    results = []
    for scheme in spec.schemes:
        for m in spec.m_list:
            inputs = None
            if spec.photons:
                inputs = choose_inputs(m, spec.photons, INPUT_BUDGET, SAMPLED_INPUTS,
                                       np.random.default_rng([spec.seed, 2, m, spec.photons]))
            t0 = time.perf_counter()
            jobs = range(spec.samples)
            if threads > 1:
                with ThreadPoolExecutor(threads) as ex:
                    out = list(ex.map(lambda t: runner.trial(scheme, m, t, inputs), jobs))
            else:
                out = [runner.trial(scheme, m, t, inputs) for t in jobs]
            elapsed = (time.perf_counter() - t0) / max(1, len(runner.points))
            fids = np.array([o[0] for o in out])
            tvds = np.array([o[1] for o in out]) if spec.photons else None
            for p, (sb, sp, eta) in enumerate(runner.points):
                results.append(PointResult(
                    scheme, spec.target, m, sb, sp, eta, fids[:, p],
                    None if tvds is None else tvds[:, p], elapsed,
                ))
    return ExperimentResult(spec, results)


TABLE1_M = (64, 128, 256)


def table1_grid(m_list=TABLE1_M, sigma_bs_list=TABLE1_SIGMA_BS, sigma_ps_list=TABLE1_SIGMA_PS,
                targets=("fourier", "sylvester")):
    """Cell keys ``(target, m, sigma_bs, sigma_ps)`` that :func:`table1` fills."""
    return [(t, m, sb, sp) for t in targets for m in m_list for sb, sp in product(sigma_bs_list, sigma_ps_list)]


def table1(m_list=TABLE1_M, sigma_bs_list=TABLE1_SIGMA_BS, sigma_ps_list=TABLE1_SIGMA_PS, samples=100,
           targets=("fourier", "sylvester"), seed=0, threads=1):
    """Reproduce the fast-versus-universal Hadamard benchmark grid.

    Returns ``(cells, results)``: ``cells`` maps ``(target, m, sigma_bs,
    sigma_ps)`` to ``{"fast": F, "cr": mean of C and R, ...}`` with standard
    errors, and ``results`` is the list of raw sweep results.
    """
    cells = {}
    results = []
    for target in targets:
        spec = ExperimentSpec(
            schemes=("fast", "clements", "reck"), target=target, m_list=tuple(m_list),
            sigma_bs_list=tuple(sigma_bs_list), sigma_ps_list=tuple(sigma_ps_list),
            samples=samples, seed=seed,
        )
        res = run_sweep(spec, threads=threads)
        results.append(res)
        for m in spec.m_list:
            for sb, sp, _ in spec.noise_points():
                f = res.point("fast", m, sb, sp)
                c = res.point("clements", m, sb, sp)
                r = res.point("reck", m, sb, sp)
                cells[(target, m, sb, sp)] = {
                    "fast": f.mean_fidelity,
                    "fast_se": f.stderr_fidelity,
                    "clements": c.mean_fidelity,
                    "reck": r.mean_fidelity,
                    "cr": 0.5 * (c.mean_fidelity + r.mean_fidelity),
                    "cr_se": 0.5 * math.hypot(c.stderr_fidelity, r.stderr_fidelity),
                }
    return cells, results


def format_table1(cells, targets=("fourier", "sylvester")):
    """Plain-text rendering in the reference layout, with reference values in brackets."""
    ms = sorted({k[1] for k in cells})
    sbs = sorted({k[2] for k in cells})
    sps = sorted({k[3] for k in cells})
    lines = []
    for target in targets:
        if not any(k[0] == target for k in cells):
            continue
        lines.append(f"target = {target}")
        head = "".join(f"  m={m} sBS={sb:<6g}" for m in ms for sb in sbs)
        lines.append(f"{'':14s}{head}")
        for sp in sps:
            for row, label in (("fast", "F"), ("cr", "C/R")):
                vals = []
                for m in ms:
                    for sb in sbs:
                        v = cells[(target, m, sb, sp)][row]
                        ref = REFERENCE_TABLE1.get(m, {}).get((sb, sp))
                        r = "" if ref is None else f"[{ref[0 if row == 'fast' else 1]:.3f}]"
                        vals.append(f"{v:8.4f}{r:>8s}")
                tag = f"sPS={sp:g} {label}"
                lines.append(f"{tag:14s}" + "  ".join(vals))
        lines.append("")
    return "\n".join(lines)


def table1_csv(cells, seed=0) -> str:
    rows = []
    for (target, m, sb, sp), c in sorted(cells.items()):
        ref = REFERENCE_TABLE1.get(m, {}).get((sb, sp), (None, None))
        rows.append([target, m, sb, sp, c["fast"], c["fast_se"], c["cr"], c["cr_se"],
                     ref[0], ref[1], seed])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["target", "m", "sigma_bs", "sigma_ps", "fast", "stderr_fast", "cr_mean", "stderr_cr",
                "reference_fast", "reference_cr", "seed"])
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


FIGURES = ("3a", "3b", "3c", "3d", "4", "5")
DEFAULT_GRIDS = {
    "3a": {"m": (4, 16, 64), "x": (0.05, 0.1, 0.2)},
    "3b": {"m": (4, 16, 64), "x": (0.05, 0.1, 0.2)},
    "3c": {"m": (4, 16, 64), "x": (0.005, 0.01, 0.02)},
    "3d": {"m": (4, 16, 64), "x": (0.005, 0.01, 0.02)},
    "4": {"m": (4, 16, 64), "x": (0.005, 0.01, 0.02)},
    "5": {"m": (4, 8, 16), "x": (0.005, 0.01, 0.02)},
}


@dataclass
class FitReport:
    figure: str
    points: list
    max_residual: float
    mean_residual: float
    max_residual_complement: float = None
    mean_residual_complement: float = None

    def format(self):
        lines = [f"figure {self.figure}: {'m':>4s} {'x':>8s} {'simulated':>10s} {'fit':>10s} {'residual':>10s}"]
        for p in self.points:
            lines.append(f"{'':10s} {p['m']:4d} {p['x']:8g} {p['simulated']:10.5f} {p['fit']:10.5f} {p['residual']:10.5f}")
        lines.append(f"max |residual| = {self.max_residual:.5f}, mean |residual| = {self.mean_residual:.5f}")
        if self.max_residual_complement is not None:
            lines.append(
                "against 1 - fit: max |residual| = "
                f"{self.max_residual_complement:.5f}, mean |residual| = {self.mean_residual_complement:.5f}"
            )
        return "\n".join(lines)


def fit_check(figure, m_list=None, x_list=None, samples=None, seed=0, threads=1) -> FitReport:
    """Simulate one figure's grid and compare with its heuristic fit.

    ``x`` is the loss per cell in dB for figures 3a/3b and the joint noise
    width for the others. Figure 4 uses the fast design on Sylvester targets;
    figure 5 compares 3-photon mean TVD against the fit and its complement.
    """
    if figure not in FIGURES:
        raise SpecError(f"figure must be one of {FIGURES}, got {figure!r}", field="figure")
    grid = DEFAULT_GRIDS[figure]
    m_list = tuple(grid["m"] if m_list is None else m_list)
    x_list = tuple(grid["x"] if x_list is None else x_list)
    if samples is None:
        samples = 100 if figure == "5" else 500
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ExtrapolationWarning)
        if figure in ("3a", "3b"):
            scheme = "clements" if figure == "3a" else "reck"
            spec = ExperimentSpec((scheme,), "haar", m_list, eta_db_list=x_list, samples=samples, seed=seed)
            fit = lambda m, x: fit_fidelity_loss(scheme, m, x)
        elif figure in ("3c", "3d"):
            scheme = "clements" if figure == "3c" else "reck"
            spec = ExperimentSpec((scheme,), "haar", m_list, sigma_bs_list=x_list, joint_sigma=True,
                                  samples=samples, seed=seed)
            fit = lambda m, x: fit_fidelity_noise(scheme, m, x)
        elif figure == "4":
            spec = ExperimentSpec(("fast",), "sylvester", m_list, sigma_bs_list=x_list, joint_sigma=True,
                                  samples=samples, seed=seed)
            fit = lambda m, x: fit_fidelity_noise("f", m, x)
        else:
            spec = ExperimentSpec(("clements", "reck"), "haar", m_list, sigma_bs_list=x_list, joint_sigma=True,
                                  samples=samples, photons=3, seed=seed)
            fit = fit_tvd3
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ExtrapolationWarning)
        for m in m_list:
            for x in x_list:
                fit(m, x)
    for w in caught:
        warnings.warn(str(w.message), ExtrapolationWarning, stacklevel=2)
    result = run_sweep(spec, threads=threads)
    points = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ExtrapolationWarning)
        for p in result.points:
            x = p.eta_db if figure in ("3a", "3b") else p.sigma_bs
            sim = p.mean_tvd if figure == "5" else p.mean_fidelity
            f = fit(p.m, x)
            points.append({"scheme": p.scheme, "m": p.m, "x": x, "simulated": sim, "fit": f, "residual": sim - f,
                           "residual_complement": sim - (1 - f)})
    res = np.abs([p["residual"] for p in points])
    rep = FitReport(figure, points, float(res.max()), float(res.mean()))
    if figure == "5":
        alt = np.abs([p["residual_complement"] for p in points])
        rep.max_residual_complement = float(alt.max())
        rep.mean_residual_complement = float(alt.mean())
    return rep


def simulate_design(design, sigma_bs=0.0, sigma_ps=0.0, eta_db=0.0, samples=100, seed=0, photons=0,
                    label="file"):
    """Monte-Carlo scoring of one stored design at one noise point.

    The reference is the design's own noiseless transfer matrix. Returns
    ``(point, row)`` where ``row`` follows :data:`CSV_COLUMNS`.
    """
    mesh = compile_mesh(design)
    cfg = NoiseConfig(sigma_bs, sigma_ps, eta_db)
    if int(samples) != samples or samples < 1:
        raise SpecError("samples must be a positive integer", field="samples")
    if not 0 <= photons <= mesh.m:
        raise SpecError(f"photons must lie in 0..{mesh.m}", field="photons")
    ref = realize_noisy(mesh, NoiseConfig(), np.random.default_rng(0))
    inputs = None
    if photons:
        inputs = choose_inputs(mesh.m, photons, INPUT_BUDGET, SAMPLED_INPUTS,
                               np.random.default_rng([seed, 2, mesh.m, photons]))
    t0 = time.perf_counter()
    fids, tvds = np.empty(samples), np.empty(samples) if photons else None
    for t in range(samples):
        T = realize_noisy(mesh, cfg, noise_rng(seed, mesh.scheme, mesh.m, 0, t))
        fids[t] = fidelity(ref, T)
        if photons:
            tvds[t] = mean_tvd(ref, T, photons, inputs=inputs)
    point = PointResult(mesh.scheme, label, mesh.m, float(sigma_bs), float(sigma_ps), float(eta_db), fids, tvds,
                        time.perf_counter() - t0)
    digest = hashlib.sha256()
    for arr in (mesh.k1, mesh.k2, mesh.omega, mesh.phi, mesh.output_phases):
        digest.update(np.ascontiguousarray(arr).tobytes())
    digest.update(json.dumps([sigma_bs, sigma_ps, eta_db, samples, seed, photons]).encode())
    row = {
        "scheme": point.scheme, "target": label, "m": point.m, "sigma_bs": point.sigma_bs,
        "sigma_ps": point.sigma_ps, "eta_db": point.eta_db, "samples": point.samples,
        "mean_fidelity": point.mean_fidelity, "stderr_fidelity": point.stderr_fidelity,
        "mean_tvd": point.mean_tvd, "stderr_tvd": point.stderr_tvd, "seed": seed,
        "spec_hash": digest.hexdigest()[:16],
    }
    return point, row
