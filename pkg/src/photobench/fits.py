"""Heuristic fidelity and TVD fit formulas with their fitted constants.

Each function warns (never raises) when evaluated outside the region the
constants were fitted on.
"""
import math
import warnings
from dataclasses import dataclass


class ExtrapolationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FitConstants:
    A_c: float = 0.0158
    B_c: float = 0.140
    C_c: float = 0.79
    A_r: float = 7.55
    B_r: float = 0.163
    C_r: float = 0.204
    alpha: float = 4.932
    beta: float = 4.896
    gamma: float = 7.73
    A_c3: float = 0.23
    B_c3: float = 47.0


CONSTANTS = FitConstants()

LOSS_REGION = {"m": (4, 256), "eta_db": (0.0, 0.2)}
NOISE_REGION = {"m": (4, 128), "sigma": (0.0, 0.02)}
TVD3_REGION = {"m": (4, 16), "sigma": (0.0, 0.02)}


def _check_region(name, region, **values):
    for key, v in values.items():
        lo, hi = region[key]
        if not lo <= v <= hi:
            warnings.warn(f"{name}: {key} = {v} outside fit region [{lo}, {hi}]", ExtrapolationWarning, stacklevel=3)


def _scheme(s, allowed):
    key = str(s).lower()
    key = {"clements": "c", "reck": "r", "fast": "f"}.get(key, key)
    if key not in allowed:
        raise ValueError(f"scheme must be one of {sorted(allowed)}, got {s!r}")
    return key


def fit_fidelity_loss(scheme, m, eta_db, k: FitConstants = CONSTANTS) -> float:
    """Mean fidelity of a lossy (noise-free) C or R mesh.

    ``F_C = 1 - A_c eta^2 ln(B_c m + C_c)`` and
    ``F_R = (A_r + exp(B_r m eta)) / (A_r + exp(C_r m eta))``.
    """
    key = _scheme(scheme, {"c", "r"})
    _check_region("fit_fidelity_loss", LOSS_REGION, m=m, eta_db=eta_db)
    if key == "c":
        return 1.0 - k.A_c * eta_db ** 2 * math.log(k.B_c * m + k.C_c)
    return (k.A_r + math.exp(k.B_r * m * eta_db)) / (k.A_r + math.exp(k.C_r * m * eta_db))


def fit_fidelity_noise(scheme, m, sigma, k: FitConstants = CONSTANTS) -> float:
    """Mean fidelity under joint noise ``sigma_bs = sigma_ps = sigma``.

    ``1 - alpha m sigma^2`` (C), ``1 - beta m sigma^2`` (R) and
    ``1 - gamma log2(m) sigma^2`` (F).
    """
    key = _scheme(scheme, {"c", "r", "f"})
    _check_region("fit_fidelity_noise", NOISE_REGION, m=m, sigma=sigma)
    scale = {"c": k.alpha * m, "r": k.beta * m, "f": k.gamma * math.log2(m)}[key]
    return 1.0 - scale * sigma ** 2


def fit_tvd3(m, sigma, k: FitConstants = CONSTANTS) -> float:
    """Three-photon fit ``1 - A_c3 sigma sqrt(m (m + B_c3))``, evaluated as written.

    At ``sigma = 0`` this is 1, so it reads most naturally as ``1 - TVD``;
    callers compare simulations against both it and its complement.
    """
    _check_region("fit_tvd3", TVD3_REGION, m=m, sigma=sigma)
    return 1.0 - k.A_c3 * sigma * math.sqrt(m * (m + k.B_c3))
