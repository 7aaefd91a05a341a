"""Local dephasing (unrevealed projective measurement) and monitoring maps."""

from __future__ import annotations

import numpy as np

from .observables import ProjectiveObservable
from .states import DensityMatrix


def check_strength(eps: float) -> float:
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"monitoring strength must lie in [0, 1], got {eps!r}")
    return eps


def _side_dim(rho: DensityMatrix, side: str) -> int:
    if side == "A":
        return rho.dA
    if side == "B":
        return rho.dB
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def dephase_array(m: np.ndarray, projs: np.ndarray, dA: int, dB: int, side: str) -> np.ndarray:
    """``sum_a (P_a (x) 1) m (P_a (x) 1)`` (or the mirrored map on B).

    Broadcasts: ``m`` may be ``(..., D, D)`` and ``projs`` ``(..., r, d, d)``
    with compatible leading batch axes.
    """
    lead = m.shape[:-2]
    t = m.reshape(lead + (dA, dB, dA, dB))
    if side == "A":
        out = np.einsum("...aip,...pkql,...aqj->...ikjl", projs, t, projs, optimize=True)
    elif side == "B":
        out = np.einsum("...akp,...ipjq,...aql->...ikjl", projs, t, projs, optimize=True)
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return out.reshape(out.shape[:-4] + (dA * dB, dA * dB))


def dephase(rho: DensityMatrix, obs: ProjectiveObservable, side: str = "A",
            obs_b: ProjectiveObservable | None = None) -> DensityMatrix:
    """Unrevealed projective measurement of ``obs`` on one side.

    ``side="global"`` dephases ``obs`` on A and ``obs_b`` on B; the two local
    maps commute.
    """
    if side == "global":
        if obs_b is None:
            raise ValueError("global dephasing needs an observable for each side")
        return dephase(dephase(rho, obs, "A"), obs_b, "B")
    if obs.dim != _side_dim(rho, side):
        raise ValueError(f"observable of dimension {obs.dim} does not act on side {side}")
    return rho.with_matrix(dephase_array(rho.matrix, obs.stack(), rho.dA, rho.dB, side))


def monitor(rho: DensityMatrix, obs: ProjectiveObservable, eps: float, side: str = "A") -> DensityMatrix:
    """Monitoring map ``(1 - eps) rho + eps Phi(rho)``; ``eps`` in ``[0, 1]``."""
    eps = check_strength(eps)
    if eps == 0.0:
        return rho
    phi = dephase(rho, obs, side).matrix
    return rho.with_matrix((1.0 - eps) * rho.matrix + eps * phi)


def monitor_iterated(rho: DensityMatrix, obs: ProjectiveObservable, eps: float, side: str, n: int) -> DensityMatrix:
    """``n`` successive monitorings in closed form: ``(1-eps)^n rho + (1 - (1-eps)^n) Phi(rho)``."""
    eps = check_strength(eps)
    if n < 0:
        raise ValueError(f"number of monitorings must be nonnegative, got {n}")
    keep = (1.0 - eps) ** n
    if keep == 1.0:
        return rho
    phi = dephase(rho, obs, side).matrix
    return rho.with_matrix(keep * rho.matrix + (1.0 - keep) * phi)
