"""Maximization of monitored context quantifiers over pairs of local observables.

The search is a deterministic lattice scan followed by Nelder-Mead refinement
from the best lattice cells. Qubit sides use Bloch angles ``(theta, phi)`` with
``phi`` restricted to ``[0, pi)`` (the projector pair at ``(pi - theta, phi + pi)``
is the same pair with outcomes swapped). Higher-dimensional sides use complex
Givens-rotation angles for the measurement eigenbasis and a seeded random
candidate set instead of a lattice; that case is best-effort.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .channels import check_strength
from .observables import ProjectiveObservable, from_basis
from .quantifiers import BoundsReport, bilocal_bounds, entropy_batch, local_bounds
from .states import DensityMatrix

log = logging.getLogger(__name__)

TIE_TOL = 1e-12


@dataclass(frozen=True)
class OptimizerConfig:
    grid_theta: int = 24
    grid_phi: int = 12
    top_k: int = 5
    fatol: float = 1e-8
    xatol: float = 1e-6
    maxiter: int = 500
    tol: float = 1e-6
    random_candidates: int = 96
    maxiter_high_dim: int = 4000
    seed: int = 0
    chunk: int = 64

    def updated(self, **changes) -> "OptimizerConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


@dataclass(frozen=True)
class PairParams:
    """Parameters of the observable pair; ``(theta, phi)`` per side for qubits."""

    a: tuple
    b: tuple

    @property
    def theta_a(self) -> float:
        return self.a[0]

    @property
    def phi_a(self) -> float:
        return self.a[1]

    @property
    def theta_b(self) -> float:
        return self.b[0]

    @property
    def phi_b(self) -> float:
        return self.b[1]


@dataclass
class SuppressionReport:
    value: float
    argmax: PairParams
    obs_a: ProjectiveObservable = field(repr=False)
    obs_b: ProjectiveObservable = field(repr=False)
    bounds: BoundsReport
    evaluations: int
    converged: bool


class QubitSide:
    """Bloch-angle parametrization of a nondegenerate qubit measurement."""

    dim = 2
    n_params = 2

    def basis(self, params: np.ndarray) -> np.ndarray:
        params = np.asarray(params, dtype=float)
        theta, phi = params[..., 0], params[..., 1]
        c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
        e = np.exp(1j * phi)
        out = np.empty(params.shape[:-1] + (2, 2), dtype=complex)
        out[..., 0, 0] = c
        out[..., 0, 1] = -s
        out[..., 1, 0] = e * s
        out[..., 1, 1] = e * c
        return out

    def candidates(self, cfg: OptimizerConfig) -> np.ndarray:
        thetas = np.linspace(0.0, np.pi, cfg.grid_theta)
        phis = np.arange(cfg.grid_phi) * (np.pi / cfg.grid_phi)
        t, p = np.meshgrid(thetas, phis, indexing="ij")
        return np.stack([t.ravel(), p.ravel()], axis=-1)

    def steps(self, cfg: OptimizerConfig) -> np.ndarray:
        return 0.5 * np.array([np.pi / max(cfg.grid_theta - 1, 1), np.pi / cfg.grid_phi])

    def canonical(self, params) -> tuple:
        """Map any angles to ``theta in [0, pi]``, ``phi in [0, pi)`` with the same projector pair."""
        theta, phi = float(params[0]), float(params[1])
        n = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
        theta = float(np.arccos(np.clip(n[2], -1.0, 1.0)))
        phi = float(np.arctan2(n[1], n[0])) % (2.0 * np.pi) if np.hypot(n[0], n[1]) > 1e-15 else 0.0
        if phi >= np.pi:
            theta, phi = np.pi - theta, phi - np.pi
        if theta < 1e-15 or theta > np.pi - 1e-15:
            phi = 0.0
        return (theta, phi)


class GivensSide:
    """Eigenbasis ``U = prod_{p<q} G_pq(theta, phi)`` of a nondegenerate qudit measurement."""

    def __init__(self, dim: int):
        self.dim = dim
        self.pairs = [(p, q) for p in range(dim) for q in range(p + 1, dim)]
        self.n_params = 2 * len(self.pairs)

    def basis(self, params: np.ndarray) -> np.ndarray:
        params = np.asarray(params, dtype=float)
        lead = params.shape[:-1]
        u = np.broadcast_to(np.eye(self.dim, dtype=complex), lead + (self.dim, self.dim)).copy()
        for k, (p, q) in enumerate(self.pairs):
            theta, phi = params[..., 2 * k], params[..., 2 * k + 1]
            c, s = np.cos(theta), np.sin(theta)
            e = np.exp(1j * phi)
            col_p = u[..., :, p].copy()
            col_q = u[..., :, q].copy()
            u[..., :, p] = c[..., None] * col_p + (np.conj(e) * s)[..., None] * col_q
            u[..., :, q] = -(e * s)[..., None] * col_p + c[..., None] * col_q
        return u

    def candidates(self, cfg: OptimizerConfig) -> np.ndarray:
        rng = np.random.default_rng(cfg.seed)
        rand = rng.uniform(0.0, np.pi, size=(cfg.random_candidates, self.n_params))
        rand[:, 1::2] *= 2.0
        return np.vstack([np.zeros((1, self.n_params)), rand])

    def steps(self, cfg: OptimizerConfig) -> np.ndarray:
        return np.full(self.n_params, 0.3)

    def canonical(self, params) -> tuple:
        return tuple(float(x) for x in params)


def side_for(dim: int):
    return QubitSide() if dim == 2 else GivensSide(dim)


class DeltaObjective:
    """Batched ``delta^{eps_a, eps_b}`` as a function of the pair parameters.

    With both strengths equal to one this is the context quantifier ``eta``.
    Entropies are unitarily invariant, so each pair is evaluated in the product
    eigenbasis ``U_A (x) U_B`` where both monitorings act as an entrywise mask.
    """

    def __init__(self, rho: DensityMatrix, eps_a: float, eps_b: float):
        self.rho = rho
        self.m = np.asarray(rho.matrix)
        self.dA, self.dB = rho.dA, rho.dB
        self.eps_a = check_strength(eps_a)
        self.eps_b = check_strength(eps_b)
        self.side_a = side_for(self.dA)
        self.side_b = side_for(self.dB)
        self.s_rho = float(entropy_batch(self.m))
        da, db = self.dA, self.dB
        same_a = np.eye(da)[:, None, :, None] * np.ones((1, db, 1, db))
        same_b = np.eye(db)[None, :, None, :] * np.ones((da, 1, da, 1))
        shape = (da * db, da * db)
        self.mask_a = ((1 - self.eps_a) + self.eps_a * same_a).reshape(shape)
        self.mask_b = ((1 - self.eps_b) + self.eps_b * same_b).reshape(shape)
        self.mask_ab = self.mask_a * self.mask_b
        self.evaluations = 0

    def _rotate(self, ua: np.ndarray, ub: np.ndarray) -> np.ndarray:
        lead = np.broadcast_shapes(ua.shape[:-2], ub.shape[:-2])
        w = (ua[..., :, None, :, None] * ub[..., None, :, None, :]).reshape(
            lead + (self.dA * self.dB,) * 2)
        return np.swapaxes(w, -1, -2).conj() @ self.m @ w

    def lattice(self, pa: np.ndarray, pb: np.ndarray, chunk: int = 64) -> np.ndarray:
        """Values on the full outer product ``pa x pb`` in row-major order."""
        ua = self.side_a.basis(pa)
        ub = self.side_b.basis(pb)
        eye_a = np.eye(self.dA)[None]
        eye_b = np.eye(self.dB)[None]
        s_a = entropy_batch(self._rotate(ua, eye_b) * self.mask_a)
        s_b = entropy_batch(self._rotate(eye_a, ub) * self.mask_b)
        out = np.empty((len(pa), len(pb)))
        for lo in range(0, len(pa), chunk):
            hi = min(lo + chunk, len(pa))
            rot = self._rotate(ua[lo:hi, None], ub[None, :])
            out[lo:hi] = s_a[lo:hi, None] + s_b[None, :] - entropy_batch(rot * self.mask_ab) - self.s_rho
        self.evaluations += out.size
        return out

    def __call__(self, x: np.ndarray) -> float:
        na = self.side_a.n_params
        rot = self._rotate(self.side_a.basis(x[:na]), self.side_b.basis(x[na:]))
        s = entropy_batch(np.stack([rot * self.mask_a, rot * self.mask_b, rot * self.mask_ab]))
        self.evaluations += 1
        return float(s[0] + s[1] - s[2] - self.s_rho)


def _select_seeds(values: np.ndarray, k: int) -> list:
    """Top ``k`` flat lattice indices; near-ties at the top go in lattice order."""
    flat = values.ravel()
    vmax = flat.max()
    top = np.flatnonzero(flat >= vmax - TIE_TOL)
    if top.size >= k:
        return top[:k].tolist()
    order = np.argsort(-flat, kind="stable")
    rest = [i for i in order if flat[i] < vmax - TIE_TOL][: k - top.size]
    return top.tolist() + rest


def maximize(rho: DensityMatrix, eps_a: float, eps_b: float,
             config: Optional[OptimizerConfig] = None) -> tuple:
    """Maximize ``delta^{eps_a, eps_b}`` over observable pairs.

    Returns ``(value, PairParams, obs_a, obs_b, evaluations, converged)``.
    """
    cfg = config or OptimizerConfig()
    obj = DeltaObjective(rho, eps_a, eps_b)
    sa, sb = obj.side_a, obj.side_b
    pa, pb = sa.candidates(cfg), sb.candidates(cfg)
    values = obj.lattice(pa, pb, cfg.chunk)

    if obj.eps_a == 0.0 or obj.eps_b == 0.0:
        # delta vanishes identically; report the first lattice point
        x = np.concatenate([pa[0], pb[0]])
        return _finish(rho, obj, x, 0.0, True)

    high_dim = sa.n_params + sb.n_params > 4
    maxiter = cfg.maxiter_high_dim if high_dim else cfg.maxiter
    steps = np.concatenate([sa.steps(cfg), sb.steps(cfg)])
    best = None
    for flat in _select_seeds(values, cfg.top_k):
        i, j = divmod(flat, len(pb))
        x0 = np.concatenate([pa[i], pb[j]])
        seed_value = float(values[i, j])
        simplex = np.vstack([x0, x0 + np.diag(steps)])
        res = minimize(lambda x: -obj(x), x0, method="Nelder-Mead",
                       options={"xatol": cfg.xatol, "fatol": cfg.fatol, "maxiter": maxiter,
                                "maxfev": 4 * maxiter, "initial_simplex": simplex})
        value, x = -float(res.fun), res.x
        if value - seed_value <= cfg.fatol:
            value, x = seed_value, x0
        if best is None or value > best[0] + TIE_TOL:
            best = (value, x, bool(res.success))
    if not best[2]:
        log.warning("simplex refinement did not converge within %d iterations", maxiter)
    return _finish(rho, obj, best[1], best[0], best[2])


def _finish(rho, obj, x, value, converged):
    na = obj.side_a.n_params
    a = obj.side_a.canonical(x[:na])
    b = obj.side_b.canonical(x[na:])
    obs_a = from_basis(obj.side_a.basis(np.array(a)), labels=_labels(rho.dA))
    obs_b = from_basis(obj.side_b.basis(np.array(b)), labels=_labels(rho.dB))
    return value, PairParams(a, b), obs_a, obs_b, obj.evaluations, converged


def _labels(d: int) -> tuple:
    return (1.0, -1.0) if d == 2 else tuple(float(k) for k in range(d))


def max_context_rbn(rho: DensityMatrix, config: Optional[OptimizerConfig] = None) -> SuppressionReport:
    """Realism-based nonlocality: the largest ``eta`` over observable pairs."""
    value, params, obs_a, obs_b, nev, ok = maximize(rho, 1.0, 1.0, config)
    return SuppressionReport(value, params, obs_a, obs_b, BoundsReport(), nev, ok)


def local_suppression(rho: DensityMatrix, eps: float, config: Optional[OptimizerConfig] = None,
                      side: str = "B", n_value: Optional[float] = None) -> SuppressionReport:
    """Largest loss of context nonlocality under a monitoring of strength ``eps`` on ``side``.

    Bounds are evaluated at the returned pair; for ``side="A"`` they are the
    mirrored B-side formulas on the swapped state and are left out.
    """
    if side == "B":
        value, params, obs_a, obs_b, nev, ok = maximize(rho, 1.0, eps, config)
        bounds = local_bounds(rho, eps, obs_a, obs_b, n_value=n_value)
    elif side == "A":
        value, params, obs_a, obs_b, nev, ok = maximize(rho, eps, 1.0, config)
        bounds = BoundsReport(trivial_ub=n_value)
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return SuppressionReport(value, params, obs_a, obs_b, bounds, nev, ok)


def bilocal_suppression(rho: DensityMatrix, eps_a: float, eps_b: float,
                        config: Optional[OptimizerConfig] = None,
                        local_value: Optional[float] = None) -> SuppressionReport:
    """Largest ``delta^{eps_a, eps_b}``; ``local_value`` (if known) is recorded as the upper bound."""
    value, params, obs_a, obs_b, nev, ok = maximize(rho, eps_a, eps_b, config)
    lb, ub = bilocal_bounds(rho, eps_a, obs_a, obs_b, eps_b=eps_b)
    bounds = BoundsReport(lb1_bi=lb, ub1_bi=ub, trivial_ub=local_value)
    return SuppressionReport(value, params, obs_a, obs_b, bounds, nev, ok)


def grid_maximum(rho: DensityMatrix, eps_a: float, eps_b: float,
                 n_theta: int = 48, n_phi: int = 24) -> float:
    """Brute-force maximum on a dense qubit lattice, without refinement."""
    if rho.dA != 2 or rho.dB != 2:
        raise ValueError("dense lattice search is defined for two qubits only")
    cfg = OptimizerConfig(grid_theta=n_theta, grid_phi=n_phi)
    obj = DeltaObjective(rho, eps_a, eps_b)
    grid = QubitSide().candidates(cfg)
    return float(obj.lattice(grid, grid, chunk=32).max())
