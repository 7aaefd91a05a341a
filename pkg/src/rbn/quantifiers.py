"""Entropic quantifiers of irreality and realism-based nonlocality.

All entropies are in nats.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .channels import check_strength, dephase, monitor
from .linalg import eigvalsh, partial_trace, trace_distance
from .observables import ProjectiveObservable
from .states import NEGATIVE_EIG_TOL, DensityMatrix, InvalidStateError, PureState

SUPPORT_TOL = 1e-12


def _xlogx(x):
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0.0, x, 1.0)
    return np.where(x > 0.0, x * np.log(safe), 0.0)


def entropy_batch(ms: np.ndarray) -> np.ndarray:
    """Von Neumann entropy of a stack of density matrices ``(..., d, d)``.

    Eigenvalues in ``[-1e-10, 0)`` are clamped to zero; anything more negative
    raises :class:`InvalidStateError`.
    """
    w = eigvalsh(ms)
    lowest = w.min() if w.size else 0.0
    if lowest < -NEGATIVE_EIG_TOL:
        raise InvalidStateError(f"negative eigenvalue {lowest:.3e} in entropy evaluation")
    np.maximum(w, 0.0, out=w)
    logs = np.log(w, out=np.zeros_like(w), where=w > 0.0)
    return 0.0 - np.einsum("...k,...k->...", w, logs)


def _matrix(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def vn_entropy(rho) -> float:
    """``-Tr rho ln rho`` for a :class:`DensityMatrix` or a raw density array."""
    if not isinstance(rho, DensityMatrix):
        m = np.asarray(rho, dtype=complex)
        rho = DensityMatrix(m, m.shape[0])
    return float(entropy_batch(rho.matrix))


def shannon_entropy(probs) -> float:
    p = np.asarray(probs, dtype=float)
    return 0.0 - float(np.sum(_xlogx(p)))


def binary_entropy(p: float) -> float:
    return shannon_entropy([p, 1.0 - p])


class DivergentRelativeEntropy(ValueError):
    """Raised when ``supp(rho)`` is not contained in ``supp(sigma)``."""

    divergent = True


def relative_entropy(rho, sigma) -> float:
    """``Tr rho (ln rho - ln sigma)``."""
    r, s = _matrix(rho), _matrix(sigma)
    if r.shape != s.shape:
        raise ValueError(f"dimension mismatch: {r.shape} vs {s.shape}")
    ws, vs = np.linalg.eigh(s)
    kernel = vs[:, ws <= SUPPORT_TOL]
    if kernel.size:
        leak = float(np.real(np.trace(kernel.conj().T @ r @ kernel)))
        if leak > SUPPORT_TOL:
            raise DivergentRelativeEntropy(
                f"rho has weight {leak:.3e} outside the support of sigma"
            )
    keep = ws > SUPPORT_TOL
    diag = np.real(np.einsum("ik,ij,jk->k", vs.conj(), r, vs))
    cross = float(np.sum(diag[keep] * np.log(ws[keep])))
    return -float(entropy_batch(r)) - cross


def irreality(obs: ProjectiveObservable, rho: DensityMatrix, side: str = "A") -> float:
    """``S(Phi(rho)) - S(rho)``: how far ``obs`` is from having a definite value."""
    return vn_entropy(dephase(rho, obs, side)) - vn_entropy(rho)


def eta(obs_a: ProjectiveObservable, obs_b: ProjectiveObservable, rho: DensityMatrix) -> float:
    """Context realism-based nonlocality in its symmetric form
    ``S(Phi_A rho) + S(Phi_B rho) - S(Phi_A Phi_B rho) - S(rho)``."""
    phi_a = dephase(rho, obs_a, "A")
    phi_b = dephase(rho, obs_b, "B")
    phi_ab = dephase(phi_a, obs_b, "B")
    return (vn_entropy(phi_a) + vn_entropy(phi_b)
            - vn_entropy(phi_ab) - vn_entropy(rho))


def eta_conditional(obs_a: ProjectiveObservable, obs_b: ProjectiveObservable, rho: DensityMatrix) -> float:
    """Same quantity written as ``I(A|rho) - I(A|Phi_B rho)``."""
    return irreality(obs_a, rho, "A") - irreality(obs_a, dephase(rho, obs_b, "B"), "A")


def delta(obs_a: ProjectiveObservable, obs_b: ProjectiveObservable, rho: DensityMatrix,
          eps_a: float, eps_b: float) -> float:
    """Monitored analogue of :func:`eta` with strengths ``eps_a`` on A and ``eps_b`` on B.

    Reduces to :func:`eta` at ``eps_a = eps_b = 1`` and vanishes if either
    strength is zero.
    """
    m_a = monitor(rho, obs_a, eps_a, "A")
    m_b = monitor(rho, obs_b, eps_b, "B")
    m_ab = monitor(m_a, obs_b, eps_b, "B")
    return (vn_entropy(m_a) + vn_entropy(m_b)
            - vn_entropy(m_ab) - vn_entropy(rho))


def reality_gain(obs: ProjectiveObservable, rho: DensityMatrix, eps: float, side: str = "A") -> float:
    return vn_entropy(monitor(rho, obs, eps, side)) - vn_entropy(rho)


def gamma_bound(obs: ProjectiveObservable, rho: DensityMatrix, eps: float, side: str = "B") -> float:
    """Trace-distance bound ``eps*tau*ln(d-1) + H(eps*tau)`` on :func:`reality_gain`.

    ``tau`` is the trace distance between ``rho`` and its dephased version and
    ``d`` the full dimension of ``rho``.
    """
    eps = check_strength(eps)
    d = rho.dim
    if d < 2:
        raise ValueError("the Gamma bound needs dimension >= 2")
    tau = trace_distance(dephase(rho, obs, side).matrix, rho.matrix)
    x = min(max(eps * tau, 0.0), 1.0)
    return float(x * np.log(d - 1) + binary_entropy(x))


def gamma_sqrt_bound(obs: ProjectiveObservable, rho: DensityMatrix, eps: float, side: str = "B") -> float:
    """``d * sqrt(eps*tau/e)``, the square-root envelope of :func:`gamma_bound`."""
    tau = trace_distance(dephase(rho, obs, side).matrix, rho.matrix)
    return float(rho.dim * np.sqrt(eps * tau / np.e))


@dataclass(frozen=True)
class BoundsReport:
    """Analytic bounds on a suppression value, evaluated at fixed observables.

    Fields that do not apply to a given report are ``None``.
    """

    lb1: Optional[float] = None
    ub1: Optional[float] = None
    lb2: Optional[float] = None
    ub2: Optional[float] = None
    lb1_bi: Optional[float] = None
    ub1_bi: Optional[float] = None
    trivial_lb: float = 0.0
    trivial_ub: Optional[float] = None

    def lower(self) -> list:
        return [v for v in (self.lb1, self.lb2, self.lb1_bi, self.trivial_lb) if v is not None]

    def upper(self) -> list:
        return [v for v in (self.ub1, self.ub2, self.ub1_bi, self.trivial_ub) if v is not None]

    def violation(self, value: float) -> float:
        """Largest amount by which ``value`` escapes any bound (<= 0 when all hold)."""
        gaps = [lb - value for lb in self.lower()] + [value - ub for ub in self.upper()]
        return max(gaps)

    def as_dict(self) -> dict:
        return asdict(self)


def local_bounds(rho: DensityMatrix, eps: float, obs_a: ProjectiveObservable,
                 obs_b: ProjectiveObservable, n_value: Optional[float] = None) -> BoundsReport:
    """Bounds on the B-side suppression at the maximizing pair ``(obs_a, obs_b)``."""
    eps = check_strength(eps)
    phi_a = dephase(rho, obs_a, "A")
    irr_b = irreality(obs_b, rho, "B")
    irr_b_phi_a = irreality(obs_b, phi_a, "B")
    context = eta(obs_a, obs_b, rho)
    return BoundsReport(
        lb1=eps * irr_b - gamma_bound(obs_b, phi_a, eps, "B"),
        ub1=gamma_bound(obs_b, rho, eps, "B") - eps * irr_b_phi_a,
        lb2=eps * context - (1.0 + eps) * irr_b_phi_a,
        ub2=eps * context + (1.0 - eps) * irr_b,
        trivial_ub=n_value,
    )


def bilocal_bounds(rho: DensityMatrix, eps: float, obs_a: ProjectiveObservable,
                   obs_b: ProjectiveObservable, eps_b: Optional[float] = None) -> tuple[float, float]:
    """``(lb1, ub1)`` for monitoring of strength ``eps`` on A and ``eps_b`` (default ``eps``) on B."""
    eps = check_strength(eps)
    eps_b = eps if eps_b is None else check_strength(eps_b)
    m_a = monitor(rho, obs_a, eps, "A")
    lb = eps_b * irreality(obs_b, rho, "B") - gamma_bound(obs_b, m_a, eps_b, "B")
    ub = gamma_bound(obs_b, rho, eps_b, "B") - eps_b * irreality(obs_b, m_a, "B")
    return lb, ub


def closed_form_werner_suppression(beta: float, eps: float) -> float:
    """Local suppression for the Werner family, attained at ``(sigma_z, sigma_z)``.

    ``1/4 sum_ij (-1)^j l_ij ln l_ij`` with ``l_ij = 1 + beta (4i - 1 + 2 j eps (1 - 2i))``.
    """
    total = 0.0
    for i in (0, 1):
        for j in (0, 1):
            lam = 1.0 + beta * (4 * i - 1 + 2 * j * eps * (1 - 2 * i))
            total += (-1) ** j * float(_xlogx(lam))
    return total / 4.0


def _pure_lambda(alpha: float, eps: float) -> float:
    return eps * alpha * (2.0 - eps) * (1.0 - alpha)


def closed_form_pure_suppression(alpha: float, eps: float) -> float:
    """Local suppression for ``sqrt(a)|01> - sqrt(1-a)|10>`` (conjectured optimum).

    Evaluated as the binary entropy of ``(1 + x)/2`` with
    ``x = sqrt(1 - 4 L)``, ``L = eps*alpha*(2 - eps)*(1 - alpha)``, which is the
    log/arctanh expression without its cancellation at ``L -> 0``.
    """
    lam = _pure_lambda(alpha, eps)
    x = np.sqrt(max(1.0 - 4.0 * lam, 0.0))
    return np.log(2.0) - 0.5 * (float(_xlogx(1.0 + x)) + float(_xlogx(1.0 - x)))


def closed_form_pure_suppression_literal(alpha: float, eps: float) -> float:
    """``-ln sqrt(L) - sqrt(1 - 4L) artanh sqrt(1 - 4L)``; unstable as ``L -> 0``."""
    lam = _pure_lambda(alpha, eps)
    x = np.sqrt(1.0 - 4.0 * lam)
    return -np.log(np.sqrt(lam)) - x * np.arctanh(x)


def entanglement_entropy(psi: PureState, side: str = "A") -> float:
    m = np.outer(psi.amplitudes, psi.amplitudes.conj())
    reduced = partial_trace(m, psi.dA, psi.dB, keep=side)
    return float(entropy_batch(reduced))
