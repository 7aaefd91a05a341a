"""Bipartite density matrices, pure states and the named state families."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import as_square, hermitian_eig, hermiticity_violation, partial_trace

STATE_TOL = 1e-10
NEGATIVE_EIG_TOL = 1e-10


class InvalidStateError(ValueError):
    pass


def validate_density(m: np.ndarray, tol: float = STATE_TOL) -> None:
    """Raise :class:`InvalidStateError` unless ``m`` is a unit-trace PSD Hermitian matrix."""
    gap = hermiticity_violation(m)
    if gap > tol:
        raise InvalidStateError(f"not Hermitian (max |m - m^dagger| = {gap:.3e})")
    tr = np.trace(m)
    if abs(tr - 1.0) > tol:
        raise InvalidStateError(f"trace is {tr.real:.12g}, expected 1")
    lowest = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
    if lowest < -NEGATIVE_EIG_TOL:
        raise InvalidStateError(f"negative eigenvalue {lowest:.3e}")


@dataclass(frozen=True)
class DensityMatrix:
    """A state on ``H_A (x) H_B`` with its bipartition recorded.

    Single-system states use ``dB = 1``.
    """

    matrix: np.ndarray = field(repr=False)
    dA: int
    dB: int = 1

    def __post_init__(self):
        m = as_square(self.matrix)
        if m.shape[0] != self.dA * self.dB:
            raise InvalidStateError(
                f"matrix dimension {m.shape[0]} != dA*dB = {self.dA}*{self.dB}"
            )
        validate_density(m)
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.dA * self.dB

    def reduced(self, keep: str = "A") -> np.ndarray:
        return partial_trace(self.matrix, self.dA, self.dB, keep)

    def with_matrix(self, m: np.ndarray) -> "DensityMatrix":
        return DensityMatrix(m, self.dA, self.dB)

    def to_dict(self) -> dict:
        return {
            "dA": self.dA,
            "dB": self.dB,
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DensityMatrix":
        try:
            dA, dB = int(data["dA"]), int(data["dB"])
            m = np.asarray(data["re"], dtype=float) + 1j * np.asarray(data["im"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidStateError(f"malformed state record: {exc}") from exc
        return cls(m, dA, dB)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "DensityMatrix":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray = field(repr=False)
    dA: int
    dB: int

    def __post_init__(self):
        psi = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if psi.size != self.dA * self.dB:
            raise InvalidStateError(f"{psi.size} amplitudes for a {self.dA}x{self.dB} system")
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > 1e-12:
            raise InvalidStateError(f"state norm is {norm:.15g}, expected 1")
        psi.setflags(write=False)
        object.__setattr__(self, "amplitudes", psi)

    @classmethod
    def normalized(cls, amplitudes, dA: int, dB: int) -> "PureState":
        psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(psi / np.linalg.norm(psi), dA, dB)

    def density(self) -> DensityMatrix:
        psi = self.amplitudes
        return DensityMatrix(np.outer(psi, psi.conj()), self.dA, self.dB)


@dataclass(frozen=True)
class SchmidtForm:
    """``|psi> = sum_i sqrt(coefficients[i]) |basis_a[:, i]> |basis_b[:, i]>``."""

    coefficients: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray

    def state_vector(self) -> np.ndarray:
        amps = np.sqrt(np.clip(self.coefficients, 0.0, None))
        return np.einsum("i,ai,bi->ab", amps, self.basis_a, self.basis_b).reshape(-1)


def psi_alpha(alpha: float) -> PureState:
    """``sqrt(alpha)|01> - sqrt(1 - alpha)|10>``."""
    _check_unit_interval("alpha", alpha)
    return PureState(np.array([0.0, np.sqrt(alpha), -np.sqrt(1.0 - alpha), 0.0]), 2, 2)


def two_parameter_state(alpha: float, beta: float) -> DensityMatrix:
    """Mixture of white noise and ``psi_alpha`` with weight ``beta`` on the pure part.

    ``alpha = 1/2`` gives the Werner family around the singlet.
    """
    _check_unit_interval("alpha", alpha)
    _check_unit_interval("beta", beta)
    psi = psi_alpha(alpha).amplitudes
    m = (1.0 - beta) * np.eye(4) / 4.0 + beta * np.outer(psi, psi.conj())
    return DensityMatrix(m, 2, 2)


def singlet() -> DensityMatrix:
    return two_parameter_state(0.5, 1.0)


def _check_unit_interval(name: str, x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x!r}")


def _check_orthogonal_rank_one(projs: Sequence[np.ndarray], tol: float = 1e-10) -> int:
    d = projs[0].shape[0]
    for i, p in enumerate(projs):
        if p.shape != (d, d):
            raise ValueError("projectors must share a dimension")
        if np.max(np.abs(p @ p - p)) > tol or hermiticity_violation(p) > tol:
            raise ValueError(f"projector {i} is not a Hermitian idempotent")
        if abs(np.trace(p).real - 1.0) > tol:
            raise ValueError(f"projector {i} is not rank one")
        for j in range(i):
            if np.max(np.abs(p @ projs[j])) > tol:
                raise ValueError(f"projectors {j} and {i} are not orthogonal")
    return d


def classical_classical_state(probs, proj_a, proj_b) -> DensityMatrix:
    """``sum_l p_l A'_l (x) B'_l`` for rank-one orthogonal projector families."""
    p = np.asarray(probs, dtype=float)
    proj_a = [as_square(x) for x in proj_a]
    proj_b = [as_square(x) for x in proj_b]
    if len(proj_a) != p.size or len(proj_b) != p.size:
        raise ValueError(
            f"{p.size} probabilities but {len(proj_a)} and {len(proj_b)} projectors"
        )
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-10:
        raise ValueError(f"probabilities must be nonnegative and sum to 1, got {p.tolist()}")
    dA = _check_orthogonal_rank_one(proj_a)
    dB = _check_orthogonal_rank_one(proj_b)
    m = sum(pl * np.kron(a, b) for pl, a, b in zip(p, proj_a, proj_b))
    return DensityMatrix(m, dA, dB)


def product_state(rho_a, rho_b) -> DensityMatrix:
    a = DensityMatrix(rho_a, as_square(rho_a).shape[0]).matrix
    b = DensityMatrix(rho_b, as_square(rho_b).shape[0]).matrix
    return DensityMatrix(np.kron(a, b), a.shape[0], b.shape[0])


def random_density(dA: int, dB: int, rank: int | None = None, seed=None) -> DensityMatrix:
    """Seeded Ginibre state ``G G^dagger / Tr(G G^dagger)`` with ``G`` of shape ``(dA*dB, rank)``."""
    d = dA * dB
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise ValueError(f"rank must be in [1, {d}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, dA, dB)


def random_pure(dA: int, dB: int, seed=None) -> PureState:
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=dA * dB) + 1j * rng.normal(size=dA * dB)
    return PureState.normalized(psi, dA, dB)


def _fix_phase(vecs: np.ndarray) -> np.ndarray:
    # first non-negligible entry of each column made real positive
    out = vecs.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size:
            z = col[idx[0]]
            out[:, k] = col * (abs(z) / z)
    return out


def schmidt_decompose(psi: PureState) -> SchmidtForm:
    """Schmidt coefficients (descending, summing to one) and local bases.

    Each ``basis_a`` column has its first nonzero amplitude real positive; the
    phase is absorbed into ``basis_b``. Columns beyond ``min(dA, dB)`` are not
    returned.
    """
    c = psi.amplitudes.reshape(psi.dA, psi.dB)
    reduced = c @ c.conj().T
    spec = hermitian_eig(reduced)
    k = min(psi.dA, psi.dB)
    lam = np.clip(spec.eigenvalues[:k], 0.0, None)
    u = _fix_phase(spec.eigenvectors[:, :k])
    # <u_i| c gives sqrt(lam_i) <v_i^*| ; fall back to an orthonormal completion for lam_i ~ 0
    w = u.conj().T @ c
    vb = np.zeros((psi.dB, k), dtype=complex)
    filled = []
    for i in range(k):
        nrm = np.linalg.norm(w[i])
        if nrm > 1e-10:
            vb[:, i] = w[i] / nrm
            filled.append(i)
    missing = [i for i in range(k) if i not in filled]
    if missing:
        basis = [vb[:, i] for i in filled]
        for e in np.eye(psi.dB, dtype=complex):
            r = e - sum(np.vdot(b, e) * b for b in basis)
            if np.linalg.norm(r) > 1e-6:
                basis.append(r / np.linalg.norm(r))
            if len(basis) == k:
                break
        for i, vec in zip(missing, basis[len(filled):]):
            vb[:, i] = vec
    lam = lam / lam.sum()
    return SchmidtForm(lam, u, vb)
