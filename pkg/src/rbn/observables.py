"""Projective observables: Bloch-angle qubit family, spectral construction,
Schmidt observables and mutually unbiased (Fourier) partners."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import as_square, check_hermitian, hermitian_eig
from .states import PureState, schmidt_decompose

OBS_TOL = 1e-10
DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class ProjectiveObservable:
    """``A = sum_a labels[a] * projectors[a]`` with orthogonal, complete projectors.

    Only the projectors enter any quantifier; labels are kept for display.
    """

    projectors: tuple
    labels: tuple

    def __post_init__(self):
        projs = tuple(as_square(p) for p in self.projectors)
        labels = tuple(float(x) for x in self.labels)
        if not projs:
            raise ValueError("an observable needs at least one projector")
        if len(labels) != len(projs):
            raise ValueError(f"{len(labels)} labels for {len(projs)} projectors")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be distinct")
        d = projs[0].shape[0]
        for i, p in enumerate(projs):
            if p.shape != (d, d):
                raise ValueError("projectors must share a dimension")
            for j in range(i + 1):
                target = p if i == j else np.zeros_like(p)
                if np.max(np.abs(p @ projs[j] - target)) > OBS_TOL:
                    raise ValueError(f"projectors {j} and {i} violate A_a A_b = delta_ab A_a")
        if np.max(np.abs(sum(projs) - np.eye(d))) > OBS_TOL:
            raise ValueError("projectors do not sum to the identity")
        for p in projs:
            p.setflags(write=False)
        object.__setattr__(self, "projectors", projs)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def ranks(self) -> tuple:
        return tuple(int(round(np.trace(p).real)) for p in self.projectors)

    def matrix(self) -> np.ndarray:
        return sum(a * p for a, p in zip(self.labels, self.projectors))

    def stack(self) -> np.ndarray:
        """Projectors as an array of shape ``(outcomes, d, d)``."""
        return np.stack(self.projectors)

    def relabel(self, labels: Sequence[float]) -> "ProjectiveObservable":
        return ProjectiveObservable(self.projectors, tuple(labels))


def from_basis(vectors: np.ndarray, labels=None) -> ProjectiveObservable:
    """Rank-one observable whose eigenvectors are the columns of ``vectors``."""
    v = np.asarray(vectors, dtype=complex)
    d = v.shape[1]
    labels = tuple(range(d)) if labels is None else labels
    return ProjectiveObservable(tuple(np.outer(v[:, k], v[:, k].conj()) for k in range(d)), labels)


def bloch_basis(theta: float, phi: float) -> np.ndarray:
    """Columns ``|+>, |->`` for a qubit measured along the Bloch direction ``(theta, phi)``."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    e = np.exp(1j * phi)
    return np.array([[c, -s], [e * s, e * c]], dtype=complex)


def qubit_observable(theta: float, phi: float) -> ProjectiveObservable:
    if not 0.0 <= theta <= np.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
    if not 0.0 <= phi < 2.0 * np.pi:
        raise ValueError(f"phi must lie in [0, 2pi), got {phi!r}")
    return from_basis(bloch_basis(theta, phi), labels=(1.0, -1.0))


PAULI_Z = qubit_observable(0.0, 0.0)
PAULI_X = qubit_observable(np.pi / 2, 0.0)
PAULI_Y = qubit_observable(np.pi / 2, np.pi / 2)


def computational(d: int) -> ProjectiveObservable:
    return from_basis(np.eye(d))


def from_hermitian(h, degeneracy_tol: float = DEGENERACY_TOL) -> ProjectiveObservable:
    """Spectral projectors of ``h``, merging eigenvalues closer than ``degeneracy_tol``.

    Clusters are formed greedily along the descending spectrum; each cluster is
    labelled by its mean eigenvalue.
    """
    h = as_square(h)
    check_hermitian(h)
    spec = hermitian_eig(h)
    w, v = spec.eigenvalues, spec.eigenvectors
    clusters = [[0]]
    for k in range(1, len(w)):
        if w[clusters[-1][-1]] - w[k] < degeneracy_tol:
            clusters[-1].append(k)
        else:
            clusters.append([k])
    projs = tuple(v[:, c] @ v[:, c].conj().T for c in clusters)
    labels = tuple(float(np.mean(w[c])) for c in clusters)
    return ProjectiveObservable(projs, labels)


def eigenbasis(obs: ProjectiveObservable) -> np.ndarray:
    """Orthonormal eigenvector columns of a nondegenerate observable, in projector order."""
    if any(r != 1 for r in obs.ranks):
        raise ValueError(f"observable is degenerate (projector ranks {obs.ranks})")
    cols = []
    for p in obs.projectors:
        spec = hermitian_eig(p)
        cols.append(spec.eigenvectors[:, 0])
    return np.column_stack(cols)


def dft_matrix(d: int) -> np.ndarray:
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return np.exp(2j * np.pi * j * k / d) / np.sqrt(d)


def mub_partner(obs: ProjectiveObservable) -> ProjectiveObservable:
    """Observable whose eigenbasis is the discrete Fourier transform of ``obs``'s.

    Every overlap ``|<e_j|f_k>|^2`` equals ``1/d``, so dephasing any eigenprojector
    of one observable in the basis of the other returns ``1/d``.
    """
    e = eigenbasis(obs)
    f = e @ dft_matrix(obs.dim)
    return from_basis(f, labels=obs.labels)


def schmidt_observables(psi: PureState) -> tuple[ProjectiveObservable, ProjectiveObservable]:
    """Observables diagonal in the Schmidt bases, completed to full local dimension."""
    form = schmidt_decompose(psi)
    return _complete(form.basis_a, psi.dA), _complete(form.basis_b, psi.dB)


def _complete(cols: np.ndarray, d: int) -> ProjectiveObservable:
    basis = [cols[:, k] for k in range(cols.shape[1])]
    for e in np.eye(d, dtype=complex):
        if len(basis) == d:
            break
        r = e - sum(np.vdot(b, e) * b for b in basis)
        if np.linalg.norm(r) > 1e-6:
            basis.append(r / np.linalg.norm(r))
    return from_basis(np.column_stack(basis))


def random_observable(d: int, rng: np.random.Generator, degenerate: bool = False) -> ProjectiveObservable:
    """Haar-random eigenbasis; with ``degenerate`` the first two eigenvectors share a projector."""
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    if degenerate and d > 2:
        projs = [q[:, :2] @ q[:, :2].conj().T] + [np.outer(q[:, k], q[:, k].conj()) for k in range(2, d)]
        return ProjectiveObservable(tuple(projs), tuple(range(len(projs))))
    return from_basis(q)
