"""Dense complex linear algebra for small Hermitian problems.

Matrices are plain ``numpy`` arrays of complex dtype. Every function here is
pure and works on copies.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-10
_MAX_SWEEPS = 100


class Spectrum(NamedTuple):
    """Eigenvalues in descending order with matching orthonormal eigenvectors.

    ``eigenvectors[:, k]`` belongs to ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
    return a


def hermiticity_violation(h: np.ndarray) -> float:
    """Largest entrywise deviation ``max |h - h^dagger|``."""
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def check_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    gap = hermiticity_violation(h)
    if gap > tol:
        raise ValueError(f"matrix is not Hermitian: max |h - h^dagger| = {gap:.3e} > {tol:.1e}")


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; entry ``(i*db + k, j*db + l)`` equals ``a[i, j] * b[k, l]``."""
    return np.kron(as_square(a), as_square(b))


def partial_trace(m, dA: int, dB: int, keep: str = "A") -> np.ndarray:
    m = as_square(m)
    if m.shape[0] != dA * dB:
        raise ValueError(f"dimension {m.shape[0]} does not factor as {dA}x{dB}")
    t = m.reshape(dA, dB, dA, dB)
    if keep == "A":
        return np.einsum("ikjk->ij", t)
    if keep == "B":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def _off_diagonal_norm(h: np.ndarray) -> float:
    off = h - np.diag(np.diag(h))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def hermitian_eig(h, tol: float = HERMITIAN_TOL) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``h[p, q]`` and then
    applies the classical real Jacobi rotation, so the pivot is annihilated
    exactly. Sweeps stop once the off-diagonal Frobenius mass drops below
    ``1e-14 * dim``.

    Raises:
        ValueError: if ``h`` is not Hermitian within ``tol``; the message carries
            the violation magnitude.
    """
    a = as_square(h).copy()
    check_hermitian(a, tol)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    threshold = 1e-14 * n

    for _ in range(_MAX_SWEEPS):
        if _off_diagonal_norm(a) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                mag = abs(b)
                if mag < 1e-300:
                    continue
                phase = b / mag
                app = a[p, p].real
                aqq = a[q, q].real
                zeta = (aqq - app) / (2.0 * mag)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = app - t * mag
                a[q, q] = aqq + t * mag
                v[:, idx] = v[:, idx] @ g

    w = np.real(np.diag(a))
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], v[:, order])


def eigvalsh(h: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of one or a stack of Hermitian matrices (LAPACK).

    Batched fast path for entropy evaluations inside optimization loops;
    :func:`hermitian_eig` is the reference solver.
    """
    return np.linalg.eigvalsh(h)


def trace_distance(a, b) -> float:
    """``0.5 * Tr|a - b|`` for Hermitian matrices of equal dimension."""
    a = as_square(a)
    b = as_square(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    spec = hermitian_eig(a - b)
    return 0.5 * float(np.sum(np.abs(spec.eigenvalues)))
