import numpy as np
import pytest

from rbn.linalg import hermitian_eig, partial_trace, tensor_product, trace_distance

from conftest import KET0, KET1, proj

SX = np.array([[0, 1], [1, 0]], dtype=complex)


class TestTensorProduct:
    def test_identity(self):
        np.testing.assert_array_equal(tensor_product(np.eye(2), np.eye(2)), np.eye(4))

    def test_basis_projectors(self):
        out = tensor_product(np.diag([1, 0]), np.diag([0, 1]))
        np.testing.assert_array_equal(out, np.diag([0, 1, 0, 0]))

    def test_block_layout(self):
        out = tensor_product(proj(KET0), SX)
        expected = np.zeros((4, 4))
        expected[:2, :2] = SX.real
        np.testing.assert_array_equal(out, expected)

    def test_entry_formula(self, rng):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        out = tensor_product(a, b)
        for i, j, k, l in np.ndindex(2, 2, 3, 3):
            assert out[i * 3 + k, j * 3 + l] == pytest.approx(a[i, j] * b[k, l], abs=1e-14)


class TestPartialTrace:
    def test_product(self, rng):
        ra = np.diag([0.3, 0.7])
        rb = np.diag([0.1, 0.2, 0.7])
        np.testing.assert_allclose(partial_trace(np.kron(ra, rb), 2, 3, "A"), ra, atol=1e-12)
        np.testing.assert_allclose(partial_trace(np.kron(ra, rb), 2, 3, "B"), rb, atol=1e-12)

    def test_bell_state_by_explicit_sum(self):
        phi = (np.kron(KET0, KET0) + np.kron(KET1, KET1)) / np.sqrt(2)
        m = proj(phi)
        oracle = np.zeros((2, 2), dtype=complex)
        for k in range(2):
            bk = np.kron(np.eye(2), np.eye(2)[k][None, :])  # 1 (x) <k|
            oracle += bk @ m @ bk.conj().T
        np.testing.assert_allclose(oracle, np.eye(2) / 2, atol=1e-15)
        np.testing.assert_allclose(partial_trace(m, 2, 2, "A"), oracle, atol=1e-15)

    def test_maximally_mixed(self):
        np.testing.assert_allclose(partial_trace(np.eye(4) / 4, 2, 2, "B"), np.eye(2) / 2)

    def test_trace_preserved(self, rng):
        m = rng.normal(size=(6, 6))
        assert np.trace(partial_trace(m, 2, 3, "A")) == pytest.approx(np.trace(m))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            partial_trace(np.eye(4), 2, 3)


class TestHermitianEig:
    def test_diagonal(self):
        spec = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_allclose(spec.eigenvalues, [3, 2, 1])

    def test_pauli_x(self):
        spec = hermitian_eig(SX)
        np.testing.assert_allclose(spec.eigenvalues, [1, -1], atol=1e-15)
        plus = np.array([1, 1]) / np.sqrt(2)
        minus = np.array([1, -1]) / np.sqrt(2)
        assert abs(np.vdot(plus, spec.eigenvectors[:, 0])) == pytest.approx(1.0)
        assert abs(np.vdot(minus, spec.eigenvectors[:, 1])) == pytest.approx(1.0)

    def test_singlet_is_pure(self):
        s = (np.kron(KET0, KET1) - np.kron(KET1, KET0)) / np.sqrt(2)
        spec = hermitian_eig(proj(s))
        np.testing.assert_allclose(spec.eigenvalues, [1, 0, 0, 0], atol=1e-14)

    def test_rejects_non_hermitian_with_magnitude(self):
        with pytest.raises(ValueError, match="2.000e-03"):
            hermitian_eig(np.array([[0, 1], [1.002, 0]]))

    def test_reconstruction_random(self, rng):
        worst = 0.0
        for _ in range(1000):
            d = int(rng.integers(1, 9))
            z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            h = z + z.conj().T
            spec = hermitian_eig(h)
            v = spec.eigenvectors
            assert np.max(np.abs(v.conj().T @ v - np.eye(d))) < 1e-10
            worst = max(worst, np.max(np.abs(spec.reconstruct() - h)))
            assert np.all(np.diff(spec.eigenvalues) <= 0)
            np.testing.assert_allclose(spec.eigenvalues, np.linalg.eigvalsh(h)[::-1], atol=1e-10)
        assert worst < 1e-9

    def test_degenerate_spectrum(self):
        u = np.linalg.qr(np.arange(16).reshape(4, 4) + np.eye(4))[0]
        h = u @ np.diag([1.0, 1.0, 2.0, 2.0]) @ u.T
        spec = hermitian_eig(h)
        np.testing.assert_allclose(spec.eigenvalues, [2, 2, 1, 1], atol=1e-12)
        np.testing.assert_allclose(spec.reconstruct(), h, atol=1e-12)


class TestTraceDistance:
    def test_self(self):
        assert trace_distance(np.eye(2) / 2, np.eye(2) / 2) == 0.0

    def test_orthogonal_pure(self):
        assert trace_distance(proj(KET0), proj(KET1)) == pytest.approx(1.0)

    def test_mixed_vs_pure(self):
        assert trace_distance(np.eye(2) / 2, proj(KET0)) == pytest.approx(0.5)

    def test_metric(self, rng):
        def rand_state(d):
            g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            m = g @ g.conj().T
            return m / np.trace(m)

        for _ in range(200):
            a, b, c = (rand_state(3) for _ in range(3))
            tab = trace_distance(a, b)
            assert tab >= 0
            assert abs(tab - trace_distance(b, a)) < 1e-10
            assert trace_distance(a, c) <= tab + trace_distance(b, c) + 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            trace_distance(np.eye(2), np.eye(3))
