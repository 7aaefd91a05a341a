"""Randomized checks of the proven identities and inequalities.

Each check draws ``samples`` seeded random instances and returns the largest
violation observed (``<= tol`` means pass). Used by ``rbn verify`` and the
test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import channels, quantifiers as q
from .linalg import hermitian_eig, partial_trace, tensor_product, trace_distance
from .observables import ProjectiveObservable, mub_partner, random_observable
from .states import (DensityMatrix, classical_classical_state, random_density, random_pure,
                     schmidt_decompose)

DIMS = ((2, 2), (2, 3), (3, 2), (3, 3))


@dataclass
class Sample:
    rho: DensityMatrix
    obs_a: ProjectiveObservable
    obs_b: ProjectiveObservable
    eps_a: float
    eps_b: float


def random_sample(rng: np.random.Generator, dims=DIMS) -> Sample:
    """Random state of random rank, random local observables and strengths in ``(0, 1)``.

    Qutrit observables are occasionally degenerate.
    """
    dA, dB = dims[rng.integers(len(dims))]
    rank = int(rng.integers(1, dA * dB + 1))
    rho = random_density(dA, dB, rank, seed=rng)
    obs_a = random_observable(dA, rng, degenerate=bool(rng.random() < 0.2))
    obs_b = random_observable(dB, rng, degenerate=bool(rng.random() < 0.2))
    eps_a, eps_b = rng.uniform(0.0, 1.0, size=2)
    return Sample(rho, obs_a, obs_b, float(eps_a), float(eps_b))


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return z + z.conj().T


def _single(rng, d) -> np.ndarray:
    return random_density(d, 1, int(rng.integers(1, d + 1)), seed=rng).matrix


def check_eig_reconstruction(rng, samples):
    worst = 0.0
    for _ in range(samples):
        h = random_hermitian(int(rng.integers(1, 9)), rng)
        spec = hermitian_eig(h)
        v = spec.eigenvectors
        worst = max(worst, np.max(np.abs(spec.reconstruct() - h)),
                    np.max(np.abs(v.conj().T @ v - np.eye(len(h)))))
    return worst


def check_partial_trace_product(rng, samples):
    worst = 0.0
    for _ in range(samples):
        da, db = (int(x) for x in rng.integers(1, 5, size=2))
        ra, rb = _single(rng, da), _single(rng, db)
        joint = tensor_product(ra, rb)
        worst = max(worst, np.max(np.abs(partial_trace(joint, da, db, "A") - ra)),
                    np.max(np.abs(partial_trace(joint, da, db, "B") - rb)))
    return worst


def check_trace_distance_metric(rng, samples):
    worst = 0.0
    for _ in range(samples):
        d = int(rng.integers(2, 6))
        a, b, c = (_single(rng, d) for _ in range(3))
        tab, tba = trace_distance(a, b), trace_distance(b, a)
        tac, tbc = trace_distance(a, c), trace_distance(b, c)
        worst = max(worst, -tab, abs(tab - tba), tac - tab - tbc, tab - 1.0)
    return worst


def check_channel_validity(rng, samples):
    worst = 0.0
    for _ in range(samples):
        s = random_sample(rng)
        for out in (channels.monitor(s.rho, s.obs_a, s.eps_a, "A"),
                    channels.monitor(s.rho, s.obs_b, s.eps_b, "B"),
                    channels.dephase(s.rho, s.obs_a, "global", s.obs_b)):
            m = out.matrix
            worst = max(worst, abs(np.trace(m) - 1.0), -np.linalg.eigvalsh(m)[0])
    return worst


def check_monitor_commutation(rng, samples):
    """``M Phi = Phi M = Phi`` for the same observable."""
    worst = 0.0
    for _ in range(samples):
        s = random_sample(rng)
        phi = channels.dephase(s.rho, s.obs_b, "B")
        m_phi = channels.monitor(phi, s.obs_b, s.eps_b, "B")
        phi_m = channels.dephase(channels.monitor(s.rho, s.obs_b, s.eps_b, "B"), s.obs_b, "B")
        worst = max(worst, np.max(np.abs(m_phi.matrix - phi.matrix)),
                    np.max(np.abs(phi_m.matrix - phi.matrix)))
    return worst


def check_iterated_monitoring(rng, samples):
    worst = 0.0
    for _ in range(samples):
        s = random_sample(rng)
        n = int(rng.integers(0, 21))
        closed = channels.monitor_iterated(s.rho, s.obs_a, s.eps_a, "A", n)
        steps = s.rho
        for _ in range(n):
            steps = channels.monitor(steps, s.obs_a, s.eps_a, "A")
        worst = max(worst, np.max(np.abs(closed.matrix - steps.matrix)))
    return worst


def check_projective_limit(rng, samples):
    worst = 0.0
    for _ in range(samples):
        s = random_sample(rng)
        eps = float(rng.uniform(0.1, 1.0))
        many = channels.monitor_iterated(s.rho, s.obs_b, eps, "B", 200)
        phi = channels.dephase(s.rho, s.obs_b, "B")
        worst = max(worst, np.max(np.abs(many.matrix - phi.matrix)))
    return worst


def check_entropy_monotonicity(rng, samples):
    worst = 0.0
    for _ in range(samples):
        s = random_sample(rng)
        n = int(rng.integers(1, 6))
        s_rho = q.vn_entropy(s.rho)
        s_mon = q.vn_entropy(channels.monitor_iterated(s.rho, s.obs_a, s.eps_a, "A", n))
        s_phi = q.vn_entropy(channels.dephase(s.rho, s.obs_a, "A"))
        worst = max(worst, s_mon - s_phi, s_rho - s_mon)
    return worst


def check_delta_nonnegative(rng, samples):
    worst = 0.0
    for _ in range(samples):
        s = random_sample(rng)
        worst = max(worst, -q.delta(s.obs_a, s.obs_b, s.rho, s.eps_a, s.eps_b))
    return worst


def check_delta_equality_cases(rng, samples):
    """Zero for product states and for states with reality of either observable."""
    worst = 0.0
    for _ in range(samples):
        s = random_sample(rng)
        prod = DensityMatrix(np.kron(s.rho.reduced("A"), s.rho.reduced("B")), s.rho.dA, s.rho.dB)
        real_a = channels.dephase(s.rho, s.obs_a, "A")
        real_b = channels.dephase(s.rho, s.obs_b, "B")
        for state in (prod, real_a, real_b):
            worst = max(worst, abs(q.delta(s.obs_a, s.obs_b, state, s.eps_a, s.eps_b)))
    return worst


def check_irreality_monotonicity(rng, samples):
    """Monitoring on the remote side, or of ``A`` itself, never raises ``A``'s irreality."""
    worst = 0.0
    for _ in range(samples):
        s = random_sample(rng)
        base = q.irreality(s.obs_a, s.rho, "A")
        remote = q.irreality(s.obs_a, channels.monitor(s.rho, s.obs_b, s.eps_b, "B"), "A")
        local = q.irreality(s.obs_a, channels.monitor(s.rho, s.obs_a, s.eps_a, "A"), "A")
        worst = max(worst, remote - base, local - base)
    return worst


def check_delta_identities(rng, samples):
    worst = 0.0
    for _ in range(samples):
        s = random_sample(rng)
        a, b, ea, eb = s.obs_a, s.obs_b, s.eps_a, s.eps_b
        d = q.delta(a, b, s.rho, ea, eb)
        via_b = q.delta(a, b, s.rho, ea, 1.0) - q.delta(a, b, channels.monitor(s.rho, b, eb, "B"), ea, 1.0)
        via_a = q.delta(a, b, s.rho, 1.0, eb) - q.delta(a, b, channels.monitor(s.rho, a, ea, "A"), 1.0, eb)
        worst = max(worst, abs(d - via_b), abs(d - via_a))
    return worst


def check_telescoping(rng, samples):
    worst = 0.0
    for _ in range(samples):
        s = random_sample(rng)
        a, b, eps = s.obs_a, s.obs_b, s.eps_b
        n = int(rng.integers(0, 21))
        total = sum(q.delta(a, b, channels.monitor_iterated(s.rho, b, eps, "B", k), 1.0, eps)
                    for k in range(n + 1))
        eps_n = 1.0 - (1.0 - eps) ** (n + 1)
        worst = max(worst, abs(total - q.delta(a, b, s.rho, 1.0, eps_n)))
    return worst


def check_eta_forms(rng, samples):
    """Symmetric and conditional forms agree, and swapping the parties leaves the value unchanged."""
    worst = 0.0
    for _ in range(samples):
        s = random_sample(rng)
        e5 = q.eta(s.obs_a, s.obs_b, s.rho)
        e3 = q.eta_conditional(s.obs_a, s.obs_b, s.rho)
        swap = _swap_parties(s.rho)
        e_swapped = q.eta(s.obs_b, s.obs_a, swap)
        worst = max(worst, abs(e5 - e3), abs(e5 - e_swapped), -e5)
    return worst


def _swap_parties(rho: DensityMatrix) -> DensityMatrix:
    t = rho.matrix.reshape(rho.dA, rho.dB, rho.dA, rho.dB).transpose(1, 0, 3, 2)
    return DensityMatrix(t.reshape(rho.dim, rho.dim), rho.dB, rho.dA)


def check_reality_gain_sandwich(rng, samples):
    worst = 0.0
    for _ in range(samples):
        s = random_sample(rng)
        gain = q.reality_gain(s.obs_b, s.rho, s.eps_b, "B")
        irr = q.irreality(s.obs_b, s.rho, "B")
        gamma = q.gamma_bound(s.obs_b, s.rho, s.eps_b, "B")
        worst = max(worst, s.eps_b * irr - gain, gain - irr, gain - gamma)
    return worst


def check_gamma_bound(rng, samples):
    """``gain <= Gamma < d sqrt(eps tau / e)`` whenever ``tau > 1e-6``."""
    worst = 0.0
    for _ in range(samples):
        s = random_sample(rng)
        tau = trace_distance(channels.dephase(s.rho, s.obs_b, "B").matrix, s.rho.matrix)
        if tau <= 1e-6:
            continue
        gain = q.reality_gain(s.obs_b, s.rho, s.eps_b, "B")
        gamma = q.gamma_bound(s.obs_b, s.rho, s.eps_b, "B")
        envelope = q.gamma_sqrt_bound(s.obs_b, s.rho, s.eps_b, "B")
        worst = max(worst, gain - gamma, gamma - envelope)
    return worst


def check_relative_entropy_form(rng, samples):
    worst = 0.0
    for _ in range(samples):
        s = random_sample(rng)
        phi = channels.dephase(s.rho, s.obs_a, "A")
        worst = max(worst, abs(q.relative_entropy(s.rho, phi) - q.irreality(s.obs_a, s.rho, "A")))
    return worst


def check_classical_classical_identity(rng, samples):
    """For ``sum p_l A'_l (x) B'_l`` and Fourier partners of ``A'``, ``B'``: ``eta = H(p)``."""
    worst = 0.0
    for _ in range(samples):
        d = int(rng.integers(2, 4))
        p = rng.dirichlet(np.ones(d))
        ea = random_observable(d, rng)
        eb = random_observable(d, rng)
        rho = classical_classical_state(p, ea.projectors, eb.projectors)
        value = q.eta(mub_partner(ea), mub_partner(eb), rho)
        worst = max(worst, abs(value - q.shannon_entropy(p)))
    return worst


def check_mub_overlaps(rng, samples):
    worst = 0.0
    for _ in range(samples):
        d = int(rng.integers(2, 6))
        obs = random_observable(d, rng)
        partner = mub_partner(obs)
        overlaps = np.array([[np.trace(a @ f).real for f in partner.projectors]
                             for a in obs.projectors])
        worst = max(worst, np.max(np.abs(overlaps * d - 1.0)))
    return worst


def check_schmidt_spectrum(rng, samples):
    worst = 0.0
    for _ in range(samples):
        dA, dB = DIMS[rng.integers(len(DIMS))]
        psi = random_pure(dA, dB, seed=rng)
        form = schmidt_decompose(psi)
        reduced = partial_trace(np.outer(psi.amplitudes, psi.amplitudes.conj()), dA, dB, "A")
        eig = hermitian_eig(reduced).eigenvalues[: len(form.coefficients)]
        fidelity = abs(np.vdot(form.state_vector(), psi.amplitudes)) ** 2
        worst = max(worst, np.max(np.abs(form.coefficients - eig)), 1.0 - fidelity)
    return worst


@dataclass(frozen=True)
class Property:
    name: str
    tol: float
    check: Callable


PROPERTIES = (
    Property("eig_reconstruction", 1e-9, check_eig_reconstruction),
    Property("partial_trace_of_product", 1e-12, check_partial_trace_product),
    Property("trace_distance_metric", 1e-10, check_trace_distance_metric),
    Property("channel_trace_and_positivity", 1e-10, check_channel_validity),
    Property("monitor_dephase_commutation", 1e-12, check_monitor_commutation),
    Property("iterated_monitoring_closed_form", 1e-12, check_iterated_monitoring),
    Property("projective_limit_n200", 1e-8, check_projective_limit),
    Property("entropy_monotonicity", 1e-10, check_entropy_monotonicity),
    Property("delta_nonnegative", 1e-10, check_delta_nonnegative),
    Property("delta_equality_cases", 1e-10, check_delta_equality_cases),
    Property("irreality_monotonicity", 1e-10, check_irreality_monotonicity),
    Property("delta_identities", 1e-12, check_delta_identities),
    Property("delta_telescoping", 1e-10, check_telescoping),
    Property("eta_forms_and_symmetry", 1e-12, check_eta_forms),
    Property("reality_gain_sandwich", 1e-10, check_reality_gain_sandwich),
    Property("gamma_bound", 1e-10, check_gamma_bound),
    Property("relative_entropy_equals_irreality", 1e-10, check_relative_entropy_form),
    Property("classical_classical_eta", 1e-10, check_classical_classical_identity),
    Property("mub_overlaps", 1e-10, check_mub_overlaps),
    Property("schmidt_spectrum", 1e-10, check_schmidt_spectrum),
)


def run_all(seed: int = 0, samples: int = 100) -> list:
    """Run every property; returns dicts with name, samples, max_violation, tol, passed."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    results = []
    for k, prop in enumerate(PROPERTIES):
        rng = np.random.default_rng([seed, k])
        worst = float(prop.check(rng, samples))
        results.append({"property": prop.name, "samples": samples,
                        "max_violation": worst, "tol": prop.tol, "passed": worst <= prop.tol})
    return results
