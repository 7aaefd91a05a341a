"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected into a terminal-summary section so they are
visible in a plain ``pytest`` run without ``-s``.
"""

import time
from functools import lru_cache

import numpy as np

from rbn import channels, quantifiers as q
from rbn.linalg import trace_distance
from rbn.observables import ProjectiveObservable, computational, mub_partner
from rbn.optimizer import OptimizerConfig, bilocal_suppression, local_suppression, max_context_rbn
from rbn.properties import random_sample
from rbn.states import DensityMatrix, classical_classical_state, psi_alpha, random_pure, two_parameter_state

from conftest import record_criterion

GRID11 = np.round(np.linspace(0.0, 1.0, 11), 12)
THEOREM_DIMS = ((2, 2), (2, 3), (3, 3))
CFG = OptimizerConfig()


@lru_cache(maxsize=None)
def werner_local(beta, eps):
    rho = two_parameter_state(0.5, beta)
    return local_suppression(rho, eps, CFG, n_value=werner_n(beta))


@lru_cache(maxsize=None)
def werner_n(beta):
    return max_context_rbn(two_parameter_state(0.5, beta), CFG).value


@lru_cache(maxsize=None)
def pure_local(alpha, eps):
    return local_suppression(psi_alpha(alpha).density(), eps, CFG)


@lru_cache(maxsize=None)
def werner_bilocal(beta, eps):
    return bilocal_suppression(two_parameter_state(0.5, beta), eps, eps, CFG,
                               local_value=werner_local(beta, eps).value)


def samples(seed, count, dims=THEOREM_DIMS):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield rng, random_sample(rng, dims)


def test_criterion_01_werner_closed_form():
    start = time.perf_counter()
    worst = max(abs(werner_local(b, e).value - q.closed_form_werner_suppression(b, e))
                for b in GRID11 for e in GRID11)
    elapsed = time.perf_counter() - start
    spot = werner_local(1.0, 0.6).value
    full = werner_local(1.0, 1.0).value
    ok = (worst < 1e-4 and abs(spot - 0.6109) < 5e-5 and abs(full - np.log(2)) < 1e-6
          and elapsed < 60.0)
    assert record_criterion(1, "Werner local suppression vs closed form", ok,
                            f"max dev {worst:.2e} (<1e-4), beta=1 eps=0.6 -> {spot:.7f}, "
                            f"eps=1 -> ln2 {abs(full - np.log(2)):.1e}, {elapsed:.1f}s (<60s)")


def test_criterion_02_pure_closed_form():
    worst = max(abs(pure_local(a, e).value - q.closed_form_pure_suppression(a, e))
                for a in GRID11 for e in GRID11)
    limit0 = max(abs(pure_local(a, 0.0).value) for a in GRID11)
    limit1 = max(abs(pure_local(a, 1.0).value - q.binary_entropy(a)) for a in GRID11)
    ok = worst < 1e-4 and limit0 < 1e-6 and limit1 < 1e-6
    assert record_criterion(2, "pure-state local suppression vs closed form", ok,
                            f"max dev {worst:.2e} (<1e-4), eps=0 limit {limit0:.1e}, "
                            f"eps=1 limit vs E {limit1:.1e} (<1e-6)")


def test_criterion_03_pure_state_rbn_is_entanglement():
    worst = 0.0
    for seed in range(50):
        psi = random_pure(2, 2, seed=1000 + seed)
        worst = max(worst, abs(max_context_rbn(psi.density(), CFG).value - q.entanglement_entropy(psi)))
    assert record_criterion(3, "N = entanglement entropy on 50 pure states", worst < 1e-5,
                            f"max |N - E| {worst:.2e} (<1e-5)")


def test_criterion_04_theorem_suite():
    lowest, equality = np.inf, 0.0
    for _, s in samples(4, 2000):
        lowest = min(lowest, q.delta(s.obs_a, s.obs_b, s.rho, s.eps_a, s.eps_b))
        prod = DensityMatrix(np.kron(s.rho.reduced("A"), s.rho.reduced("B")), s.rho.dA, s.rho.dB)
        for state in (prod, channels.dephase(s.rho, s.obs_a, "A"), channels.dephase(s.rho, s.obs_b, "B")):
            equality = max(equality, abs(q.delta(s.obs_a, s.obs_b, state, s.eps_a, s.eps_b)))
    ok = lowest >= -1e-10 and equality < 1e-10
    assert record_criterion(4, "delta >= 0 and its equality cases (2000 tuples)", ok,
                            f"min delta {lowest:.2e} (>=-1e-10), max |delta| at equality {equality:.2e} (<1e-10)")


def coarse_grained(obs: ProjectiveObservable) -> ProjectiveObservable:
    """Merge the first two projectors (a function of ``obs``, hence commuting with it)."""
    if len(obs.projectors) < 3:
        return obs
    merged = (obs.projectors[0] + obs.projectors[1],) + obs.projectors[2:]
    return ProjectiveObservable(merged, tuple(range(len(merged))))


def test_criterion_05_irreality_monotonicity():
    # O on the remote side, O = A, or O a coarse-graining of A: all commute with A.
    worst = -np.inf
    for rng, s in samples(5, 2000):
        base = q.irreality(s.obs_a, s.rho, "A")
        eps = float(rng.uniform())
        for o, side in ((s.obs_b, "B"), (s.obs_a, "A"), (coarse_grained(s.obs_a), "A")):
            after = q.irreality(s.obs_a, channels.monitor(s.rho, o, eps, side), "A")
            worst = max(worst, after - base)
    assert record_criterion(5, "irreality never grows under monitoring (2000 tuples)", worst <= 1e-10,
                            f"max increase {worst:.2e} (<=1e-10)")


def test_criterion_06_identities_and_telescoping():
    ident, tele = 0.0, 0.0
    for rng, s in samples(6, 500):
        a, b, ea, eb = s.obs_a, s.obs_b, s.eps_a, s.eps_b
        d = q.delta(a, b, s.rho, ea, eb)
        ident = max(ident,
                    abs(d - (q.delta(a, b, s.rho, ea, 1.0)
                             - q.delta(a, b, channels.monitor(s.rho, b, eb, "B"), ea, 1.0))),
                    abs(d - (q.delta(a, b, s.rho, 1.0, eb)
                             - q.delta(a, b, channels.monitor(s.rho, a, ea, "A"), 1.0, eb))))
        n = int(rng.integers(0, 21))
        total = sum(q.delta(a, b, channels.monitor_iterated(s.rho, b, eb, "B", k), 1.0, eb)
                    for k in range(n + 1))
        tele = max(tele, abs(total - q.delta(a, b, s.rho, 1.0, 1.0 - (1.0 - eb) ** (n + 1))))
    ok = ident < 1e-10 and tele < 1e-10
    assert record_criterion(6, "delta difference identities and telescoping sum (500 tuples)", ok,
                            f"identities {ident:.2e}, telescoping {tele:.2e} (<1e-10)")


def test_criterion_07_bound_chain():
    worst = np.inf
    for eps in (0.1, 0.6):
        for beta in GRID11:
            n, loc, bi = werner_n(beta), werner_local(beta, eps).value, werner_bilocal(beta, eps).value
            worst = min(worst, bi, loc - bi, n - loc)
    full = max(abs(werner_bilocal(b, 1.0).value - q.closed_form_werner_suppression(b, 1.0)) for b in GRID11)
    ok = worst >= -1e-8 and full < 1e-6
    assert record_criterion(7, "0 <= bilocal <= local <= N on the Werner family", ok,
                            f"min slack {worst:.2e} (>=-1e-8), eps=1 bilocal vs closed form {full:.1e}")


def test_criterion_08_bounds_at_argmax():
    worst, caption = -np.inf, 0.0
    for eps in (0.1, 0.6):
        for p in GRID11:
            w = werner_local(p, eps)
            worst = max(worst, w.bounds.violation(w.value))
            caption = max(caption, abs(w.bounds.lb2 - w.bounds.lb1), abs(w.bounds.ub2 - werner_n(p)))
            pr = pure_local(p, eps)
            worst = max(worst, pr.bounds.violation(pr.value))
            bi = werner_bilocal(p, eps)
            worst = max(worst, bi.bounds.lb1_bi - bi.value, bi.value - bi.bounds.ub1_bi)
    ok = worst <= 1e-8 and caption <= 1e-8
    assert record_criterion(8, "local and bilocal bounds at every argmax", ok,
                            f"max violation {worst:.2e} (<=1e-8), |LB2-LB1|,|UB2-N| {caption:.2e} (<=1e-8)")


def test_criterion_09_hierarchy():
    details, ok = [], True
    basis = computational(2)
    partner = mub_partner(basis)
    for p in ((0.5, 0.5), (0.75, 0.25)):
        rho = classical_classical_state(p, basis.projectors, basis.projectors)
        h = q.shannon_entropy(p)
        e = q.eta(partner, partner, rho)
        n = max_context_rbn(rho, CFG).value
        ok &= abs(e - h) < 1e-10 and n >= h - 1e-6
        details.append(f"p={p}: |eta-H| {abs(e - h):.1e}, N-H {n - h:+.1e}")
    assert record_criterion(9, "classical-classical states carry RBN = H(p)", ok, "; ".join(details))


def test_criterion_10_channel_algebra():
    absorb, closed, limit = 0.0, 0.0, 0.0
    for rng, s in samples(10, 500):
        for o, side, eps in ((s.obs_a, "A", s.eps_a), (s.obs_b, "B", s.eps_b)):
            phi = channels.dephase(s.rho, o, side)
            absorb = max(absorb,
                         np.max(np.abs(channels.monitor(phi, o, eps, side).matrix - phi.matrix)),
                         np.max(np.abs(channels.dephase(channels.monitor(s.rho, o, eps, side), o, side).matrix
                                       - phi.matrix)))
        n = int(rng.integers(0, 21))
        step = s.rho
        for _ in range(n):
            step = channels.monitor(step, s.obs_a, s.eps_a, "A")
        closed = max(closed, np.max(np.abs(channels.monitor_iterated(s.rho, s.obs_a, s.eps_a, "A", n).matrix
                                           - step.matrix)))
    for rng, s in samples(100, 50):
        eps = float(rng.uniform(0.1, 1.0))
        step = s.rho
        for _ in range(200):
            step = channels.monitor(step, s.obs_b, eps, "B")
        limit = max(limit, np.max(np.abs(step.matrix - channels.dephase(s.rho, s.obs_b, "B").matrix)))
    ok = absorb < 1e-12 and closed < 1e-12 and limit < 1e-8
    assert record_criterion(10, "monitoring absorbs dephasing; n-fold closed form; 200-fold limit", ok,
                            f"absorption {absorb:.1e}, closed form {closed:.1e} (<1e-12), "
                            f"200 steps vs dephasing {limit:.1e} (<1e-8)")


def test_criterion_11_gamma_bound():
    used, gap_gain, gap_env = 0, -np.inf, -np.inf
    rng = np.random.default_rng(11)
    while used < 500:
        s = random_sample(rng)
        tau = trace_distance(channels.dephase(s.rho, s.obs_b, "B").matrix, s.rho.matrix)
        if tau <= 1e-6:
            continue
        used += 1
        gain = q.reality_gain(s.obs_b, s.rho, s.eps_b, "B")
        gamma = q.gamma_bound(s.obs_b, s.rho, s.eps_b, "B")
        gap_gain = max(gap_gain, gain - gamma)
        gap_env = max(gap_env, gamma - q.gamma_sqrt_bound(s.obs_b, s.rho, s.eps_b, "B"))
    ok = gap_gain <= 1e-10 and gap_env < 0
    assert record_criterion(11, "reality gain <= Gamma < d sqrt(eps tau / e) (500 tuples)", ok,
                            f"max(gain - Gamma) {gap_gain:.2e}, max(Gamma - envelope) {gap_env:.2e}")
