from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitdisc import constructions as cons
from unitdisc.discrimination import diamond_distance
from unitdisc.errors import (
    BoundViolation,
    DimensionMismatch,
    NotAnEigenstate,
    NotAReflection,
    NotNormalized,
    ParamOutOfRange,
    WrongCase,
)
from unitdisc.linalg import dagger, expm_hermitian, ket, random_state, random_unitary
from unitdisc.simulator import (
    H_GATE,
    PLUS,
    apply,
    brute_force_distinguishability,
    check_state,
    copy_from_reflection,
    entropy_estimate,
    hamsim_discriminator,
    heisenberg_sweep,
    measure_prob,
    one_bit_qpe,
    purity,
    query_circuit_advantage,
    reflection_state,
    repeated_qpe_prob,
    run_experiment,
    swap_operator,
    swap_test,
    wilson_halfwidth,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)


def test_check_state():
    with pytest.raises(NotNormalized):
        check_state([1, 1])


def test_apply_examples():
    psi = random_state(4, np.random.default_rng(0))
    assert np.allclose(apply(np.eye(2), psi, [1]), psi)
    assert np.allclose(apply(X, ket(0, 2)), ket(1, 2))
    # X on the second qubit of |00> gives |01>
    assert np.allclose(apply(X, ket(0, 4), [1]), ket(1, 4))
    assert np.allclose(apply(X, ket(0, 4), [0]), ket(2, 4))
    with pytest.raises(DimensionMismatch):
        apply(np.eye(3), ket(0, 4), [0])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_apply_inverse_roundtrip(seed):
    rng = np.random.default_rng(seed)
    psi = random_state(12, rng)
    U = random_unitary(3, rng)
    out = apply(dagger(U), apply(U, psi, [1], (2, 3, 2)), [1], (2, 3, 2))
    assert np.max(np.abs(out - psi)) <= 1e-9


def test_apply_matches_kron_on_two_subsystems():
    rng = np.random.default_rng(4)
    psi = random_state(8, rng)
    U = random_unitary(4, rng)
    assert np.allclose(apply(U, psi, [1, 2]), np.kron(np.eye(2), U) @ psi)


def test_measure_prob():
    assert measure_prob(ket(0, 2), 0, 0) == pytest.approx(1)
    assert measure_prob(PLUS, 0, 1) == pytest.approx(0.5)
    assert measure_prob(ket(1, 4), 1, 1) == pytest.approx(1)


def test_one_bit_qpe():
    assert one_bit_qpe(cons.phase_gate(0.0), ket(0, 2)) == pytest.approx(0, abs=1e-15)
    assert one_bit_qpe(cons.phase_gate(0.5), ket(0, 2)) == pytest.approx(1)
    assert one_bit_qpe(cons.phase_gate(1 / 16), ket(0, 2)) == pytest.approx(0.0380602337, abs=1e-9)
    with pytest.raises(NotAnEigenstate):
        one_bit_qpe(cons.phase_gate(0.1), PLUS)
    with pytest.raises(DimensionMismatch):
        one_bit_qpe(cons.phase_gate(0.1), ket(0, 4))


@given(st.floats(0, 1, exclude_max=True))
def test_one_bit_qpe_formula(theta):
    p = one_bit_qpe(cons.phase_gate(theta), ket(0, 2))
    # |(1 - e^{2 pi i theta}) / 2|^2
    direct = abs((1 - np.exp(2j * math.pi * theta)) / 2) ** 2
    assert p == pytest.approx(direct, abs=1e-12)


def test_repeated_qpe_prob():
    eps = 0.03
    probs = repeated_qpe_prob(cons.phase_gate(eps), ket(0, 2), 10)
    assert np.allclose(probs, np.sin(math.pi * np.arange(1, 11) * eps) ** 2)
    assert np.allclose(repeated_qpe_prob(np.eye(2), ket(0, 2), 5), 0)


def test_swap_operator():
    S = swap_operator((2, 2), 0, 1)
    assert np.allclose(S @ np.kron(ket(0, 2), ket(1, 2)), np.kron(ket(1, 2), ket(0, 2)))
    with pytest.raises(DimensionMismatch):
        swap_operator((2, 3), 0, 1)


def test_swap_test_examples():
    assert swap_test(ket(0, 4)) == pytest.approx(1)
    assert swap_test(cons.bell_state()) == pytest.approx(0.75)
    assert swap_test(cons.entangled_state(0.25)) == pytest.approx(0.8125)
    with pytest.raises(DimensionMismatch):
        swap_test(ket(0, 4), (3, 2))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_swap_test_matches_purity(seed):
    psi = random_state(6, np.random.default_rng(seed))
    assert swap_test(psi, (2, 3)) == pytest.approx(0.5 + 0.5 * purity(psi, (2, 3)), abs=1e-12)


def test_reflection_state():
    psi = cons.entangled_state(0.3)
    v = reflection_state(cons.reflection_about(psi))
    assert abs(np.vdot(v, psi)) == pytest.approx(1)
    with pytest.raises(NotAReflection):
        reflection_state(np.diag([1, 1j]))
    with pytest.raises(NotAReflection):
        reflection_state(np.diag([-1, -1, 1]))


def test_copy_from_reflection():
    psi = cons.entangled_state(0.25)
    U = cons.reflection_about(psi)
    results = [copy_from_reflection(U, seed) for seed in range(200)]
    assert all(r.queries == 1 for r in results)
    assert results[0].success_prob == pytest.approx((1 + math.sqrt(0.25)) / 2)
    for r in results:
        if r.succeeded:
            assert abs(np.vdot(psi, r.state)) ** 2 == pytest.approx(1)
    rate = np.mean([r.succeeded for r in results])
    assert abs(rate - 0.75) < 0.12
    # same seed, same outcome
    assert copy_from_reflection(U, 5).succeeded == copy_from_reflection(U, 5).succeeded


def test_copy_success_is_overlap_with_start():
    psi = cons.bell_state()
    U = cons.reflection_about(psi)
    # success probability equals |<start|psi>|^2
    assert copy_from_reflection(U, 0).success_prob == pytest.approx(0.5)
    assert copy_from_reflection(U, 0, start=psi).success_prob == pytest.approx(1)


def test_entropy_estimate_bell_state():
    U = cons.reflection_about(cons.bell_state())
    est = entropy_estimate(U, math.log(2), 0.2, seed=1)
    assert est.copies == 2 * est.swap_tests
    assert est.queries == 2 * est.copies
    assert est.precision == pytest.approx(0.2 * 0.5 / 4)
    assert abs(est.estimate - math.log(2)) <= 0.05
    again = entropy_estimate(U, math.log(2), 0.2, seed=1)
    assert again == est


def test_entropy_estimate_product_state():
    U = cons.reflection_about(ket(0, 4))
    est = entropy_estimate(U, math.log(2), 0.4, seed=2)
    assert est.estimate == pytest.approx(0, abs=0.1)


def test_entropy_estimate_rejects():
    U = cons.reflection_about(cons.bell_state())
    with pytest.raises(ParamOutOfRange):
        entropy_estimate(U, 0.1, 0.2, seed=0)  # true entropy ln 2 > S_upper
    with pytest.raises(ParamOutOfRange):
        entropy_estimate(U, math.log(2), 0.0, seed=0)
    with pytest.raises(ParamOutOfRange):
        entropy_estimate(cons.reflection_about(ket(0, 2)), 0.1, 0.2, seed=0)


def test_hamsim_discriminator():
    for tp in (1.0, 2.0, 8.0):
        assert hamsim_discriminator(cons.hamsim_pair(tp)) == pytest.approx(1, abs=1e-9)
    c = cons.hamsim_pair(1.0)
    same = tuple(expm_hermitian(c.hamiltonians[0], 2 * math.pi) for _ in range(2))
    assert hamsim_discriminator(c, same) == pytest.approx(0, abs=1e-12)
    with pytest.raises(WrongCase):
        hamsim_discriminator(cons.qpe_pair(0.1))


def test_hamsim_discriminator_with_perturbed_evolutions():
    c = cons.hamsim_pair(1.0)
    rng = np.random.default_rng(0)
    for _ in range(20):
        exact = [expm_hermitian(H, 2 * math.pi) for H in c.hamiltonians]
        noisy = []
        for V in exact:
            # a small random rotation; its channel distance from identity stays below 1/3
            W = random_unitary(2, rng)
            E = W @ np.diag(np.exp(1j * rng.uniform(-0.15, 0.15, 2))) @ dagger(W)
            assert diamond_distance(E, np.eye(2)) <= 1 / 3
            noisy.append(E @ V)
        assert hamsim_discriminator(c, noisy) >= 1 / 3


def test_brute_force():
    U = random_unitary(2, np.random.default_rng(0))
    assert brute_force_distinguishability(U, U, 1000) == pytest.approx(0, abs=1e-7)
    iz = brute_force_distinguishability(np.eye(2), np.diag([1, -1]), 10_000)
    assert iz == pytest.approx(1, abs=5e-3)
    c = cons.qpe_pair(0.25)
    assert brute_force_distinguishability(c.U1, c.U2, 10_000) >= 0.702
    with pytest.raises(ParamOutOfRange):
        brute_force_distinguishability(U, U, 10)


def test_brute_force_never_exceeds_closed_form():
    rng = np.random.default_rng(3)
    for _ in range(5):
        U1, U2 = random_unitary(2, rng), random_unitary(2, rng)
        found = brute_force_distinguishability(U1, U2, 2000, seed=1)
        assert found <= diamond_distance(U1, U2) + 1e-9


def test_run_experiment():
    r = run_experiment(0.3)
    assert r.trials == 0 and r.empirical_prob == 0.3 and r.consistent
    r = run_experiment(0.3, trials=2000, seed=4, queries_used=2)
    assert r.queries_used == 4000
    assert r.consistent
    assert r.ci95_halfwidth == pytest.approx(wilson_halfwidth(r.successes, 2000))
    assert run_experiment(0.3, 500, 9) == run_experiment(0.3, 500, 9)
    with pytest.raises(ParamOutOfRange):
        run_experiment(0.3, trials=10)
    d = r.as_dict()
    assert d["seed"] == 4 and d["consistent"] is True


def test_wilson_halfwidth():
    assert wilson_halfwidth(0, 0) == 0
    assert 0 < wilson_halfwidth(50, 100) < 0.1
    assert wilson_halfwidth(100, 100) > 0


@pytest.mark.parametrize("controlled_queries", [True, False])
def test_query_circuit_advantage_respects_hybrid_bound(controlled_queries):
    rng = np.random.default_rng(12)
    for T in (1, 3, 8):
        U1 = random_unitary(2, rng)
        V = random_unitary(2, rng)
        U2 = U1 @ V @ np.diag(np.exp(1j * np.array([0.0, 0.2]))) @ dagger(V)
        half = diamond_distance(U1, U2)
        for seed in range(5):
            adv = query_circuit_advantage(U1, U2, T, seed, controlled_queries)
            assert adv <= min(1.0, T * half) + 1e-12


def test_heisenberg_sweep():
    rows = heisenberg_sweep([0.05, 0.01, 0.002])
    by_eps = {r.epsilon: r for r in rows}
    assert by_eps[0.01].t_min == 20
    for r in rows:
        assert r.t_lower_bound <= r.t_min <= 4 * r.t_lower_bound
        assert r.advantage_at_lower_bound <= r.advantage_bound_at_lower_bound
    # inverse-linear scaling between neighbours
    assert by_eps[0.01].t_min / by_eps[0.05].t_min == pytest.approx(5, rel=0.25)
    assert by_eps[0.002].t_min / by_eps[0.01].t_min == pytest.approx(5, rel=0.25)


def test_heisenberg_sweep_rejects():
    with pytest.raises(ParamOutOfRange):
        heisenberg_sweep([])
    with pytest.raises(ParamOutOfRange):
        heisenberg_sweep([0.2])
    with pytest.raises(ParamOutOfRange):
        heisenberg_sweep([0.01], advantage_target=0)
    with pytest.raises(BoundViolation):
        heisenberg_sweep([0.01], advantage_target=0.999, ratio_max=1.0)


def test_h_gate():
    assert np.allclose(H_GATE @ H_GATE, np.eye(2))
