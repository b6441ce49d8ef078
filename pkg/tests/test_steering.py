"""Steering functional coefficients, quantum value, LHS bounds."""

import numpy as np
import pytest

import steercert as sc


def four_strategy_oracle(alpha):
    """d=2 deterministic-Bob bound written out with explicit projectors."""
    a0, a1 = alpha
    gamma = 2.0 / (a0 / a1 + a1 / a0)
    p0 = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    h = np.full((2, 2), 0.5)
    p1 = [h, np.diag([1.0, 1.0]) - h]
    penalty = gamma * (a0 + a1) * (p0[0] / a0 + p0[1] / a1)
    best = -np.inf
    for b0 in range(2):
        for b1 in range(2):
            m = 2 * p0[(-b0) % 2] + gamma * 2 * p1[(-b1) % 2] - penalty
            best = max(best, np.linalg.eigvalsh(m)[-1])
    return best


def test_coefficients_mes():
    for d in (2, 3, 5):
        f = sc.functional_coefficients(sc.maximally_entangled(d))
        assert abs(f.gamma - 1.0 / (d - 1)) < 1e-12
        assert abs(f.delta[0] + 1.0) < 1e-12
        assert np.all(np.abs(f.delta[1:]) < 1e-12)


def test_coefficients_skewed_qubit():
    f = sc.functional_coefficients(sc.SchmidtVector(np.array([np.sqrt(3) / 2, 0.5])))
    assert abs(f.gamma - np.sqrt(3) / 2) < 1e-12
    assert abs(f.delta[1] - 0.5) < 1e-12


def test_delta0_always_minus_one():
    rng = np.random.default_rng(12)
    for d in (2, 3, 4, 6):
        for _ in range(10):
            f = sc.functional_coefficients(sc.random_schmidt_vector(d, rng))
            assert abs(f.delta[0] + 1.0) < 1e-12


def test_quantum_maximum_is_d():
    for d in (2, 3, 7):
        f = sc.functional_coefficients(sc.maximally_entangled(d))
        assert sc.quantum_maximum(f) == d


def test_steering_operator_d2_mes():
    sv = sc.maximally_entangled(2)
    op = sc.steering_operator(
        sc.functional_coefficients(sv), sc.ideal_realization(sv)
    )
    z = sc.generalized_pauli(2, "Z")
    x = sc.generalized_pauli(2, "X")
    expect = sc.tensor(z, z.conj()) + sc.tensor(x, x)
    assert np.allclose(op, expect, atol=1e-12)


def test_steering_operator_top_eigenvalue_is_d():
    rng = np.random.default_rng(14)
    for d in (2, 3, 5):
        sv = sc.random_schmidt_vector(d, rng)
        op = sc.steering_operator(
            sc.functional_coefficients(sv), sc.ideal_realization(sv)
        )
        assert np.max(np.abs(op - sc.dagger(op))) < 1e-9
        vals, _ = sc.hermitian_eig(op)
        assert abs(vals[0] - d) < 1e-9


def test_steering_operator_zero_bob_mes():
    # with delta_k = 0 for k >= 1 only the -1 identity term could survive,
    # and the k=0 term is excluded, so everything cancels
    d = 3
    sv = sc.maximally_entangled(d)
    zeros = sc.GeneralizedObservable(
        np.stack([np.eye(d, dtype=complex)] + [np.zeros((d, d))] * (d - 1))
    )
    r = sc.Realization(
        sc.schmidt_state(sv),
        [sc.generalized_pauli(d, "Z"), sc.generalized_pauli(d, "X")],
        [zeros, zeros],
    )
    op = sc.steering_operator(sc.functional_coefficients(sv), r)
    assert np.max(np.abs(op)) < 1e-12


def test_steering_operator_size_mismatch():
    f = sc.functional_coefficients(sc.maximally_entangled(2))
    r = sc.ideal_realization(sc.maximally_entangled(3))
    with pytest.raises(sc.SizeError):
        sc.steering_operator(f, r)


def test_evaluate_ideal():
    rng = np.random.default_rng(15)
    for d in (2, 3, 4):
        for _ in range(5):
            sv = sc.random_schmidt_vector(d, rng)
            f = sc.functional_coefficients(sv)
            assert abs(sc.evaluate(f, sc.ideal_realization(sv)) - d) < 1e-9


def test_evaluate_closed_form_qubit():
    a0, a1 = np.sqrt(3) / 2, 0.5
    sv = sc.SchmidtVector(np.array([a0, a1]))
    val = sc.evaluate(sc.functional_coefficients(sv), sc.ideal_realization(sv))
    closed = 1 + 4 * a0**2 * a1**2 + (a0**2 - a1**2) ** 2
    assert abs(closed - 2.0) < 1e-12
    assert abs(val - closed) < 1e-12


def test_evaluate_never_beats_quantum_bound():
    rng = np.random.default_rng(16)
    for d in (2, 3, 4):
        f = sc.functional_coefficients(sc.maximally_entangled(d))
        for _ in range(60):
            amps = rng.normal(size=d * d) + 1j * rng.normal(size=d * d)
            psi = sc.Ket(amps / np.linalg.norm(amps), (d, d))
            obs = []
            for _ in range(4):
                u = sc.haar_unitary(d, rng)
                w = sc.omega(d)
                obs.append(u @ np.diag(w ** np.arange(d)) @ sc.dagger(u))
            bob = [sc.GeneralizedObservable.from_unitary(b, d) for b in obs[2:]]
            r = sc.Realization(psi, obs[:2], bob)
            assert sc.evaluate(f, r) <= d + 1e-9


def test_lhs_exact_d2_against_enumeration_oracle():
    mes = sc.functional_coefficients(sc.maximally_entangled(2))
    lo = sc.lhs_bound_exact(mes)
    assert abs(lo.value - np.sqrt(2)) < 1e-9
    assert lo.method == "exact"

    rng = np.random.default_rng(18)
    for _ in range(20):
        sv = sc.random_schmidt_vector(2, rng)
        lo = sc.lhs_bound_exact(sc.functional_coefficients(sv))
        assert abs(lo.value - four_strategy_oracle(sv.alpha)) < 1e-12


def test_lhs_exact_skewed_qubit_frozen():
    sv = sc.SchmidtVector(np.array([np.sqrt(3) / 2, 0.5]))
    lo = sc.lhs_bound_exact(sc.functional_coefficients(sv))
    assert 1.0 <= lo.value < 2.0
    assert abs(lo.value - np.sqrt(3)) < 1e-12  # quirky but exact


def test_lhs_exact_below_quantum():
    rng = np.random.default_rng(19)
    for d in (2, 3, 4):
        for _ in range(8):
            f = sc.functional_coefficients(sc.random_schmidt_vector(d, rng))
            assert sc.lhs_bound_exact(f).value < d


def test_lhs_exact_ignores_alice_dressing():
    rng = np.random.default_rng(20)
    for d in (2, 3):
        sv = sc.random_schmidt_vector(d, rng)
        f = sc.functional_coefficients(sv)
        base = sc.lhs_bound_exact(f).value
        u = sc.haar_unitary(2 * d, rng)
        eye = np.eye(2)
        big = [
            u @ np.kron(sc.generalized_pauli(d, k), eye) @ sc.dagger(u)
            for k in ("Z", "X")
        ]
        dressed = sc.lhs_bound_exact(f, alice_observables=big).value
        assert abs(dressed - base) < 1e-9


def test_lhs_upper_d2_mes():
    f = sc.functional_coefficients(sc.maximally_entangled(2))
    up = sc.lhs_bound_paper_upper(f, restarts=8, seed=0)
    assert abs(up.value - np.sqrt(2)) < 1e-6
    # optimizer lands on the known stationary direction
    assert np.allclose(
        np.sort(np.abs(up.eta))[::-1],
        [np.cos(np.pi / 8), np.sin(np.pi / 8)],
        atol=1e-6,
    )


def test_lhs_upper_dominates_exact():
    rng = np.random.default_rng(22)
    for d in (2, 3, 4):
        for _ in range(6):
            f = sc.functional_coefficients(sc.random_schmidt_vector(d, rng))
            lo = sc.lhs_bound_exact(f)
            up = sc.lhs_bound_paper_upper(f, restarts=6, seed=1)
            assert up.value >= lo.value - 1e-7
            assert up.value < d


def test_violation_gap_examples():
    bq, bl, gap = sc.violation_gap(sc.functional_coefficients(sc.maximally_entangled(2)))
    assert (bq, bl) == (2.0, pytest.approx(np.sqrt(2), abs=1e-12))
    assert abs(gap - (2 - np.sqrt(2))) < 1e-12

    _, _, gap3 = sc.violation_gap(sc.functional_coefficients(sc.maximally_entangled(3)))
    assert gap3 > 0


def test_violation_gap_closes_toward_product_state():
    # alpha = (cos t, sin t): the violation fades as the state disentangles
    gaps = []
    for theta in (0.7, 0.5, 0.3, 0.15, 0.08):
        sv = sc.SchmidtVector(np.array([np.cos(theta), np.sin(theta)]))
        gaps.append(sc.violation_gap(sc.functional_coefficients(sv))[2])
    assert all(g > 0 for g in gaps)
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
