"""Generalized Pauli operators, the POVM/observable Fourier pair, correlators."""

import numpy as np
import pytest

import steercert as sc


def comp_basis_povm(d):
    els = [np.zeros((d, d), dtype=complex) for _ in range(d)]
    for a in range(d):
        els[a][a, a] = 1.0
    return sc.Povm(els)


def test_generalized_pauli_values():
    assert np.allclose(sc.generalized_pauli(2, "Z"), np.diag([1.0, -1.0]), atol=1e-12)
    w = np.exp(2j * np.pi / 3)
    assert np.allclose(
        sc.generalized_pauli(3, "Z"), np.diag([1.0, w, w**2]), atol=1e-12
    )
    x3 = sc.generalized_pauli(3, "X")
    ket2 = np.array([0.0, 0.0, 1.0])
    assert np.allclose(x3 @ ket2, [1.0, 0.0, 0.0], atol=1e-12)  # cyclic wrap


def test_generalized_pauli_weyl_relation():
    for d in range(2, 7):
        z = sc.generalized_pauli(d, "Z")
        x = sc.generalized_pauli(d, "X")
        w = sc.omega(d)
        assert np.allclose(z @ x, w * x @ z, atol=1e-12)
        assert np.allclose(np.linalg.matrix_power(z, d), np.eye(d), atol=1e-12)
        assert np.allclose(np.linalg.matrix_power(x, d), np.eye(d), atol=1e-12)


def test_generalized_pauli_domain():
    with pytest.raises(sc.DomainError):
        sc.generalized_pauli(1, "Z")
    with pytest.raises(sc.DomainError):
        sc.generalized_pauli(3, "Y")


def test_povm_to_observable_computational():
    g = sc.povm_to_observable(comp_basis_povm(2))
    assert np.allclose(g.operators[1], np.diag([1.0, -1.0]), atol=1e-12)


def test_povm_to_observable_b0_is_identity():
    rng = np.random.default_rng(2)
    for d in (2, 3, 5):
        g = sc.povm_to_observable(sc.random_povm(d, d, rng))
        assert np.allclose(g.operators[0], np.eye(d), atol=1e-12)


def test_povm_to_observable_uniform_noise():
    g = sc.povm_to_observable(sc.Povm([np.eye(3, dtype=complex) / 3] * 3))
    assert np.allclose(g.operators[1], 0, atol=1e-12)
    assert np.allclose(g.operators[2], 0, atol=1e-12)


def test_observable_to_povm_projective_cases():
    z2 = sc.GeneralizedObservable.from_unitary(sc.generalized_pauli(2, "Z"), 2)
    p = sc.observable_to_povm(z2)
    assert np.allclose(p.elements[0], np.diag([1.0, 0.0]), atol=1e-12)
    assert np.allclose(p.elements[1], np.diag([0.0, 1.0]), atol=1e-12)

    zeros = sc.GeneralizedObservable(
        np.stack([np.eye(3, dtype=complex), np.zeros((3, 3)), np.zeros((3, 3))])
    )
    p = sc.observable_to_povm(zeros)
    for e in p.elements:
        assert np.allclose(e, np.eye(3) / 3, atol=1e-12)

    x3 = sc.GeneralizedObservable.from_unitary(sc.generalized_pauli(3, "X"), 3)
    p = sc.observable_to_povm(x3)
    # X_3 eigenvector with eigenvalue omega^a has components omega^{-aj}/sqrt(3)
    f = np.exp(-2j * np.pi * np.outer(np.arange(3), np.arange(3)) / 3) / np.sqrt(3)
    for a in range(3):
        proj = np.outer(f[:, a], f[:, a].conj())
        assert np.allclose(p.elements[a], proj, atol=1e-12)


def test_observable_to_povm_rejects_negative():
    # B_1 = B_2 = -I is norm-compliant yet gives element (1-2)/3 < 0 at b=0
    eye = np.eye(3, dtype=complex)
    bad = sc.GeneralizedObservable(np.stack([eye, -eye, -eye]))
    with pytest.raises(sc.InvalidObservableError):
        sc.observable_to_povm(bad)


def test_fourier_round_trip_random_povms():
    rng = np.random.default_rng(42)
    for _ in range(200):
        d = int(rng.integers(2, 7))
        p = sc.random_povm(d, d, rng)
        q = sc.observable_to_povm(sc.povm_to_observable(p))
        for e1, e2 in zip(p.elements, q.elements):
            assert np.max(np.abs(e1 - e2)) < 1e-12


def test_is_projective_examples():
    z3 = sc.GeneralizedObservable.from_unitary(sc.generalized_pauli(3, "Z"), 3)
    ok, info = sc.is_projective(z3)
    assert ok and info["unitarity"] < 1e-12

    noisy = sc.povm_to_observable(sc.Povm([np.eye(3, dtype=complex) / 3] * 3))
    ok, _ = sc.is_projective(noisy)
    assert not ok

    z = sc.generalized_pauli(3, "Z")
    shrunk = sc.GeneralizedObservable(
        np.stack([np.eye(3, dtype=complex), 0.99 * z, 0.99 * z @ z])
    )
    ok, info = sc.is_projective(shrunk)
    assert not ok
    assert abs(info["unitarity"] - (1 - 0.99**2) * np.sqrt(3)) < 1e-12


def test_random_projective_observables_are_unit_norm():
    rng = np.random.default_rng(8)
    for d in (2, 3, 4):
        u = sc.haar_unitary(d, rng)
        p = sc.Povm([np.outer(u[:, a], u[:, a].conj()) for a in range(d)])
        g = sc.povm_to_observable(p)
        ok, _ = sc.is_projective(g)
        assert ok
        for k in range(1, d):
            assert abs(np.linalg.norm(g.operators[k], 2) - 1.0) < 1e-9


def test_unitary_observable_povm_recovers_projectors():
    z3 = sc.generalized_pauli(3, "Z")
    p = sc.unitary_observable_povm(z3, 3)
    for a in range(3):
        e = np.zeros((3, 3))
        e[a, a] = 1.0
        assert np.allclose(p.elements[a], e, atol=1e-12)


def test_correlation_table_validation():
    good = np.full((1, 1, 3, 3), 1.0 / 9)
    sc.CorrelationTable(good)
    bad = good.copy()
    bad[0, 0, 0, 0] = 0.5  # slice no longer sums to one
    with pytest.raises(sc.DomainError):
        sc.CorrelationTable(bad)


def test_correlator_examples():
    bell = sc.schmidt_state(sc.maximally_entangled(2))
    comp = comp_basis_povm(2)
    t = sc.table_from_realization(bell, [comp], [comp])
    assert abs(sc.correlator(t, 0, 0, 0, 0) - 1.0) < 1e-12
    assert abs(sc.correlator(t, 1, 1, 0, 0) - 1.0) < 1e-12

    flat = sc.CorrelationTable(np.full((1, 1, 3, 3), 1.0 / 9))
    assert abs(sc.correlator(flat, 1, 0, 0, 0)) < 1e-12


def test_correlator_conjugate_symmetry_and_bound():
    rng = np.random.default_rng(31)
    d = 3
    amps = rng.normal(size=d * d) + 1j * rng.normal(size=d * d)
    psi = sc.Ket(amps / np.linalg.norm(amps), (d, d))
    t = sc.table_from_realization(
        psi, [sc.random_povm(d, d, rng)], [sc.random_povm(d, d, rng)]
    )
    for k in range(d):
        for l in range(d):
            v = sc.correlator(t, k, l, 0, 0)
            assert abs(v) <= 1 + 1e-9
            partner = sc.correlator(t, (d - k) % d, (d - l) % d, 0, 0)
            assert abs(partner - np.conj(v)) < 1e-12


def test_correlator_index_errors():
    t = sc.CorrelationTable(np.full((1, 1, 2, 2), 0.25))
    with pytest.raises(IndexError):
        sc.correlator(t, 0, 0, 1, 0)
    with pytest.raises(IndexError):
        sc.correlator(t, 0, 0, 0, -1)
    # exponents wrap modulo d so the (d-k, d-l) symmetry holds at k=l=0 too
    assert abs(sc.correlator(t, 2, 0, 0, 0) - sc.correlator(t, 0, 0, 0, 0)) < 1e-12


def test_table_from_realization_examples():
    bell = sc.schmidt_state(sc.maximally_entangled(2))
    comp = comp_basis_povm(2)
    t = sc.table_from_realization(bell, [comp], [comp])
    assert np.allclose(t.p[0, 0], np.eye(2) / 2, atol=1e-12)

    prod = sc.Ket(np.array([1.0, 0.0, 0.0, 0.0]), (2, 2))
    t = sc.table_from_realization(prod, [comp], [comp])
    assert abs(t.p[0, 0, 0, 0] - 1.0) < 1e-12

    skew = sc.schmidt_state(sc.SchmidtVector(np.array([np.sqrt(3) / 2, 0.5])))
    t = sc.table_from_realization(skew, [comp], [comp])
    assert abs(t.p[0, 0, 0, 0] - 0.75) < 1e-12
    assert abs(t.p[0, 0, 1, 1] - 0.25) < 1e-12


def test_povm_container_checks():
    with pytest.raises(sc.SizeError):
        sc.Povm([np.eye(2, dtype=complex), np.eye(3, dtype=complex)])
    p = comp_basis_povm(3)
    assert p.dim == 3 and p.n_outcomes == 3
