"""Shared builders used across the test suite.

Everything here is deterministic given an explicit rng or seed; tests that
need fresh randomness construct their own ``np.random.default_rng(seed)``.
"""

import numpy as np

import steercert as sc


def admissible_schmidt(d, rng):
    """Random Schmidt vector whose first d-1 coefficients stay >= 1/d.

    The weighted-projector measurement construction needs element weights
    1/(d*alpha_i)^2 <= 1 for i < d-1, i.e. alpha_i >= 1/d on those slots.
    The last coefficient only has to stay away from zero, so the squared
    coefficients are floored at 1/d^2 and the leftover mass is spread with
    a flat Dirichlet draw.
    """
    floor = 1.0 / d**2
    spare = 1.0 - (d - 1) * floor
    while True:
        w = rng.dirichlet(np.ones(d))
        squares = np.concatenate([floor + w[:-1] * spare, [w[-1] * spare]])
        alpha = np.sqrt(squares)
        if alpha[-1] >= 0.05:
            return sc.SchmidtVector(alpha)


def random_junk_state(junk_dim, eve_dim, rng):
    """Normalized pseudo-random vector on the junk x Eve factor."""
    xi = rng.normal(size=(junk_dim * eve_dim, 2)) @ np.array([1.0, 1.0j])
    return xi / np.linalg.norm(xi)


def dressed_pipeline(d, junk, eve, seed, kind="partial"):
    """Dressed state, observables and measurement sharing one hiding unitary.

    Builds |psi> = (I_A x V x I_E)(|psi(alpha)> x |xi>) with V acting on
    Bob's full d*junk factor, Bob observables V (B_k x I) V*, and the
    measurement V (I_b x I) V*.  Because the same V dresses state,
    observables and measurement, the ideal correlations survive exactly.

    Returns a dict with keys sv, realization, psi4, r_povm, ideal, rho.
    psi4 carries factor dims (d, d, junk, eve) so the residual check can
    address Bob's certified slot separately from the junk.
    """
    rng = np.random.default_rng(seed)
    if kind == "partial":
        sv = admissible_schmidt(d, rng)
        ideal = sc.partial_povm(sv)
    elif kind == "covariant":
        sv = sc.maximally_entangled(d)
        nu = rng.normal(size=(d, 2)) @ np.array([1.0, 1.0j])
        ideal = sc.covariant_povm(d, nu / np.linalg.norm(nu))
    else:
        raise ValueError(kind)

    v = sc.haar_unitary(d * junk, rng)
    xi = random_junk_state(junk, eve, rng)
    amps = np.einsum("i,j->ij", sc.schmidt_state(sv).amplitudes, xi).reshape(-1)
    # reorder (dA, dB, junk, eve) -> (dA, [dB junk], eve) then apply V on the middle
    amps = amps.reshape(d, d, junk, eve).reshape(d, d * junk, eve)
    amps = np.einsum("ij,ajc->aic", v, amps)
    psi3 = sc.Ket(amps.reshape(-1), (d, d * junk, eve))
    psi4 = sc.Ket(amps.reshape(-1), (d, d, junk, eve))

    ones = np.eye(junk)
    zd = sc.generalized_pauli(d, "Z")
    xd = sc.generalized_pauli(d, "X")
    bob = [
        sc.GeneralizedObservable.from_unitary(v @ np.kron(u, ones) @ sc.dagger(v), d)
        for u in (zd.conj(), xd)
    ]
    realization = sc.Realization(psi3, [zd, xd], bob)
    r_povm = sc.Povm([v @ np.kron(e, ones) @ sc.dagger(v) for e in ideal.elements])
    rho = psi3.reduced((1,))
    return {
        "sv": sv,
        "realization": realization,
        "psi4": psi4,
        "r_povm": r_povm,
        "ideal": ideal,
        "rho": rho,
    }
