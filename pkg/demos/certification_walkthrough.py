#!/usr/bin/env python3
"""Certifying a black-box realization, then breaking it on purpose.

Bob's measurement device is untrusted: all we assume is that someone
hands us a state and two d-outcome observables which together claim the
maximal steering value.  The certifier checks the value, the stabilizer
residuals, projectivity and the Weyl commutation relation.  Passing all
of them pins the realization down to the ideal one up to a local
isometry, which extract_bob_unitary then constructs explicitly.
"""

import numpy as np

import steercert as sc

D = 3
JUNK, EVE = 2, 2


def report_line(rep):
    per_k = ", ".join(f"{x:.2e}" for x in rep.stabilizer_residuals)
    comm = "skipped" if rep.commutation_residual is None else f"{rep.commutation_residual:.2e}"
    print(f"  verdict {rep.verdict:<10} value {rep.value:+.9f}  "
          f"stabilizers [{per_k}]  s_op {rep.s_residual:.2e}  commutation {comm}")
    for msg in rep.failures:
        print(f"    failure: {msg}")


def main():
    rng = np.random.default_rng(12)
    sv = sc.random_schmidt_vector(D, rng)
    f = sc.functional_coefficients(sv)
    print(f"alpha = {np.round(sv.alpha, 4)}, gamma = {f.gamma:.4f}")

    honest = sc.dress_realization(sc.ideal_realization(sv), JUNK, EVE, seed=5)
    print(f"\nhonest device, Bob hidden in dim {D * JUNK} with an Eve register:")
    report_line(sc.certify(f, honest))

    print("\nsame device, observables reported in the wrong order:")
    swapped = sc.Realization(
        honest.state, honest.alice_observables, honest.bob_observables[::-1]
    )
    report_line(sc.certify(f, swapped))

    print("\nsame device, 1% depolarized first observable:")
    ops = honest.bob_observables[0].operators.copy()
    ops[1:] = 0.99 * ops[1:]
    noisy = sc.Realization(
        honest.state,
        honest.alice_observables,
        [sc.GeneralizedObservable(ops), honest.bob_observables[1]],
    )
    report_line(sc.certify(f, noisy))

    print("\nundoing the honest dressing:")
    u = sc.extract_bob_unitary(honest)
    db = honest.state.factor_dims[1]
    amps = honest.state.amplitudes.reshape(D, db, -1)
    rot = np.einsum("ij,ajc->aic", u, amps).reshape(D, D, db // D, -1)
    w = np.einsum("a,aamc->mc", sv.alpha, rot)
    recon = np.einsum("a,ab,mc->abmc", sv.alpha, np.eye(D), w)
    print(f"  rotated state minus psi(alpha) x junk: "
          f"{np.linalg.norm(rot - recon):.2e} (Frobenius)")
    b0 = honest.bob_observables[0].operators[1]
    target = np.kron(sc.generalized_pauli(D, "Z").conj(), np.eye(db // D))
    print(f"  U B0 U* minus Z* x 1: {np.max(np.abs(u @ b0 @ sc.dagger(u) - target)):.2e}")


if __name__ == "__main__":
    main()
