"""JSON encoding of the package's core objects.

Complex numbers serialize as two-element [re, im] arrays and matrices as
row-major nested lists, so files stay language-neutral and diffable.
Loaders rebuild the validated dataclasses, re-running their invariant
checks in the process.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .linalg import Ket
from .measurements import CorrelationTable, GeneralizedObservable, Povm
from .states import Realization


def complex_to_json(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(v) -> complex:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise DomainError(f"complex entries must be [re, im], got {v!r}")
    return complex(float(v[0]), float(v[1]))


def vector_to_json(v: np.ndarray) -> list:
    return [complex_to_json(z) for z in np.asarray(v).reshape(-1)]


def vector_from_json(data) -> np.ndarray:
    return np.array([complex_from_json(v) for v in data], dtype=np.complex128)


def matrix_to_json(m: np.ndarray) -> list:
    m = np.asarray(m)
    return [[complex_to_json(z) for z in row] for row in m]


def matrix_from_json(data) -> np.ndarray:
    return np.array(
        [[complex_from_json(v) for v in row] for row in data], dtype=np.complex128
    )


def ket_to_json(k: Ket) -> dict:
    return {
        "amplitudes": vector_to_json(k.amplitudes),
        "factor_dims": [int(d) for d in k.factor_dims],
    }


def ket_from_json(data) -> Ket:
    return Ket(
        amplitudes=vector_from_json(data["amplitudes"]),
        factor_dims=tuple(int(d) for d in data["factor_dims"]),
    )


def povm_to_json(p: Povm) -> dict:
    return {"elements": [matrix_to_json(e) for e in p.elements]}


def povm_from_json(data) -> Povm:
    return Povm(
        elements=np.stack([matrix_from_json(e) for e in data["elements"]])
    )


def observable_to_json(g: GeneralizedObservable) -> dict:
    return {"operators": [matrix_to_json(op) for op in g.operators]}


def observable_from_json(data) -> GeneralizedObservable:
    return GeneralizedObservable(
        operators=np.stack([matrix_from_json(op) for op in data["operators"]])
    )


def realization_to_json(r: Realization) -> dict:
    return {
        "state": ket_to_json(r.state),
        "alice_observables": [matrix_to_json(a) for a in r.alice_observables],
        "bob_observables": [observable_to_json(g) for g in r.bob_observables],
    }


def realization_from_json(data) -> Realization:
    return Realization(
        state=ket_from_json(data["state"]),
        alice_observables=[matrix_from_json(a) for a in data["alice_observables"]],
        bob_observables=[observable_from_json(g) for g in data["bob_observables"]],
    )


def table_to_json(t: CorrelationTable) -> dict:
    return {
        "d": t.d,
        "nx": t.nx,
        "ny": t.ny,
        "p": [[[list(map(float, row)) for row in block] for block in slab] for slab in t.p],
    }


def table_from_json(data) -> CorrelationTable:
    p = np.asarray(data["p"], dtype=float)
    t = CorrelationTable(p=p)
    if t.d != int(data["d"]) or t.nx != int(data["nx"]) or t.ny != int(data["ny"]):
        raise DomainError("correlation table header disagrees with its array")
    return t
