"""Built-in example matrices and a seeded generator of factorable instances."""

from __future__ import annotations

import numpy as np

from .laurent import LaurentPoly, MatrixLaurent, Signature


def indefinite_2x2():
    """A 2x2 indefinite Hermitian example with a known closed-form factor.

    Returns (S, S_known, signature).  The determinant of S vanishes at
    z = +-1, so this exercises the boundary-singular path end to end:
    S = S_known diag(-1, 1) S_known~*.
    """
    S = MatrixLaurent.from_rows(
        [
            [LaurentPoly(-1, [-8, -19, -8]), LaurentPoly(-1, [-39, -73, -28])],
            [LaurentPoly(-1, [-28, -73, -39]), LaurentPoly(-1, [-137, -286, -137])],
        ]
    )
    S_known = MatrixLaurent.from_rows(
        [
            [LaurentPoly(0, [4, 2]), LaurentPoly(0, [1])],
            [LaurentPoly(0, [14, 10]), LaurentPoly(0, [3, 1])],
        ]
    )
    return S, S_known, Signature((-1, 1))


def _random_outer_poly(rng, degree, radius_band=(1.3, 2.5)):
    """c * prod(1 - z/w) with |w| in the band: causal, stable, positive at 0."""
    p = LaurentPoly.constant(rng.uniform(0.5, 2.0))
    for _ in range(degree):
        radius = rng.uniform(*radius_band)
        angle = rng.uniform(0.0, 2 * np.pi)
        w = radius * np.exp(1j * angle)
        p = p * LaurentPoly(0, [1.0, -1.0 / w])
    return p


def _random_causal_poly(rng, degree, scale=1.0):
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    return LaurentPoly(0, scale * c)


def random_triangular_factor(r, degree, seed, scale=1.0):
    """Random lower-triangular causal A with outer diagonal entries."""
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(r):
        row = []
        for j in range(r):
            if j > i:
                row.append(LaurentPoly.zero())
            elif j == i:
                row.append(_random_outer_poly(rng, degree))
            else:
                row.append(_random_causal_poly(rng, degree, scale))
        rows.append(row)
    return MatrixLaurent.from_rows(rows)


def signature_matrix(signature):
    return MatrixLaurent.from_rows(
        [
            [LaurentPoly.constant(signature[i] if i == j else 0.0) for j in range(len(signature))]
            for i in range(len(signature))
        ]
    )


def random_instance(r, signature, degree, seed, scale=1.0):
    """S = A J A~* with lower-triangular causal stable A.

    The triangular structure makes every leading principal minor of S equal
    to prod(J_k) |prod diag(A)_k|^2, so the instance always admits the
    factorization and check_minor_signs recovers ``signature`` exactly.

    Returns (S, A).
    """
    if isinstance(signature, str):
        signature = Signature.from_string(signature)
    elif not isinstance(signature, Signature):
        signature = Signature(signature)
    if len(signature) != r:
        raise ValueError("signature length must equal r")
    A = random_triangular_factor(r, degree, seed, scale)
    S = A @ signature_matrix(signature) @ A.hermitian_conjugate()
    return S, A
