"""Construction of the J-unitary polynomial corrector from a truncated last row.

Given the last row (zeta_1, ..., zeta_{m-1}, f+) of the current partial
factor, the corrector is found by solving m structured linear systems whose
unknowns are the coefficient vectors of the candidate columns.  The columns
share the same core matrix Delta; its dense solve is the slow-but-sure route,
and the displacement route (see ``displacement``) is the fast one.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .displacement import delta_generator, factor_from_generator
from .errors import (
    CSignatureMismatch,
    DeltaSingular,
    HyperbolicBreakdown,
    SingularD,
)
from .laurent import LaurentPoly, MatrixLaurent, grid_points

_COND_LIMIT = 1e12
_RELDET_FLOOR = 1e-12
_Z0_COND_LIMIT = 1e10


@dataclass(frozen=True)
class CorrectorInput:
    """Truncated last-row data feeding one corrector solve.

    ``zetas`` live in powers [-degree, 0], ``fplus`` in [0, degree] with a
    nonzero constant term; ``signs`` are the working signature entries for
    indices 1..m-1 (the final index is normalized to +1 by the caller).
    """

    zetas: tuple
    fplus: LaurentPoly
    signs: tuple
    degree: int

    def __post_init__(self):
        if len(self.signs) != len(self.zetas):
            raise ValueError("need one sign per zeta")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +-1")
        N = self.degree
        if N < 0:
            raise ValueError("degree must be nonnegative")
        for z in self.zetas:
            if not z.is_zero() and (z.lowest < -N or z.highest > 0):
                raise ValueError(f"zeta powers {z.lowest}..{z.highest} outside [-{N}, 0]")
        f = self.fplus
        if f.lowest < 0 or f.highest > N:
            raise ValueError(f"fplus powers {f.lowest}..{f.highest} outside [0, {N}]")
        if abs(f.coeff(0)) <= 1e-13 * f.max_abs():
            raise SingularD("constant term of fplus vanishes")

    @property
    def m(self):
        return len(self.zetas) + 1

    def d_vector(self):
        d = np.zeros(self.degree + 1, dtype=np.complex128)
        for k in range(self.fplus.lowest, self.fplus.highest + 1):
            d[k] = self.fplus.coeff(k)
        return d

    def gamma_vectors(self):
        out = []
        for z in self.zetas:
            g = np.zeros(self.degree + 1, dtype=np.complex128)
            for k in range(z.lowest, min(z.highest, 0) + 1):
                g[-k] = z.coeff(k)
            out.append(g)
        return out


@dataclass(frozen=True)
class CorrectorSystem:
    """Assembled blocks of the coefficient equations for one corrector."""

    D: np.ndarray
    gammas: tuple
    thetas: tuple
    delta: np.ndarray
    signs: tuple
    input: CorrectorInput


def assemble_system(cin):
    """Build D (upper-triangular Toeplitz), the Hankel blocks, and Delta."""
    d = cin.d_vector()
    if d[0] == 0:
        raise SingularD("constant term of fplus vanishes")
    N1 = cin.degree + 1
    D = sla.toeplitz(np.concatenate([d[:1], np.zeros(N1 - 1)]), d)
    gammas = []
    thetas = []
    delta = np.eye(N1, dtype=np.complex128)
    for g, s in zip(cin.gamma_vectors(), cin.signs):
        G = sla.hankel(g, np.concatenate([g[-1:], np.zeros(N1 - 1)]))
        T = sla.solve_triangular(D, G)
        delta += s * (T @ T.conj().T)
        gammas.append(G)
        thetas.append(T)
    return CorrectorSystem(
        D=D,
        gammas=tuple(gammas),
        thetas=tuple(thetas),
        delta=delta,
        signs=cin.signs,
        input=cin,
    )


@dataclass(frozen=True)
class Corrector:
    """A J-unitary polynomial corrector U with its solution matrix V.

    Rows 1..m-1 of U are causal of degree <= N; the last row is the adjoint
    of such a row.  C is the constant Gram V(z0)* J V(z0) and C0 satisfies
    C = C0 J C0* with U = V C0^{-*}.
    """

    U: MatrixLaurent
    V: MatrixLaurent
    det_u: complex
    C: np.ndarray
    C0: np.ndarray
    signs: tuple
    degree: int
    diagnostics: dict = field(default_factory=dict)


class _DenseDelta:
    """LU-backed solves with the singularity guard."""

    def __init__(self, delta):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", sla.LinAlgWarning)
            self.lu, self.piv = sla.lu_factor(delta)
        anorm = np.linalg.norm(delta, 1)
        rcond, _ = sla.lapack.zgecon(self.lu, anorm)
        diag = np.abs(np.diag(self.lu))
        with np.errstate(divide="ignore"):
            logdet = float(np.sum(np.log(diag)))
            hadamard = float(np.sum(np.log(np.linalg.norm(delta, axis=1))))
        rel_det = np.exp(logdet - hadamard) if np.isfinite(logdet) else 0.0
        self.rcond = float(rcond)
        self.rel_det = float(rel_det)
        if self.rcond < 1.0 / _COND_LIMIT or self.rel_det < _RELDET_FLOOR:
            raise DeltaSingular(
                f"core system is numerically singular "
                f"(rcond {self.rcond:.3g}, relative det {self.rel_det:.3g})"
            )

    def solve(self, b):
        return sla.lu_solve((self.lu, self.piv), b)


def _hankel_matvec(g, v):
    """(Hankel from first column g) @ v without forming the matrix."""
    n = len(g)
    conv = np.convolve(g, v[::-1])
    return conv[n - 1 : 2 * n - 1]


def solve_corrector(cin, method="auto", z0=1.0, check_grid=64):
    """Solve the m coefficient systems, assemble V, and normalize it to U.

    method: "dense", "displacement", or "auto" (displacement with dense
    fallback on hyperbolic breakdown).
    """
    if method not in ("auto", "dense", "displacement"):
        raise ValueError(f"unknown method {method!r}")
    m, N = cin.m, cin.degree
    N1 = N + 1
    d = cin.d_vector()
    if d[0] == 0:
        raise SingularD("constant term of fplus vanishes")

    used = method
    diagnostics = {}
    gammas = cin.gamma_vectors()

    D = sla.toeplitz(np.concatenate([d[:1], np.zeros(N1 - 1)]), d)
    e1 = np.zeros(N1, dtype=np.complex128)
    e1[0] = 1.0
    dinv_e1 = sla.solve_triangular(D, e1)

    solver = None
    if method in ("auto", "displacement"):
        theta_cols = [sla.solve_triangular(D, g) for g in gammas]
        A, gsigns = delta_generator(theta_cols, cin.signs)
        try:
            solver = factor_from_generator(A, gsigns)
            used = "displacement"
        except HyperbolicBreakdown as exc:
            if method == "displacement":
                raise
            warnings.warn(
                f"displacement solver broke down ({exc}); falling back to dense",
                RuntimeWarning,
                stacklevel=2,
            )
            solver = None
    if solver is None:
        system = assemble_system(cin)
        solver = _DenseDelta(system.delta)
        used = "dense"
        diagnostics["delta_rcond"] = solver.rcond
        diagnostics["delta_rel_det"] = solver.rel_det
    diagnostics["solver"] = used

    # right-hand sides of the core equation, one per requested column
    rhs = np.zeros((N1, m), dtype=np.complex128)
    for j in range(m - 1):
        u = _hankel_matvec(gammas[j], np.conj(dinv_e1))
        rhs[:, j] = cin.signs[j] * sla.solve_triangular(D, u)
    rhs[:, m - 1] = e1

    xm_bar = solver.solve(rhs)  # conj(X_m), one column per j

    # back-substitution for X_1..X_{m-1}
    X = np.zeros((m, m, N1), dtype=np.complex128)
    X[m - 1] = np.conj(xm_bar).T
    for j in range(m):
        xm = X[m - 1, j]
        for i in range(m - 1):
            v = np.conj(sla.solve_triangular(D, _hankel_matvec(gammas[i], xm)))
            if i == j:
                v = v - np.conj(dinv_e1)
            X[i, j] = cin.signs[i] * v

    rows = []
    for i in range(m - 1):
        rows.append([LaurentPoly(0, X[i, j]) for j in range(m)])
    rows.append([LaurentPoly(0, X[m - 1, j]).tilde() for j in range(m)])
    V = MatrixLaurent.from_rows(rows)

    return _normalize(V, cin, z0, check_grid, diagnostics)


def _normalize(V, cin, z0, check_grid, diagnostics):
    m, N = cin.m, cin.degree
    signs_full = np.array(list(cin.signs) + [1.0])
    J = np.diag(signs_full)

    V0 = V.evaluate(z0)
    use_z0 = np.linalg.cond(V0) <= _Z0_COND_LIMIT
    if not use_z0:
        # fall back to the sample point maximizing |det V|
        pts = grid_points(check_grid)
        dets = [abs(np.linalg.det(V.evaluate(z))) for z in pts]
        z0 = pts[int(np.argmax(dets))]
        V0 = V.evaluate(z0)

    C = V0.conj().T @ J @ V0
    C = 0.5 * (C + C.conj().T)
    lam, W = np.linalg.eigh(C)
    want_pos = int(np.sum(signs_full > 0))
    # Sylvester's law forces the right inertia whenever V0 is invertible, so a
    # mismatch only ever signals numerical degeneracy of the Gram.
    lam_floor = 1e-12 * np.abs(lam).max()
    n_pos = int(np.sum(lam > lam_floor))
    n_neg = int(np.sum(lam < -lam_floor))
    if n_pos != want_pos or n_neg != m - want_pos:
        raise CSignatureMismatch(
            f"constant Gram has inertia ({n_pos}, {n_neg}); expected "
            f"({want_pos}, {m - want_pos}) - degenerate or inconsistent input"
        )

    if use_z0:
        C0 = V0.conj().T
        B = np.linalg.inv(V0)
        diagnostics["normalization"] = f"reference point z0={z0!r}"
    else:
        # split C = C0 J C0* by the signed eigendecomposition
        order = np.argsort(-lam)  # positives first
        lam, W = lam[order], W[:, order]
        C0 = np.zeros((m, m), dtype=np.complex128)
        pos_slots = [k for k, s in enumerate(signs_full) if s > 0]
        neg_slots = [k for k, s in enumerate(signs_full) if s < 0]
        for idx, k in enumerate(pos_slots):
            C0[:, k] = W[:, idx] * np.sqrt(lam[idx])
        for idx, k in enumerate(neg_slots):
            C0[:, k] = W[:, want_pos + idx] * np.sqrt(-lam[want_pos + idx])
        B = np.linalg.inv(C0.conj().T)
        diagnostics["normalization"] = f"eigen split at z={z0!r}"

    U = _right_multiply(V, B)

    pts = grid_points(check_grid)
    uvals = np.array([U.evaluate(z) for z in pts])
    defect = np.abs(uvals @ J @ np.conj(np.transpose(uvals, (0, 2, 1))) - J).max()
    dets = np.array([np.linalg.det(u) for u in uvals])
    det_u = complex(dets.mean())
    det_spread = float(np.abs(dets - det_u).max() / max(abs(det_u), 1e-300))
    diagnostics["junitarity_defect"] = float(defect)
    diagnostics["det_constancy"] = det_spread
    diagnostics["fu_causality"] = _fu_leakage(cin, U)

    return Corrector(
        U=U,
        V=V,
        det_u=det_u,
        C=C,
        C0=C0,
        signs=cin.signs,
        degree=N,
        diagnostics=diagnostics,
    )


def _right_multiply(V, B):
    """V @ B for a constant matrix B, staying in Laurent arithmetic."""
    m = V.rows
    rows = []
    for i in range(m):
        row = []
        for j in range(B.shape[1]):
            acc = LaurentPoly.zero()
            for k in range(m):
                acc = acc + V.entry(i, k) * complex(B[k, j])
            row.append(acc)
        rows.append(row)
    return MatrixLaurent.from_rows(rows)


def _fu_leakage(cin, U):
    """Relative size of negative-power coefficients of F U."""
    m = cin.m
    rows = [
        [LaurentPoly.constant(1.0 if i == j else 0.0) for j in range(m)]
        for i in range(m - 1)
    ]
    rows.append(list(cin.zetas) + [cin.fplus])
    FU = MatrixLaurent.from_rows(rows) @ U
    scale = max(FU.max_abs(), 1e-300)
    worst = 0.0
    for e in FU.entries:
        neg = e.anticausal_part()
        if not neg.is_zero():
            worst = max(worst, neg.max_abs())
    return worst / scale


def verify_lemma1(V, signs, tol_scale=None):
    """Largest non-constant coefficient of the pairwise column invariants.

    For columns j, l of the solution matrix the combination
    sum_k J_k V[k][j] tilde(V[k][l]) + V[m][j] tilde(V[m][l]) must be a
    constant; returns the max modulus of any non-constant coefficient.
    """
    m = V.rows
    signs_full = list(signs) + [1]
    worst = 0.0
    for j in range(m):
        for l in range(m):
            acc = LaurentPoly.zero()
            for k in range(m):
                acc = acc + V.entry(k, j) * V.entry(k, l).tilde() * float(signs_full[k])
            nonconst = acc - LaurentPoly.constant(acc.coeff(0))
            if not nonconst.is_zero():
                worst = max(worst, nonconst.max_abs())
    return worst
