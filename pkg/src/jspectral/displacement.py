"""Fast triangular factorization of the corrector matrix via displacement structure.

The core matrix Delta of the corrector system satisfies
    Delta - Z Delta Z^H = A J A^H
with Z the upper shift and a thin generator A, so a generalized Schur
elimination factors it in O(m N^2) instead of the O(N^3) dense route.  The
elimination kernel is compiled (Cython) when available, with a pure-numpy
fallback selected at import time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import HyperbolicBreakdown

try:
    from . import _gschur as _kernel

    COMPILED_KERNEL = True
except ImportError:  # pragma: no cover - depends on the build
    from . import _gschur_py as _kernel

    COMPILED_KERNEL = False

from . import _gschur_py


def backend_name():
    return "compiled" if COMPILED_KERNEL else "python"


def upper_shift(n):
    """The n x n nilpotent upper shift (ones on the first superdiagonal)."""
    return np.eye(n, k=1)


def delta_generator(theta_first_cols, signs):
    """Generator (A, generator_signs) of Delta from the Theta first columns.

    A's i-th column is the first column of Theta_i and its last column is the
    last standard basis vector; the signs are the working signature with the
    final +1 appended.
    """
    cols = [np.asarray(c, dtype=np.complex128) for c in theta_first_cols]
    n = len(cols[0]) if cols else None
    if n is None:
        raise ValueError("need at least the dimension to build a generator")
    A = np.zeros((n, len(cols) + 1), dtype=np.complex128)
    for i, c in enumerate(cols):
        A[:, i] = c
    A[-1, -1] = 1.0
    gsigns = np.array(list(signs) + [1.0], dtype=np.float64)
    if gsigns.shape[0] != A.shape[1]:
        raise ValueError("one sign per Theta column is required")
    return A, gsigns


def generator_identity_defect(delta, A, gsigns):
    """|| Delta - Z Delta Z^H - A J A^H || / ||Delta|| (spectral norms)."""
    n = delta.shape[0]
    Z = upper_shift(n)
    R = delta - Z @ delta @ Z.conj().T - A @ np.diag(gsigns) @ A.conj().T
    return float(np.linalg.norm(R, 2) / max(np.linalg.norm(delta, 2), 1e-300))


@dataclass(frozen=True)
class DisplacementFactorization:
    """Triangular factorization of Delta obtained from its generator.

    Holds L and sigma with  flip(Delta)flip = L diag(sigma) L^H, so a solve is
    two triangular sweeps plus index reversals.
    """

    L: np.ndarray
    sigma: np.ndarray

    @property
    def n(self):
        return self.L.shape[0]

    def solve(self, b):
        b = np.asarray(b, dtype=np.complex128)
        flipped = b[::-1] if b.ndim == 1 else b[::-1, :]
        w = sla.solve_triangular(self.L, flipped, lower=True)
        w = (w.T / self.sigma).T if w.ndim > 1 else w / self.sigma
        y = sla.solve_triangular(self.L.conj().T, w, lower=False)
        return y[::-1] if y.ndim == 1 else y[::-1, :]

    def reconstruct(self):
        """Dense Delta back from the factors (diagnostics only)."""
        M = (self.L * self.sigma) @ self.L.conj().T
        return M[::-1, ::-1]


def factor_from_generator(A, gsigns, breakdown_tol=1e-13, force_python=False):
    """Run the Schur elimination on the (row-flipped) generator of Delta."""
    kernel = _gschur_py if force_python else _kernel
    L, sigma, status = kernel.gs_factor(A[::-1, :], gsigns, breakdown_tol)
    if status != -1:
        raise HyperbolicBreakdown(
            f"hyperbolic pivot degenerated at elimination step {status}", step=status
        )
    return DisplacementFactorization(L=L, sigma=sigma)


def displacement_factorize(system, breakdown_tol=1e-13, force_python=False):
    """Factor the Delta of an assembled corrector system through its generator."""
    theta_cols = [T[:, 0] for T in system.thetas]
    A, gsigns = delta_generator(theta_cols, system.signs)
    return factor_from_generator(A, gsigns, breakdown_tol, force_python)
