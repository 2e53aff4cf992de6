"""Scalar spectral factorization f = f+ * conj(f+) on the unit circle.

Two routes: a root-based one for self-adjoint Laurent polynomials (handles
zeros on the circle, which the log-based route cannot), and the classical
Exp-Log construction from positive samples, used as an independent
cross-check and for data that is only available on a grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    NonPositiveSample,
    NotNonnegative,
    PaleyWienerViolation,
    SignMismatch,
    ZeroInput,
)
from .laurent import LaurentPoly, fourier_coeffs_from_samples, grid_points

#: roots with | |root| - 1 | below this are treated as lying on the circle
BOUNDARY_TOL = 1e-7

_NONNEG_TOL = 1e-10
_DEFAULT_GRID = 1024
_EXPLOG_GRID = 4096


@dataclass(frozen=True)
class ScalarFactorResult:
    """A causal spectral factor with its reconstruction residual.

    ``factor`` has lowest power 0 and a real positive constant term;
    ``residual`` is max over the check grid of | |f+(z)|^2 - f(z) |.
    """

    factor: LaurentPoly
    residual: float
    method: str


def _as_selfadjoint(f, tol=1e-10):
    """Validate tilde(f) = f and return the half-order n with f = sum_{-n}^{n}."""
    defect = (f.tilde() - f).max_abs()
    if defect > tol * max(f.max_abs(), 1e-300):
        raise NotNonnegative(f"input is not self-adjoint (defect {defect:.3g})")
    return max(-f.lowest, f.highest)


def _reconstruction_residual(factor, f, grid=_DEFAULT_GRID):
    vals = factor.evaluate_grid(grid)
    target = f.evaluate_grid(grid)
    return float(np.abs(np.abs(vals) ** 2 - target.real).max())


def fejer_riesz(f, grid_size=_DEFAULT_GRID):
    """Root-based spectral factor of a nonnegative self-adjoint Laurent polynomial.

    Roots of z^n f(z) come in pairs (w, 1/conj(w)); the factor keeps the ones
    outside the closed unit disk, plus half of each (necessarily even) root
    cluster on the circle, and is scaled so that |f+|^2 matches f at z=1 (or
    at the sample point maximizing |f+| when z=1 is a root).
    """
    if f.is_zero():
        raise ZeroInput("cannot factor the zero function")
    _as_selfadjoint(f)
    # exact symmetry keeps the end coefficients of z^n f(z) mirrored
    f = (f + f.tilde()) * 0.5
    n = max(-f.lowest, f.highest)
    fmax = f.max_abs()

    vals = f.evaluate_grid(max(grid_size, 2 * f.span)).real
    if vals.min() < -_NONNEG_TOL * fmax:
        raise NotNonnegative(f"input dips to {vals.min():.3g} on the circle")

    if n == 0:
        c = f.coeff(0).real
        factor = LaurentPoly.constant(np.sqrt(c))
        return ScalarFactorResult(factor, _reconstruction_residual(factor, f), "fejer-riesz")

    # coefficients of z^n f(z), ascending; self-adjointness makes the ends mirror
    q = np.zeros(2 * n + 1, dtype=np.complex128)
    ks = f.lowest + np.arange(f.span)
    q[ks + n] = f.coeffs
    roots = np.roots(q[::-1])

    inside = roots[np.abs(roots) < 1.0 - BOUNDARY_TOL]
    outside = roots[np.abs(roots) > 1.0 + BOUNDARY_TOL]
    boundary = roots[np.abs(np.abs(roots) - 1.0) <= BOUNDARY_TOL]

    selected = list(_polish_roots(q, outside))
    selected.extend(_halve_boundary_roots(boundary))
    if len(selected) != n:
        raise NotNonnegative(
            f"root pairing failed: selected {len(selected)} of expected {n}"
        )

    # g(0) = 1, roots exactly `selected`
    g = LaurentPoly.one()
    for w in selected:
        g = g * LaurentPoly(0, [1.0, -1.0 / w])

    gvals = g.evaluate_grid(grid_size)
    z1 = g.evaluate(1.0)
    if abs(z1) ** 2 > 1e-8 * np.abs(gvals).max() ** 2:
        scale_ref = f.evaluate(1.0).real / abs(z1) ** 2
    else:
        gi = int(np.argmax(np.abs(gvals)))
        zi = grid_points(grid_size)[gi]
        scale_ref = f.evaluate(zi).real / abs(gvals[gi]) ** 2
    if scale_ref <= 0:
        raise NotNonnegative("negative scale when matching |f+|^2 to f")
    factor = g * np.sqrt(scale_ref)
    return ScalarFactorResult(factor, _reconstruction_residual(factor, f), "fejer-riesz")


def _polish_roots(q, roots, iters=2):
    """A couple of Newton steps on well-separated roots of sum q_k z^k."""
    dq = q[1:] * np.arange(1, len(q))
    out = np.array(roots, dtype=np.complex128)
    for _ in range(iters):
        pv = np.polyval(q[::-1], out)
        dv = np.polyval(dq[::-1], out)
        ok = np.abs(dv) > 0
        step = np.zeros_like(out)
        step[ok] = pv[ok] / dv[ok]
        cand = out - step
        # keep the update only where it stays clearly outside the circle
        good = np.abs(cand) > 1.0 + BOUNDARY_TOL / 2
        out[good] = cand[good]
    return out


def _halve_boundary_roots(boundary):
    """Cluster circle roots and return each cluster's mean with half multiplicity.

    Nonnegativity forces even multiplicity; the cluster mean of a split double
    root is second-order accurate, so project it back onto the circle and use
    it directly.
    """
    taken = []
    rem = list(boundary)
    while rem:
        w = rem.pop()
        cluster = [w]
        keep = []
        for v in rem:
            if abs(v - w) < 1e-5 or abs(v - 1.0 / np.conj(w)) < 1e-5:
                cluster.append(v)
            else:
                keep.append(v)
        rem = keep
        if len(cluster) % 2 != 0:
            raise NotNonnegative(
                f"boundary root near {w:.6g} has odd multiplicity {len(cluster)}"
            )
        mean = np.mean(cluster)
        mean = mean / abs(mean)
        taken.extend([mean] * (len(cluster) // 2))
    return taken


def exp_log(samples, degree_cap, offset=0.0):
    """Exp-Log spectral factor from strictly positive samples on a uniform grid.

    Takes the log, projects onto the analytic half via the Fourier multiplier,
    exponentiates on the grid, and re-extracts coefficients up to degree_cap.
    """
    samples = np.asarray(samples, dtype=np.float64)
    G = len(samples)
    if samples.min() <= 0.0:
        raise NonPositiveSample(f"min sample {samples.min():.3g} is not positive")
    if samples.min() < 1e-13 * samples.max():
        raise PaleyWienerViolation(
            "samples dip within 1e-13 of zero; boundary zeros need the root-based path"
        )
    if G & (G - 1):
        raise ValueError("grid size must be a power of two")

    c = np.fft.fft(np.log(samples)) / G
    if offset != 0.0:
        ks = np.concatenate([np.arange(G // 2 + 1), np.arange(-G // 2 + 1, 0)])
        c = c * np.exp(-2j * np.pi * offset * ks / G)
    half = np.zeros(G, dtype=np.complex128)
    half[0] = c[0] / 2.0
    half[1 : G // 2] = c[1 : G // 2]
    half[G // 2] = c[G // 2] / 2.0
    if offset != 0.0:
        ks = np.arange(G)
        half = half * np.exp(2j * np.pi * offset * ks / G)
    analytic = np.fft.ifft(half) * G
    fplus_samples = np.exp(analytic)

    factor = fourier_coeffs_from_samples(fplus_samples, 0, degree_cap, offset)
    # rotate the constant term onto the positive real axis
    c0 = factor.coeff(0)
    if c0 != 0:
        factor = factor * (abs(c0) / c0)
    vals = factor.evaluate_grid(G, offset)
    residual = float(np.abs(np.abs(vals) ** 2 - samples).max())
    return ScalarFactorResult(factor, residual, "exp-log")


def exp_log_of_poly(f, degree_cap=None, grid_size=_EXPLOG_GRID):
    """Convenience wrapper sampling a self-adjoint Laurent polynomial."""
    _as_selfadjoint(f)
    if degree_cap is None:
        degree_cap = max(f.highest, 1)
    vals = f.evaluate_grid(grid_size).real
    return exp_log(vals, degree_cap)


def cholesky_scalar_step(s, sign, grid_size=_DEFAULT_GRID):
    """Spectral factor of sign * s, the diagonal step of the triangular recursion."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    g = s * float(sign)
    if not g.is_zero():
        vals = g.evaluate_grid(max(grid_size, 2 * g.span)).real
        if vals.min() < -_NONNEG_TOL * max(g.max_abs(), 1e-300):
            raise SignMismatch(
                f"sign*s dips to {vals.min():.3g} on the circle; wrong minor sign?"
            )
    return fejer_riesz(g, grid_size)
