"""Lower-upper triangular J-factorization S = M J M~* with causal diagonal.

The diagonal entries are spectral factors of ratios of consecutive leading
principal minors, which are honest Laurent polynomials, so the root-based
scalar route applies even when the determinant vanishes on the circle.  The
strictly-lower entries are computed pointwise in the frequency domain and
inverse-transformed once into truncated Laurent windows.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DivisionBlowup, InconstantSign, NotHermitian
from .laurent import (
    LaurentPoly,
    MatrixLaurent,
    Signature,
    auto_grid,
    fourier_coeffs_from_samples,
    laurent_det,
)
from .scalar import cholesky_scalar_step

_HERMITIAN_TOL = 1e-10
_DEGENERATE_REL = 1e-12
_DIVISION_REL = 1e-12

#: sampling offset in fractions of a grid step; half a step keeps z = +-1
#: (the usual home of boundary zeros) off the sample set
_SAMPLE_OFFSET = 0.5


@dataclass(frozen=True)
class MinorSignReport:
    """Signs of the leading principal minors on the circle."""

    signs: tuple  # per m = 1..r: +1 or -1
    min_abs: tuple  # per m: min |det| over the grid
    max_abs: tuple  # per m: max |det| over the grid
    constant: tuple  # per m: True if every non-degenerate point agrees
    signature: Signature  # induced J in leading-minor order
    grid_size: int

    @property
    def applicable(self):
        return all(self.constant)


@dataclass(frozen=True)
class TriangularFactor:
    """The factor M with its signature and storage windows."""

    M: MatrixLaurent
    signature: Signature
    diag_methods: tuple
    n_store: int
    grid_size: int
    offset: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def r(self):
        return self.M.rows


def check_minor_signs(S, grid_size=None, offset=0.0):
    """Evaluate the leading principal minors on a grid and vote their signs.

    Degenerate points (relative |det| below 1e-12) are excluded from the
    vote; the induced signature entry is sign(det_m)/sign(det_{m-1}).
    """
    if not S.is_square:
        raise NotHermitian("matrix is not square")
    defect = S.hermitian_defect()
    if defect > _HERMITIAN_TOL:
        raise NotHermitian(f"hermitian defect {defect:.3g} exceeds {_HERMITIAN_TOL}")
    r = S.rows
    span = S.highest - S.lowest + 1
    G = grid_size or auto_grid(r * span)
    vals = S.sample_grid(G, offset)

    signs, min_abs, max_abs, constant = [], [], [], []
    bad = []
    prev_sign = 1
    sig = []
    for m in range(1, r + 1):
        dets = np.linalg.det(vals[:, :m, :m]).real
        amax = float(np.abs(dets).max())
        keep = np.abs(dets) > _DEGENERATE_REL * max(amax, 1e-300)
        if not keep.any():
            raise InconstantSign(
                f"leading minor {m} is degenerate on the whole grid", minors=(m,)
            )
        votes = np.sign(dets[keep])
        s = 1 if votes.sum() >= 0 else -1
        const = bool((votes == s).all())
        signs.append(int(s))
        min_abs.append(float(np.abs(dets).min()))
        max_abs.append(amax)
        constant.append(const)
        if not const:
            bad.append(m)
        sig.append(int(s * prev_sign))
        prev_sign = s
    report = MinorSignReport(
        signs=tuple(signs),
        min_abs=tuple(min_abs),
        max_abs=tuple(max_abs),
        constant=tuple(constant),
        signature=Signature(sig),
        grid_size=G,
    )
    if bad:
        raise InconstantSign(
            f"leading minors {bad} change sign on the circle", minors=bad
        )
    return report


_EXACT_DET_MAX = 6


def _minor_polynomials(S, G, offset):
    """The leading principal minor determinants as Laurent polynomials.

    Exact cofactor expansion keeps boundary double roots of the minors sharp;
    the grid route (which carries cancellation noise) only covers sizes where
    the expansion would be too expensive.
    """
    r = S.rows
    if r <= _EXACT_DET_MAX:
        return [laurent_det(S.leading_principal_submatrix(m)).trim() for m in range(1, r + 1)]
    vals = S.sample_grid(G, offset)
    out = []
    for m in range(1, r + 1):
        lo = m * min(S.lowest, 0)
        hi = m * max(S.highest, 0)
        dets = np.linalg.det(vals[:, :m, :m])
        out.append(fourier_coeffs_from_samples(dets, lo, hi, offset).trim())
    return out


def _guarded_divide(num, den, what):
    """num / den on the grid, patching isolated 0/0 points by neighbor averaging."""
    dmax = np.abs(den).max()
    tiny = np.abs(den) < _DIVISION_REL * max(dmax, 1e-300)
    if tiny.any():
        nmax = np.abs(num).max() if num.ndim == 1 else np.abs(num).max()
        blow = tiny & (np.abs(num) > 1e-6 * max(nmax, 1e-300))
        if blow.any():
            raise DivisionBlowup(
                f"{what}: denominator vanishes at {int(blow.sum())} grid points "
                "where the numerator does not"
            )
    out = np.empty_like(num)
    ok = ~tiny
    out[ok] = num[ok] / den[ok]
    if tiny.any():
        idx = np.nonzero(tiny)[0]
        G = len(den)
        for g in idx:
            lo, hi = (g - 1) % G, (g + 1) % G
            out[g] = 0.5 * (out[lo] if not tiny[lo] else 0.0) + 0.5 * (
                out[hi] if not tiny[hi] else 0.0
            )
    return out


def triangular_j_factorize(S, grid_size=None, n_store=64, offset=_SAMPLE_OFFSET):
    """Compute the triangular factor of S with stored windows for later truncation.

    ``n_store`` bounds the truncation orders the caller may later request:
    entry (i, j) below the diagonal keeps powers down to -(i-j)*n_store, the
    m-th diagonal entry keeps causal powers up to (m-1)*n_store plus the span
    of S.
    """
    report = check_minor_signs(S, grid_size, offset=0.0)
    r = S.rows
    sig = report.signature
    top = max(S.highest, 0)
    span = S.highest - S.lowest + 1
    need = max((r - 1) * n_store + top + 1, r * span)
    G = grid_size or auto_grid(need)
    if G < need:
        G = auto_grid(need)

    minors = _minor_polynomials(S, G, offset)
    svals = S.sample_grid(G, offset)

    # diagonal: spectral factors of +-minors, divided pairwise on the grid
    gfactors = []
    methods = []
    prod_sign = 1
    for m in range(1, r + 1):
        prod_sign *= sig[m - 1]
        res = cholesky_scalar_step(minors[m - 1], prod_sign)
        gfactors.append(res.factor)
        methods.append(f"{res.method}(minor {m})")
    gvals = [g.evaluate_grid(G, offset) for g in gfactors]
    fvals = [gvals[0]]
    for m in range(1, r):
        fvals.append(_guarded_divide(gvals[m], gvals[m - 1], f"diagonal {m + 1}"))

    # strictly lower entries, pointwise
    xi = np.zeros((G, r, r), dtype=np.complex128)
    for j in range(r):
        xi[:, j, j] = fvals[j]
        for i in range(j + 1, r):
            num = svals[:, i, j].copy()
            for k in range(j):
                num -= sig[k] * xi[:, i, k] * np.conj(xi[:, j, k])
            xi[:, i, j] = sig[j] * _guarded_divide(num, np.conj(fvals[j]), f"entry ({i + 1},{j + 1})")

    # pointwise reconstruction residual (the factorization identity itself)
    J = sig.as_diag()
    recon = xi @ (J[:, None] * np.conj(np.transpose(xi, (0, 2, 1))))
    recon_res = float(np.abs(recon - svals).max() / max(np.abs(svals).max(), 1e-300))

    # inverse-transform once into the storage windows
    entries = []
    for i in range(r):
        for j in range(r):
            if j > i:
                entries.append(LaurentPoly.zero())
            elif j == i:
                cap = i * n_store + top
                entries.append(fourier_coeffs_from_samples(xi[:, i, i], 0, cap, offset).trim())
            else:
                lo = -(i - j) * n_store
                entries.append(
                    fourier_coeffs_from_samples(xi[:, i, j], lo, top, offset).trim()
                )
    M = MatrixLaurent(r, r, entries)

    # residual of the stored, window-truncated factor
    mvals = M.sample_grid(G, offset)
    wrecon = mvals @ (J[:, None] * np.conj(np.transpose(mvals, (0, 2, 1))))
    window_res = float(np.abs(wrecon - svals).max() / max(np.abs(svals).max(), 1e-300))

    return TriangularFactor(
        M=M,
        signature=sig,
        diag_methods=tuple(methods),
        n_store=n_store,
        grid_size=G,
        offset=offset,
        diagnostics={
            "pointwise_residual": recon_res,
            "window_residual": window_res,
            "minor_report": report,
        },
    )
