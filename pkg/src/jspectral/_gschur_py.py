"""Pure-numpy fallback for the generalized Schur elimination kernel.

Same contract as the compiled ``_gschur`` extension: used when the extension
was not built.  The per-step column operations are vectorized; the step loop
itself is sequential by nature.
"""

import numpy as np


def gs_factor(gen, signs, breakdown_tol=1e-13):
    """Factor Phi = L diag(sigma) L^H from a shift-displacement generator.

    Returns (L, sigma, status); status is -1 on success, otherwise the step
    at which the hyperbolic pivot degenerated.
    """
    G = np.array(gen, dtype=np.complex128, order="C")
    s = np.asarray(signs, dtype=np.float64)
    n, m = G.shape
    if s.shape != (m,):
        raise ValueError("signs length must match generator columns")
    plus = np.nonzero(s > 0)[0]
    minus = np.nonzero(s < 0)[0]
    L = np.zeros((n, n), dtype=np.complex128)
    sigma = np.empty(n, dtype=np.float64)

    for k in range(n):
        row = G[k]
        a2 = float(np.sum(np.abs(row[plus]) ** 2))
        b2 = float(np.sum(np.abs(row[minus]) ** 2))
        if a2 + b2 == 0.0 or abs(a2 - b2) <= breakdown_tol * (a2 + b2):
            return L, sigma, k

        pp = _reduce_block(G, k, plus)
        pm = _reduce_block(G, k, minus)

        if a2 > b2:
            piv, sg, other = pp, 1.0, pm
        else:
            piv, sg, other = pm, -1.0, pp
        if other >= 0 and G[k, other].real != 0.0:
            rho = G[k, other].real / G[k, piv].real
            ch = 1.0 / np.sqrt(1.0 - rho * rho)
            sh = rho * ch
            cp = G[k:, piv].copy()
            co = G[k:, other].copy()
            G[k:, piv] = ch * cp - sh * co
            G[k:, other] = ch * co - sh * cp
        sigma[k] = sg
        L[k:, k] = G[k:, piv]
        G[k + 1 :, piv] = G[k:-1, piv]
        G[k, piv] = 0.0
    return L, sigma, -1


def _reduce_block(G, k, cols):
    """Rotate the row-k mass of one sign block onto its largest column.

    Returns that column's index (or -1 for an empty block); afterwards the
    row-k entry there is real nonnegative and zero on the block's others.
    """
    if len(cols) == 0:
        return -1
    p = cols[int(np.argmax(np.abs(G[k, cols])))]
    for j in cols:
        if j == p:
            continue
        gj = G[k, j]
        if gj == 0.0:
            continue
        gp = G[k, p]
        r = np.sqrt(abs(gp) ** 2 + abs(gj) ** 2)
        cp = G[k:, p].copy()
        cj = G[k:, j].copy()
        G[k:, p] = (np.conj(gp) * cp + np.conj(gj) * cj) / r
        G[k:, j] = (gp * cj - gj * cp) / r
    gp = G[k, p]
    if gp != 0.0 and (gp.imag != 0.0 or gp.real < 0.0):
        G[k:, p] *= np.conj(gp) / abs(gp)
    return p
