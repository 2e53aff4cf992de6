"""Dense complex Laurent polynomials and matrices of them, on the unit circle.

A Laurent polynomial P(z) = sum_{k=-n}^{m} p_k z^k is stored as the integer
power of its lowest term plus a dense coefficient array.  Everything here is
immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, DomainError, SizeError

#: relative modulus below which ``trim`` drops a coefficient
TRIM_REL = 1e-14

#: result spans up to this length multiply by direct convolution, above by FFT
_CONV_DIRECT_MAX = 64

_CIRCLE_TOL = 1e-12


def grid_points(size, offset=0.0):
    """Uniform grid exp(2*pi*i*(g+offset)/size) on the unit circle."""
    return np.exp(2j * np.pi * (np.arange(size) + offset) / size)


def auto_grid(span, minimum=256):
    """Smallest power of two >= 8 * span (and >= minimum).

    One order of oversampling keeps aliasing from slowly decaying tails
    below coefficient noise.
    """
    need = max(8 * max(int(span), 1), minimum)
    return 1 << (need - 1).bit_length()


class LaurentPoly:
    """One scalar Laurent polynomial with complex coefficients.

    ``coeffs[i]`` is the coefficient of ``z**(lowest + i)``.  Construction
    strips exact zeros from both ends (keeping at least one entry); the zero
    polynomial is canonically ``lowest = 0, coeffs = [0]``.
    """

    __slots__ = ("lowest", "coeffs")

    def __init__(self, lowest, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a non-empty 1-d sequence")
        lo = int(lowest)
        nz = np.nonzero(c)[0]
        if nz.size == 0:
            lo, c = 0, np.zeros(1, dtype=np.complex128)
        else:
            lo += int(nz[0])
            c = c[nz[0] : nz[-1] + 1].copy()
        c.setflags(write=False)
        object.__setattr__(self, "lowest", lo)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls):
        return cls(0, [0.0])

    @classmethod
    def one(cls):
        return cls(0, [1.0])

    @classmethod
    def monomial(cls, power, coefficient=1.0):
        return cls(power, [coefficient])

    @classmethod
    def constant(cls, value):
        return cls(0, [value])

    @classmethod
    def from_dict(cls, d):
        """Build from a {power: coefficient} mapping."""
        if not d:
            return cls.zero()
        lo, hi = min(d), max(d)
        c = np.zeros(hi - lo + 1, dtype=np.complex128)
        for k, v in d.items():
            c[k - lo] = v
        return cls(lo, c)

    # -- basic queries -------------------------------------------------------

    @property
    def highest(self):
        return self.lowest + len(self.coeffs) - 1

    @property
    def span(self):
        """Number of stored coefficients."""
        return len(self.coeffs)

    def is_zero(self):
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def coeff(self, power):
        """Coefficient of z**power (zero outside the stored range)."""
        i = power - self.lowest
        if 0 <= i < len(self.coeffs):
            return complex(self.coeffs[i])
        return 0.0 + 0.0j

    def max_abs(self):
        return float(np.abs(self.coeffs).max())

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.lowest == other.lowest and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.lowest, self.coeffs.tobytes()))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0 and len(self.coeffs) > 1:
                continue
            k = self.lowest + i
            zs = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            terms.append(f"({c:.6g}){zs}" if zs else f"({c:.6g})")
        return "LaurentPoly(" + " + ".join(terms) + ")"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if np.isscalar(other):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        lo = min(self.lowest, other.lowest)
        hi = max(self.highest, other.highest)
        c = np.zeros(hi - lo + 1, dtype=np.complex128)
        c[self.lowest - lo : self.lowest - lo + self.span] += self.coeffs
        c[other.lowest - lo : other.lowest - lo + other.span] += other.coeffs
        return LaurentPoly(lo, c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.lowest, -self.coeffs)

    def __sub__(self, other):
        if np.isscalar(other):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return LaurentPoly(self.lowest, self.coeffs * other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        c = _convolve(self.coeffs, other.coeffs)
        return LaurentPoly(self.lowest + other.lowest, c)

    __rmul__ = __mul__

    def tilde(self):
        """Adjoint on the circle: sum conj(p_k) z^(-k)."""
        return LaurentPoly(-self.highest, np.conj(self.coeffs[::-1]))

    def shift(self, power):
        """Multiply by z**power."""
        return LaurentPoly(self.lowest + power, self.coeffs)

    # -- shaping -------------------------------------------------------------

    def trim(self, rel_tol=TRIM_REL):
        """Drop coefficients with modulus below rel_tol * max modulus.

        Trimming is always explicit; arithmetic only strips exact zeros.
        """
        m = self.max_abs()
        if m == 0.0:
            return LaurentPoly.zero()
        c = np.where(np.abs(self.coeffs) < rel_tol * m, 0.0, self.coeffs)
        return LaurentPoly(self.lowest, c)

    def truncate(self, low, high):
        """Keep only powers in [low, high]."""
        if low > high:
            raise ValueError("empty truncation window")
        lo = max(low, self.lowest)
        hi = min(high, self.highest)
        if lo > hi:
            return LaurentPoly.zero()
        return LaurentPoly(lo, self.coeffs[lo - self.lowest : hi - self.lowest + 1])

    def causal_part(self):
        return self.truncate(0, max(self.highest, 0))

    def anticausal_part(self):
        """Strictly negative powers."""
        if self.lowest >= 0:
            return LaurentPoly.zero()
        return self.truncate(self.lowest, -1)

    def is_causal(self, rel_tol=0.0):
        neg = self.anticausal_part()
        if neg.is_zero():
            return True
        return neg.max_abs() <= rel_tol * max(self.max_abs(), 1e-300)

    # -- evaluation ----------------------------------------------------------

    def __call__(self, z):
        return self.evaluate(z)

    def evaluate(self, z):
        """Horner evaluation at a point of the unit circle."""
        z = complex(z)
        if abs(abs(z) - 1.0) > _CIRCLE_TOL:
            raise DomainError(f"|z| = {abs(z)!r} deviates from 1 beyond {_CIRCLE_TOL}")
        acc = 0.0 + 0.0j
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc * z**self.lowest

    def evaluate_grid(self, size, offset=0.0):
        """Values on the uniform grid exp(2*pi*i*(g+offset)/size), via FFT.

        Requires size >= span so powers do not alias.
        """
        if size < self.span:
            raise SizeError(f"grid of {size} cannot hold span {self.span}")
        buf = np.zeros(size, dtype=np.complex128)
        ks = self.lowest + np.arange(self.span)
        if offset != 0.0:
            buf[np.mod(ks, size)] = self.coeffs * np.exp(2j * np.pi * offset * ks / size)
        else:
            buf[np.mod(ks, size)] = self.coeffs
        return np.fft.ifft(buf) * size

    def roots(self):
        """Roots of the associated polynomial z**n * P(z), via companion matrix."""
        if self.is_zero():
            raise ValueError("zero polynomial has no root set")
        if self.span == 1:
            return np.zeros(0, dtype=np.complex128)
        return np.roots(self.coeffs[::-1])


def _convolve(a, b):
    n = len(a) + len(b) - 1
    if n <= _CONV_DIRECT_MAX:
        return np.convolve(a, b)
    size = 1 << (n - 1).bit_length()
    fa = np.fft.fft(a, size)
    fb = np.fft.fft(b, size)
    return np.fft.ifft(fa * fb)[:n]


def fourier_coeffs_from_samples(samples, lowest, highest, offset=0.0):
    """Laurent polynomial with the discrete Fourier coefficients of the samples.

    ``samples[g]`` is the value at exp(2*pi*i*(g+offset)/G).  The grid size G
    must be a power of two at least the requested span.  Coefficients outside
    [lowest, highest] are discarded; the usual aliasing caveat applies to
    functions that are not band-limited to the grid.
    """
    samples = np.asarray(samples, dtype=np.complex128)
    G = len(samples)
    if lowest > highest:
        raise ValueError("lowest must not exceed highest")
    span = highest - lowest + 1
    if G < span:
        raise SizeError(f"grid of {G} cannot resolve span {span}")
    if G & (G - 1):
        raise SizeError(f"grid size {G} is not a power of two")
    ft = np.fft.fft(samples) / G
    ks = np.arange(lowest, highest + 1)
    c = ft[np.mod(ks, G)]
    if offset != 0.0:
        c = c * np.exp(-2j * np.pi * offset * ks / G)
    return LaurentPoly(lowest, c)


class MatrixLaurent:
    """An r x c matrix with LaurentPoly entries, stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        rows, cols = int(rows), int(cols)
        entries = tuple(entries)
        if rows <= 0 or cols <= 0:
            raise DimensionError("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise DimensionError(
                f"expected {rows * cols} entries, got {len(entries)}"
            )
        for e in entries:
            if not isinstance(e, LaurentPoly):
                raise TypeError("entries must be LaurentPoly")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("MatrixLaurent is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows):
        """Build from a nested sequence of LaurentPoly (or scalars)."""
        r = len(rows)
        c = len(rows[0])
        flat = []
        for row in rows:
            if len(row) != c:
                raise DimensionError("ragged rows")
            for e in row:
                flat.append(e if isinstance(e, LaurentPoly) else LaurentPoly.constant(e))
        return cls(r, c, flat)

    @classmethod
    def identity(cls, r):
        return cls.from_rows(
            [[LaurentPoly.constant(1.0 if i == j else 0.0) for j in range(r)] for i in range(r)]
        )

    @classmethod
    def zeros(cls, r, c=None):
        c = r if c is None else c
        return cls(r, c, [LaurentPoly.zero()] * (r * c))

    # -- access --------------------------------------------------------------

    def entry(self, i, j):
        return self.entries[i * self.cols + j]

    def __getitem__(self, ij):
        return self.entry(*ij)

    def row(self, i):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    @property
    def is_square(self):
        return self.rows == self.cols

    @property
    def lowest(self):
        return min(e.lowest for e in self.entries)

    @property
    def highest(self):
        return max(e.highest for e in self.entries)

    def max_abs(self):
        return max(e.max_abs() for e in self.entries)

    def __repr__(self):
        return f"MatrixLaurent({self.rows}x{self.cols}, powers [{self.lowest}, {self.highest}])"

    # -- algebra -------------------------------------------------------------

    def __add__(self, other):
        self._check_same_shape(other)
        return MatrixLaurent(
            self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)]
        )

    def __sub__(self, other):
        self._check_same_shape(other)
        return MatrixLaurent(
            self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)]
        )

    def __neg__(self):
        return MatrixLaurent(self.rows, self.cols, [-e for e in self.entries])

    def scale(self, factor):
        """Multiply every entry by a scalar or LaurentPoly."""
        return MatrixLaurent(self.rows, self.cols, [e * factor for e in self.entries])

    def __matmul__(self, other):
        if not isinstance(other, MatrixLaurent):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionError(f"{self.cols} columns cannot multiply {other.rows} rows")
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                acc = LaurentPoly.zero()
                for k in range(self.cols):
                    a = self.entry(i, k)
                    b = other.entry(k, j)
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                out.append(acc)
        return MatrixLaurent(self.rows, other.cols, out)

    def transpose(self):
        return MatrixLaurent(
            self.cols, self.rows,
            [self.entry(i, j) for j in range(self.cols) for i in range(self.rows)],
        )

    def hermitian_conjugate(self):
        """Tilde entrywise then transpose; equals conjugate-transpose on the circle."""
        return MatrixLaurent(
            self.cols, self.rows,
            [self.entry(i, j).tilde() for j in range(self.cols) for i in range(self.rows)],
        )

    def map_entries(self, fn):
        return MatrixLaurent(self.rows, self.cols, [fn(e) for e in self.entries])

    def trim(self, rel_tol=TRIM_REL):
        """Entrywise trim against the global maximum coefficient modulus."""
        m = self.max_abs()
        if m == 0.0:
            return self.map_entries(lambda e: LaurentPoly.zero())

        def one(e):
            c = np.where(np.abs(e.coeffs) < rel_tol * m, 0.0, e.coeffs)
            return LaurentPoly(e.lowest, c)

        return self.map_entries(one)

    def leading_principal_submatrix(self, m):
        if not 1 <= m <= min(self.rows, self.cols):
            raise DimensionError(f"submatrix order {m} out of range")
        return MatrixLaurent(
            m, m, [self.entry(i, j) for i in range(m) for j in range(m)]
        )

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, z):
        out = np.empty((self.rows, self.cols), dtype=np.complex128)
        for i in range(self.rows):
            for j in range(self.cols):
                out[i, j] = self.entry(i, j).evaluate(z)
        return out

    def sample_grid(self, size, offset=0.0):
        """Array of shape (size, rows, cols) of values on the uniform grid."""
        out = np.empty((size, self.rows, self.cols), dtype=np.complex128)
        for i in range(self.rows):
            for j in range(self.cols):
                out[:, i, j] = self.entry(i, j).evaluate_grid(size, offset)
        return out

    def hermitian_defect(self):
        """Max coefficient modulus of (self~* - self), relative to max coefficient."""
        diff = self.hermitian_conjugate() - self
        m = self.max_abs()
        if m == 0.0:
            return 0.0
        return diff.max_abs() / m

    def is_hermitian(self, tol=1e-10):
        return self.is_square and self.hermitian_defect() <= tol

    def _check_same_shape(self, other):
        if not isinstance(other, MatrixLaurent):
            raise TypeError("expected MatrixLaurent")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")


def laurent_det(M):
    """Determinant of a square MatrixLaurent by cofactor expansion.

    Exact in coefficient arithmetic; cost grows factorially, which is fine at
    the handful-of-rows sizes this library targets.
    """
    if not M.is_square:
        raise DimensionError("determinant needs a square matrix")
    n = M.rows
    if n == 1:
        return M.entry(0, 0)
    if n == 2:
        return M.entry(0, 0) * M.entry(1, 1) - M.entry(0, 1) * M.entry(1, 0)
    acc = LaurentPoly.zero()
    for i in range(n):
        a = M.entry(i, 0)
        if a.is_zero():
            continue
        minor = MatrixLaurent(
            n - 1,
            n - 1,
            [
                M.entry(ii, jj)
                for ii in range(n)
                if ii != i
                for jj in range(1, n)
            ],
        )
        term = a * laurent_det(minor)
        acc = acc + (term if i % 2 == 0 else -term)
    return acc


def matrix_from_samples(samples, lowest, highest, offset=0.0):
    """Entrywise fourier_coeffs_from_samples for an array (G, r, c)."""
    samples = np.asarray(samples, dtype=np.complex128)
    G, r, c = samples.shape
    entries = [
        fourier_coeffs_from_samples(samples[:, i, j], lowest, highest, offset)
        for i in range(r)
        for j in range(c)
    ]
    return MatrixLaurent(r, c, entries)


class Signature:
    """A diagonal +-1 signature, stored in leading-minor order.

    The conventional presentation groups the +1 entries first; this class
    keeps the order induced by the leading principal minors (which is what the
    recursion consumes) and exposes the permutation to the grouped form.
    """

    __slots__ = ("signs",)

    def __init__(self, signs):
        signs = tuple(int(s) for s in signs)
        if not signs:
            raise ValueError("signature must be non-empty")
        if any(s not in (1, -1) for s in signs):
            raise ValueError("signature entries must be +1 or -1")
        object.__setattr__(self, "signs", signs)

    def __setattr__(self, name, value):
        raise AttributeError("Signature is immutable")

    @classmethod
    def identity(cls, r):
        return cls((1,) * r)

    @classmethod
    def from_string(cls, s):
        table = {"+": 1, "-": -1}
        try:
            return cls(tuple(table[ch] for ch in s.strip()))
        except KeyError as exc:
            raise ValueError(f"signature string must use only '+' and '-': {s!r}") from exc

    def to_string(self):
        return "".join("+" if s == 1 else "-" for s in self.signs)

    def __len__(self):
        return len(self.signs)

    def __getitem__(self, i):
        return self.signs[i]

    def __eq__(self, other):
        if not isinstance(other, Signature):
            return NotImplemented
        return self.signs == other.signs

    def __hash__(self):
        return hash(self.signs)

    def __repr__(self):
        return f"Signature({self.to_string()!r})"

    @property
    def p(self):
        return sum(1 for s in self.signs if s == 1)

    @property
    def q(self):
        return len(self.signs) - self.p

    def leading(self, m):
        return Signature(self.signs[:m])

    def as_diag(self):
        return np.array(self.signs, dtype=np.float64)

    def as_matrix(self):
        return np.diag(self.as_diag())

    def canonical_permutation(self):
        """Permutation p with p[k] = index in leading-minor order of canonical slot k.

        Right-multiplying a factor's columns by this permutation (S+ -> S+ P)
        presents the grouped signature diag(I_p, -I_q) = P^T J P.
        """
        plus = [i for i, s in enumerate(self.signs) if s == 1]
        minus = [i for i, s in enumerate(self.signs) if s == -1]
        return tuple(plus + minus)
