"""Exact dense linear algebra over a prime field F_p or the rationals.

Matrices are numpy arrays: ``int64`` reduced mod p for prime fields and
``object`` arrays of :class:`fractions.Fraction` for the rationals.  Row
reduction always returns the canonical reduced row echelon form (leftmost
pivots), so every basis computed downstream is deterministic.

The prime-field elimination is blocked: pivots are located on narrow column
panels and the trailing update is a float64 matrix product, which is exact as
long as ``inner_dim * (p - 1)**2 < 2**53``.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import ValidationError

_FLOAT_EXACT = 2**53
_PANEL = 64
_SMALL = 2048


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """The field with p elements, p prime."""

    kind = "prime"

    def __init__(self, p: int):
        p = int(p)
        if not is_prime(p):
            raise ValidationError(f"{p} is not prime")
        if p >= 2**31:
            raise ValueError("primes must be below 2**31")
        self.p = p
        self.dtype = np.int64

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))

    def spec(self) -> dict:
        return {"kind": "prime", "p": self.p}

    # scalars
    def element(self, x) -> int:
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, a) -> int:
        return pow(int(a) % self.p, -1, self.p)

    def format(self, x) -> int:
        return int(x) % self.p

    # arrays
    def array(self, data) -> np.ndarray:
        a = np.asarray(data, dtype=object)
        if a.size and any(isinstance(x, (Fraction, str)) for x in a.flat):
            a = np.vectorize(self.element, otypes=[object])(a)
        return np.asarray(a, dtype=np.int64) % self.p

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def scale(self, a, c):
        return (a * (int(c) % self.p)) % self.p

    def matmul(self, a, b) -> np.ndarray:
        return _matmul_mod(a, b, self.p)

    def rref(self, a):
        return _rref_prime(a, self.p)

    def random(self, rng, shape) -> np.ndarray:
        return rng.integers(0, self.p, size=shape, dtype=np.int64)

    def random_nonzero(self, rng) -> int:
        return int(rng.integers(1, self.p))


class RationalField:
    """The rationals, with exact Fraction entries."""

    kind = "rational"
    dtype = object

    def __repr__(self):
        return "RationalField()"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")

    def spec(self) -> dict:
        return {"kind": "rational"}

    def element(self, x) -> Fraction:
        return Fraction(x)

    def inv(self, a) -> Fraction:
        return 1 / Fraction(a)

    def format(self, x):
        x = Fraction(x)
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def array(self, data) -> np.ndarray:
        a = np.asarray(data, dtype=object)
        out = np.empty(a.shape, dtype=object)
        for idx, x in np.ndenumerate(a):
            out[idx] = Fraction(x)
        return out

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = Fraction(1)
        return out

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def scale(self, a, c):
        return a * Fraction(c)

    def matmul(self, a, b) -> np.ndarray:
        if a.shape[1] == 0:
            return self.zeros((a.shape[0], b.shape[1]))
        return self.array(np.dot(a, b))

    def rref(self, a):
        return _rref_rational(a)

    def random(self, rng, shape) -> np.ndarray:
        return self.array(rng.integers(-3, 4, size=shape))

    def random_nonzero(self, rng) -> Fraction:
        v = int(rng.integers(1, 4))
        return Fraction(v if rng.integers(0, 2) else -v)


def field_from_spec(spec: dict):
    kind = spec.get("kind")
    if kind == "prime":
        return PrimeField(spec["p"])
    if kind == "rational":
        return RationalField()
    raise ValueError(f"unknown field kind {kind!r}")


# ---------------------------------------------------------------------------
# prime-field kernels


def _fmod(x: np.ndarray, p: int) -> np.ndarray:
    """Floor-mod for float arrays holding integers of magnitude < 2**52."""
    return x - p * np.floor(x / p)


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    m, k = a.shape
    n = b.shape[1]
    if k == 0 or m == 0 or n == 0:
        return np.zeros((m, n), dtype=np.int64)
    if p >= 2**20:
        prod = np.dot(a.astype(object), b.astype(object))
        return np.asarray(prod % p, dtype=np.int64)
    return _matmul_float(a.astype(np.float64), b.astype(np.float64), p).astype(np.int64)


def _matmul_float(af: np.ndarray, bf: np.ndarray, p: int) -> np.ndarray:
    k = af.shape[1]
    chunk = max(1, (_FLOAT_EXACT >> 2) // ((p - 1) ** 2 + 1))
    if k <= chunk:
        return _fmod(af @ bf, p)
    out = np.zeros((af.shape[0], bf.shape[1]))
    for s in range(0, k, chunk):
        out = _fmod(out + af[:, s : s + chunk] @ bf[s : s + chunk], p)
    return out


def _rref_small(a: np.ndarray, p: int):
    a = a.copy()
    m, n = a.shape
    r = 0
    piv = []
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r, c:] = (a[r, c:] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            a[rows, c:] = (a[rows, c:] - np.outer(col[rows], a[r, c:])) % p
        piv.append(c)
        r += 1
    return a[:r], piv


def _panel_pivots(panel: np.ndarray, p: int):
    """Greedy leftmost pivots of ``panel``; returns (row indices, column indices)."""
    h, w = panel.shape
    used = np.zeros(h, dtype=bool)
    rows, cols = [], []
    for c in range(w):
        col = panel[:, c]
        cand = np.flatnonzero((col != 0) & ~used)
        if cand.size == 0:
            continue
        i = int(cand[0])
        used[i] = True
        rows.append(i)
        cols.append(c)
        if len(rows) == h:
            break
        rest = cand[1:]
        if rest.size and c + 1 < w:
            f = (col[rest] * pow(int(panel[i, c]), -1, p)) % p
            panel[rest, c + 1 :] = (panel[rest, c + 1 :] - np.outer(f, panel[i, c + 1 :])) % p
    return rows, cols


def _inv_mod(b: np.ndarray, p: int) -> np.ndarray:
    k = b.shape[0]
    aug = np.concatenate([b.astype(np.int64) % p, np.eye(k, dtype=np.int64)], axis=1)
    red, piv = _rref_small(aug, p)
    if piv[:k] != list(range(k)):
        raise ZeroDivisionError("singular pivot block")
    return red[:, k:]


def _rref_prime(a, p: int):
    a = np.asarray(a, dtype=np.int64) % p
    n = a.shape[1]
    a = a[a.any(axis=1)] if a.size else np.zeros((0, n), dtype=np.int64)
    m = a.shape[0]
    if m == 0 or n == 0:
        return np.zeros((0, n), dtype=np.int64), []
    if m * n <= _SMALL or m <= 4 or p >= 2**20:
        return _rref_small(a, p)
    a = a.astype(np.float64)
    r = 0
    pivots: list[int] = []
    c0 = 0
    while c0 < n and r < m:
        c1 = min(n, c0 + _PANEL)
        prow, pcol = _panel_pivots(a[r:, c0:c1].astype(np.int64), p)
        if not prow:
            c0 = c1
            continue
        k = len(prow)
        mask = np.ones(m - r, dtype=bool)
        mask[prow] = False
        order = np.concatenate([r + np.asarray(prow), r + np.flatnonzero(mask)])
        a[r:] = a[order]
        cols = c0 + np.asarray(pcol)
        binv = _inv_mod(a[r : r + k][:, cols], p).astype(np.float64)
        a[r : r + k, c0:] = _matmul_float(binv, a[r : r + k, c0:], p)
        coef = a[:, cols]
        coef[r : r + k] = 0
        hit = np.flatnonzero(coef.any(axis=1))
        if hit.size:
            upd = a[hit, c0:] - coef[hit] @ a[r : r + k, c0:]
            a[hit, c0:] = _fmod(upd, p)
        pivots.extend(int(c) for c in cols)
        r += k
        c0 = c1
    return a[:r].astype(np.int64), pivots


def _rref_rational(a):
    a = np.asarray(a, dtype=object)
    m, n = a.shape
    rows = [[Fraction(x) for x in row] for row in a]
    rows = [row for row in rows if any(row)]
    r = 0
    piv = []
    for c in range(n):
        if r == len(rows):
            break
        i = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if i is None:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        lead = rows[r][c]
        rows[r] = [x / lead for x in rows[r]]
        for j in range(len(rows)):
            if j != r and rows[j][c] != 0:
                f = rows[j][c]
                rows[j] = [x - f * y for x, y in zip(rows[j], rows[r])]
        piv.append(c)
        r += 1
    out = np.empty((r, n), dtype=object)
    for i in range(r):
        out[i, :] = rows[i]
    return out, piv


# ---------------------------------------------------------------------------
# public operations


def rref(field, a):
    """Canonical reduced row echelon form: (nonzero rows, pivot columns)."""
    a = np.asarray(a, dtype=field.dtype)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return field.rref(a)


def rank(field, a) -> int:
    return len(rref(field, a)[1])


def kernel(field, a) -> np.ndarray:
    """Rows spanning {x : a @ x = 0}, in reduced row echelon form."""
    a = np.asarray(a, dtype=field.dtype)
    n = a.shape[1]
    red, piv = field.rref(a)
    free = np.setdiff1d(np.arange(n), piv)
    k = field.zeros((free.size, n))
    if free.size == 0:
        return k
    k[np.arange(free.size), free] = field.array(np.ones(free.size, dtype=np.int64))
    if piv:
        k[:, piv] = field.neg(red[:, free].T)
    return field.rref(k)[0]


def rank_and_kernel(m, field):
    m = np.asarray(m, dtype=field.dtype)
    red, piv = field.rref(m)
    return len(piv), kernel(field, m)


def image_basis(m, field) -> np.ndarray:
    """Rows spanning the column space of ``m``, canonical echelon form."""
    m = np.asarray(m, dtype=field.dtype)
    return field.rref(m.T)[0]


def quotient_map(ambient_dim: int, subspace_rows, field):
    """Projection onto a complement of the row span of ``subspace_rows``.

    The complement is spanned by the standard vectors at non-pivot columns,
    and ``proj`` restricted to them is the identity.
    """
    s = np.asarray(subspace_rows, dtype=field.dtype).reshape(-1, ambient_dim)
    red, piv = field.rref(s)
    return projection_from_rref(field, ambient_dim, red, piv)


def projection_from_rref(field, ambient_dim, red, piv):
    nonpiv = np.setdiff1d(np.arange(ambient_dim), piv)
    q = nonpiv.size
    proj = field.zeros((q, ambient_dim))
    if q:
        proj[np.arange(q), nonpiv] = field.array(np.ones(q, dtype=np.int64))
        if piv:
            proj[:, piv] = field.neg(red[:, nonpiv].T)
    return proj, q


def complement_lift(field, ambient_dim, piv) -> np.ndarray:
    """Columns are the standard vectors at non-pivot positions."""
    nonpiv = np.setdiff1d(np.arange(ambient_dim), piv)
    lift = field.zeros((ambient_dim, nonpiv.size))
    if nonpiv.size:
        lift[nonpiv, np.arange(nonpiv.size)] = field.array(np.ones(nonpiv.size, dtype=np.int64))
    return lift


def reduce_rows(field, red, piv, y) -> np.ndarray:
    """Residues of the rows of ``y`` modulo the row span of ``red``."""
    if not piv or y.shape[0] == 0:
        return y
    return field.sub(y, field.matmul(y[:, piv], red))


def in_span(field, red, piv, y) -> bool:
    y = np.asarray(y, dtype=field.dtype).reshape(-1, red.shape[1] if red.ndim == 2 else len(y))
    return not np.any(reduce_rows(field, red, piv, y) != 0)


def is_zero(a) -> bool:
    return not np.any(np.asarray(a) != 0)
