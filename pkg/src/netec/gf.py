"""Arithmetic in GF(p^m) and dense matrix algebra over it.

Elements are plain integers in ``[0, q)``; digit ``i`` of the base-``p``
expansion is the coefficient of ``x^i``.  With ``q = 4`` and ``x^2+x+1``
this gives ``0, 1, a = 2, a^2 = a+1 = 3``.

Matrices and vectors are ``numpy`` integer arrays; every routine here treats
them as values and never mutates its inputs.
"""

import itertools
from functools import cached_property

import numpy as np

from .errors import FieldError, InvariantError

MAX_Q = 2**16

# Lexicographically smallest primitive polynomial per (p, m) under the
# integer encoding sum(c_i p^i); coefficients listed highest degree first.
# m = 1 uses x (the element encoding of GF(p) does not involve the modulus).
DEFAULT_POLYS = {
    (2, 1): (1, 0),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 0, 1, 1),
    (2, 4): (1, 0, 0, 1, 1),
    (2, 5): (1, 0, 0, 1, 0, 1),
    (2, 6): (1, 0, 0, 0, 0, 1, 1),
    (2, 7): (1, 0, 0, 0, 0, 0, 1, 1),
    (2, 8): (1, 0, 0, 0, 1, 1, 1, 0, 1),
    (3, 1): (1, 0),
    (3, 2): (1, 1, 2),
    (3, 3): (1, 0, 2, 1),
    (3, 4): (1, 0, 0, 1, 2),
    (3, 5): (1, 0, 0, 0, 2, 1),
    (3, 6): (1, 0, 0, 0, 0, 1, 2),
    (3, 7): (1, 0, 0, 0, 0, 1, 2, 1),
    (3, 8): (1, 0, 0, 0, 0, 1, 0, 0, 2),
    (5, 1): (1, 0),
    (5, 2): (1, 1, 2),
    (5, 3): (1, 0, 3, 2),
    (5, 4): (1, 0, 1, 2, 2),
    (5, 5): (1, 0, 0, 0, 4, 2),
    (5, 6): (1, 0, 0, 0, 0, 1, 2),
    (7, 1): (1, 0),
    (7, 2): (1, 1, 3),
    (7, 3): (1, 0, 3, 2),
    (7, 4): (1, 0, 1, 3, 5),
    (7, 5): (1, 0, 0, 0, 1, 4),
}


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over GF(p), coefficient lists lowest degree first ---------


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bi) % p
        a = _trim(a)
    return a


def _find_factor(poly_low, p):
    """Return a monic proper factor (low-first) of ``poly_low`` or ``None``."""
    m = len(poly_low) - 1
    for d in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            cand = list(low) + [1]
            if not _poly_mod(poly_low, cand, p):
                return cand
    return None


def _format_poly(low):
    terms = []
    for i in range(len(low) - 1, -1, -1):
        c = low[i]
        if c == 0:
            continue
        mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
        terms.append(mono if c == 1 and i > 0 else (f"{c}" if i == 0 else f"{c}{mono}"))
    return "+".join(terms) or "0"


def is_irreducible(p, poly):
    """``poly`` given highest degree first, monic."""
    return _find_factor(list(reversed(poly)), p) is None


def smallest_primitive_poly(p, m):
    """The rule behind :data:`DEFAULT_POLYS` (slow; used for verification)."""
    if m == 1:
        return (1, 0)
    for low in itertools.product(range(p), repeat=m):
        low = list(reversed(low))  # make the scan increase in sum(c_i p^i)
        cand_low = low + [1]
        if cand_low[0] == 0 or _find_factor(cand_low, p) is not None:
            continue
        field = GF(p, m, tuple(reversed(cand_low)))
        if field.primitive == p:
            return tuple(reversed(cand_low))
    raise FieldError(f"no primitive polynomial found for p={p}, m={m}")


class GF:
    """The finite field GF(p^m) with log/antilog multiplication tables.

    Immutable after construction.  ``poly`` is the monic modulus with
    coefficients listed highest degree first; ``None`` or ``"default"``
    selects the entry of :data:`DEFAULT_POLYS`.
    """

    def __init__(self, p, m=1, poly=None):
        p, m = int(p), int(m)
        if not _is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if m < 1:
            raise FieldError(f"extension degree must be >= 1, got {m}")
        q = p**m
        if q > MAX_Q:
            raise FieldError(f"field size {q} exceeds the supported maximum {MAX_Q}")
        if poly is None or poly == "default":
            if (p, m) in DEFAULT_POLYS:
                poly = DEFAULT_POLYS[(p, m)]
            else:
                poly = smallest_primitive_poly(p, m)
        poly = tuple(int(c) for c in poly)
        if len(poly) != m + 1:
            raise FieldError(f"modulus must have degree {m}, got {len(poly) - 1}")
        if poly[0] != 1:
            raise FieldError("modulus must be monic")
        if any(not 0 <= c < p for c in poly):
            raise FieldError(f"modulus coefficients must lie in [0, {p})")
        low = list(reversed(poly))
        if m > 1:
            factor = _find_factor(low, p)
            if factor is not None:
                kind = "root" if len(factor) == 2 else "factor"
                detail = (
                    f"root x = {(-factor[0]) % p}" if kind == "root" else f"factor {_format_poly(factor)}"
                )
                raise FieldError(f"{_format_poly(low)} is reducible over GF({p}): {detail}")
        self.p, self.m, self.q, self.poly = p, m, q, poly
        self._low = low
        self._build_tables()

    # -- construction ------------------------------------------------------

    def _digits(self, a):
        return [(a // self.p**i) % self.p for i in range(self.m)]

    def _from_digits(self, d):
        return sum(int(c) * self.p**i for i, c in enumerate(d))

    def _mul_slow(self, a, b):
        p, m = self.p, self.m
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        if m > 1:
            prod = _poly_mod(prod, self._low, p)
        else:
            prod = [prod[0] % p]
        return self._from_digits(prod + [0] * (m - len(prod)))

    def _pow_slow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self._mul_slow(r, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return r

    def _build_tables(self):
        q, p = self.q, self.p
        # additive structure
        idx = np.arange(q, dtype=np.int64)
        digits = np.stack([(idx // p**i) % p for i in range(self.m)], axis=1)
        self._weights = p ** np.arange(self.m, dtype=np.int64)
        self._neg = (((-digits) % p) @ self._weights).astype(np.int64)
        if p != 2 and q <= 1024:
            s = (digits[:, None, :] + digits[None, :, :]) % p
            self._add_table = (s @ self._weights).astype(np.int64)
        else:
            self._add_table = None
        # multiplicative structure: find a generator, x preferred
        order = q - 1
        candidates = ([p] if self.m > 1 else []) + list(range(2, q))
        gen = 1
        if order > 1:
            factors = _prime_factors(order)
            for g in candidates:
                if all(self._pow_slow(g, order // r) != 1 for r in factors):
                    gen = g
                    break
            else:
                raise InvariantError("no multiplicative generator found")
        self.primitive = gen
        exp = np.zeros(2 * order if order else 2, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._mul_slow(x, gen)
        if order:
            exp[order : 2 * order] = exp[:order]
        self._exp, self._log = exp, log

    # -- identity / serialization -----------------------------------------

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.m, self.poly) == (other.p, other.m, other.poly)

    def __hash__(self):
        return hash((self.p, self.m, self.poly))

    def __repr__(self):
        return f"GF({self.p}, {self.m}, poly={self.poly})"

    def __str__(self):
        # Parseable by parse_field; prime fields need no modulus.
        if self.m == 1:
            return str(self.p)
        return f"{self.p}^{self.m}/" + ",".join(str(c) for c in self.poly)

    @property
    def alpha(self):
        """The generator used for the log tables (``x`` whenever it is primitive)."""
        return self.primitive

    @cached_property
    def elements(self):
        return np.arange(self.q, dtype=np.int64)

    # -- elementwise arithmetic -------------------------------------------

    @staticmethod
    def _out(r):
        return int(r) if np.ndim(r) == 0 else r

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return self._out(a ^ b)
        if self._add_table is not None:
            return self._out(self._add_table[a, b])
        r = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._weights:
            r = r + ((a // w + b // w) % self.p) * w
        return self._out(r)

    def neg(self, a):
        return self._out(self._neg[np.asarray(a, dtype=np.int64)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = self._exp[self._log[a] + self._log[b]]
        return self._out(np.where((a == 0) | (b == 0), 0, r))

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.q)
        return self._out(self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        a = int(a)
        if a == 0:
            return 0 if e else 1
        return int(self._exp[(self._log[a] * e) % (self.q - 1)])

    # -- vectors ------------------------------------------------------------

    def dot(self, u, v):
        return int(self.sum(self.mul(u, v)))

    def sum(self, a, axis=None):
        """Field sum along ``axis`` (all entries when ``None``)."""
        a = np.asarray(a, dtype=np.int64)
        if axis is None:
            a = a.reshape(-1)
            axis = 0
        a = np.moveaxis(a, axis, 0)
        acc = np.zeros(a.shape[1:], dtype=np.int64)
        for row in a:
            acc = self.add(acc, row)
        return self._out(acc)

    def pack(self, vectors):
        """Pack vectors (last axis) into integers ``sum(v_i q^i)``."""
        v = np.asarray(vectors, dtype=np.int64)
        w = self.q ** np.arange(v.shape[-1], dtype=np.int64)
        return v @ w if v.shape[-1] else np.zeros(v.shape[:-1], dtype=np.int64)

    def unpack(self, codes, n):
        c = np.asarray(codes, dtype=np.int64)
        return np.stack([(c // self.q**i) % self.q for i in range(n)], axis=-1) if n else np.zeros(
            c.shape + (0,), dtype=np.int64
        )

    def all_vectors(self, n):
        """Every vector of GF(q)^n, row ``k`` being ``unpack(k)``."""
        return self.unpack(np.arange(self.q**n, dtype=np.int64), n)

    def normalize(self, v):
        """Scale ``v`` so that its first nonzero entry is 1 (projective representative)."""
        v = np.asarray(v, dtype=np.int64)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return v.copy()
        return self.mul(v, self.inv(int(v[nz[0]])))

    # -- matrices -----------------------------------------------------------

    def eye(self, n):
        return np.eye(n, dtype=np.int64)

    def zeros(self, *shape):
        return np.zeros(shape, dtype=np.int64)

    def matmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        vec_left = A.ndim == 1
        vec_right = B.ndim == 1
        if vec_left:
            A = A[None, :]
        if vec_right:
            B = B[:, None]
        if A.shape[1] != B.shape[0]:
            raise ValueError(f"dimension mismatch: {A.shape} @ {B.shape}")
        acc = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for k in range(A.shape[1]):
            acc = self.add(acc, self.mul(A[:, k, None], B[None, k, :]))
        if vec_left:
            acc = acc[0]
        if vec_right:
            acc = acc[..., 0]
        return acc

    def rref(self, M):
        """Reduced row echelon form; returns ``(R, pivot_columns)``.

        Pivoting takes the first nonzero entry in each column.
        """
        R = np.array(M, dtype=np.int64, copy=True)
        if R.ndim != 2:
            raise ValueError("rref expects a 2-d matrix")
        rows, cols = R.shape
        pivots = []
        r = 0
        for c in range(cols):
            if r >= rows:
                break
            nz = np.flatnonzero(R[r:, c])
            if nz.size == 0:
                continue
            pr = r + int(nz[0])
            if pr != r:
                R[[r, pr]] = R[[pr, r]]
            R[r] = self.mul(R[r], self.inv(int(R[r, c])))
            factors = R[:, c].copy()
            factors[r] = 0
            if np.any(factors):
                R = self.sub(R, self.mul(factors[:, None], R[r][None, :]))
            pivots.append(c)
            r += 1
        return R, pivots

    def rank(self, M):
        M = np.asarray(M, dtype=np.int64)
        if M.size == 0:
            return 0
        return len(self.rref(M)[1])

    def row_basis(self, M):
        """Rows of the RREF spanning the row space of ``M``."""
        M = np.asarray(M, dtype=np.int64)
        if M.shape[0] == 0:
            return M.reshape(0, M.shape[1] if M.ndim == 2 else 0)
        R, piv = self.rref(M)
        return R[: len(piv)]

    def right_null_space(self, M):
        """Basis (as rows) of ``{y : M y^T = 0}``."""
        M = np.asarray(M, dtype=np.int64)
        rows, cols = M.shape
        if rows == 0:
            return self.eye(cols)
        R, piv = self.rref(M)
        free = [c for c in range(cols) if c not in piv]
        basis = np.zeros((len(free), cols), dtype=np.int64)
        for k, f in enumerate(free):
            basis[k, f] = 1
            for i, pc in enumerate(piv):
                basis[k, pc] = self.neg(int(R[i, f]))
        return basis

    def left_null_space(self, M):
        """Basis (as rows) of ``{x : x M = 0}``; has ``rows - rank(M)`` vectors."""
        M = np.asarray(M, dtype=np.int64)
        return self.right_null_space(M.T) if M.shape[1] else self.eye(M.shape[0])

    def solve_left(self, A, y):
        """Some ``x`` with ``x A = y``, or ``None`` when ``y`` is outside the row space."""
        A = np.asarray(A, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        n = A.shape[0]
        if n == 0:
            return np.zeros(0, dtype=np.int64) if not np.any(y) else None
        aug = np.concatenate([A.T, y[:, None]], axis=1)
        R, piv = self.rref(aug)
        if n in piv:
            return None
        x = np.zeros(n, dtype=np.int64)
        for i, pc in enumerate(piv):
            x[pc] = R[i, n]
        return x

    def in_row_space(self, y, A):
        return self.solve_left(A, y) is not None

    def invert(self, M):
        M = np.asarray(M, dtype=np.int64)
        n = M.shape[0]
        if M.shape != (n, n):
            raise ValueError(f"cannot invert a non-square matrix of shape {M.shape}")
        R, piv = self.rref(np.concatenate([M, self.eye(n)], axis=1))
        if [c for c in piv if c < n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return R[:, n:]


def field_new(p, m=1, poly="default"):
    """Construct a :class:`GF`; ``poly`` may be a coefficient sequence or ``"default"``."""
    return GF(p, m, poly)


def parse_field(text):
    """Parse ``"p^m"``, ``"p^m/c_m,...,c_0"``, ``"q"`` (prime power) forms."""
    text = text.strip()
    poly = None
    if "/" in text:
        text, ptxt = text.split("/", 1)
        try:
            poly = tuple(int(c) for c in ptxt.replace(" ", "").split(","))
        except ValueError as exc:
            raise FieldError(f"bad modulus coefficients {ptxt!r}") from exc
    try:
        if "^" in text:
            p, m = (int(s) for s in text.split("^"))
        else:
            q = int(text)
            p = next((d for d in range(2, q + 1) if q % d == 0), None) if q > 1 else None
            if p is None:
                raise FieldError(f"bad field size {q}")
            m = 0
            while q % p == 0:
                q //= p
                m += 1
            if q != 1:
                raise FieldError(f"{text} is not a prime power")
    except ValueError as exc:
        raise FieldError(f"cannot parse field spec {text!r}") from exc
    return GF(p, m, poly)
