"""Find a vector outside a finite union of proper subspaces."""

import numpy as np

from .errors import FieldTooSmallError, InfeasibleError

SCAN_LIMIT = 2**20


def _dedupe_projective(field, vectors):
    seen, out = set(), []
    for v in vectors:
        v = field.normalize(v)
        key = v.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(v)
    return out


def _hyperplane_step(field, normals, n):
    """Constructive pass: keep u.a_j != 0 for every processed normal.

    Returns ``None`` when some step runs out of admissible scalars.
    """
    a0 = normals[0]
    u = np.zeros(n, dtype=np.int64)
    u[np.flatnonzero(a0)[0]] = 1
    for i in range(1, len(normals)):
        ai = normals[i]
        if field.dot(u, ai):
            continue
        b = np.zeros(n, dtype=np.int64)
        b[np.flatnonzero(ai)[0]] = 1
        forbidden = set()
        for aj in normals[:i]:
            ua = field.dot(u, aj)
            forbidden.add(field.neg(field.div(field.dot(b, aj), ua)))
        alpha = next((x for x in range(field.q) if x not in forbidden), None)
        if alpha is None:
            return None
        u = field.add(field.mul(alpha, u), b)
    return u


def _scan(field, n, outside):
    """First vector in packed order (coordinate 0 least significant) with ``outside(U)``."""
    total = field.q**n
    chunk = 4096
    for start in range(1, total, chunk):
        U = field.unpack(np.arange(start, min(total, start + chunk), dtype=np.int64), n)
        ok = outside(U)
        if ok.any():
            return U[int(np.flatnonzero(ok)[0])]
    return None


def avoid_hyperplanes(field, normals, n, required_q=None):
    """A vector u with ``u . w != 0`` for every normal ``w`` (each nonzero)."""
    normals = [np.asarray(w, dtype=np.int64) for w in normals]
    for w in normals:
        if not np.any(w):
            raise InfeasibleError("a zero normal forbids every vector")
    normals = _dedupe_projective(field, normals)
    if not normals:
        u = np.zeros(n, dtype=np.int64)
        u[0] = 1
        return u
    u = _hyperplane_step(field, normals, n)
    if u is not None:
        return u
    if field.q**n <= SCAN_LIMIT:
        W = np.array(normals)
        u = _scan(field, n, lambda U: np.all(field.matmul(U, W.T) != 0, axis=1))
        if u is not None:
            return u
    raise FieldTooSmallError(
        f"{len(normals)} hyperplanes cover GF({field.q})^{n}", required_q=required_q
    )


def avoid_subspaces(field, bases, n, required_q=None):
    """A nonzero vector of GF(q)^n in none of the row spaces ``bases``.

    Each subspace is replaced by one hyperplane containing it (its first
    annihilator); if the hyperplanes happen to cover the space, a full scan
    against the actual subspaces is tried when q^n is small enough.
    """
    reduced, normals = [], []
    for B in bases:
        B = np.asarray(B, dtype=np.int64).reshape(-1, n)
        R = field.row_basis(B) if B.shape[0] else B
        if R.shape[0] == n:
            raise InfeasibleError("one of the subspaces to avoid is the whole space")
        if R.shape[0] == 0:
            continue
        N = field.right_null_space(R)
        reduced.append(N)
        normals.append(N[0])
    normals = _dedupe_projective(field, normals)
    if not normals:
        u = np.zeros(n, dtype=np.int64)
        u[0] = 1
        return u
    u = _hyperplane_step(field, normals, n)
    if u is not None:
        return u
    if field.q**n <= SCAN_LIMIT:

        def outside(U):
            ok = np.ones(U.shape[0], dtype=bool)
            for N in reduced:
                ok &= np.any(field.matmul(U, N.T) != 0, axis=1)
            return ok

        u = _scan(field, n, outside)
        if u is not None:
            return u
        raise FieldTooSmallError(
            f"{len(reduced)} subspaces cover GF({field.q})^{n}", required_q=required_q
        )
    raise FieldTooSmallError(
        f"hyperplane construction failed for {len(normals)} subspaces and "
        f"q^n = {field.q**n} is too large to scan",
        required_q=required_q,
    )


def in_subspace(field, u, B):
    """Whether ``u`` lies in the row space of ``B``."""
    B = np.asarray(B, dtype=np.int64)
    if B.shape[0] == 0:
        return not np.any(u)
    return field.in_row_space(np.asarray(u, dtype=np.int64), B)
