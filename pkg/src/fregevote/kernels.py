"""Batch apportionment on integer vote counts.

Every rule is evaluated with exact int64 arithmetic (cross-multiplied
comparisons, no floats), so results agree with the Fraction-based reference
in :mod:`fregevote.apportionment` whenever the inputs pass the overflow guard.

Two backends share one interface:

* ``numba``: per-row loops compiled with ``@njit``, rows in parallel;
* ``numpy``: rows vectorized, looping over seats and parties.

The default is numba when it is importable, unless the environment variable
``FREGEVOTE_DISABLE_NUMBA`` is set to a true value.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

METHOD_ORDER = (
    "largest-remainder",
    "dhondt",
    "adams",
    "sainte-lague",
    "huntington-hill",
    "quota",
    "frege",
)
METHOD_CODES = {name: code for code, name in enumerate(METHOD_ORDER)}
LR, DHONDT, ADAMS, SAINTE_LAGUE, HUNTINGTON_HILL, QUOTA, FREGE = range(7)

_DISABLED = os.environ.get("FREGEVOTE_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}
HAVE_NUMBA = numba is not None
DEFAULT_BACKEND = "numba" if HAVE_NUMBA and not _DISABLED else "numpy"

_LIMIT = 2**62


# -- scalar kernels (compiled by numba when available) ---------------------

def _priority(code, v, a):
    # divisor priority v / d(a) as num / den; den == 0 means infinite
    if code == DHONDT:
        return v, a + 1
    if code == ADAMS:
        return v, a
    if code == SAINTE_LAGUE:
        return 2 * v, 2 * a + 1
    return v * v, a * (a + 1)


def _divisor_one(code, v, k, out):
    m = v.shape[0]
    for _ in range(k):
        best = -1
        bnum = 0
        bden = 0
        for i in range(m):
            if v[i] == 0:
                continue
            num, den = _priority(code, v[i], out[i])
            if best < 0:
                better = True
            elif den == 0 and bden == 0:
                better = v[i] > v[best]
            elif den == 0:
                better = True
            elif bden == 0:
                better = False
            else:
                better = num * bden > bnum * den
            if better:
                best = i
                bnum = num
                bden = den
        out[best] += 1


def _largest_remainder_one(v, k, out):
    m = v.shape[0]
    total = 0
    for i in range(m):
        total += v[i]
    rem = np.empty(m, np.int64)
    given = 0
    for i in range(m):
        q = k * v[i]
        out[i] = q // total
        rem[i] = q - out[i] * total
        given += out[i]
    taken = np.zeros(m, np.bool_)
    for _ in range(k - given):
        best = -1
        for i in range(m):
            if not taken[i] and (best < 0 or rem[i] > rem[best]):
                best = i
        taken[best] = True
        out[best] += 1


def _quota_one(v, k, out):
    m = v.shape[0]
    total = 0
    for i in range(m):
        total += v[i]
    for ell in range(1, k + 1):
        best = -1
        for i in range(m):
            if out[i] * total >= v[i] * ell:
                continue
            if best < 0 or v[i] * (out[best] + 1) > v[best] * (out[i] + 1):
                best = i
        out[best] += 1


def _frege_one(v, k, out):
    m = v.shape[0]
    total = 0
    for i in range(m):
        total += v[i]
    s = v.copy()
    for _ in range(k):
        best = 0
        for i in range(1, m):
            if s[i] > s[best]:
                best = i
        out[best] += 1
        s[best] -= total
        for i in range(m):
            s[i] += v[i]


def _allocate_one(code, v, k, out):
    if code == LR:
        _largest_remainder_one(v, k, out)
    elif code == QUOTA:
        _quota_one(v, k, out)
    elif code == FREGE:
        _frege_one(v, k, out)
    else:
        _divisor_one(code, v, k, out)


if HAVE_NUMBA:
    _jit = numba.njit(cache=True)
    _priority = _jit(_priority)
    _divisor_one = _jit(_divisor_one)
    _largest_remainder_one = _jit(_largest_remainder_one)
    _quota_one = _jit(_quota_one)
    _frege_one = _jit(_frege_one)
    _allocate_one = _jit(_allocate_one)

    @numba.njit(parallel=True, cache=True)
    def _allocate_rows_numba(code, votes, ks):
        out = np.zeros(votes.shape, np.int64)
        for r in numba.prange(votes.shape[0]):
            _allocate_one(code, votes[r], ks[r], out[r])
        return out

    # for callers that run their own worker threads
    @numba.njit(nogil=True, cache=True)
    def _allocate_rows_serial(code, votes, ks):
        out = np.zeros(votes.shape, np.int64)
        for r in range(votes.shape[0]):
            _allocate_one(code, votes[r], ks[r], out[r])
        return out


# -- numpy backend -----------------------------------------------------------

def _np_pick(valid, num, den, v):
    """Row-wise first index maximizing num/den among valid columns (den 0 = infinite)."""
    S, m = valid.shape
    rows = np.arange(S)
    best = np.zeros(S, np.int64)
    has = valid[:, 0].copy()
    for j in range(1, m):
        bn, bd, bv = num[rows, best], den[rows, best], v[rows, best]
        nj, dj, vj = num[:, j], den[:, j], v[:, j]
        both_inf = (dj == 0) & (bd == 0)
        better = np.where(
            both_inf,
            vj > bv,
            np.where(dj == 0, True, np.where(bd == 0, False, nj * bd > bn * dj)),
        )
        take = valid[:, j] & (~has | better)
        best[take] = j
        has |= valid[:, j]
    return best


def _np_priorities(code, V, A):
    if code == DHONDT:
        return V, A + 1
    if code == ADAMS:
        return V, A
    if code == SAINTE_LAGUE:
        return 2 * V, 2 * A + 1
    return V * V, A * (A + 1)


def _np_allocate(code, V, ks):
    S, m = V.shape
    rows = np.arange(S)
    A = np.zeros((S, m), np.int64)
    N = V.sum(axis=1)
    kmax = int(ks.max()) if S else 0
    if code == LR:
        Q = ks[:, None] * V
        A = Q // N[:, None]
        rem = Q - A * N[:, None]
        left = ks - A.sum(axis=1)
        order = np.argsort(-rem, axis=1, kind="stable")
        rank = np.empty_like(order)
        np.put_along_axis(rank, order, np.broadcast_to(np.arange(m), (S, m)), axis=1)
        return A + (rank < left[:, None])
    if code == FREGE:
        s = V.copy()
        for ell in range(kmax):
            active = ell < ks
            w = np.argmax(s, axis=1)
            A[rows, w] += active
            s[rows, w] -= N
            s += V
        return A
    for ell in range(1, kmax + 1):
        active = ell <= ks
        if code == QUOTA:
            valid = (A * N[:, None] < V * ell) & active[:, None]
            best = _np_pick(valid, V, A + 1, V)
        else:
            num, den = _np_priorities(code, V, A)
            best = _np_pick((V > 0) & active[:, None], num, den, V)
        A[rows, best] += active
    return A


# -- public interface --------------------------------------------------------

def check_bounds(votes: np.ndarray, ks: np.ndarray) -> None:
    """Raise OverflowError if int64 intermediate products could overflow."""
    if votes.size == 0:
        return
    vmax = int(votes.max())
    kmax = int(ks.max()) + 1
    nmax = int(votes.sum(axis=1).max())
    if 4 * vmax * vmax * kmax * kmax >= _LIMIT or 4 * kmax * nmax >= _LIMIT:
        raise OverflowError("vote counts too large for the int64 kernels")


def allocate_batch(method: str, votes, ks, backend: str | None = None, parallel: bool = True) -> np.ndarray:
    """Seats for every row of ``votes`` (shape S x m) with house sizes ``ks``.

    ``ks`` is an int or a length-S array. Returns an int64 array of shape S x m.
    With ``parallel=False`` the numba backend stays on the calling thread
    (and releases the GIL), which is what thread-pool callers want.
    """
    code = METHOD_CODES[method]
    votes = np.ascontiguousarray(votes, dtype=np.int64)
    if votes.ndim != 2:
        raise ValueError("votes must be a 2-d array")
    ks = np.broadcast_to(np.asarray(ks, dtype=np.int64), votes.shape[:1]).copy()
    if (votes < 0).any() or (votes.sum(axis=1) <= 0).any():
        raise ValueError("every row needs non-negative votes with a positive total")
    if (ks < 1).any():
        raise ValueError("house sizes must be positive")
    check_bounds(votes, ks)
    backend = backend or DEFAULT_BACKEND
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is not installed")
        if parallel:
            return _allocate_rows_numba(code, votes, ks)
        return _allocate_rows_serial(code, votes, ks)
    if backend == "numpy":
        return _np_allocate(code, votes, ks)
    raise ValueError(f"unknown backend {backend!r}")


def allocate(method: str, votes, k: int, backend: str | None = None) -> tuple[int, ...]:
    row = allocate_batch(method, np.asarray(votes, dtype=np.int64)[None, :], k, backend)[0]
    return tuple(int(x) for x in row)
