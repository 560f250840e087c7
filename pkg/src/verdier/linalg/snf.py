"""Smith normal form over the integers, and invariant factors over Z or F_p."""
from __future__ import annotations

from typing import NamedTuple

from .. import kernels
from ..errors import ArithmeticOverflowError
from .matrix import Matrix

DENSE_THRESHOLD = 0.25
_INT64_MAX = (1 << 63) - 1


class SmithForm(NamedTuple):
    U: Matrix
    S: Matrix
    V: Matrix


def _check_range(*values: int) -> None:
    if not kernels.bigint_fallback_enabled():
        for v in values:
            if not -_INT64_MAX <= v <= _INT64_MAX:
                raise ArithmeticOverflowError("entry left 64-bit range during Smith reduction")


def _smith_dense(a: list[list[int]], U: list[list[int]] | None, V: list[list[int]] | None) -> list[int]:
    """In-place Smith reduction of a dense matrix.

    Row operations are mirrored on ``U`` and column operations on ``V`` when
    they are given, so that ``U @ M @ V`` equals the final ``a``.  Pivots are
    chosen by smallest magnitude.  Returns the nonzero diagonal.
    """
    m = len(a)
    n = len(a[0]) if m else 0

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        if U is not None:
            U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        if V is not None:
            for row in V:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):  # row dst -= q * row src
        ra, rs = a[dst], a[src]
        for j in range(n):
            if rs[j]:
                ra[j] -= q * rs[j]
        _check_range(*ra)
        if U is not None:
            ua, us = U[dst], U[src]
            for j in range(m):
                if us[j]:
                    ua[j] -= q * us[j]

    def add_col(dst, src, q):  # col dst -= q * col src
        for row in a:
            if row[src]:
                row[dst] -= q * row[src]
        _check_range(*(row[dst] for row in a))
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, a[i][t] // p)
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, a[t][j] // p)
                    if a[t][j]:
                        clean = False
            if not clean:
                # a remainder is smaller than the pivot: move it into place
                best = None
                for i in range(t + 1, m):
                    if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                        best = (abs(a[i][t]), i, t)
                for j in range(t + 1, n):
                    if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                        best = (abs(a[t][j]), t, j)
                if best[0] < abs(p):
                    swap_rows(t, best[1])
                    swap_cols(t, best[2])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-v for v in a[t]]
            if U is not None:
                U[t] = [-v for v in U[t]]
        diag.append(a[t][t])
        t += 1
    return diag


def smith_normal_form(M: Matrix) -> SmithForm:
    """Return unimodular ``U``, ``V`` and diagonal ``S`` with ``U @ M @ V == S``.

    The diagonal of ``S`` is nonnegative and each nonzero entry divides the
    next.
    """
    a = M.to_dense()
    m, n = M.shape
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    if m and n:
        _smith_dense(a, U, V)
    return SmithForm(Matrix.from_dense(U, m), Matrix.from_dense(a, n), Matrix.from_dense(V, n))


def _dense_invariants(nrows: int, ncols: int, entries, modulus: int) -> list[int]:
    if not entries:
        return []
    rmap = {i: k for k, i in enumerate(sorted({e[0] for e in entries}))}
    cmap = {j: k for k, j in enumerate(sorted({e[1] for e in entries}))}
    a = [[0] * len(cmap) for _ in rmap]
    for i, j, v in entries:
        a[rmap[i]][cmap[j]] = v
    if modulus:
        return [1] * _rank_mod_dense(a, modulus)
    return _smith_dense(a, None, None)


def _rank_mod_dense(a: list[list[int]], p: int) -> int:
    a = [[v % p for v in row] for row in a]
    rank = 0
    m = len(a)
    n = len(a[0]) if m else 0
    for c in range(n):
        piv = next((i for i in range(rank, m) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        for i in range(m):
            if i != rank and a[i][c]:
                f = a[i][c] * inv % p
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def invariant_factors(M: Matrix, modulus: int = 0) -> list[int]:
    """Nonzero Smith invariants of ``M`` in divisibility order.

    Over ``F_p`` (``modulus = p``) every invariant is 1 and their number is
    the rank.  Sparse matrices go through unit-pivot elimination first; the
    residual (and any matrix denser than ``DENSE_THRESHOLD``) is finished by
    dense Smith reduction.
    """
    if M.is_zero():
        return []
    entries = list(M.entries())
    if M.density >= DENSE_THRESHOLD:
        return sorted_invariants(_dense_invariants(M.nrows, M.ncols, entries, modulus))
    pivots, residual = kernels.eliminate_units(M.nrows, M.ncols, entries, modulus)
    return [1] * pivots + sorted_invariants(_dense_invariants(M.nrows, M.ncols, residual, modulus))


def sorted_invariants(diag: list[int]) -> list[int]:
    # the dense reduction already yields a divisibility chain; sorting keeps
    # the concatenation with unit pivots canonical
    return sorted(abs(d) for d in diag if d)


def matrix_rank(M: Matrix, modulus: int = 0) -> int:
    return len(invariant_factors(M, modulus))
