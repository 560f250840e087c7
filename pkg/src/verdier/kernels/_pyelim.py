"""Pure-Python sparse unit-pivot elimination.

Reference twin of ``_celim.pyx``: both run the same pivot sequence, so they
report the same pivot count on every input.
"""
from __future__ import annotations

from ..errors import ArithmeticOverflowError

INT64_MAX = (1 << 63) - 1


def eliminate_units(nrows, ncols, entries, modulus=0, bigint=True):
    """Eliminate unit pivots from a sparse integer matrix.

    ``entries`` is an iterable of ``(row, col, value)`` without duplicates.
    Returns ``(pivots, residual)`` where ``residual`` lists the surviving
    nonzero entries.  The Smith invariants of the input are ``pivots`` ones
    followed by the invariants of the residual.  With ``modulus = p`` the
    arithmetic is over F_p and every nonzero entry is a unit.

    With ``bigint=False`` entries are confined to signed 64-bit range and
    ArithmeticOverflowError is raised instead of growing past it.
    """
    rows = [dict() for _ in range(nrows)]
    cols = [set() for _ in range(ncols)]
    for i, j, v in entries:
        if modulus:
            v %= modulus
        if v:
            rows[i][j] = v
            cols[j].add(i)

    if modulus:
        def is_unit(v):
            return True
    else:
        def is_unit(v):
            return v == 1 or v == -1

    pivots = 0
    progress = True
    while progress:
        progress = False
        order = sorted((len(r), i) for i, r in enumerate(rows) if r)
        for _, r in order:
            row = rows[r]
            if not row:
                continue
            best = -1
            best_count = 0
            for c, v in row.items():
                if is_unit(v):
                    cnt = len(cols[c])
                    if best < 0 or cnt < best_count or (cnt == best_count and c < best):
                        best, best_count = c, cnt
            if best < 0:
                continue
            pv = row[best]
            inv = pow(pv, -1, modulus) if modulus else pv
            for r2 in list(cols[best]):
                if r2 == r:
                    continue
                row2 = rows[r2]
                f = row2[best] * inv
                if modulus:
                    f %= modulus
                for c, v in row.items():
                    nv = row2.get(c, 0) - f * v
                    if modulus:
                        nv %= modulus
                    elif not bigint and not -INT64_MAX <= nv <= INT64_MAX:
                        raise ArithmeticOverflowError("entry left 64-bit range during elimination")
                    if nv:
                        if c not in row2:
                            cols[c].add(r2)
                        row2[c] = nv
                    elif c in row2:
                        del row2[c]
                        cols[c].discard(r2)
            for c in row:
                cols[c].discard(r)
            rows[r] = {}
            pivots += 1
            progress = True

    residual = [(i, c, v) for i, row in enumerate(rows) for c, v in row.items()]
    return pivots, residual
