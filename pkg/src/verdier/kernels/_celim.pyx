# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled sparse unit-pivot elimination (int64 with overflow detection).

Mirrors ``_pyelim.eliminate_units`` pivot for pivot.  Raises OverflowError
when an entry leaves the signed 64-bit range; the caller then reruns the
pure-Python kernel on big integers.
"""
from libcpp.vector cimport vector
from libcpp.pair cimport pair
from libcpp.algorithm cimport sort as std_sort

cdef extern from *:
    """
    static inline int verdier_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int verdier_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    bint verdier_mul_ovf(long long a, long long b, long long *r) nogil
    bint verdier_sub_ovf(long long a, long long b, long long *r) nogil

ctypedef pair[int, long long] Entry
ctypedef vector[Entry] Row


cdef long long _modinv(long long a, long long p):
    cdef long long t = 0, newt = 1, r = p, newr = a % p, q, tmp
    if newr < 0:
        newr += p
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef long long _mod(long long a, long long p):
    a = a % p
    if a < 0:
        a += p
    return a


cdef int _find(Row& row, int col):
    """Position of ``col`` in the sorted row, or -1."""
    cdef int lo = 0, hi = <int>row.size(), mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if row[mid].first < col:
            lo = mid + 1
        else:
            hi = mid
    if lo < <int>row.size() and row[lo].first == col:
        return lo
    return -1


def eliminate_units(int nrows, int ncols, entries, long long modulus=0):
    cdef vector[Row] rows = vector[Row](nrows)
    cdef vector[vector[int]] colrows = vector[vector[int]](ncols)
    cdef vector[int] colcount = vector[int](ncols, 0)
    cdef long long v
    cdef int i, j
    cdef int pivots = 0
    cdef bint progress = True
    cdef vector[pair[int, int]] order
    cdef int r, r2, k, best, best_count, cnt, pos, a, b, c
    cdef long long pv, inv, f, prod, nv, av
    cdef Row merged
    cdef size_t t
    if modulus < 0 or modulus >= (1LL << 31):
        raise OverflowError("modulus outside the compiled kernel's range")
    for e in entries:
        i = e[0]
        j = e[1]
        v = e[2]
        if modulus:
            v = _mod(v, modulus)
        if v:
            rows[i].push_back(Entry(j, v))
    for i in range(nrows):
        std_sort(rows[i].begin(), rows[i].end())
        for k in range(<int>rows[i].size()):
            colrows[rows[i][k].first].push_back(i)
            colcount[rows[i][k].first] += 1

    while progress:
        progress = False
        order.clear()
        for i in range(nrows):
            if rows[i].size():
                order.push_back(pair[int, int](<int>rows[i].size(), i))
        std_sort(order.begin(), order.end())
        for t in range(order.size()):
            r = order[t].second
            if rows[r].size() == 0:
                continue
            best = -1
            best_count = 0
            for k in range(<int>rows[r].size()):
                av = rows[r][k].second
                if modulus or av == 1 or av == -1:
                    c = rows[r][k].first
                    cnt = colcount[c]
                    if best < 0 or cnt < best_count or (cnt == best_count and c < best):
                        best = c
                        best_count = cnt
            if best < 0:
                continue
            pos = _find(rows[r], best)
            pv = rows[r][pos].second
            inv = _modinv(pv, modulus) if modulus else pv
            for k in range(<int>colrows[best].size()):
                r2 = colrows[best][k]
                if r2 == r or rows[r2].size() == 0:
                    continue
                pos = _find(rows[r2], best)
                if pos < 0:
                    continue
                if modulus:
                    f = _mod(rows[r2][pos].second * inv, modulus)
                else:
                    if verdier_mul_ovf(rows[r2][pos].second, inv, &f):
                        raise OverflowError("int64 overflow")
                # merged = row2 - f * row
                merged.clear()
                a = 0
                b = 0
                while a < <int>rows[r2].size() or b < <int>rows[r].size():
                    if b >= <int>rows[r].size() or (
                        a < <int>rows[r2].size() and rows[r2][a].first < rows[r][b].first
                    ):
                        merged.push_back(rows[r2][a])
                        a += 1
                        continue
                    c = rows[r][b].first
                    if modulus:
                        prod = _mod(f * rows[r][b].second, modulus)
                    elif verdier_mul_ovf(f, rows[r][b].second, &prod):
                        raise OverflowError("int64 overflow")
                    if a < <int>rows[r2].size() and rows[r2][a].first == c:
                        if modulus:
                            nv = _mod(rows[r2][a].second - prod, modulus)
                        elif verdier_sub_ovf(rows[r2][a].second, prod, &nv):
                            raise OverflowError("int64 overflow")
                        a += 1
                        if nv:
                            merged.push_back(Entry(c, nv))
                        else:
                            colcount[c] -= 1
                    else:
                        if modulus:
                            nv = _mod(-prod, modulus)
                        elif verdier_sub_ovf(0, prod, &nv):
                            raise OverflowError("int64 overflow")
                        if nv:
                            merged.push_back(Entry(c, nv))
                            colrows[c].push_back(r2)
                            colcount[c] += 1
                    b += 1
                rows[r2].swap(merged)
            for k in range(<int>rows[r].size()):
                colcount[rows[r][k].first] -= 1
            rows[r].clear()
            colrows[best].clear()
            pivots += 1
            progress = True

    residual = []
    for i in range(nrows):
        for k in range(<int>rows[i].size()):
            residual.append((i, rows[i][k].first, rows[i][k].second))
    return pivots, residual
