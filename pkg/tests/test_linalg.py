import itertools
import random
from math import gcd

import pytest
from hypothesis import given, strategies as st

from strategies import int_matrices
from verdier import kernels
from verdier.corpus import random_chain_complex
from verdier.errors import ArithmeticOverflowError, ChainComplexError, InputError, RingMismatchError
from verdier.linalg import (
    ChainComplex,
    ChainMap,
    HomologySummary,
    Matrix,
    determinant,
    direct_sum,
    dual,
    free_module,
    invariant_factors,
    is_quasi_iso,
    mapping_cone,
    matrix_rank,
    normalize_torsion,
    parse_ring,
    ring_name,
    shift,
    smith_normal_form,
)


# -- oracles --------------------------------------------------------------


def det_oracle(a):
    """Laplace expansion; only for tiny matrices."""
    n = len(a)
    if n == 0:
        return 1
    return sum((-1) ** j * a[0][j] * det_oracle([row[:j] + row[j + 1:] for row in a[1:]]) for j in range(n) if a[0][j])


def determinantal_invariants(a):
    """Smith invariants from gcds of k x k minors: d_k = D_k / D_{k-1}."""
    m = len(a)
    n = len(a[0]) if m else 0
    out = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = gcd(g, det_oracle([[a[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def rank_mod_p_oracle(a, p):
    rows = [[v % p for v in r] for r in a]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][c], p - 2, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


# -- matrices -------------------------------------------------------------


def test_matrix_basics():
    A = Matrix.from_dense([[1, 2], [3, 4]])
    assert A @ Matrix.identity(2) == A
    assert (A - A).is_zero()
    assert A.T.to_dense() == [[1, 3], [2, 4]]
    assert determinant(A) == -2
    assert A.reduced(2).to_dense() == [[1, 0], [1, 0]]
    with pytest.raises(ValueError):
        Matrix.block([[A]], [3], [2])


@given(int_matrices(4, 4))
def test_determinant_matches_laplace(M):
    if M.nrows == M.ncols:
        assert determinant(M) == det_oracle(M.to_dense())


def test_smith_worked_example():
    U, S, V = smith_normal_form(Matrix.from_dense([[2, 4], [6, 8]]))
    assert S.to_dense() == [[2, 0], [0, 4]]
    assert invariant_factors(Matrix.from_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])) == [2, 6, 12]


@given(int_matrices(4, 4, 6))
def test_smith_matches_determinantal_divisors(M):
    assert invariant_factors(M) == determinantal_invariants(M.to_dense())


@given(int_matrices(6, 6))
def test_smith_form_is_certified(M):
    U, S, V = smith_normal_form(M)
    assert U @ M @ V == S
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    diag = [S[i, i] for i in range(min(S.shape))]
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz) and nz == diag[: len(nz)]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert S.nnz == len(nz)


@given(int_matrices(6, 6), st.sampled_from([2, 3, 5, 7]))
def test_rank_mod_p_matches_gaussian_oracle(M, p):
    assert matrix_rank(M, p) == rank_mod_p_oracle(M.to_dense(), p)


def _sparse_random(rng, m, n, density=0.15, values=(-1, 1, 1, 2, -3)):
    entries = {}
    for i in range(m):
        for j in range(n):
            if rng.random() < density:
                entries[(i, j)] = rng.choice(values)
    return Matrix.from_entries(m, n, [(i, j, v) for (i, j), v in entries.items()])


@pytest.mark.parametrize("modulus", [0, 2, 3])
def test_sparse_path_agrees_with_dense_path(modulus):
    rng = random.Random(11)
    for _ in range(60):
        M = _sparse_random(rng, rng.randint(1, 25), rng.randint(1, 25), density=0.1)
        got = invariant_factors(M, modulus)
        if modulus:
            assert len(got) == rank_mod_p_oracle(M.to_dense(), modulus)
        else:
            # smith_normal_form never takes the sparse route
            S = smith_normal_form(M).S
            assert got == [S[i, i] for i in range(min(S.shape)) if S[i, i]]


@pytest.mark.skipif(kernels.c_eliminate_units is None, reason="compiled kernel not built")
@pytest.mark.parametrize("modulus", [0, 2, 5])
def test_compiled_and_python_kernels_agree(modulus):
    rng = random.Random(modulus + 1)
    for _ in range(200):
        m, n = rng.randint(0, 30), rng.randint(0, 30)
        entries = list(_sparse_random(rng, m, n, rng.choice([0.05, 0.2, 0.5])).entries())
        py = kernels.py_eliminate_units(m, n, entries, modulus)
        cy = kernels.c_eliminate_units(m, n, entries, modulus)
        assert py[0] == cy[0]
        assert sorted(py[1]) == sorted(cy[1])


def test_overflow_falls_back_to_big_integers():
    big = 2**62
    # unit pivots multiply large entries; int64 overflows, Python ints do not
    M = Matrix.from_dense([[1, big, big], [big, 1, big], [big, big, 1]])
    want = determinantal_invariants(M.to_dense())
    entries = list(M.entries())
    assert kernels.bigint_fallback_enabled()
    pivots, residual = kernels.eliminate_units(3, 3, entries)
    assert pivots >= 1
    assert invariant_factors(M) == want


def test_overflow_raises_when_fallback_disabled():
    big = 2**62
    M = Matrix.from_dense([[1, big, big], [big, 1, big], [big, big, 1]])
    kernels.set_bigint_fallback(False)
    try:
        with pytest.raises(ArithmeticOverflowError):
            invariant_factors(M)
    finally:
        kernels.set_bigint_fallback(True)


# -- rings and summaries ----------------------------------------------------


def test_parse_ring():
    assert parse_ring("Z") == 0 and parse_ring("F2") == 2 and parse_ring("GF3") == 3 and parse_ring("Z/5") == 5
    assert ring_name(0) == "Z" and ring_name(7) == "F7"
    with pytest.raises(InputError):
        parse_ring("F4")
    with pytest.raises(InputError):
        parse_ring("Q")


def test_normalize_torsion():
    assert normalize_torsion([2, 3]) == (6,)
    assert normalize_torsion([4, 6]) == (2, 12)
    assert normalize_torsion([1, 1]) == ()


def test_summary_json_and_format():
    h = HomologySummary({0: (1, ()), -2: (0, (2,))})
    assert HomologySummary.from_json(h.to_json()) == h
    assert HomologySummary.from_json(h.to_json(cohomological=True), cohomological=True) == h
    assert h.format(cohomological=True) == "H^0 = Z, H^2 = Z/2"
    with pytest.raises(RingMismatchError):
        h + HomologySummary({}, 2)


# -- complexes --------------------------------------------------------------


def test_d_squared_violation_rejected():
    d1 = Matrix.from_dense([[1]])
    d2 = Matrix.from_dense([[1]])
    with pytest.raises(ChainComplexError):
        ChainComplex({0: 1, 1: 1, 2: 1}, {1: d1, 2: d2})
    with pytest.raises(ChainComplexError):
        ChainComplex({0: 1, 1: 2}, {1: d1})


def test_d_squared_mod_p():
    # d1 d2 = 2 vanishes over F2 only; d2 itself reduces to zero there
    C = ChainComplex({0: 1, 1: 1, 2: 1}, {1: Matrix.from_dense([[1]]), 2: Matrix.from_dense([[2]])}, 2)
    assert C.homology == HomologySummary({2: (1, ())}, 2)
    with pytest.raises(ChainComplexError):
        ChainComplex({0: 1, 1: 1, 2: 1}, {1: Matrix.from_dense([[1]]), 2: Matrix.from_dense([[2]])}, 3)


def test_homology_of_multiplication_by_m():
    C = ChainComplex({0: 1, 1: 1}, {1: Matrix.from_dense([[6]])})
    assert C.homology == HomologySummary({0: (0, (6,))})
    assert ChainComplex({0: 1, 1: 1}, {1: Matrix.from_dense([[6]])}, 3).homology == HomologySummary({0: (1, ()), 1: (1, ())}, 3)


@given(st.integers(0, 10_000), st.sampled_from([0, 2, 3]))
def test_random_complexes_have_known_homology(seed, modulus):
    C, h = random_chain_complex(seed, modulus=modulus)
    assert C.homology == h


@given(st.integers(0, 10_000), st.integers(-3, 3))
def test_shift_and_dual(seed, k):
    C, h = random_chain_complex(seed)
    assert shift(C, k).homology == h.shifted(k)
    D = dual(C)
    # universal coefficients: free part flips degree, torsion moves down by one
    free = {-n: (r, ()) for n, (r, _) in h.groups.items()}
    tors = {}
    for n, (_, t) in h.groups.items():
        if t:
            tors[-n - 1] = (0, t)
    want = HomologySummary({}, 0)
    want = want + HomologySummary(free) + HomologySummary(tors)
    assert D.homology == want


@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_direct_sum_adds_homology(s1, s2):
    A, ha = random_chain_complex(s1)
    B, hb = random_chain_complex(s2)
    assert direct_sum([A, B]).homology == ha + hb


@given(st.integers(0, 10_000))
def test_cone_of_identity_is_acyclic(seed):
    C, _ = random_chain_complex(seed)
    assert mapping_cone(ChainMap.identity(C)).homology.is_zero()
    assert is_quasi_iso(ChainMap.identity(C))


def test_cone_of_zero_map_is_not_acyclic():
    Z = free_module()
    assert not is_quasi_iso(ChainMap.zero(Z, Z))
    # multiplication by 2 is an iso over F3 but not over Z
    assert not is_quasi_iso(ChainMap.scalar(Z, 2))
    assert is_quasi_iso(ChainMap.scalar(free_module(1, 0, 3), 2))


def test_chain_map_checks():
    C = ChainComplex({0: 1, 1: 1}, {1: Matrix.from_dense([[1]])})
    flat = ChainComplex({0: 1, 1: 1})
    one = Matrix.from_dense([[1]])
    with pytest.raises(ChainComplexError):
        ChainMap(C, flat, {0: one})
    assert ChainMap(C, flat, {0: one}, check=False).first_noncommuting_degree() == 1
    f = ChainMap(C, flat, {1: one})
    assert f.is_chain_map()
    assert (f @ ChainMap.identity(C)).equals(f)
    with pytest.raises(ChainComplexError):
        ChainMap(C, flat, {0: Matrix.from_dense([[1, 1]])})


def test_complex_json_round_trip():
    C, _ = random_chain_complex(5)
    assert ChainComplex.from_json(C.to_json()) == C
    with pytest.raises(InputError):
        ChainComplex.from_json({"degrees": [0, 1], "ranks": {"0": 1}, "differentials": {"1": [[1, 2]]}})
