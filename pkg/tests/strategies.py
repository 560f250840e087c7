"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from verdier.linalg import Matrix
from verdier.poset import from_relation


@st.composite
def posets(draw, max_size=6):
    n = draw(st.integers(0, max_size))
    els = [str(i) for i in range(n)]
    pairs = [(els[i], els[j]) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())]
    # shuffle labels so the order is not always the natural one
    perm = draw(st.permutations(range(n))) if n else []
    names = {els[i]: els[perm[i]] for i in range(n)}
    return from_relation(els, [(names[a], names[b]) for a, b in pairs])


@st.composite
def int_matrices(draw, max_rows=5, max_cols=5, bound=9):
    m = draw(st.integers(0, max_rows))
    n = draw(st.integers(0, max_cols))
    rows = draw(st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=m, max_size=m))
    return Matrix.from_dense(rows, n)
