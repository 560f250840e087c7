import itertools
import pickle

import pytest
from hypothesis import given

from strategies import posets
from verdier.errors import CycleError, DuplicateElementError, NotGradedError, UnknownElementError, InputError
from verdier.poset import (
    add_bottom,
    add_top,
    chain_length_to,
    from_covers,
    from_relation,
    induced,
    opposite,
    poset_from_json,
    poset_to_json,
    rank_function,
    strict_chains,
)
from verdier.corpus import example_nonregular, fan_poset, polygon_poset


def brute_chains(P):
    out = []
    for k in range(1, len(P) + 1):
        for combo in itertools.permutations(P.elements, k):
            if all(P.lt(a, b) for a, b in zip(combo, combo[1:])):
                out.append(combo)
    return out


def brute_covers(P):
    return {
        (a, b)
        for a in P.elements
        for b in P.elements
        if P.lt(a, b) and not any(P.lt(a, c) and P.lt(c, b) for c in P.elements)
    }


def test_from_covers_closes_transitively():
    P = from_covers(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert P.leq("a", "c")
    assert not P.leq("c", "a")
    assert P.covers == (("a", "b"), ("b", "c"))


def test_redundant_cover_input_is_reduced():
    P = from_covers(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    assert set(P.covers) == {("a", "b"), ("b", "c")}


def test_cycle_rejected():
    with pytest.raises(CycleError):
        from_covers(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(CycleError):
        from_covers(["a"], [("a", "a")])


def test_unknown_and_duplicate_elements():
    with pytest.raises(UnknownElementError):
        from_covers(["a"], [("a", "z")])
    with pytest.raises(DuplicateElementError):
        from_covers(["a", "a"], [])
    with pytest.raises(UnknownElementError):
        example_nonregular().index("nope")


def test_nonregular_example_basics():
    P = example_nonregular()
    assert P.least() == "0" and P.greatest() == "2"
    assert P.interval("0", "2", open=True) == ["1", "1'"]
    assert not P.comparable("1", "1'")
    assert rank_function(P) == {"0": 0, "1": 1, "1'": 1, "2": 2}


def test_add_bottom_and_top_names_avoid_collisions():
    P = from_covers(["⊥", "x"], [])
    Q = add_bottom(P)
    assert len(Q) == 3 and Q.least() not in ("⊥", "x")
    R = add_top(add_bottom(example_nonregular()))
    assert R.least() == "⊥" and R.greatest() == "⊤" and len(R) == 6


def test_empty_poset():
    P = from_covers([], [])
    assert len(P) == 0 and P.covers == () and strict_chains(P) == []
    assert add_top(P).elements == ("⊤",)


def test_chain_length_to_on_graded_and_ungraded():
    P = polygon_poset(4)
    assert chain_length_to(P, "e0") == 1 and chain_length_to(P, "v2") == 0
    Q = from_covers(["a", "b", "c"], [("a", "b"), ("b", "c")])
    Q2 = from_relation(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("d", "c")])
    assert chain_length_to(Q, "c") == 2
    with pytest.raises(NotGradedError):
        chain_length_to(Q2, "c")


def test_rank_function_none_when_ungraded():
    Q = from_relation(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("a", "d"), ("d", "c"), ("a", "c")])
    assert rank_function(Q) is not None
    # a < b < c and a < d < e < c: cover paths of lengths 2 and 3
    R = from_covers(["a", "b", "c", "d", "e"], [("a", "b"), ("b", "c"), ("a", "d"), ("d", "e"), ("e", "c")])
    assert rank_function(R) is None


def test_json_round_trip_and_errors():
    P = fan_poset(3)
    assert poset_from_json(poset_to_json(P)) == P
    assert poset_from_json('{"elements": ["a"], "covers": []}').elements == ("a",)
    with pytest.raises(InputError):
        poset_from_json({"covers": []})
    with pytest.raises(InputError):
        poset_from_json({"elements": "abc", "covers": []})


def test_pickle_round_trip():
    P = polygon_poset(5)
    assert pickle.loads(pickle.dumps(P)) == P


@given(posets())
def test_covers_are_transitive_reduction(P):
    assert set(P.covers) == brute_covers(P)


@given(posets())
def test_strict_chains_match_brute_force(P):
    assert sorted(strict_chains(P)) == sorted(brute_chains(P))


@given(posets())
def test_chain_filters(P):
    if not len(P):
        return
    last = P.elements[: len(P) // 2 + 1]
    first = P.elements[len(P) // 2:]
    got = strict_chains(P, last_in=last, first_in=first)
    want = [c for c in brute_chains(P) if c[-1] in last and c[0] in first]
    assert sorted(got) == sorted(want)


@given(posets())
def test_opposite_is_involution(P):
    Q = opposite(P)
    assert opposite(Q) == P
    assert all(Q.leq(b, a) == P.leq(a, b) for a in P.elements for b in P.elements)


@given(posets())
def test_induced_keeps_order(P):
    sub = P.elements[::2]
    Q = induced(P, sub)
    assert all(Q.leq(a, b) == P.leq(a, b) for a in sub for b in sub)


@given(posets())
def test_rank_function_matches_brute_force(P):
    rf = rank_function(P)
    graded = _brute_graded(P)
    assert (rf is not None) == graded
    if rf is not None:
        assert all(rf[b] == rf[a] + 1 for a, b in P.covers)


def _brute_graded(P):
    """A rank function exists iff some labelling in a small range works."""
    n = len(P)
    if n == 0:
        return True
    for labels in itertools.product(range(n), repeat=n):
        lab = dict(zip(P.elements, labels))
        if all(lab[b] == lab[a] + 1 for a, b in P.covers):
            return True
    return False
