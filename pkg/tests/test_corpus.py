import itertools
import json
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from verdier import corpus
from verdier.corpus import (
    MAX_RANDOM_SIZE,
    _checked_poincare,
    all_posets,
    antichain,
    boundary_simplex_poset,
    corpus_entries,
    example_nonregular,
    ordinal_sum,
    poincare_face_poset,
    poincare_sphere_complex,
    polygon_poset,
    random_graded_poset,
    random_interval_diagram,
    random_poset,
    suspension_poset,
)
from verdier.diagram import diagram_to_json, validate
from verdier.duality import is_gorenstein_star_poset, main_theorem_check
from verdier.errors import DataIntegrityError, InputError
from verdier.poset import from_covers, rank_function
from verdier.simplicial import order_complex, reduced_homology
from verdier.linalg import HomologySummary

GOLDEN = Path(__file__).resolve().parent.parent / "corpus" / "expected"


def _is_order(n, rel):
    for a, b, c in itertools.product(range(n), repeat=3):
        if (a, b) in rel and (b, c) in rel and (a, c) not in rel:
            return False
    return all(not ((a, b) in rel and (b, a) in rel) for a in range(n) for b in range(a + 1, n))


def _brute_count(n):
    """Count strict partial orders by testing every relation."""
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    return sum(
        _is_order(n, {p for p, bit in zip(pairs, bits) if bit})
        for bits in itertools.product((0, 1), repeat=len(pairs))
    )


def test_all_posets_counts():
    # labelled posets: OEIS A001035
    assert [sum(1 for _ in all_posets(n)) for n in range(6)] == [1, 1, 3, 19, 219, 4231]
    assert [_brute_count(n) for n in range(4)] == [1, 1, 3, 19]


def test_all_posets_distinct():
    seen = {tuple(P._up) for P in all_posets(4)}
    assert len(seen) == 219


def test_builder_shapes():
    assert sorted(boundary_simplex_poset(1).elements) == ["0", "1"] and not boundary_simplex_poset(1).covers
    assert len(boundary_simplex_poset(2)) == 6 and len(boundary_simplex_poset(3)) == 14
    assert len(polygon_poset(4)) == 8
    assert set(rank_function(polygon_poset(4)).values()) == {0, 1}
    assert rank_function(example_nonregular()) == {"0": 0, "1": 1, "1'": 1, "2": 2}
    with pytest.raises(InputError):
        polygon_poset(2)
    with pytest.raises(InputError):
        boundary_simplex_poset(0)


def test_polygon_three_is_triangle_boundary():
    P, Q = polygon_poset(3), boundary_simplex_poset(2)
    vmap = {"v0": "0", "v1": "1", "v2": "2"}
    emap = {f"e{i}": ",".join(sorted([vmap[f"v{i}"], vmap[f"v{(i + 1) % 3}"]])) for i in range(3)}
    iso = {**vmap, **emap}
    assert {(iso[a], iso[b]) for a, b in P.covers} == set(Q.covers)


def test_poincare_integrity():
    K = poincare_sphere_complex()
    assert K.f_vector == [16, 106, 180, 90]
    assert sum((-1) ** i * f for i, f in enumerate(K.f_vector)) == 0
    assert len(poincare_face_poset()) == 392


def test_poincare_tampering_detected():
    data = json.loads(corpus._data_bytes("poincare_sphere.json"))
    vs, fs = data["vertices"], data["facets"]
    with pytest.raises(DataIntegrityError):
        _checked_poincare(vs, fs[:-1])
    with pytest.raises(DataIntegrityError):
        _checked_poincare(vs[:-1], fs)
    # move one corner of a tetrahedron: its new triangles lie in only one facet
    swapped = [list(f) for f in fs]
    swapped[0][-1] = next(v for v in vs if v not in fs[0] and sorted(fs[0][:-1] + [v]) not in map(sorted, fs))
    with pytest.raises(DataIntegrityError):
        _checked_poincare(vs, swapped)
    with pytest.raises(DataIntegrityError):
        _checked_poincare(vs, [fs[0]] + fs[:-1])


def test_poincare_checksum_enforced(monkeypatch):
    real = corpus._data_bytes

    def tampered(name):
        raw = real(name)
        return raw + b" " if name == "poincare_sphere.json" else raw

    monkeypatch.setattr(corpus, "_data_bytes", tampered)
    with pytest.raises(DataIntegrityError):
        poincare_sphere_complex()


def test_suspensions():
    S0 = suspension_poset(from_covers([], []))
    assert len(S0) == 2 and not S0.covers
    S1 = suspension_poset(antichain(2))
    assert len(S1) == 4
    assert reduced_homology(order_complex(S1)) == HomologySummary({1: (1, ())})
    P = antichain(2)
    for _ in range(3):
        P = suspension_poset(P)
        assert is_gorenstein_star_poset(P).verdict is True


def test_ordinal_sum():
    P = ordinal_sum(antichain(2), from_covers(["x"], []))
    assert set(P.covers) == {("0", "x"), ("1", "x")}
    with pytest.raises(InputError):
        ordinal_sum(antichain(2), antichain(1))


@given(st.integers(0, 10_000), st.integers(0, 12))
def test_random_generators_deterministic(seed, size):
    assert random_poset(seed, size) == random_poset(seed, size)
    G = random_graded_poset(seed, size)
    assert G == random_graded_poset(seed, size)
    assert rank_function(G) is not None
    F = random_interval_diagram(seed, G)
    assert diagram_to_json(F) == diagram_to_json(random_interval_diagram(seed, G))
    assert validate(F)


def test_random_size_bound():
    with pytest.raises(InputError):
        random_poset(0, MAX_RANDOM_SIZE + 1)


def test_random_graded_golden():
    P = random_graded_poset(0, 6)
    golden = json.loads((GOLDEN / "random-graded-6-seed0.json").read_text(encoding="utf-8"))
    assert P.to_json() == golden["poset"]
    rep = main_theorem_check(P)
    assert not rep.inconsistent and rep.verdict is golden["verdier"]


@pytest.mark.parametrize("n", range(3, 13))
def test_polygon_verdicts_independent_of_n(n):
    rep = main_theorem_check(polygon_poset(n))
    assert rep.verdict is True and not rep.inconsistent
    assert is_gorenstein_star_poset(polygon_poset(n)).verdict is True


@pytest.mark.parametrize("n", range(1, 6))
def test_boundary_simplex_gorenstein(n):
    assert is_gorenstein_star_poset(boundary_simplex_poset(n)).verdict is True


def test_corpus_names_unique():
    names = [e.name for e in corpus_entries()]
    assert len(names) == len(set(names)) == 25
    for e in corpus_entries():
        assert set(e.basis) == {"verdier", "gorenstein"}
        assert set(e.basis.values()) <= {"published", "by inspection", "computed"}


@pytest.mark.parametrize("entry", [e for e in corpus_entries() if e.name != "poincare-face-poset"], ids=lambda e: e.name)
def test_corpus_verdicts_rederived(entry):
    P = entry.poset()
    rep = main_theorem_check(P)
    assert not rep.inconsistent
    assert rep.verdict is entry.verdier
    assert is_gorenstein_star_poset(P).verdict is entry.gorenstein


def test_poincare_entry_rederived():
    # (iii) over all 2552 pairs takes a few seconds; (ii) is the cheap route
    entry = next(e for e in corpus_entries() if e.name == "poincare-face-poset")
    P = entry.poset()
    rep = main_theorem_check(P)
    assert rep.verdict is entry.verdier and not rep.inconsistent
    assert is_gorenstein_star_poset(P).verdict is entry.gorenstein


@pytest.mark.parametrize("entry", corpus_entries(), ids=lambda e: e.name)
def test_golden_files_match(entry):
    rec = json.loads((GOLDEN / f"{entry.name}.json").read_text(encoding="utf-8"))
    P = entry.poset()
    assert rec["name"] == entry.name and rec["size"] == len(P)
    assert rec["verdier"] is entry.verdier and rec["gorenstein"] is entry.gorenstein
    assert rec["basis"] == entry.basis
    if len(P) <= 16:
        assert rec["poset"] == P.to_json()
