import json

import pytest
from hypothesis import given, settings, strategies as st

from strategies import posets
from verdier.corpus import (
    all_posets,
    antichain,
    boundary_simplex_poset,
    chain,
    corpus_entries,
    example_nonregular,
    polygon_poset,
    random_graded_poset,
    random_interval_diagram,
)
from verdier.diagram import (
    Diagram,
    constant_diagram,
    corep_sheaf,
    diagram_direct_sum,
    validate,
)
from verdier.duality import (
    VerdictReport,
    cone_check,
    dualize,
    generator_image_check,
    hereditary_check,
    is_gorenstein_star_poset,
    is_verdier,
    is_verdier_via_gorenstein,
    limit_colimit_check,
    main_theorem_check,
    vanishing_table,
)
from verdier.errors import PreconditionError
from verdier.linalg import ChainMap, HomologySummary, free_module
from verdier.poset import add_bottom, add_top, from_covers, opposite, rank_function
from verdier.simplicial import SimplicialComplex, face_poset

Z = HomologySummary({0: (1, ())})
ZERO = HomologySummary({})


def full_triangle():
    return face_poset(SimplicialComplex.from_facets([[0, 1, 2]]))


def dual_values(F):
    D = dualize(F)
    return {p: D.value(p).homology for p in F.base.elements}


# -- dualize ----------------------------------------------------------------------


def test_dualize_singleton_is_identity():
    P = from_covers(["s"], [])
    F = random_interval_diagram(1, P)
    assert dual_values(F) == {"s": F.value("s").homology}


def test_dualize_antichain_is_pointwise():
    P = antichain(2)
    F = random_interval_diagram(5, P, max_terms=4)
    assert dual_values(F) == {p: F.value(p).homology for p in P.elements}


def test_dualize_corep_at_edge():
    P = boundary_simplex_poset(2)
    got = dual_values(corep_sheaf(P, "0,1"))
    assert got.pop("0,1") == HomologySummary({-1: (1, ())})
    assert all(h.is_zero() for h in got.values())


@settings(max_examples=30)
@given(posets(5), st.integers(0, 10_000))
def test_dualize_output_validates(P, seed):
    D = dualize(random_interval_diagram(seed, P))
    assert validate(D)
    assert D.poset == P and D.base == opposite(P)


@settings(max_examples=30)
@given(posets(5), st.integers(0, 10_000))
def test_dualize_is_additive(P, seed):
    F = random_interval_diagram(seed, P)
    G = random_interval_diagram(seed + 1, P)
    both = dual_values(diagram_direct_sum([F, G]))
    f, g = dual_values(F), dual_values(G)
    assert both == {p: f[p] + g[p] for p in P.elements}


# -- deciders ---------------------------------------------------------------------


def test_verdier_examples():
    rep = is_verdier(example_nonregular())
    assert rep.verdict is False
    assert rep.witnesses == [{"pair": ["0", "1"], "homology": {"0": {"rank": 1, "torsion": []}}}]
    assert is_verdier(boundary_simplex_poset(3)).verdict is True
    assert is_verdier(from_covers([], [])).verdict is True


def test_gorenstein_examples():
    assert is_gorenstein_star_poset(antichain(2)).verdict is True
    rep = is_gorenstein_star_poset(chain(2))
    assert rep.verdict is False and rep.witnesses[0]["pair"] == ["⊥", "⊤"]
    assert is_gorenstein_star_poset(boundary_simplex_poset(2)).verdict is True


def test_verdier_via_gorenstein_examples():
    rep = is_verdier_via_gorenstein(example_nonregular())
    assert rep.verdict is False and rep.witnesses[0]["element"] == "1"
    assert is_verdier_via_gorenstein(boundary_simplex_poset(3)).verdict is True
    for n in range(4):
        assert is_verdier_via_gorenstein(antichain(n)).verdict is True


def test_main_theorem_examples():
    for P in [boundary_simplex_poset(2), boundary_simplex_poset(3)] + [polygon_poset(n) for n in range(3, 9)]:
        rep = main_theorem_check(P)
        assert rep.verdict is True and not rep.inconsistent
    for n in range(2, 6):
        rep = main_theorem_check(chain(n))
        assert rep.verdict is False and not rep.inconsistent


def test_main_theorem_exhaustive_up_to_four():
    for n in range(5):
        for P in all_posets(n):
            assert not main_theorem_check(P).inconsistent


@settings(max_examples=40)
@given(st.integers(0, 10_000), st.integers(1, 9))
def test_main_theorem_on_random_graded(seed, size):
    P = random_graded_poset(seed, size)
    assert not main_theorem_check(P).inconsistent
    assert not cone_check(P).inconsistent


def test_cone_check_examples():
    assert cone_check(antichain(2)).verdict is True
    assert cone_check(chain(2)).verdict is False
    rep = cone_check(boundary_simplex_poset(2))
    assert rep.verdict is True and not rep.inconsistent


def test_full_triangle_and_its_opposite():
    # a cone over a Gorenstein* poset is Verdier; its opposite has a least element
    # below every vertex, so P^op_{<v} is contractible and the opposite is not
    P = full_triangle()
    assert main_theorem_check(P).verdict is True
    rep = main_theorem_check(opposite(P))
    assert rep.verdict is False and not rep.inconsistent


@given(posets(6))
def test_gorenstein_self_dual(P):
    assert is_gorenstein_star_poset(P).verdict == is_gorenstein_star_poset(opposite(P)).verdict


@pytest.mark.parametrize("entry", [e for e in corpus_entries() if e.name != "poincare-face-poset"], ids=lambda e: e.name)
def test_homology_and_cohomology_routes_agree(entry):
    P = entry.build()
    a = is_gorenstein_star_poset(P).verdict
    b = is_gorenstein_star_poset(P, use_cohomology=True).verdict
    assert a == b
    assert is_verdier_via_gorenstein(P).verdict == is_verdier_via_gorenstein(P, use_cohomology=True).verdict


@given(posets(6))
def test_gorenstein_implies_rank_function(P):
    if is_gorenstein_star_poset(P).verdict:
        assert rank_function(add_top(add_bottom(P))) is not None


def test_ring_choice_is_reported():
    rep = is_gorenstein_star_poset(polygon_poset(4), "F2")
    assert rep.ring == "F2" and rep.verdict is True
    # the projective plane: links are circles, the whole is no sphere over any of these
    rp2 = [[0, 1, 2], [0, 2, 3], [0, 1, 5], [0, 4, 5], [0, 3, 4], [1, 2, 4], [1, 3, 4], [1, 3, 5], [2, 3, 5], [2, 4, 5]]
    P = face_poset(SimplicialComplex.from_facets(rp2))
    want = {
        "Z": {"1": {"rank": 0, "torsion": [2]}},
        "F2": {"1": {"rank": 1, "torsion": []}, "2": {"rank": 1, "torsion": []}},
        "F3": {},
    }
    for ring, homology in want.items():
        rep = is_gorenstein_star_poset(P, ring)
        assert rep.verdict is False and rep.ring == ring
        assert rep.witnesses[0]["pair"] == ["⊥", "⊤"]
        assert rep.witnesses[0]["reduced_homology"] == homology


def test_parallel_matches_serial():
    for P in (polygon_poset(6), example_nonregular(), boundary_simplex_poset(3)):
        for f in (is_verdier, is_gorenstein_star_poset, is_verdier_via_gorenstein):
            a, b = f(P, jobs=1), f(P, jobs=2)
            assert (a.verdict, a.witnesses) == (b.verdict, b.witnesses)


def test_sampling_and_skip():
    P = polygon_poset(8)
    skipped = is_verdier(P, full_check_bound=4)
    assert skipped.verdict is None and "skipped" in skipped.witnesses[0]
    a = is_verdier(P, full_check_bound=4, sample_pairs=5, seed=3)
    b = is_verdier(P, full_check_bound=4, sample_pairs=5, seed=3)
    assert a.seed == 3 and a.verdict is True and a.witnesses == b.witnesses and len(a.witnesses) == 5
    rep = main_theorem_check(P, full_check_bound=4)
    assert rep.verdict is True and not rep.inconsistent


def test_report_json_round_trip():
    rep = main_theorem_check(example_nonregular())
    data = json.loads(json.dumps(rep.to_json()))
    assert VerdictReport.from_json(data) == rep
    assert set(data) >= {"property", "verdict", "witnesses", "timing_ms", "seed"}


# -- theorem renderings -------------------------------------------------------------


def test_generator_image_examples():
    rep = generator_image_check(boundary_simplex_poset(2))
    assert rep.verdict is True
    degrees = {w["element"]: w["degree"] for w in rep.witnesses}
    assert degrees["0"] == 0 and degrees["0,1"] == -1
    assert generator_image_check(from_covers(["s"], [])).witnesses == [{"element": "s", "degree": 0}]
    assert generator_image_check(polygon_poset(5)).verdict is True
    with pytest.raises(PreconditionError):
        generator_image_check(example_nonregular())


def test_hereditary_examples():
    assert hereditary_check(boundary_simplex_poset(3)).verdict is True
    assert hereditary_check(boundary_simplex_poset(2)).verdict is True
    assert hereditary_check(from_covers(["s"], [])).verdict is True
    with pytest.raises(PreconditionError):
        hereditary_check(chain(2))


def _diamond_diagram(bottom_value):
    P = antichain(2)
    B = add_top(add_bottom(P))
    Z0 = free_module()
    ident = ChainMap.identity(Z0)
    at = {p: Z0 for p in B.elements}
    if not bottom_value:
        del at["⊥"]
    edges = {e: ident for e in B.covers if e[0] in at}
    return P, Diagram(B, at, edges)


def test_limit_colimit_examples():
    P, F = _diamond_diagram(True)
    rep = limit_colimit_check(P, F)
    assert rep.verdict is True and not rep.inconsistent
    P, F = _diamond_diagram(False)
    rep = limit_colimit_check(P, F)
    assert rep.verdict is False and not rep.inconsistent
    E = from_covers([], [])
    B = add_top(add_bottom(E))
    Z0 = free_module()
    iso = Diagram(B, {"⊥": Z0, "⊤": Z0}, {("⊥", "⊤"): ChainMap.scalar(Z0, -1)})
    assert limit_colimit_check(E, iso).verdict is True
    with pytest.raises(PreconditionError):
        limit_colimit_check(chain(2), constant_diagram(add_top(add_bottom(chain(2)))))
    with pytest.raises(PreconditionError):
        limit_colimit_check(antichain(2), constant_diagram(antichain(2)))


@settings(max_examples=20)
@given(st.integers(0, 10_000))
def test_limit_iff_colimit_on_random_diagrams(seed):
    P = boundary_simplex_poset(2)
    F = random_interval_diagram(seed, add_top(add_bottom(P)))
    assert not limit_colimit_check(P, F).inconsistent


def test_vanishing_table_examples():
    P = boundary_simplex_poset(2)
    table = vanishing_table(P)
    for (p, q), h in table.items():
        if p != q:
            assert h.is_zero()
    assert table[("0,1", "0,1")] == HomologySummary({-1: (1, ())})
    assert not vanishing_table(example_nonregular())[("0", "1")].is_zero()
    assert vanishing_table(from_covers(["s"], [])) == {("s", "s"): Z}
