"""Standard posets, complexes and seeded random generators for testing."""
from __future__ import annotations

import hashlib
import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

from .diagram import Diagram, diagram_direct_sum, interval_unit, shift_diagram
from .errors import DataIntegrityError, InputError
from .linalg import ChainComplex, HomologySummary, Matrix
from .poset import FinitePoset, from_covers, from_relation, from_up_masks
from .simplicial import SimplicialComplex, face_poset

__all__ = [
    "boundary_simplex_poset",
    "polygon_poset",
    "example_nonregular",
    "fan_poset",
    "antichain",
    "chain",
    "poincare_sphere_complex",
    "poincare_face_poset",
    "suspension_poset",
    "ordinal_sum",
    "random_poset",
    "random_graded_poset",
    "random_chain_complex",
    "random_interval_diagram",
    "all_posets",
    "CorpusEntry",
    "corpus_entries",
    "MAX_RANDOM_SIZE",
]

MAX_RANDOM_SIZE = 64


def boundary_simplex_poset(n: int) -> FinitePoset:
    """Proper nonempty subsets of ``{0..n}`` by inclusion."""
    if n < 1:
        raise InputError("boundary of a simplex needs n >= 1")
    facets = itertools.combinations(range(n + 1), n)
    return face_poset(SimplicialComplex.from_facets(facets, vertices=range(n + 1)))


def polygon_poset(n: int) -> FinitePoset:
    """Vertices ``v0..`` and edges ``e0..`` of an n-gon, ``e_i`` above ``v_i`` and ``v_{i+1}``."""
    if n < 3:
        raise InputError("a polygon needs at least 3 sides")
    vs = [f"v{i}" for i in range(n)]
    es = [f"e{i}" for i in range(n)]
    covers = []
    for i in range(n):
        covers.append((vs[i], es[i]))
        covers.append((vs[(i + 1) % n], es[i]))
    return from_covers(vs + es, covers)


def example_nonregular() -> FinitePoset:
    """``0 < 1 < 2`` and ``0 < 1' < 2``."""
    return from_covers(["0", "1", "1'", "2"], [("0", "1"), ("0", "1'"), ("1", "2"), ("1'", "2")])


def fan_poset(k: int) -> FinitePoset:
    """``k`` minimal elements ``a0..`` all below a single element ``p``."""
    if k < 0:
        raise InputError("k must be nonnegative")
    mins = [f"a{i}" for i in range(k)]
    return from_covers(mins + ["p"], [(a, "p") for a in mins])


def antichain(n: int) -> FinitePoset:
    return from_covers([str(i) for i in range(n)], [])


def chain(n: int) -> FinitePoset:
    """``0 < 1 < ... < n-1``."""
    els = [str(i) for i in range(n)]
    return from_covers(els, list(zip(els, els[1:])))


# -- vendored data ----------------------------------------------------------


def _data_bytes(name: str) -> bytes:
    try:
        return resources.files("verdier.data").joinpath(name).read_bytes()
    except (FileNotFoundError, OSError) as exc:
        raise DataIntegrityError(f"bundled data file {name} is missing") from exc


def poincare_sphere_complex() -> SimplicialComplex:
    """16-vertex triangulation of the Poincaré homology 3-sphere.

    The file's checksum and its combinatorics (16 vertices, 90 tetrahedra,
    every triangle in exactly two tetrahedra) are verified on load.
    """
    raw = _data_bytes("poincare_sphere.json")
    manifest = json.loads(_data_bytes("MANIFEST.json"))
    digest = hashlib.sha256(raw).hexdigest()
    if manifest.get("poincare_sphere.json") != digest:
        raise DataIntegrityError("poincare_sphere.json does not match its checksum")
    data = json.loads(raw)
    return _checked_poincare(data["vertices"], data["facets"])


def _checked_poincare(vertices, facets) -> SimplicialComplex:
    if len(set(vertices)) != 16:
        raise DataIntegrityError("expected 16 vertices")
    if len(facets) != 90 or len({frozenset(f) for f in facets}) != 90:
        raise DataIntegrityError("expected 90 distinct tetrahedra")
    vset = set(vertices)
    if any(len(set(f)) != 4 or not set(f) <= vset for f in facets):
        raise DataIntegrityError("every facet must be a tetrahedron on known vertices")
    triangles = Counter(frozenset(t) for f in facets for t in itertools.combinations(f, 3))
    if any(c != 2 for c in triangles.values()):
        raise DataIntegrityError("not a pseudomanifold: some triangle is not in exactly two tetrahedra")
    return SimplicialComplex.from_facets(facets, vertices=vertices)


def poincare_face_poset() -> FinitePoset:
    return face_poset(poincare_sphere_complex())


# -- builders ---------------------------------------------------------------


def _fresh(P: FinitePoset, base: str) -> str:
    name, k = base, 0
    while name in P:
        k += 1
        name = f"{base}{k}"
    return name


def suspension_poset(P: FinitePoset) -> FinitePoset:
    """``P`` plus two incomparable elements above everything in ``P``."""
    n = len(P)
    plus = _fresh(P, "s+")
    minus = _fresh(P, "s-")
    if minus == plus:
        minus = _fresh(P, "s-'")
    up = [m | (1 << n) | (1 << (n + 1)) for m in P._up] + [1 << n, 1 << (n + 1)]
    return from_up_masks(list(P.elements) + [plus, minus], up)


def ordinal_sum(P: FinitePoset, Q: FinitePoset) -> FinitePoset:
    """Disjoint union with every element of ``P`` below every element of ``Q``."""
    if set(P.elements) & set(Q.elements):
        raise InputError("ordinal sum needs disjoint element names")
    n = len(P)
    qall = ((1 << len(Q)) - 1) << n
    up = [m | qall for m in P._up] + [m << n for m in Q._up]
    return from_up_masks(list(P.elements) + list(Q.elements), up)


# -- random generators --------------------------------------------------------


def _check_size(size: int) -> None:
    if not 0 <= size <= MAX_RANDOM_SIZE:
        raise InputError(f"size must be between 0 and {MAX_RANDOM_SIZE}")


def random_poset(seed: int, size: int, density: float = 0.35) -> FinitePoset:
    """Transitive closure of a random DAG on ``0..size-1`` (edges ``i -> j``, ``i < j``)."""
    _check_size(size)
    rng = random.Random(seed)
    els = [str(i) for i in range(size)]
    pairs = [(els[i], els[j]) for i in range(size) for j in range(i + 1, size) if rng.random() < density]
    return from_relation(els, pairs)


def random_graded_poset(seed: int, size: int, max_rank: int | None = None) -> FinitePoset:
    """Random poset with a rank function: every non-minimal element covers
    at least one element of the previous rank."""
    _check_size(size)
    rng = random.Random(seed)
    if size == 0:
        return from_covers([], [])
    top = max_rank if max_rank is not None else rng.randint(0, min(3, size - 1))
    ranks = sorted([0] + [rng.randint(0, top) for _ in range(size - 1)])
    # make the rank sequence gapless
    levels = sorted(set(ranks))
    ranks = [levels.index(r) for r in ranks]
    els = [f"x{i}" for i in range(size)]
    by_rank: dict[int, list[int]] = {}
    for i, r in enumerate(ranks):
        by_rank.setdefault(r, []).append(i)
    covers = []
    for i, r in enumerate(ranks):
        if r == 0:
            continue
        below = by_rank[r - 1]
        chosen = [j for j in below if rng.random() < 0.5] or [rng.choice(below)]
        covers.extend((els[j], els[i]) for j in chosen)
    return from_covers(els, covers)


def _unimodular(rng: random.Random, n: int, steps: int, bound: int = 2) -> tuple[list[list[int]], list[list[int]]]:
    """A random product of elementary matrices and its inverse."""
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    Ui = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([c for c in range(-bound, bound + 1) if c])
        # U <- E U with E = I + c e_ij ; Ui <- Ui E^{-1}
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        for row in Ui:
            row[j] -= c * row[i]
    return U, Ui


def random_chain_complex(
    seed: int | random.Random,
    lo: int = -2,
    hi: int = 2,
    max_pieces: int = 4,
    modulus: int = 0,
    max_torsion: int = 6,
    mix: bool = True,
) -> tuple[ChainComplex, HomologySummary]:
    """A bounded complex with known homology.

    Built from elementary pieces (``Z`` in one degree, or ``Z -m-> Z``) and
    then scrambled by random unimodular changes of basis in every degree.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    pieces = []
    for _ in range(rng.randint(0, max_pieces)):
        n = rng.randint(lo, hi)
        if n > lo and rng.random() < 0.6:
            pieces.append((n, rng.choice([1, -1] + list(range(2, max_torsion + 1)))))
        else:
            pieces.append((n, 0))
    ranks: dict[int, int] = {}
    entries: dict[int, list[tuple[int, int, int]]] = {}
    expected: dict[int, tuple[int, list[int]]] = {}

    def bump(n: int) -> int:
        k = ranks.get(n, 0)
        ranks[n] = k + 1
        return k

    for n, m in pieces:
        if m == 0:
            bump(n)
            r, t = expected.get(n, (0, []))
            expected[n] = (r + 1, t)
            continue
        top, bot = bump(n), bump(n - 1)
        entries.setdefault(n, []).append((bot, top, m))
        if modulus:
            if m % modulus == 0:
                for k in (n, n - 1):
                    r, t = expected.get(k, (0, []))
                    expected[k] = (r + 1, t)
        elif abs(m) > 1:
            r, t = expected.get(n - 1, (0, []))
            expected[n - 1] = (r, t + [abs(m)])
    diffs = {n: Matrix.from_entries(ranks.get(n - 1, 0), ranks[n], e) for n, e in entries.items()}
    if mix:
        basis = {n: _unimodular(rng, r, 2 * r) for n, r in ranks.items()}
        # new d_n = U_{n-1} d_n U_n^{-1}
        for n in list(diffs):
            U_lo = Matrix.from_dense(basis[n - 1][0], ranks[n - 1])
            Ui_hi = Matrix.from_dense(basis[n][1], ranks[n])
            diffs[n] = U_lo @ diffs[n] @ Ui_hi
    return ChainComplex(ranks, diffs, modulus), HomologySummary(expected, modulus)


def random_interval_diagram(
    seed: int,
    P: FinitePoset,
    max_terms: int = 3,
    modulus: int = 0,
    shifts: tuple[int, int] = (-1, 1),
) -> Diagram:
    """A finite sum of shifted interval units ``E_[p,q][k]`` with small random ``E``."""
    rng = random.Random(seed)
    pairs = P.comparable_pairs(strict=False)
    if not pairs:
        return Diagram(P, {}, {}, modulus)
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        p, q = rng.choice(pairs)
        E, _ = random_chain_complex(rng, -1, 1, 2, modulus, 4)
        if E.is_zero():
            E = ChainComplex({0: 1}, {}, modulus)
        terms.append(shift_diagram(interval_unit(P, p, q, E), rng.randint(*shifts)))
    return diagram_direct_sum(terms)


def all_posets(n: int):
    """Every partial order on the labels ``0..n-1`` (no isomorphism reduction).

    New elements are inserted one at a time with a compatible down-set and
    up-set, which enumerates each labelled poset exactly once.
    """
    if n < 0:
        raise InputError("n must be nonnegative")
    els = [str(i) for i in range(n)]
    for ups in _extend([], n):
        yield from_up_masks(els, ups)


def _extend(up: list[int], n: int):
    m = len(up)
    if m == n:
        yield list(up)
        return
    down = [0] * m
    for i in range(m):
        for j in range(m):
            if up[i] >> j & 1:
                down[j] |= 1 << i
    full = (1 << m) - 1
    bit = 1 << m
    for dmask in range(full + 1):
        # down-set must be closed downwards
        if any(dmask >> j & 1 and (down[j] & ~dmask) for j in range(m)):
            continue
        allowed = full & ~dmask
        for a in range(m):
            if dmask >> a & 1:
                allowed &= up[a]
        # up-set: closed upwards, disjoint from the down-set, above all of it
        sub = allowed
        while True:
            umask = sub
            if all(not (umask >> j & 1) or (up[j] & ~umask) == 0 for j in range(m)):
                new_up = [
                    u | bit if dmask >> i & 1 else u for i, u in enumerate(up)
                ]
                yield from _extend(new_up + [bit | umask], n)
            if sub == 0:
                break
            sub = (sub - 1) & allowed


# -- corpus -------------------------------------------------------------------


@dataclass
class CorpusEntry:
    """A named poset with expected verdicts.

    ``basis`` records why each expectation holds: ``"published"`` for facts
    taken from the literature, ``"by inspection"`` for immediate ones and
    ``"computed"`` for values worked out by hand or by an independent oracle.
    """

    name: str
    build: Callable[[], FinitePoset]
    verdier: bool
    gorenstein: bool
    basis: dict = field(default_factory=dict)
    note: str = ""

    def poset(self) -> FinitePoset:
        return self.build()


def corpus_entries() -> list[CorpusEntry]:
    E = CorpusEntry
    out = [
        E("antichain-1", lambda: antichain(1), True, False, {"verdier": "by inspection", "gorenstein": "computed"},
          "the open interval (⊥,⊤) is a point"),
        E("antichain-2", lambda: antichain(2), True, True, {"verdier": "by inspection", "gorenstein": "computed"},
          "face poset of the 0-sphere"),
        E("antichain-3", lambda: antichain(3), True, False, {"verdier": "by inspection", "gorenstein": "computed"},
          "three points have no sphere homology"),
        E("chain-2", lambda: chain(2), False, False, {"verdier": "computed", "gorenstein": "computed"}),
        E("chain-3", lambda: chain(3), False, False, {"verdier": "computed", "gorenstein": "computed"}),
        E("example-nonregular", example_nonregular, False, False, {"verdier": "published", "gorenstein": "computed"},
          "witness pair (0,1)"),
    ]
    for k in range(2, 7):
        out.append(E(f"fan-{k}", lambda k=k: fan_poset(k), k == 2, False,
                     {"verdier": "computed", "gorenstein": "computed"},
                     f"{k} minimal elements under p"))
    for n in range(1, 5):
        out.append(E(f"boundary-simplex-{n}", lambda n=n: boundary_simplex_poset(n), True, True,
                     {"verdier": "published", "gorenstein": "computed"}))
    for n in range(3, 9):
        out.append(E(f"polygon-{n}", lambda n=n: polygon_poset(n), True, True,
                     {"verdier": "published", "gorenstein": "computed"}))
    out += [
        E("suspension-antichain-2", lambda: suspension_poset(antichain(2)), True, True,
          {"verdier": "computed", "gorenstein": "computed"}, "a circle with two cells in each dimension"),
        E("double-suspension-antichain-2", lambda: suspension_poset(suspension_poset(antichain(2))), True, True,
          {"verdier": "computed", "gorenstein": "computed"}),
        E("poincare-face-poset", poincare_face_poset, True, True,
          {"verdier": "published", "gorenstein": "computed"},
          "392 faces of the 16-vertex Poincaré homology sphere"),
        E("random-graded-6-seed0", lambda: random_graded_poset(0, 6), False, False,
          {"verdier": "computed", "gorenstein": "computed"}, "x1 < x2 makes P_{<x2} a point"),
    ]
    return out
