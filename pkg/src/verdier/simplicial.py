"""Finite abstract simplicial complexes, order complexes and sphere tests.

Faces are stored as increasing tuples of vertex indices; boundary signs follow
the vertex list order.  Reduced homology uses the augmented complex, so the
empty complex has H̃_{-1} = R (the sphere S^{-1}).
"""
from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from functools import cached_property
from itertools import combinations

from .errors import InputError, NotAFaceError
from .linalg import ChainComplex, HomologySummary, Matrix, dual
from .poset import FinitePoset, chain_indices

__all__ = [
    "SimplicialComplex",
    "order_complex",
    "link",
    "boundary_matrices",
    "reduced_homology",
    "reduced_cohomology",
    "cohomology",
    "sphere_dimension",
    "is_sphere_homology",
    "is_gorenstein_star_complex",
    "complex_from_json",
    "complex_to_json",
    "face_poset",
]


class SimplicialComplex:
    __slots__ = ("vertices", "_vindex", "_faces", "__dict__")

    def __init__(self, vertices: Sequence[str], faces: Iterable[tuple[int, ...]]):
        """Trusted constructor: ``faces`` must be downward closed index tuples."""
        self.vertices: tuple[str, ...] = tuple(vertices)
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self._faces: frozenset[tuple[int, ...]] = frozenset(faces)

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable], vertices: Sequence | None = None) -> SimplicialComplex:
        facets = [[str(v) for v in f] for f in facets]
        if vertices is None:
            seen: dict[str, None] = {}
            for f in facets:
                for v in f:
                    seen.setdefault(v)
            vertices = list(seen)
        vertices = [str(v) for v in vertices]
        if len(set(vertices)) != len(vertices):
            raise InputError("duplicate vertex")
        vindex = {v: i for i, v in enumerate(vertices)}
        faces: set[tuple[int, ...]] = set()
        for f in facets:
            try:
                idx = tuple(sorted({vindex[v] for v in f}))
            except KeyError as exc:
                raise InputError(f"facet uses unknown vertex {exc.args[0]!r}") from None
            if len(idx) != len(f):
                raise InputError(f"facet {f} repeats a vertex")
            if not idx or idx in faces:
                continue
            for k in range(1, len(idx) + 1):
                faces.update(combinations(idx, k))
        faces.update((i,) for i in range(len(vertices)))
        return cls(vertices, faces)

    # -- structure ------------------------------------------------------
    def __len__(self) -> int:
        return len(self._faces)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertices == other.vertices and self._faces == other._faces

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"SimplicialComplex(dim={self.dim}, f={self.f_vector})"

    @property
    def dim(self) -> int:
        return max((len(f) for f in self._faces), default=0) - 1

    @cached_property
    def faces_by_dim(self) -> dict[int, list[tuple[int, ...]]]:
        out: dict[int, list[tuple[int, ...]]] = {}
        for f in self._faces:
            out.setdefault(len(f) - 1, []).append(f)
        for lst in out.values():
            lst.sort()
        return dict(sorted(out.items()))

    @property
    def f_vector(self) -> list[int]:
        return [len(self.faces_by_dim.get(d, [])) for d in range(self.dim + 1)]

    def faces(self) -> list[tuple[str, ...]]:
        vs = self.vertices
        return [tuple(vs[i] for i in f) for d in self.faces_by_dim for f in self.faces_by_dim[d]]

    def facets(self) -> list[tuple[str, ...]]:
        covered = {g[:k] + g[k + 1:] for g in self._faces for k in range(len(g))}
        maximal = [f for f in self._faces if f not in covered]
        vs = self.vertices
        return [tuple(vs[i] for i in f) for f in sorted(maximal, key=lambda f: (len(f), f))]

    def face_index(self, face: Iterable[str]) -> tuple[int, ...]:
        try:
            return tuple(sorted(self._vindex[str(v)] for v in face))
        except KeyError as exc:
            raise NotAFaceError(f"unknown vertex {exc.args[0]!r}") from None

    def contains(self, face: Iterable[str]) -> bool:
        idx = self.face_index(face)
        return not idx or idx in self._faces

    def euler_characteristic(self) -> int:
        """Unreduced Euler characteristic from face counts."""
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector))


def order_complex(P: FinitePoset) -> SimplicialComplex:
    """Faces are the nonempty chains of ``P``; vertices are its elements."""
    return SimplicialComplex(P.elements, (tuple(sorted(c)) for c in chain_indices(P)))


def link(K: SimplicialComplex, sigma: Iterable[str] = ()) -> SimplicialComplex:
    """Faces disjoint from ``sigma`` whose union with it is a face of ``K``."""
    s = K.face_index(sigma)
    if not s:
        return K
    if s not in K._faces:
        raise NotAFaceError(f"{tuple(K.vertices[i] for i in s)} is not a face")
    sset = set(s)
    taus = [tuple(i for i in f if i not in sset) for f in K._faces if len(f) > len(s) and sset.issubset(f)]
    used = sorted({i for t in taus for i in t})
    pos = {i: k for k, i in enumerate(used)}
    return SimplicialComplex([K.vertices[i] for i in used], (tuple(pos[i] for i in t) for t in taus))


def boundary_matrices(K: SimplicialComplex, ring: int = 0, augmented: bool = True) -> ChainComplex:
    """Simplicial chain complex; degree -1 carries the augmentation when ``augmented``."""
    by_dim = K.faces_by_dim
    ranks = {d: len(fs) for d, fs in by_dim.items()}
    diffs = {}
    if augmented:
        ranks[-1] = 1
        if 0 in by_dim:
            diffs[0] = Matrix(1, ranks[0], {0: {j: 1 for j in range(ranks[0])}})
    for d, fs in by_dim.items():
        if d == 0:
            continue
        lower = {f: i for i, f in enumerate(by_dim[d - 1])}
        rows: dict[int, dict[int, int]] = {}
        for j, f in enumerate(fs):
            for k in range(len(f)):
                i = lower[f[:k] + f[k + 1:]]
                rows.setdefault(i, {})[j] = -1 if k % 2 else 1
        diffs[d] = Matrix(ranks[d - 1], ranks[d], rows)
    return ChainComplex(ranks, diffs, ring, check=False)


def reduced_homology(K: SimplicialComplex, ring: int = 0) -> HomologySummary:
    return boundary_matrices(K, ring).homology


def reduced_cohomology(K: SimplicialComplex, ring: int = 0) -> HomologySummary:
    """H̃^n in homological degree -n."""
    return dual(boundary_matrices(K, ring)).homology


def cohomology(K: SimplicialComplex, ring: int = 0) -> HomologySummary:
    """Unreduced cohomology, H^n in homological degree -n."""
    return dual(boundary_matrices(K, ring, augmented=False)).homology


def sphere_dimension(summary: HomologySummary) -> int | None:
    """``d`` when the (reduced) summary is that of S^d, else None."""
    if len(summary.groups) != 1:
        return None
    (d, (rank, torsion)), = summary.groups.items()
    if rank == 1 and not torsion:
        return d
    return None


def is_sphere_homology(K: SimplicialComplex, ring: int = 0) -> tuple[bool, int | None]:
    d = sphere_dimension(reduced_homology(K, ring))
    return d is not None, d


def is_gorenstein_star_complex(K: SimplicialComplex, ring: int = 0) -> bool:
    """Every face link (including the empty face) has the homology of a sphere
    of complementary dimension."""
    n = K.dim
    if n < 0:
        return True
    if sphere_dimension(reduced_homology(K, ring)) != n:
        return False
    vs = K.vertices
    for f in sorted(K._faces, key=lambda f: (len(f), f)):
        lk = link(K, [vs[i] for i in f])
        if sphere_dimension(reduced_homology(lk, ring)) != n - len(f):
            return False
    return True


def face_poset(K: SimplicialComplex) -> FinitePoset:
    """Nonempty faces ordered by inclusion; elements are comma-joined vertex names."""
    faces = sorted(K._faces, key=lambda f: (len(f), f))
    names = [",".join(K.vertices[i] for i in f) for f in faces]
    index = {f: k for k, f in enumerate(faces)}
    up = [0] * len(faces)
    # fill up-masks from the top dimension down: up(f) = f ∪ ⋃ up(cofacets)
    for f in reversed(faces):
        mask = 1 << index[f]
        up[index[f]] = mask
    for f in reversed(faces):
        k = index[f]
        for j in range(len(f)):
            g = f[:j] + f[j + 1:]
            if g:
                up[index[g]] |= up[k]
    return FinitePoset(names, up)


def complex_from_json(data: dict | str) -> SimplicialComplex:
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict) or not isinstance(data.get("facets"), list):
        raise InputError("complex JSON must be an object with a 'facets' list")
    return SimplicialComplex.from_facets(data["facets"], data.get("vertices"))


def complex_to_json(K: SimplicialComplex) -> dict:
    return {"vertices": list(K.vertices), "facets": [list(f) for f in K.facets()]}
