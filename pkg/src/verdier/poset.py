"""Finite posets stored as reflexive-transitive bit relations.

Each element ``i`` carries two Python-int bitmasks: ``up[i]`` has bit ``j`` set
iff ``i <= j`` and ``down[i]`` has bit ``j`` set iff ``j <= i``.  The Hasse
diagram is always recomputed from the relation, so covers stored on a poset
are exactly the transitive reduction of its order.

Element identifiers are strings; every deterministic ordering in the package
(chains, pairs, witnesses) derives from the element list order.
"""
from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from functools import cached_property

from .errors import (
    CycleError,
    DuplicateElementError,
    InputError,
    NotGradedError,
    UnknownElementError,
)

__all__ = [
    "FinitePoset",
    "from_covers",
    "from_relation",
    "opposite",
    "induced",
    "add_bottom",
    "add_top",
    "strict_chains",
    "rank_function",
    "chain_length_to",
    "poset_from_json",
    "poset_to_json",
]


def _bits(mask: int):
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FinitePoset:
    """An immutable finite poset.

    Build instances with :func:`from_covers` or :func:`from_relation`; the
    constructor trusts its inputs.
    """

    __slots__ = ("elements", "_index", "_up", "_down", "__dict__")

    def __init__(self, elements: Sequence[str], up: Sequence[int]):
        self.elements: tuple[str, ...] = tuple(elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        self._up: tuple[int, ...] = tuple(up)
        down = [0] * len(self.elements)
        for i, mask in enumerate(self._up):
            for j in _bits(mask):
                down[j] |= 1 << i
        self._down: tuple[int, ...] = tuple(down)

    # -- basic protocol -------------------------------------------------
    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, item) -> bool:
        return item in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.elements == other.elements and self._up == other._up

    def __hash__(self) -> int:
        return hash((self.elements, self._up))

    def __repr__(self) -> str:
        return f"FinitePoset({len(self)} elements, {len(self.covers)} covers)"

    def __reduce__(self):
        return (FinitePoset, (self.elements, self._up))

    # -- indexing -------------------------------------------------------
    def index(self, p: str) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise UnknownElementError(f"unknown element {p!r}") from None

    def leq(self, p: str, q: str) -> bool:
        return bool(self._up[self.index(p)] >> self.index(q) & 1)

    def lt(self, p: str, q: str) -> bool:
        return p != q and self.leq(p, q)

    def comparable(self, p: str, q: str) -> bool:
        return self.leq(p, q) or self.leq(q, p)

    def up_mask(self, i: int, strict: bool = False) -> int:
        return self._up[i] & ~(1 << i) if strict else self._up[i]

    def down_mask(self, i: int, strict: bool = False) -> int:
        return self._down[i] & ~(1 << i) if strict else self._down[i]

    def mask_of(self, subset: Iterable[str]) -> int:
        mask = 0
        for p in subset:
            mask |= 1 << self.index(p)
        return mask

    def elements_of(self, mask: int) -> list[str]:
        return [self.elements[i] for i in _bits(mask)]

    # -- derived sets ---------------------------------------------------
    def above(self, p: str, strict: bool = False) -> list[str]:
        return self.elements_of(self.up_mask(self.index(p), strict))

    def below(self, p: str, strict: bool = False) -> list[str]:
        return self.elements_of(self.down_mask(self.index(p), strict))

    def interval(self, p: str, q: str, open: bool = False) -> list[str]:
        i, j = self.index(p), self.index(q)
        mask = self._up[i] & self._down[j]
        if open:
            mask &= ~((1 << i) | (1 << j))
        return self.elements_of(mask)

    @cached_property
    def _cover_masks(self) -> tuple[int, ...]:
        out = []
        for i in range(len(self.elements)):
            strict = self._up[i] & ~(1 << i)
            beyond = 0
            for k in _bits(strict):
                beyond |= self._up[k] & ~(1 << k)
            out.append(strict & ~beyond)
        return tuple(out)

    @cached_property
    def covers(self) -> tuple[tuple[str, str], ...]:
        """Hasse edges ``(p, q)`` with ``p`` covered by ``q``."""
        els = self.elements
        return tuple(
            (els[i], els[j]) for i, m in enumerate(self._cover_masks) for j in _bits(m)
        )

    def upper_covers(self, p: str) -> list[str]:
        return self.elements_of(self._cover_masks[self.index(p)])

    @cached_property
    def _lower_cover_masks(self) -> tuple[int, ...]:
        out = [0] * len(self.elements)
        for i, m in enumerate(self._cover_masks):
            for j in _bits(m):
                out[j] |= 1 << i
        return tuple(out)

    def lower_covers(self, p: str) -> list[str]:
        return self.elements_of(self._lower_cover_masks[self.index(p)])

    def minimal_elements(self) -> list[str]:
        return [e for i, e in enumerate(self.elements) if self._down[i] == 1 << i]

    def maximal_elements(self) -> list[str]:
        return [e for i, e in enumerate(self.elements) if self._up[i] == 1 << i]

    def least(self) -> str | None:
        full = (1 << len(self)) - 1
        for i, mask in enumerate(self._up):
            if mask == full:
                return self.elements[i]
        return None

    def greatest(self) -> str | None:
        full = (1 << len(self)) - 1
        for i, mask in enumerate(self._down):
            if mask == full:
                return self.elements[i]
        return None

    def comparable_pairs(self, strict: bool = True) -> list[tuple[str, str]]:
        """All ``(p, q)`` with ``p < q`` (or ``p <= q``), in element order."""
        els = self.elements
        out = []
        for i, mask in enumerate(self._up):
            if strict:
                mask &= ~(1 << i)
            out.extend((els[i], els[j]) for j in _bits(mask))
        return out

    def relation_matrix(self) -> list[list[bool]]:
        n = len(self)
        return [[bool(self._up[i] >> j & 1) for j in range(n)] for i in range(n)]

    @cached_property
    def _topological_order(self) -> tuple[int, ...]:
        return tuple(sorted(range(len(self)), key=lambda i: self._down[i].bit_count()))

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "covers": [list(c) for c in self.covers]}


# -- construction ------------------------------------------------------


def _check_elements(elements: Sequence[str]) -> tuple[str, ...]:
    elements = tuple(str(e) for e in elements)
    seen = set()
    for e in elements:
        if e in seen:
            raise DuplicateElementError(f"duplicate element {e!r}")
        seen.add(e)
    return elements


def _closure_from_edges(n: int, succ: list[int]) -> list[int]:
    """Reflexive-transitive closure of a digraph given by successor masks."""
    indeg = [0] * n
    for i in range(n):
        for j in _bits(succ[i]):
            indeg[j] += 1
    order = []
    stack = [i for i in range(n) if indeg[i] == 0]
    stack.reverse()
    while stack:
        i = stack.pop()
        order.append(i)
        for j in _bits(succ[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                stack.append(j)
    if len(order) != n:
        raise CycleError("cover relation contains a directed cycle")
    up = [1 << i for i in range(n)]
    for i in reversed(order):
        for j in _bits(succ[i]):
            up[i] |= up[j]
    return up


def from_covers(elements: Sequence[str], covers: Iterable[Sequence[str]]) -> FinitePoset:
    """Poset generated by ``covers``; redundant input edges are dropped."""
    elements = _check_elements(elements)
    index = {e: i for i, e in enumerate(elements)}
    succ = [0] * len(elements)
    for edge in covers:
        if len(edge) != 2:
            raise InputError(f"cover edge must be a pair, got {edge!r}")
        p, q = (str(x) for x in edge)
        for x in (p, q):
            if x not in index:
                raise UnknownElementError(f"cover references unknown element {x!r}")
        if p == q:
            raise CycleError(f"self-loop on {p!r}")
        succ[index[p]] |= 1 << index[q]
    return FinitePoset(elements, _closure_from_edges(len(elements), succ))


def from_relation(elements: Sequence[str], pairs: Iterable[Sequence[str]]) -> FinitePoset:
    """Poset whose order is the reflexive-transitive closure of ``pairs``."""
    return from_covers(elements, pairs)


def from_up_masks(elements: Sequence[str], up: Sequence[int]) -> FinitePoset:
    """Trusted constructor from closed up-set masks (used by enumerators)."""
    return FinitePoset(elements, up)


def opposite(P: FinitePoset) -> FinitePoset:
    return FinitePoset(P.elements, P._down)


def induced(P: FinitePoset, subset: Iterable[str]) -> FinitePoset:
    """Full subposet on ``subset`` (kept in the element order of ``P``)."""
    mask = P.mask_of(subset)
    old = list(_bits(mask))
    pos = {o: k for k, o in enumerate(old)}
    up = []
    for o in old:
        m = 0
        for j in _bits(P._up[o] & mask):
            m |= 1 << pos[j]
        up.append(m)
    return FinitePoset([P.elements[o] for o in old], up)


def _fresh(P: FinitePoset, base: str) -> str:
    name, k = base, 0
    while name in P:
        k += 1
        name = f"{base}{k}"
    return name


def add_bottom(P: FinitePoset, name: str = "⊥") -> FinitePoset:
    """``P`` with a new least element, placed first in element order."""
    bot = _fresh(P, name)
    n = len(P)
    up = [(1 << (n + 1)) - 1] + [m << 1 for m in P._up]
    return FinitePoset((bot,) + P.elements, up)


def add_top(P: FinitePoset, name: str = "⊤") -> FinitePoset:
    """``P`` with a new greatest element, placed last in element order."""
    top = _fresh(P, name)
    n = len(P)
    up = [m | (1 << n) for m in P._up] + [1 << n]
    return FinitePoset(P.elements + (top,), up)


# -- chains ------------------------------------------------------------


def chain_indices(
    P: FinitePoset, last_mask: int | None = None, first_mask: int | None = None
) -> list[tuple[int, ...]]:
    """Strict chains as index tuples, filtered on first/last element.

    Sorted by length, then lexicographically by index.
    """
    n = len(P)
    full = (1 << n) - 1
    last_mask = full if last_mask is None else last_mask
    first_mask = full if first_mask is None else first_mask
    memo: dict[int, list[tuple[int, ...]]] = {}

    def ending(x: int) -> list[tuple[int, ...]]:
        got = memo.get(x)
        if got is not None:
            return got
        out = [(x,)] if first_mask >> x & 1 else []
        for y in _bits(P._down[x] & ~(1 << x)):
            out.extend(c + (x,) for c in ending(y))
        memo[x] = out
        return out

    chains: list[tuple[int, ...]] = []
    # fill the memo bottom-up to keep recursion shallow on tall posets
    for x in P._topological_order:
        if P._up[x] & last_mask:
            ending(x)
    for x in _bits(last_mask):
        chains.extend(ending(x))
    chains.sort(key=lambda c: (len(c), c))
    return chains


def strict_chains(
    P: FinitePoset,
    last_in: Iterable[str] | None = None,
    first_in: Iterable[str] | None = None,
) -> list[tuple[str, ...]]:
    """Every nonempty chain ``r0 < ... < rn`` with ``rn`` in ``last_in``.

    Grouped by length and ordered lexicographically in element-list order.
    ``first_in`` optionally restricts the first element as well.
    """
    last = None if last_in is None else P.mask_of(last_in)
    first = None if first_in is None else P.mask_of(first_in)
    els = P.elements
    return [tuple(els[i] for i in c) for c in chain_indices(P, last, first)]


# -- grading -----------------------------------------------------------


def rank_function(P: FinitePoset) -> dict[str, int] | None:
    """A rank function with minimum 0 on each connected component, or None."""
    n = len(P)
    rank: list[int | None] = [None] * n
    cov = P._cover_masks
    low = P._lower_cover_masks
    for start in range(n):
        if rank[start] is not None:
            continue
        rank[start] = 0
        comp = [start]
        stack = [start]
        while stack:
            i = stack.pop()
            r = rank[i]
            for j, step in [(j, 1) for j in _bits(cov[i])] + [(j, -1) for j in _bits(low[i])]:
                if rank[j] is None:
                    rank[j] = r + step
                    comp.append(j)
                    stack.append(j)
                elif rank[j] != r + step:
                    return None
        shift = min(rank[i] for i in comp)
        for i in comp:
            rank[i] -= shift
    return {P.elements[i]: rank[i] for i in range(n)}


def chain_length_to(P: FinitePoset, p: str) -> int:
    """Common length of all maximal chains of ``P_{<=p}``.

    Raises NotGradedError when two maximal chains ending at ``p`` differ.
    """
    target = P.index(p)
    low = P._lower_cover_masks
    shortest: dict[int, int] = {}
    longest: dict[int, int] = {}
    for x in P._topological_order:
        if not P._down[target] >> x & 1:
            continue
        below = low[x]
        if not below:
            shortest[x] = longest[x] = 0
        else:
            shortest[x] = 1 + min(shortest[y] for y in _bits(below))
            longest[x] = 1 + max(longest[y] for y in _bits(below))
    if shortest[target] != longest[target]:
        raise NotGradedError(
            f"maximal chains into {p!r} have lengths "
            f"{shortest[target]}..{longest[target]}"
        )
    return shortest[target]


# -- JSON --------------------------------------------------------------


def poset_from_json(data: dict | str) -> FinitePoset:
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict) or "elements" not in data:
        raise InputError("poset JSON must be an object with 'elements' and 'covers'")
    elements = data["elements"]
    covers = data.get("covers", [])
    if not isinstance(elements, list) or not isinstance(covers, list):
        raise InputError("'elements' and 'covers' must be lists")
    return from_covers(elements, covers)


def poset_to_json(P: FinitePoset) -> dict:
    return P.to_json()
