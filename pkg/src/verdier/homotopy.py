"""Homotopy limits and colimits of poset diagrams by chain totalization.

Both constructions sum over strict chains ``r0 < ... < rk`` of the index
poset.  For the limit a chain contributes a copy of ``F(rk)`` shifted down by
``k``; for the colimit a copy of ``F(r0)`` shifted up by ``k``.  A slot is a
triple ``(chain, j, b)``: basis vector ``b`` of ``F(r)_j`` on ``chain``.

Differentials are ``d_int + (-1)^j sum_i (-1)^i face_i``.  Only the face that
changes the element carrying the value goes through an edge map of ``F``:
the last coface for the limit, the first face for the colimit.  Chains whose
carrier value is zero contribute nothing and are never enumerated.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import Diagram, restrict
from .errors import InputError, NoGreatestElementError, NoLeastElementError
from .linalg import ChainComplex, ChainMap, HomologySummary, Matrix, is_quasi_iso
from .poset import FinitePoset, chain_indices

__all__ = [
    "TotalizationComplex",
    "holim",
    "hocolim",
    "gamma",
    "slot_inclusion",
    "cone_comparison_limit",
    "cone_comparison_colimit",
    "is_limit_diagram",
    "is_colimit_diagram",
]

Chain = tuple[str, ...]


@dataclass
class TotalizationComplex:
    """A totalization together with its slot bookkeeping.

    ``groups[(chain, j)] = (n, start, rank)`` places the block of
    ``F(r)_j`` on ``chain`` at rows ``start .. start+rank`` of total degree ``n``.
    """

    complex: ChainComplex
    groups: dict[tuple[Chain, int], tuple[int, int, int]] = field(repr=False)
    kind: str = "holim"

    @property
    def homology(self) -> HomologySummary:
        return self.complex.homology

    def slots(self, n: int) -> list[tuple[Chain, int, int]]:
        """Basis of total degree ``n`` as ``(chain, j, b)`` triples, in order."""
        out = []
        for (chain, j), (deg, start, rank) in self.groups.items():
            if deg == n:
                out.extend((start + b, (chain, j, b)) for b in range(rank))
        return [s for _, s in sorted(out)]

    def chains(self) -> list[Chain]:
        return sorted({c for c, _ in self.groups}, key=lambda c: (len(c), c))


def _layout(F: Diagram, chains: list[tuple[int, ...]], carrier: int, sign: int):
    """Assign total-degree positions to every (chain, j) block."""
    els = F.base.elements
    ranks: dict[int, int] = {}
    groups: dict[tuple[Chain, int], tuple[int, int, int]] = {}
    for c in chains:
        names = tuple(els[i] for i in c)
        C = F.value(names[carrier])
        k = len(c) - 1
        for j, r in C.ranks.items():
            n = j + sign * k
            start = ranks.get(n, 0)
            groups[(names, j)] = (n, start, r)
            ranks[n] = start + r
    return ranks, groups


def _internal(F: Diagram, groups, carrier: int, put) -> None:
    for (chain, j), (n, start, _) in groups.items():
        C = F.value(chain[carrier])
        below = groups.get((chain, j - 1))
        if below is None:
            continue
        tstart = below[1]
        for r, row in C.d(j)._rows.items():
            for col, v in row.items():
                put(n, tstart + r, start + col, v)


def _assemble(ranks: dict[int, int], rows: dict[int, dict[int, dict[int, int]]], modulus: int, check: bool):
    diffs = {n: Matrix(ranks.get(n - 1, 0), ranks[n], rows[n]) for n in rows if n in ranks}
    return ChainComplex(ranks, diffs, modulus, check=check)


def holim(F: Diagram, check: bool = True) -> TotalizationComplex:
    """Homotopy limit over the base poset of ``F``."""
    P = F.base
    chains = chain_indices(P, last_mask=F.support_mask())
    ranks, groups = _layout(F, chains, -1, -1)
    rows: dict[int, dict[int, dict[int, int]]] = {}

    def put(n, i, j, v):
        rows.setdefault(n, {}).setdefault(i, {})[j] = v

    _internal(F, groups, -1, put)
    for (tc, j), (tn, tstart, rank) in groups.items():
        k = len(tc) - 1
        if k == 0:
            continue
        base_sign = -1 if j % 2 else 1
        n = tn + 1
        for i in range(k):
            src = groups[(tc[:i] + tc[i + 1:], j)]
            s = base_sign if i % 2 == 0 else -base_sign
            for b in range(rank):
                put(n, tstart + b, src[1] + b, s)
        src = groups.get((tc[:-1], j))
        if src is not None:
            s = base_sign if k % 2 == 0 else -base_sign
            M = F.composite(tc[-2], tc[-1]).component(j)
            for r, row in M._rows.items():
                for col, v in row.items():
                    put(n, tstart + r, src[1] + col, s * v)
    return TotalizationComplex(_assemble(ranks, rows, F.modulus, check), groups, "holim")


def hocolim(F: Diagram, check: bool = True) -> TotalizationComplex:
    """Homotopy colimit over the base poset of ``F``."""
    P = F.base
    chains = chain_indices(P, first_mask=F.support_mask())
    ranks, groups = _layout(F, chains, 0, 1)
    rows: dict[int, dict[int, dict[int, int]]] = {}

    def put(n, i, j, v):
        rows.setdefault(n, {}).setdefault(i, {})[j] = v

    _internal(F, groups, 0, put)
    for (sc, j), (n, sstart, rank) in groups.items():
        k = len(sc) - 1
        if k == 0:
            continue
        base_sign = -1 if j % 2 else 1
        tgt = groups.get((sc[1:], j))
        if tgt is not None:
            M = F.composite(sc[0], sc[1]).component(j)
            for r, row in M._rows.items():
                for col, v in row.items():
                    put(n, tgt[1] + r, sstart + col, base_sign * v)
        for i in range(1, k + 1):
            tgt = groups[(sc[:i] + sc[i + 1:], j)]
            s = base_sign if i % 2 == 0 else -base_sign
            for b in range(rank):
                put(n, tgt[1] + b, sstart + b, s)
    return TotalizationComplex(_assemble(ranks, rows, F.modulus, check), groups, "hocolim")


def gamma(P: FinitePoset, F: Diagram) -> TotalizationComplex:
    """Derived global sections ``Γ(P; F)``, modelled by ``holim F``."""
    if F.base != P:
        raise InputError("diagram is not defined over the given poset")
    return holim(F)


def slot_inclusion(small: TotalizationComplex, big: TotalizationComplex) -> ChainMap:
    """Identity on shared slots, for totalizations over nested index posets."""
    rows: dict[int, dict[int, dict[int, int]]] = {}
    for key, (n, start, rank) in small.groups.items():
        n2, bstart, rank2 = big.groups[key]
        if (n2, rank2) != (n, rank):
            raise InputError(f"slot block {key} changes shape between totalizations")
        acc = rows.setdefault(n, {})
        for b in range(rank):
            acc[bstart + b] = {start + b: 1}
    S, T = small.complex, big.complex
    comps = {n: Matrix(T.rank(n), S.rank(n), r) for n, r in rows.items()}
    return ChainMap(S, T, comps, check=False)


def cone_comparison_limit(F: Diagram) -> ChainMap:
    """``F(⊥) -> holim(F restricted to base minus ⊥)``."""
    P = F.base
    bottom = P.least()
    if bottom is None:
        raise NoLeastElementError("base poset has no least element")
    rest = [x for x in P.elements if x != bottom]
    T = holim(restrict(F, rest))
    S = F.value(bottom)
    rows: dict[int, dict[int, dict[int, int]]] = {}
    for (chain, j), (n, start, _) in T.groups.items():
        if len(chain) != 1:
            continue
        M = F.composite(bottom, chain[0]).component(j)
        acc = rows.setdefault(n, {})
        for r, row in M._rows.items():
            acc[start + r] = dict(row)
    comps = {n: Matrix(T.complex.rank(n), S.rank(n), r) for n, r in rows.items()}
    return ChainMap(S, T.complex, comps, check=True)


def cone_comparison_colimit(F: Diagram) -> ChainMap:
    """``hocolim(F restricted to base minus ⊤) -> F(⊤)``."""
    P = F.base
    top = P.greatest()
    if top is None:
        raise NoGreatestElementError("base poset has no greatest element")
    rest = [x for x in P.elements if x != top]
    S = hocolim(restrict(F, rest))
    T = F.value(top)
    rows: dict[int, dict[int, dict[int, int]]] = {}
    for (chain, j), (n, start, _) in S.groups.items():
        if len(chain) != 1:
            continue
        M = F.composite(chain[0], top).component(j)
        acc = rows.setdefault(n, {})
        for r, row in M._rows.items():
            tgt = acc.setdefault(r, {})
            for col, v in row.items():
                tgt[start + col] = v
    comps = {n: Matrix(T.rank(n), S.complex.rank(n), r) for n, r in rows.items()}
    return ChainMap(S.complex, T, comps, check=True)


def is_limit_diagram(F: Diagram) -> bool:
    return is_quasi_iso(cone_comparison_limit(F))


def is_colimit_diagram(F: Diagram) -> bool:
    return is_quasi_iso(cone_comparison_colimit(F))
