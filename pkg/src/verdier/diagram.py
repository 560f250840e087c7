"""Strict functors from a finite poset to chain complexes.

A :class:`Diagram` assigns a complex to every element and a chain map to
every cover edge.  Elements and edges that are not stored are zero, which
keeps extension-by-zero diagrams cheap on large posets.  Comparisons of the
derived objects built from diagrams are always made on homology, never on
matrices.
"""
from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from .errors import (
    InputError,
    NotComparableError,
    NotIntervalClosedError,
    RingMismatchError,
    UnknownElementError,
)
from .linalg import ChainComplex, ChainMap, Matrix, free_module, parse_ring, ring_name, zero_complex
from .poset import FinitePoset, induced, poset_from_json

__all__ = [
    "Diagram",
    "OpDiagram",
    "ValidationReport",
    "validate",
    "constant_diagram",
    "interval_unit",
    "skyscraper",
    "corep_sheaf",
    "restrict",
    "extension_by_zero",
    "is_interval_closed",
    "left_kan",
    "right_kan",
    "diagram_direct_sum",
    "shift_diagram",
    "diagram_from_json",
    "diagram_to_json",
]

ARROW = "→"


class Diagram:
    """A functor ``base -> Ch(R)`` given on cover edges."""

    def __init__(
        self,
        base: FinitePoset,
        at: Mapping[str, ChainComplex] | None = None,
        edges: Mapping[tuple[str, str], ChainMap] | None = None,
        modulus: int | None = None,
    ):
        self.base = base
        at = dict(at or {})
        rings = {C.modulus for C in at.values()}
        if modulus is not None:
            rings.add(modulus)
        if len(rings) > 1:
            raise RingMismatchError(f"diagram mixes rings {sorted(rings)}")
        self.modulus = rings.pop() if rings else 0
        self._zero = zero_complex(self.modulus)
        self._at: dict[str, ChainComplex] = {}
        for p, C in at.items():
            base.index(p)
            if not C.is_zero():
                self._at[p] = C
        covers = set(base.covers)
        self._edges: dict[tuple[str, str], ChainMap] = {}
        for (p, q), f in (edges or {}).items():
            if (p, q) not in covers:
                raise InputError(f"edge {p}{ARROW}{q} is not a cover of the base poset")
            if f.source is not self.value(p) and (
                f.source.ranks != self.value(p).ranks or f.target.ranks != self.value(q).ranks
            ):
                raise InputError(f"edge {p}{ARROW}{q} does not match the values at its ends")
            if f.modulus != self.modulus:
                raise RingMismatchError(f"edge {p}{ARROW}{q} is over a different ring")
            if f.components:
                self._edges[(p, q)] = f
        self._composites: dict[tuple[str, str], ChainMap] = {}

    def value(self, p: str) -> ChainComplex:
        return self._at.get(p, self._zero)

    def edge(self, p: str, q: str) -> ChainMap:
        got = self._edges.get((p, q))
        if got is not None:
            return got
        return ChainMap.zero(self.value(p), self.value(q))

    @property
    def edges(self) -> dict[tuple[str, str], ChainMap]:
        return dict(self._edges)

    def support(self) -> list[str]:
        return [p for p in self.base.elements if p in self._at]

    def support_mask(self) -> int:
        return self.base.mask_of(self._at)

    def is_zero(self) -> bool:
        return not self._at

    def composite(self, p: str, q: str) -> ChainMap:
        """``F(p <= q)`` along a canonical cover path."""
        if p == q:
            return ChainMap.identity(self.value(p))
        key = (p, q)
        got = self._composites.get(key)
        if got is not None:
            return got
        if not self.base.lt(p, q):
            raise NotComparableError(f"{p!r} is not below {q!r}")
        if p not in self._at or q not in self._at:
            out = ChainMap.zero(self.value(p), self.value(q))
        else:
            s = next(s for s in self.base.upper_covers(p) if self.base.leq(s, q))
            out = self.composite(s, q) @ self.edge(p, s)
        self._composites[key] = out
        return out

    def __repr__(self) -> str:
        return (
            f"Diagram(base={self.base!r}, support={len(self._at)}, "
            f"ring={ring_name(self.modulus)})"
        )


class OpDiagram(Diagram):
    """A functor ``P^op -> Ch(R)``: edges run from ``at(q)`` to ``at(p)`` for ``p ⋖ q``.

    Stored as a diagram over the opposite poset; ``poset`` keeps ``P``.
    """

    def __init__(self, poset: FinitePoset, at=None, edges=None, modulus=None):
        from .poset import opposite

        self.poset = poset
        super().__init__(opposite(poset), at, edges, modulus)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    kind: str | None = None
    pair: tuple[str, str] | None = None
    degree: int | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "kind": self.kind,
            "pair": list(self.pair) if self.pair else None,
            "degree": self.degree,
            "message": self.message,
        }


def validate(F: Diagram) -> ValidationReport:
    """Check chain-map conditions on every edge and path independence.

    Pairs ``p < q`` are examined by increasing interval size, so the reported
    square is a minimal one.
    """
    for (p, q), f in F._edges.items():
        n = f.first_noncommuting_degree()
        if n is not None:
            return ValidationReport(False, "chain_map", (p, q), n, f"edge {p}{ARROW}{q} is not a chain map in degree {n}")
    P = F.base
    pairs = sorted(
        P.comparable_pairs(strict=True),
        key=lambda pq: (len(P.interval(*pq)), P.index(pq[0]), P.index(pq[1])),
    )
    for p, q in pairs:
        if p not in F._at or q not in F._at:
            continue
        via = [s for s in P.upper_covers(p) if P.leq(s, q)]
        if len(via) < 2:
            continue
        ref = F.composite(via[0], q) @ F.edge(p, via[0])
        for s in via[1:]:
            other = F.composite(s, q) @ F.edge(p, s)
            if not _maps_equal(ref, other, F.modulus):
                return ValidationReport(
                    False,
                    "path_independence",
                    (p, q),
                    None,
                    f"composites {p}{ARROW}{via[0]}{ARROW}{q} and {p}{ARROW}{s}{ARROW}{q} differ",
                )
    return ValidationReport(True)


def _maps_equal(f: ChainMap, g: ChainMap, modulus: int) -> bool:
    degrees = set(f.components) | set(g.components)
    return all((f.component(n) - g.component(n)).reduced(modulus).is_zero() for n in degrees)


# -- constructors ----------------------------------------------------------


def _unit(E: ChainComplex | None, modulus: int) -> ChainComplex:
    return free_module(1, 0, modulus) if E is None else E


def _identity_on(P: FinitePoset, members: set[str], E: ChainComplex) -> Diagram:
    ident = ChainMap.identity(E)
    edges = {(a, b): ident for a, b in P.covers if a in members and b in members}
    return Diagram(P, {p: E for p in members}, edges, E.modulus)


def constant_diagram(P: FinitePoset, C: ChainComplex | None = None, modulus: int = 0) -> Diagram:
    C = _unit(C, modulus)
    return _identity_on(P, set(P.elements), C)


def interval_unit(P: FinitePoset, p: str, q: str, E: ChainComplex | None = None, modulus: int = 0) -> Diagram:
    """``E`` on the closed interval ``[p, q]``, zero elsewhere (``Z_[p,q]`` by default)."""
    if not P.leq(p, q):
        raise NotComparableError(f"{p!r} is not below {q!r}")
    return _identity_on(P, set(P.interval(p, q)), _unit(E, modulus))


def skyscraper(P: FinitePoset, p: str, E: ChainComplex | None = None, modulus: int = 0) -> Diagram:
    return interval_unit(P, p, p, E, modulus)


def corep_sheaf(P: FinitePoset, p: str, E: ChainComplex | None = None, modulus: int = 0) -> Diagram:
    """``E`` on ``P_{<=p}``, zero elsewhere."""
    return _identity_on(P, set(P.below(p)), _unit(E, modulus))


def restrict(F: Diagram, subset: Iterable[str]) -> Diagram:
    """Restriction to the full subposet on ``subset``; edges are composites."""
    subset = list(subset)
    for x in subset:
        if x not in F.base:
            raise UnknownElementError(f"unknown element {x!r}")
    Q = induced(F.base, subset)
    at = {x: F.value(x) for x in Q.elements if x in F._at}
    edges = {}
    for a, b in Q.covers:
        if a in at and b in at:
            edges[(a, b)] = F.composite(a, b)
    return Diagram(Q, at, edges, F.modulus)


def _check_full_subposet(Q: FinitePoset, P: FinitePoset) -> None:
    for x in Q.elements:
        if x not in P:
            raise UnknownElementError(f"element {x!r} of the subposet is not in the target poset")
    for a in Q.elements:
        for b in Q.elements:
            if Q.leq(a, b) != P.leq(a, b):
                raise InputError(f"order on {a!r}, {b!r} differs from the target poset")


def is_interval_closed(P: FinitePoset, subset: Iterable[str]) -> bool:
    """True when ``a <= r <= b`` with ``a, b`` in ``subset`` forces ``r`` in it."""
    qmask = P.mask_of(subset)
    downset = 0
    for i in P.elements_of(qmask):
        downset |= P.down_mask(P.index(i))
    return all(not (P.up_mask(P.index(a)) & downset & ~qmask) for a in P.elements_of(qmask))


def extension_by_zero(F: Diagram, P: FinitePoset) -> Diagram:
    """Extend a diagram on an interval-closed full subposet by zero."""
    Q = F.base
    _check_full_subposet(Q, P)
    if not is_interval_closed(P, Q.elements):
        raise NotIntervalClosedError("subposet is not interval-closed; zero extension is not functorial")
    at = {x: F.value(x) for x in F.support()}
    # covers of an interval-closed subposet are exactly the covers of P inside it
    return Diagram(P, at, F._edges, F.modulus)


def left_kan(F: Diagram, P: FinitePoset) -> Diagram:
    """Pointwise left Kan extension: at ``r``, hocolim of ``F`` over ``Q_{<=r}``."""
    from .homotopy import hocolim

    Q = F.base
    _check_full_subposet(Q, P)
    tots = {}
    for r in P.elements:
        sub = [x for x in Q.elements if P.leq(x, r)]
        tots[r] = hocolim(restrict(F, sub))
    return _kan_diagram(P, tots, F.modulus, covariant_inclusion=True)


def right_kan(F: Diagram, P: FinitePoset) -> Diagram:
    """Pointwise right Kan extension: at ``r``, holim of ``F`` over ``Q_{>=r}``."""
    from .homotopy import holim

    Q = F.base
    _check_full_subposet(Q, P)
    tots = {}
    for r in P.elements:
        sub = [x for x in Q.elements if P.leq(r, x)]
        tots[r] = holim(restrict(F, sub))
    return _kan_diagram(P, tots, F.modulus, covariant_inclusion=False)


def _kan_diagram(P: FinitePoset, tots, modulus: int, covariant_inclusion: bool) -> Diagram:
    """Edge maps between totalizations induced by index-poset inclusions.

    Left extensions include slots of the smaller index poset; right extensions
    project onto the slots of the smaller one.
    """
    from .homotopy import slot_inclusion

    at = {r: t.complex for r, t in tots.items()}
    edges = {}
    for a, b in P.covers:
        if covariant_inclusion:
            edges[(a, b)] = slot_inclusion(tots[a], tots[b])
        else:
            inc = slot_inclusion(tots[b], tots[a])
            edges[(a, b)] = ChainMap(
                tots[a].complex, tots[b].complex, {n: m.T for n, m in inc.components.items()}
            )
    return Diagram(P, at, edges, modulus)


def diagram_direct_sum(diagrams: list[Diagram]) -> Diagram:
    """Pointwise direct sum of diagrams over the same base."""
    from .linalg import direct_sum

    if not diagrams:
        raise InputError("empty direct sum needs a base poset")
    P = diagrams[0].base
    modulus = diagrams[0].modulus
    for D in diagrams[1:]:
        if D.base != P:
            raise InputError("direct sum of diagrams over different posets")
        if D.modulus != modulus:
            raise RingMismatchError("direct sum over mixed rings")
    at = {p: direct_sum([D.value(p) for D in diagrams], modulus) for p in P.elements}
    edges = {}
    for a, b in P.covers:
        src, tgt = at[a], at[b]
        if src.is_zero() or tgt.is_zero():
            continue
        comps = {}
        for n in set(src.degrees()) & set(tgt.degrees()):
            blocks = [
                [D.edge(a, b).component(n) if i == j else None for j, D in enumerate(diagrams)]
                for i, _ in enumerate(diagrams)
            ]
            comps[n] = Matrix.block(
                blocks,
                [D.value(b).rank(n) for D in diagrams],
                [D.value(a).rank(n) for D in diagrams],
            )
        edges[(a, b)] = ChainMap(src, tgt, comps, check=False)
    return Diagram(P, at, edges, modulus)


def shift_diagram(F: Diagram, k: int) -> Diagram:
    from .linalg import shift

    at = {p: shift(F.value(p), k) for p in F.support()}
    edges = {
        (a, b): ChainMap(at[a], at[b], {n + k: m for n, m in f.components.items()}, check=False)
        for (a, b), f in F._edges.items()
    }
    return Diagram(F.base, at, edges, F.modulus)


# -- JSON ------------------------------------------------------------------


def diagram_to_json(F: Diagram) -> dict:
    base = F.poset if isinstance(F, OpDiagram) else F.base
    out = {
        "poset": base.to_json(),
        "ring": ring_name(F.modulus),
        "at": {p: F.value(p).to_json() for p in F.support()},
        "edges": {
            f"{a}{ARROW}{b}": {str(n): m.to_dense() for n, m in f.components.items()}
            for (a, b), f in F._edges.items()
        },
    }
    if isinstance(F, OpDiagram):
        out["variance"] = "contravariant"
    return out


def diagram_from_json(data: dict | str, poset: FinitePoset | None = None) -> Diagram:
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict):
        raise InputError("diagram JSON must be an object")
    if "poset" in data:
        P = poset_from_json(data["poset"])
        if poset is not None and P != poset:
            raise InputError("diagram's poset differs from the given poset")
    elif poset is not None:
        P = poset
    else:
        raise InputError("diagram JSON lacks a 'poset'")
    modulus = parse_ring(data.get("ring", "Z"))
    contravariant = data.get("variance") == "contravariant"
    at = {}
    for p, cdata in data.get("at", {}).items():
        if p not in P:
            raise UnknownElementError(f"value given at unknown element {p!r}")
        at[p] = ChainComplex.from_json(cdata, modulus)
    zero = zero_complex(modulus)
    edges = {}
    for key, comps in data.get("edges", {}).items():
        if ARROW not in key:
            raise InputError(f"edge key {key!r} must look like 'p{ARROW}q'")
        a, b = key.split(ARROW, 1)
        src, tgt = at.get(a, zero), at.get(b, zero)
        try:
            mats = {
                int(n): Matrix.from_dense(rows, src.rank(int(n))) if rows else Matrix.zeros(tgt.rank(int(n)), src.rank(int(n)))
                for n, rows in comps.items()
            }
        except (TypeError, ValueError) as exc:
            raise InputError(f"malformed edge matrices on {key}: {exc}") from exc
        edges[(a, b)] = ChainMap(src, tgt, mats, check=False)
    if contravariant:
        return OpDiagram(P, at, edges, modulus)
    return Diagram(P, at, edges, modulus)
