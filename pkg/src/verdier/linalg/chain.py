"""Bounded chain complexes of free modules over Z or F_p.

Grading is homological: ``d_n`` maps degree ``n`` to degree ``n - 1`` and is
stored as a ``rank(n-1) x rank(n)`` matrix.  Cohomology is represented in
nonpositive degrees, H^n living in homological degree -n.
"""
from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from functools import cached_property

from ..errors import ChainComplexError, InputError, RingMismatchError
from .matrix import Matrix
from .snf import invariant_factors

__all__ = [
    "parse_ring",
    "ring_name",
    "HomologySummary",
    "ChainComplex",
    "ChainMap",
    "homology",
    "shift",
    "mapping_cone",
    "is_quasi_iso",
    "direct_sum",
    "dual",
    "free_module",
    "zero_complex",
]


def parse_ring(name: str | int) -> int:
    """``"Z"`` -> 0, ``"F2"`` -> 2, ...  Returns the modulus (0 for Z)."""
    if isinstance(name, int):
        modulus = name
    else:
        s = str(name).strip()
        if s in ("Z", "ZZ"):
            return 0
        m = re.fullmatch(r"(?:F|GF|Z/)(\d+)", s)
        if not m:
            raise InputError(f"unknown coefficient ring {name!r}")
        modulus = int(m.group(1))
    if modulus and (modulus < 2 or any(modulus % k == 0 for k in range(2, int(modulus**0.5) + 1))):
        raise InputError(f"F_{modulus} is not a prime field")
    return modulus


def ring_name(modulus: int) -> str:
    return f"F{modulus}" if modulus else "Z"


# -- homology summaries -------------------------------------------------


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def normalize_torsion(divisors: Iterable[int]) -> tuple[int, ...]:
    """Invariant-factor form (each divides the next) of a torsion group."""
    primary: dict[int, list[int]] = {}
    for d in divisors:
        d = abs(d)
        if d <= 1:
            continue
        for p, e in _factor(d).items():
            primary.setdefault(p, []).append(p**e)
    if not primary:
        return ()
    length = max(len(v) for v in primary.values())
    factors = [1] * length
    for powers in primary.values():
        powers.sort(reverse=True)
        for k, q in enumerate(powers):
            factors[length - 1 - k] *= q
    return tuple(factors)


class HomologySummary:
    """Free rank and torsion invariant factors per homological degree."""

    __slots__ = ("groups", "modulus")

    def __init__(self, groups: Mapping[int, tuple[int, Iterable[int]]] | None = None, modulus: int = 0):
        clean = {}
        for n, (rank, torsion) in (groups or {}).items():
            tors = () if modulus else normalize_torsion(torsion)
            if rank < 0:
                raise ValueError("negative rank")
            if rank or tors:
                clean[int(n)] = (int(rank), tors)
        self.groups: dict[int, tuple[int, tuple[int, ...]]] = dict(sorted(clean.items()))
        self.modulus = modulus

    def rank(self, n: int) -> int:
        return self.groups.get(n, (0, ()))[0]

    def torsion(self, n: int) -> tuple[int, ...]:
        return self.groups.get(n, (0, ()))[1]

    def degrees(self) -> list[int]:
        return list(self.groups)

    def is_zero(self) -> bool:
        return not self.groups

    def total_rank(self) -> int:
        return sum(r for r, _ in self.groups.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** (n % 2) * r for n, (r, _) in self.groups.items())

    def is_free_rank_one_at(self, n: int) -> bool:
        """True iff the homology is exactly one free generator in degree ``n``."""
        return self.groups == {n: (1, ())}

    def shifted(self, k: int) -> HomologySummary:
        return HomologySummary({n + k: g for n, g in self.groups.items()}, self.modulus)

    def __add__(self, other: HomologySummary) -> HomologySummary:
        if self.modulus != other.modulus:
            raise RingMismatchError("cannot add summaries over different rings")
        out: dict[int, tuple[int, list[int]]] = {}
        for src in (self.groups, other.groups):
            for n, (r, t) in src.items():
                r0, t0 = out.get(n, (0, []))
                out[n] = (r0 + r, list(t0) + list(t))
        return HomologySummary(out, self.modulus)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomologySummary):
            return NotImplemented
        return self.modulus == other.modulus and self.groups == other.groups

    __hash__ = None  # type: ignore[assignment]

    def cohomological(self) -> dict[int, tuple[int, tuple[int, ...]]]:
        """Groups re-indexed cohomologically: ``{n: H^n}`` with H^n at degree -n."""
        return {-n: g for n, g in sorted(self.groups.items(), reverse=True)}

    def to_json(self, cohomological: bool = False) -> dict:
        groups = self.cohomological() if cohomological else self.groups
        return {
            str(n): {"rank": r, "torsion": list(t)}
            for n, (r, t) in sorted(groups.items())
        }

    @classmethod
    def from_json(cls, data: dict, modulus: int = 0, cohomological: bool = False) -> HomologySummary:
        sign = -1 if cohomological else 1
        return cls(
            {sign * int(n): (g["rank"], g.get("torsion", [])) for n, g in data.items()},
            modulus,
        )

    @staticmethod
    def _group_str(rank: int, torsion: tuple[int, ...], modulus: int) -> str:
        base = ring_name(modulus)
        parts = []
        if rank == 1:
            parts.append(base)
        elif rank > 1:
            parts.append(f"{base}^{rank}")
        parts.extend(f"Z/{t}" for t in torsion)
        return " + ".join(parts) if parts else "0"

    def format(self, cohomological: bool = False) -> str:
        if self.is_zero():
            return "0"
        groups = self.cohomological() if cohomological else self.groups
        sym = "H^" if cohomological else "H_"
        return ", ".join(
            f"{sym}{n} = {self._group_str(r, t, self.modulus)}" for n, (r, t) in sorted(groups.items())
        )

    def __repr__(self) -> str:
        return f"HomologySummary({self.format()}, ring={ring_name(self.modulus)})"


# -- complexes ------------------------------------------------------------


class ChainComplex:
    """A bounded complex of finitely generated free modules.

    ``ranks`` maps degree to rank; ``diffs[n]`` is ``d_n``.  Missing
    differentials are zero.  Construction checks shapes and ``d∘d = 0``
    unless ``check=False``.
    """

    __slots__ = ("modulus", "_ranks", "_diffs", "__dict__")

    def __init__(
        self,
        ranks: Mapping[int, int],
        diffs: Mapping[int, Matrix] | None = None,
        modulus: int = 0,
        check: bool = True,
    ):
        self.modulus = modulus
        self._ranks = {int(n): int(r) for n, r in sorted(ranks.items()) if r}
        if any(r < 0 for r in self._ranks.values()):
            raise ChainComplexError("negative rank")
        self._diffs: dict[int, Matrix] = {}
        for n, d in (diffs or {}).items():
            n = int(n)
            expected = (self.rank(n - 1), self.rank(n))
            if d.shape != expected:
                raise ChainComplexError(f"d_{n} has shape {d.shape}, expected {expected}")
            d = d.reduced(modulus)
            if not d.is_zero():
                self._diffs[n] = d
        if check:
            self.check()

    def check(self) -> None:
        for n, d in self._diffs.items():
            below = self._diffs.get(n - 1)
            if below is not None:
                prod = (below @ d).reduced(self.modulus)
                if not prod.is_zero():
                    raise ChainComplexError(f"d_{n - 1} ∘ d_{n} != 0")

    def rank(self, n: int) -> int:
        return self._ranks.get(n, 0)

    @property
    def ranks(self) -> dict[int, int]:
        return dict(self._ranks)

    def d(self, n: int) -> Matrix:
        got = self._diffs.get(n)
        return got if got is not None else Matrix.zeros(self.rank(n - 1), self.rank(n))

    @property
    def differentials(self) -> dict[int, Matrix]:
        return dict(self._diffs)

    def degrees(self) -> list[int]:
        return list(self._ranks)

    @property
    def support(self) -> tuple[int, int] | None:
        if not self._ranks:
            return None
        return (min(self._ranks), max(self._ranks))

    def is_zero(self) -> bool:
        return not self._ranks

    def total_rank(self) -> int:
        return sum(self._ranks.values())

    def _invariants(self, n: int) -> list[int]:
        cache = self.__dict__.setdefault("_inv_cache", {})
        got = cache.get(n)
        if got is None:
            d = self._diffs.get(n)
            got = invariant_factors(d, self.modulus) if d is not None else []
            cache[n] = got
        return got

    @cached_property
    def homology(self) -> HomologySummary:
        groups = {}
        for n, r in self._ranks.items():
            out_rank = len(self._invariants(n))
            inc = self._invariants(n + 1)
            free = r - out_rank - len(inc)
            torsion = [] if self.modulus else [x for x in inc if x > 1]
            groups[n] = (free, torsion)
        return HomologySummary(groups, self.modulus)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (n % 2) * r for n, r in self._ranks.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and self._ranks == other._ranks
            and self._diffs == other._diffs
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"ChainComplex(ranks={self._ranks}, ring={ring_name(self.modulus)})"

    def __reduce__(self):
        return (_rebuild_complex, (self._ranks, self._diffs, self.modulus))

    # -- JSON -----------------------------------------------------------
    def to_json(self) -> dict:
        sup = self.support
        return {
            "degrees": list(sup) if sup else [0, -1],
            "ranks": {str(n): r for n, r in self._ranks.items()},
            "differentials": {str(n): d.to_dense() for n, d in self._diffs.items()},
        }

    @classmethod
    def from_json(cls, data: dict, modulus: int = 0) -> ChainComplex:
        try:
            ranks = {int(n): int(r) for n, r in data.get("ranks", {}).items()}
            lo, hi = data.get("degrees", [0, -1])
            for n in ranks:
                if ranks[n] and not lo <= n <= hi:
                    raise InputError(f"rank in degree {n} outside declared degrees [{lo}, {hi}]")
            diffs = {}
            for n, rows in data.get("differentials", {}).items():
                n = int(n)
                diffs[n] = Matrix.from_dense(rows, ranks.get(n, 0)) if rows else Matrix.zeros(
                    ranks.get(n - 1, 0), ranks.get(n, 0)
                )
        except (TypeError, ValueError, AttributeError) as exc:
            raise InputError(f"malformed chain complex JSON: {exc}") from exc
        return cls(ranks, diffs, modulus)


def _rebuild_complex(ranks, diffs, modulus):
    return ChainComplex(ranks, diffs, modulus, check=False)


def zero_complex(modulus: int = 0) -> ChainComplex:
    return ChainComplex({}, {}, modulus)


def free_module(rank: int = 1, degree: int = 0, modulus: int = 0) -> ChainComplex:
    """``R^rank`` concentrated in one degree."""
    return ChainComplex({degree: rank}, {}, modulus)


def homology(C: ChainComplex) -> HomologySummary:
    return C.homology


def shift(C: ChainComplex, k: int) -> ChainComplex:
    """Degree ``n`` of the result is degree ``n - k`` of ``C``; d scaled by (-1)^k."""
    sign = -1 if k % 2 else 1
    return ChainComplex(
        {n + k: r for n, r in C.ranks.items()},
        {n + k: d.scaled(sign) for n, d in C.differentials.items()},
        C.modulus,
        check=False,
    )


def direct_sum(complexes: Iterable[ChainComplex], modulus: int | None = None) -> ChainComplex:
    complexes = list(complexes)
    if not complexes:
        return zero_complex(modulus or 0)
    rings = {C.modulus for C in complexes}
    if len(rings) > 1 or (modulus is not None and rings != {modulus}):
        raise RingMismatchError(f"direct sum over mixed rings {sorted(rings)}")
    ring = rings.pop()
    degrees = sorted({n for C in complexes for n in C.degrees()})
    ranks = {n: sum(C.rank(n) for C in complexes) for n in degrees}
    diffs = {}
    for n in degrees:
        if n - 1 not in ranks:
            continue
        blocks = [
            [C.d(n) if a == b else None for b, C in enumerate(complexes)]
            for a, _ in enumerate(complexes)
        ]
        diffs[n] = Matrix.block(
            blocks, [C.rank(n - 1) for C in complexes], [C.rank(n) for C in complexes]
        )
    return ChainComplex(ranks, diffs, ring, check=False)


def dual(C: ChainComplex) -> ChainComplex:
    """``Hom(C, R)`` regraded homologically: rank ``C_n`` sits in degree ``-n``."""
    return ChainComplex(
        {-n: r for n, r in C.ranks.items()},
        {-(n - 1): d.T for n, d in C.differentials.items()},
        C.modulus,
        check=False,
    )


# -- chain maps ---------------------------------------------------------


class ChainMap:
    """Degreewise matrices ``f_n : source_n -> target_n``."""

    __slots__ = ("source", "target", "_components")

    def __init__(
        self,
        source: ChainComplex,
        target: ChainComplex,
        components: Mapping[int, Matrix] | None = None,
        check: bool = True,
    ):
        if source.modulus != target.modulus:
            raise RingMismatchError("chain map between complexes over different rings")
        self.source = source
        self.target = target
        comps = {}
        for n, f in (components or {}).items():
            n = int(n)
            expected = (target.rank(n), source.rank(n))
            if f.shape != expected:
                raise ChainComplexError(f"f_{n} has shape {f.shape}, expected {expected}")
            f = f.reduced(source.modulus)
            if not f.is_zero():
                comps[n] = f
        self._components = comps
        if check and not self.is_chain_map():
            raise ChainComplexError("components do not commute with the differentials")

    @property
    def modulus(self) -> int:
        return self.source.modulus

    def component(self, n: int) -> Matrix:
        got = self._components.get(n)
        return got if got is not None else Matrix.zeros(self.target.rank(n), self.source.rank(n))

    @property
    def components(self) -> dict[int, Matrix]:
        return dict(self._components)

    def first_noncommuting_degree(self) -> int | None:
        degrees = sorted(set(self.source.degrees()) | set(self.target.degrees()))
        for n in degrees:
            lhs = self.target.d(n) @ self.component(n)
            rhs = self.component(n - 1) @ self.source.d(n)
            if not (lhs - rhs).reduced(self.modulus).is_zero():
                return n
        return None

    def is_chain_map(self) -> bool:
        return self.first_noncommuting_degree() is None

    def __matmul__(self, other: ChainMap) -> ChainMap:
        """Composite ``self ∘ other``."""
        degrees = set(self._components) & set(other._components)
        return ChainMap(
            other.source,
            self.target,
            {n: self._components[n] @ other._components[n] for n in degrees},
            check=False,
        )

    def equals(self, other: ChainMap) -> bool:
        return self._components == other._components

    @classmethod
    def identity(cls, C: ChainComplex) -> ChainMap:
        return cls(C, C, {n: Matrix.identity(r) for n, r in C.ranks.items()}, check=False)

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex) -> ChainMap:
        return cls(source, target, {}, check=False)

    @classmethod
    def scalar(cls, C: ChainComplex, c: int) -> ChainMap:
        return cls(C, C, {n: Matrix.identity(r, c) for n, r in C.ranks.items()}, check=False)

    def __repr__(self) -> str:
        return f"ChainMap({self.source!r} -> {self.target!r})"


def mapping_cone(f: ChainMap) -> ChainComplex:
    """``cone_n = target_n ⊕ source_{n-1}`` with d = [[d_T, f], [0, -d_S]]."""
    S, T = f.source, f.target
    degrees = sorted(set(T.degrees()) | {n + 1 for n in S.degrees()})
    ranks = {n: T.rank(n) + S.rank(n - 1) for n in degrees}
    diffs = {}
    for n in degrees:
        if n - 1 not in ranks:
            continue
        diffs[n] = Matrix.block(
            [[T.d(n), f.component(n - 1)], [None, -S.d(n - 1)]],
            [T.rank(n - 1), S.rank(n - 2)],
            [T.rank(n), S.rank(n - 1)],
        )
    return ChainComplex(ranks, diffs, S.modulus, check=False)


def is_quasi_iso(f: ChainMap) -> bool:
    return homology(mapping_cone(f)).is_zero()
