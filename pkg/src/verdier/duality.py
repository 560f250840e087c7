"""The duality functor and the Verdier / Gorenstein* deciders.

Verdier-ness is decided by the vanishing of ``Γ(P; Z_[p,q])`` for all
``p < q``.  The Gorenstein* route checks that every open interval of
``P_{⊥,⊤}`` has the homology of a sphere.  The two are computed by unrelated
code paths and compared by :func:`main_theorem_check`.
"""
from __future__ import annotations

import os
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .diagram import Diagram, OpDiagram, corep_sheaf, extension_by_zero, interval_unit, restrict
from .errors import PreconditionError
from .homotopy import cone_comparison_colimit, cone_comparison_limit, holim, slot_inclusion
from .linalg import HomologySummary, is_quasi_iso, parse_ring, ring_name
from .poset import FinitePoset, add_top, chain_indices, chain_length_to, induced
from .simplicial import SimplicialComplex, boundary_matrices, sphere_dimension
from .linalg import dual

__all__ = [
    "VerdictReport",
    "dualize",
    "interval_gamma",
    "is_verdier",
    "is_gorenstein_star_poset",
    "is_verdier_via_gorenstein",
    "main_theorem_check",
    "cone_check",
    "generator_image_check",
    "hereditary_check",
    "limit_colimit_check",
    "vanishing_table",
]


@dataclass
class VerdictReport:
    property: str
    verdict: bool | None
    witnesses: list = field(default_factory=list)
    timing_ms: int = 0
    seed: int | None = None
    ring: str = "Z"
    inconsistent: bool = False

    def __bool__(self) -> bool:
        return bool(self.verdict)

    def to_json(self) -> dict:
        return {
            "property": self.property,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
            "timing_ms": self.timing_ms,
            "seed": self.seed,
            "ring": self.ring,
            "inconsistent": self.inconsistent,
        }

    @classmethod
    def from_json(cls, data: dict) -> VerdictReport:
        return cls(
            data["property"],
            data["verdict"],
            list(data.get("witnesses", [])),
            int(data.get("timing_ms", 0)),
            data.get("seed"),
            data.get("ring", "Z"),
            bool(data.get("inconsistent", False)),
        )


def _ms(t0: float) -> int:
    return int((time.perf_counter() - t0) * 1000)


def _modulus(ring) -> int:
    return parse_ring(ring) if isinstance(ring, str) else int(ring)


# -- parallel helpers ------------------------------------------------------

_WORKER_STATE: dict = {}


def _init_worker(P: FinitePoset, modulus: int, cohomology: bool) -> None:
    _WORKER_STATE["P"] = P
    _WORKER_STATE["modulus"] = modulus
    _WORKER_STATE["cohomology"] = cohomology


def _pair_task(pair):
    P = _WORKER_STATE["P"]
    return interval_gamma(P, pair[0], pair[1], _WORKER_STATE["modulus"]).to_json()


def _mask_task(mask):
    P = _WORKER_STATE["P"]
    return _sphere_dim_of_mask(P, mask, _WORKER_STATE["modulus"], _WORKER_STATE["cohomology"])


def _map(func, items: list, jobs: int, P: FinitePoset, modulus: int, cohomology: bool = False) -> list:
    """Ordered map, in a process pool when ``jobs > 1``."""
    if jobs <= 1 or len(items) < 2:
        _init_worker(P, modulus, cohomology)
        return [func(x) for x in items]
    jobs = min(jobs, len(items), os.cpu_count() or 1) or 1
    chunk = max(1, len(items) // (jobs * 8))
    with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(P, modulus, cohomology)) as pool:
        return list(pool.map(func, items, chunksize=chunk))


# -- duality ---------------------------------------------------------------


def dualize(F: Diagram) -> OpDiagram:
    """``at(p) = holim_P`` of ``F`` restricted to ``P_{>=p}`` and extended by zero.

    For ``p' ⋖ p`` the edge ``at(p) -> at(p')`` includes the slots of the
    smaller support into the larger one.
    """
    P = F.base
    tots = {}
    for p in P.elements:
        G = extension_by_zero(restrict(F, P.above(p)), P)
        tots[p] = holim(G)
    at = {p: t.complex for p, t in tots.items()}
    edges = {(p, q): slot_inclusion(tots[p], tots[q]) for q, p in P.covers}
    return OpDiagram(P, at, edges, F.modulus)


def interval_gamma(P: FinitePoset, p: str, q: str, modulus: int = 0) -> HomologySummary:
    """Homology of ``Γ(P; Z_[p,q])``."""
    return holim(interval_unit(P, p, q, modulus=modulus)).homology


def _pair_witness(p: str, q: str, h: HomologySummary) -> dict:
    return {"pair": [p, q], "homology": h.to_json(cohomological=True)}


def is_verdier(
    P: FinitePoset,
    ring="Z",
    jobs: int = 1,
    full_check_bound: int | None = None,
    sample_pairs: int | None = None,
    seed: int | None = None,
) -> VerdictReport:
    """Vanishing of ``Γ(P; Z_[p,q])`` for every ``p < q``.

    With ``full_check_bound`` set and ``|P|`` above it, the check runs on
    ``sample_pairs`` seeded random pairs, or is skipped (verdict None) when
    no sample size is given.
    """
    t0 = time.perf_counter()
    modulus = _modulus(ring)
    pairs = P.comparable_pairs(strict=True)
    used_seed = None
    oversized = full_check_bound is not None and len(P) > full_check_bound
    if oversized and not sample_pairs:
        return VerdictReport(
            "verdier",
            None,
            [{"skipped": f"|P| = {len(P)} exceeds the full-check bound {full_check_bound}"}],
            _ms(t0),
            None,
            ring_name(modulus),
        )
    if sample_pairs:
        used_seed = 0 if seed is None else seed
        order = {pq: k for k, pq in enumerate(pairs)}
        picked = random.Random(used_seed).sample(pairs, min(sample_pairs, len(pairs)))
        pairs = sorted(picked, key=order.__getitem__)
    if jobs > 1:
        results = [HomologySummary.from_json(h, modulus) for h in _map(_pair_task, pairs, jobs, P, modulus)]
    else:
        results = []
        for p, q in pairs:
            h = interval_gamma(P, p, q, modulus)
            results.append(h)
            if not h.is_zero():
                break
    witnesses = []
    for (p, q), h in zip(pairs, results):
        if not h.is_zero():
            return VerdictReport("verdier", False, [_pair_witness(p, q, h)], _ms(t0), used_seed, ring_name(modulus))
        witnesses.append(_pair_witness(p, q, h))
    return VerdictReport("verdier", True, witnesses, _ms(t0), used_seed, ring_name(modulus))


def _sphere_dim_of_mask(P: FinitePoset, mask: int, modulus: int, cohomology: bool) -> int | None:
    """Sphere dimension of the order complex of the subposet ``mask``, or None."""
    Q = induced(P, P.elements_of(mask))
    K = SimplicialComplex(Q.elements, (tuple(sorted(c)) for c in chain_indices(Q)))
    C = boundary_matrices(K, modulus)
    if cohomology:
        d = sphere_dimension(dual(C).homology)
        return None if d is None else -d
    return sphere_dimension(C.homology)


class _SphereCache:
    """Sphere dimensions of order complexes of subposets, keyed by element mask."""

    def __init__(self, P: FinitePoset, modulus: int, cohomology: bool, jobs: int):
        self.P = P
        self.modulus = modulus
        self.cohomology = cohomology
        self.jobs = jobs
        self.known: dict[int, int | None] = {}

    def prefetch(self, masks) -> None:
        todo = list(dict.fromkeys(m for m in masks if m not in self.known))
        if self.jobs > 1 and len(todo) > 1:
            for m, d in zip(todo, _map(_mask_task, todo, self.jobs, self.P, self.modulus, self.cohomology)):
                self.known[m] = d

    def __call__(self, mask: int) -> int | None:
        if mask not in self.known:
            self.known[mask] = _sphere_dim_of_mask(self.P, mask, self.modulus, self.cohomology)
        return self.known[mask]


def _extended_intervals(P: FinitePoset, within: int, bottom: str, top: str):
    """Open intervals of ``Q_{⊥,⊤}`` for the subposet ``Q`` given by ``within``.

    Yields ``(p, q, mask)`` with the mask in ``P``'s indexing, largest
    intervals first.
    """
    idx = [i for i in range(len(P)) if within >> i & 1]
    els = P.elements
    out = [(bottom, top, within)]
    for i in idx:
        out.append((bottom, els[i], P.down_mask(i, strict=True) & within))
        out.append((els[i], top, P.up_mask(i, strict=True) & within))
    for i in idx:
        for j in idx:
            if i != j and P._up[i] >> j & 1:
                out.append((els[i], els[j], P.up_mask(i, strict=True) & P.down_mask(j, strict=True)))
    rank = {bottom: -1, top: len(P)}
    rank.update({e: k for k, e in enumerate(els)})
    out.sort(key=lambda t: (-t[2].bit_count(), rank[t[0]], rank[t[1]]))
    return out


def _gorenstein_names(P: FinitePoset) -> tuple[str, str]:
    bottom, top = "⊥", "⊤"
    k = 0
    while bottom in P or top in P:
        k += 1
        bottom, top = f"⊥{k}", f"⊤{k}"
    return bottom, top


def _gorenstein_on(P: FinitePoset, within: int, cache: _SphereCache):
    """First non-sphere interval of ``Q_{⊥,⊤}``, or the list of sphere dimensions."""
    bottom, top = _gorenstein_names(P)
    intervals = _extended_intervals(P, within, bottom, top)
    cache.prefetch(m for _, _, m in intervals)
    dims = []
    for p, q, mask in intervals:
        d = cache(mask)
        if d is None:
            return (p, q, mask), dims
        dims.append(d)
    return None, dims


def _interval_homology(P: FinitePoset, mask: int, modulus: int, cohomology: bool) -> dict:
    Q = induced(P, P.elements_of(mask))
    K = SimplicialComplex(Q.elements, (tuple(sorted(c)) for c in chain_indices(Q)))
    C = boundary_matrices(K, modulus)
    if cohomology:
        return dual(C).homology.to_json(cohomological=True)
    return C.homology.to_json()


def is_gorenstein_star_poset(
    P: FinitePoset, ring="Z", jobs: int = 1, use_cohomology: bool = False
) -> VerdictReport:
    """Every open interval of ``P_{⊥,⊤}`` has the homology of a sphere.

    ``use_cohomology`` runs the sphere test on reduced cohomology instead.
    """
    t0 = time.perf_counter()
    modulus = _modulus(ring)
    cache = _SphereCache(P, modulus, use_cohomology, jobs)
    bad, dims = _gorenstein_on(P, (1 << len(P)) - 1, cache)
    if bad is not None:
        p, q, mask = bad
        w = {
            "pair": [p, q],
            "interval": P.elements_of(mask),
            "cohomology" if use_cohomology else "reduced_homology": _interval_homology(P, mask, modulus, use_cohomology),
        }
        return VerdictReport("gorenstein_star", False, [w], _ms(t0), None, ring_name(modulus))
    counts = Counter(dims)
    w = {"intervals_checked": len(dims), "sphere_dims": {str(d): counts[d] for d in sorted(counts)}}
    return VerdictReport("gorenstein_star", True, [w], _ms(t0), None, ring_name(modulus))


def is_verdier_via_gorenstein(
    P: FinitePoset, ring="Z", jobs: int = 1, use_cohomology: bool = False
) -> VerdictReport:
    """``P_{<p}`` is Gorenstein* for every ``p``."""
    t0 = time.perf_counter()
    modulus = _modulus(ring)
    cache = _SphereCache(P, modulus, use_cohomology, jobs)
    if jobs > 1:
        # every interval needed below is an open interval or a strict down-set of P
        masks = [P.down_mask(i, strict=True) for i in range(len(P))]
        masks += [
            P.up_mask(i, strict=True) & P.down_mask(j, strict=True)
            for i in range(len(P))
            for j in range(len(P))
            if i != j and P._up[i] >> j & 1
        ]
        cache.prefetch(masks)
    witnesses = []
    for i, p in enumerate(P.elements):
        bad, dims = _gorenstein_on(P, P.down_mask(i, strict=True), cache)
        if bad is not None:
            a, b, mask = bad
            w = {
                "element": p,
                "pair": [a, b],
                "interval": P.elements_of(mask),
                "cohomology" if use_cohomology else "reduced_homology": _interval_homology(
                    P, mask, modulus, use_cohomology
                ),
            }
            return VerdictReport("verdier_via_gorenstein", False, [w], _ms(t0), None, ring_name(modulus))
        witnesses.append({"element": p, "intervals_checked": len(dims)})
    return VerdictReport("verdier_via_gorenstein", True, witnesses, _ms(t0), None, ring_name(modulus))


def main_theorem_check(
    P: FinitePoset,
    ring="Z",
    jobs: int = 1,
    full_check_bound: int | None = None,
    sample_pairs: int | None = None,
    seed: int | None = None,
) -> VerdictReport:
    """Run both deciders; disagreement is flagged as an inconsistency."""
    t0 = time.perf_counter()
    iii = is_verdier(P, ring, jobs, full_check_bound, sample_pairs, seed)
    ii = is_verdier_via_gorenstein(P, ring, jobs)
    if iii.verdict is None:
        verdict, inconsistent = ii.verdict, False
    elif iii.seed is not None and ii.verdict is False and iii.verdict is True:
        # a sample can miss the failing pair; only a sampled failure contradicts (ii)
        verdict, inconsistent = False, False
    else:
        inconsistent = iii.verdict != ii.verdict
        verdict = None if inconsistent else ii.verdict
    witnesses = _tag(iii, "iii") + _tag(ii, "ii")
    return VerdictReport("main_theorem", verdict, witnesses, _ms(t0), iii.seed, iii.ring, inconsistent)


def _tag(report: VerdictReport, name: str) -> list:
    if report.verdict is True and len(report.witnesses) > 1:
        return [{"check": name, "verdict": True, "checked": len(report.witnesses)}]
    return [{"check": name, "verdict": report.verdict, **w} for w in report.witnesses] or [
        {"check": name, "verdict": report.verdict}
    ]


def cone_check(P: FinitePoset, ring="Z", jobs: int = 1) -> VerdictReport:
    """Gorenstein* for ``P`` against Verdier for ``P`` with a top adjoined."""
    t0 = time.perf_counter()
    g = is_gorenstein_star_poset(P, ring, jobs)
    v = is_verdier(add_top(P), ring, jobs)
    inconsistent = g.verdict != v.verdict
    w = [{"check": "gorenstein_star", "verdict": g.verdict}, {"check": "verdier_of_cone", "verdict": v.verdict}]
    if not g.verdict:
        w[0].update(g.witnesses[0])
    if not v.verdict:
        w[1].update(v.witnesses[0])
    return VerdictReport("cone", None if inconsistent else g.verdict, w, _ms(t0), None, g.ring, inconsistent)


def _require_verdier(P: FinitePoset, ring) -> None:
    if not is_verdier(P, ring).verdict:
        raise PreconditionError("poset is not Verdier")


def generator_image_check(P: FinitePoset, ring="Z") -> VerdictReport:
    """``dualize(Z_{<=p})`` is ``Z`` at ``p`` in degree ``-r(p)`` and zero elsewhere."""
    t0 = time.perf_counter()
    modulus = _modulus(ring)
    _require_verdier(P, modulus)
    witnesses = []
    for p in P.elements:
        D = dualize(corep_sheaf(P, p, modulus=modulus))
        r = chain_length_to(P, p)
        for x in P.elements:
            h = D.value(x).homology
            expected = HomologySummary({-r: (1, ())}, modulus) if x == p else HomologySummary({}, modulus)
            if h != expected:
                w = {"element": p, "at": x, "homology": h.to_json(cohomological=True)}
                return VerdictReport("generator_image", False, [w], _ms(t0), None, ring_name(modulus))
        witnesses.append({"element": p, "degree": -r})
    return VerdictReport("generator_image", True, witnesses, _ms(t0), None, ring_name(modulus))


def hereditary_check(P: FinitePoset, ring="Z") -> VerdictReport:
    """``P_{>p}`` and ``P_{<=p}`` are Verdier for every ``p``."""
    t0 = time.perf_counter()
    modulus = _modulus(ring)
    _require_verdier(P, modulus)
    witnesses = []
    for p in P.elements:
        for label, sub in (("above", P.above(p, strict=True)), ("below_or_equal", P.below(p))):
            rep = is_verdier(induced(P, sub), modulus)
            if not rep.verdict:
                w = {"element": p, "subposet": label, **rep.witnesses[0]}
                return VerdictReport("hereditary", False, [w], _ms(t0), None, ring_name(modulus))
        witnesses.append({"element": p})
    return VerdictReport("hereditary", True, witnesses, _ms(t0), None, ring_name(modulus))


def limit_colimit_check(P: FinitePoset, F: Diagram, ring=None) -> VerdictReport:
    """For Gorenstein* ``P`` and ``F`` on ``P_{⊥,⊤}``: limit iff colimit."""
    t0 = time.perf_counter()
    modulus = F.modulus if ring is None else _modulus(ring)
    if not is_gorenstein_star_poset(P, modulus).verdict:
        raise PreconditionError("poset is not Gorenstein*")
    B = F.base
    bottom, top = B.least(), B.greatest()
    if bottom is None or top is None or bottom == top:
        raise PreconditionError("diagram base needs distinct least and greatest elements")
    inner = [x for x in B.elements if x not in (bottom, top)]
    if set(inner) != set(P.elements) or any(B.leq(a, b) != P.leq(a, b) for a in inner for b in inner):
        raise PreconditionError("diagram base is not P with a bottom and top adjoined")
    lim = is_quasi_iso(cone_comparison_limit(F))
    colim = is_quasi_iso(cone_comparison_colimit(F))
    inconsistent = lim != colim
    w = [{"limit": lim, "colimit": colim}]
    return VerdictReport("limit_colimit", None if inconsistent else lim, w, _ms(t0), None, ring_name(modulus), inconsistent)


def vanishing_table(P: FinitePoset, ring="Z") -> dict[tuple[str, str], HomologySummary]:
    """``Γ(P; Z_[p,q])`` for all ``p <= q``, diagonal included."""
    modulus = _modulus(ring)
    return {(p, q): interval_gamma(P, p, q, modulus) for p, q in P.comparable_pairs(strict=False)}
