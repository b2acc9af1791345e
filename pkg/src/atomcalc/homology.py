"""Injective envelopes, minimal resolutions, Bass numbers and Ext dimensions."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .core.iso import find_isomorphism
from .core.modules import ModuleMap, RightModule, dual, hom_space, quotient
from .core.structure import (
    composition_multiplicities,
    projective_cover,
    radical_submodule,
    socle,
    structure,
)
from .linalg import Matrix


class TruncatedError(LookupError):
    """A quantity lies beyond the certified range of a resolution."""


@dataclass(frozen=True, eq=False)
class Envelope:
    source: RightModule
    total: RightModule
    embedding: ModuleMap
    multiplicities: dict[int, int]  # simple index -> copies of E(S)

    def is_essential(self) -> bool:
        """soc(total) lies in the image of the embedding."""
        return socle(self.total).space.issubset(self.embedding.image().space)


def injective_envelope(m: RightModule) -> Envelope:
    """E(m) as the dual of the projective cover of the dual of m.

    D(m) is a right module over the opposite algebra; its projective cover
    P -> D(m) dualises to an essential embedding m -> D(P), and D(P) is a
    direct sum of the indecomposable injectives D(A e_s) = E(S_s).
    """
    a = m.algebra
    structure(a)
    pc = projective_cover(dual(m))
    total = dual(pc.module)
    emb = ModuleMap(m, total, pc.cover.matrix.T)
    return Envelope(m, total, emb, dict(sorted(Counter(pc.summands).items())))


def indecomposable_injective(algebra, s: int) -> RightModule:
    """E(S_s)."""
    cache = algebra.__dict__.setdefault("_injective_cache", {})
    if s not in cache:
        cache[s] = injective_envelope(structure(algebra).simples[s]).total
    return cache[s]


@dataclass(frozen=True)
class Completion:
    kind: Literal["exact_zero_tail", "periodic", "truncated"]
    start: int | None = None  # zero tail: first zero term; periodic: a
    period_end: int | None = None  # periodic: b
    witness: ModuleMap | None = field(default=None, compare=False)

    @property
    def complete(self) -> bool:
        return self.kind != "truncated"

    def describe(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "exact_zero_tail":
            d["zero_from"] = self.start
        elif self.kind == "periodic":
            d["a"], d["b"] = self.start, self.period_end
        return d


@dataclass(frozen=True, eq=False)
class MinimalResolution:
    """Truncated minimal injective (or projective) resolution.

    Injective kind: ``augmentation`` is base -> E^0, ``differentials[i]`` is
    E^i -> E^(i+1), ``cosyzygies[j]`` is the j-th cosyzygy (the base at j=0),
    ``tail`` is E^last -> cosyzygies[last+1].

    Projective kind: ``augmentation`` is P_0 -> base, ``differentials[i]``
    is P_(i+1) -> P_i, ``cosyzygies[j]`` holds the j-th syzygy (kernel of
    P_(j-1) -> P_(j-2)), and ``tail`` is the inclusion of the last syzygy.
    """

    kind: Literal["injective", "projective"]
    base: RightModule
    terms: tuple[RightModule, ...]
    augmentation: ModuleMap | None
    differentials: tuple[ModuleMap, ...]
    cosyzygies: tuple[RightModule, ...]
    tail: ModuleMap | None
    multiplicities: tuple[dict[int, int], ...]
    degree_bound: int
    completion: Completion

    def term(self, i: int) -> RightModule:
        """i-th term, with zero beyond an exact zero tail."""
        if i < len(self.terms):
            return self.terms[i]
        if self.completion.kind == "exact_zero_tail":
            return RightModule.zero(self.base.algebra)
        if self.completion.kind == "periodic" and i >= self.completion.start:
            a, b = self.completion.start, self.completion.period_end
            return self.terms[a + (i - a) % (b - a)]
        raise TruncatedError(f"term {i} is beyond the bound {self.degree_bound}")


def _periodicity(cos: list[RightModule], fingerprints: list) -> Completion | None:
    b = len(cos) - 1
    new = cos[b]
    for a in range(b):
        if fingerprints[a] == fingerprints[b]:
            iso = find_isomorphism(cos[a], new)
            if iso is not None:
                return Completion("periodic", a, b, iso)
    return None


def _fingerprint(m: RightModule):
    return (m.dim, composition_multiplicities(m))


def minimal_injective_resolution(m: RightModule, n: int = 4) -> MinimalResolution:
    """E^0..E^n by iterating cosyzygy-then-envelope."""
    if n < 0:
        raise ValueError("degree bound must be nonnegative")
    cos = [m]
    prints = [_fingerprint(m)]
    terms: list[RightModule] = []
    mults: list[dict[int, int]] = []
    diffs: list[ModuleMap] = []
    augmentation = None
    prev_proj: ModuleMap | None = None
    periodic: Completion | None = None
    zero_at: int | None = None
    current = m
    for i in range(n + 1):
        if current.dim == 0:
            zero_at = i
            break
        env = injective_envelope(current)
        terms.append(env.total)
        mults.append(env.multiplicities)
        if prev_proj is None:
            augmentation = env.embedding
        else:
            diffs.append(prev_proj.then(env.embedding))
        q, proj = quotient(env.total, env.embedding.image())
        prev_proj = proj
        cos.append(q)
        prints.append(_fingerprint(q))
        current = q
        if q.dim and periodic is None:
            periodic = _periodicity(cos, prints)
    if zero_at is None and current.dim == 0:
        zero_at = len(terms)
    if zero_at is not None:
        completion = Completion("exact_zero_tail", zero_at)
    elif periodic is not None:
        completion = periodic
    else:
        completion = Completion("truncated")
    return MinimalResolution(
        "injective", m, tuple(terms), augmentation, tuple(diffs), tuple(cos),
        prev_proj, tuple(mults), n, completion,
    )


def minimal_projective_resolution(m: RightModule, n: int = 4) -> MinimalResolution:
    """P_0..P_n by iterating cover-then-kernel."""
    if n < 0:
        raise ValueError("degree bound must be nonnegative")
    syz = [m]
    prints = [_fingerprint(m)]
    terms: list[RightModule] = []
    mults: list[dict[int, int]] = []
    diffs: list[ModuleMap] = []
    augmentation = None
    prev_incl: ModuleMap | None = None
    periodic = None
    zero_at = None
    current = m
    for i in range(n + 1):
        if current.dim == 0:
            zero_at = i
            break
        pc = projective_cover(current)
        terms.append(pc.module)
        mults.append(dict(sorted(Counter(pc.summands).items())))
        if prev_incl is None:
            augmentation = pc.cover
        else:
            diffs.append(pc.cover.then(prev_incl))
        ker = pc.cover.kernel()
        prev_incl = ker.inclusion
        syz.append(ker.module)
        prints.append(_fingerprint(ker.module))
        current = ker.module
        if current.dim and periodic is None:
            periodic = _periodicity(syz, prints)
    if zero_at is None and current.dim == 0:
        zero_at = len(terms)
    if zero_at is not None:
        completion = Completion("exact_zero_tail", zero_at)
    elif periodic is not None:
        completion = periodic
    else:
        completion = Completion("truncated")
    return MinimalResolution(
        "projective", m, tuple(terms), augmentation, tuple(diffs), tuple(syz),
        prev_incl, tuple(mults), n, completion,
    )


def resolution_problems(res: MinimalResolution) -> list[str]:
    """Violated complex, exactness or minimality conditions (empty when sound)."""
    out = []
    if not res.terms:
        if res.base.dim:
            out.append("nonzero base with an empty resolution")
        return out
    if res.kind == "injective":
        maps = [res.augmentation, *res.differentials]
        if not res.augmentation.is_injective():
            out.append("augmentation is not injective")
        for i in range(len(maps) - 1):
            if not (maps[i].matrix @ maps[i + 1].matrix).is_zero():
                out.append(f"d{i + 1} o d{i} != 0")
            # exactness at E^i: image of incoming = kernel of outgoing
            if maps[i].rank != res.terms[i].dim - maps[i + 1].rank:
                out.append(f"not exact at E^{i}")
        for i, e in enumerate(res.terms):
            outgoing = res.differentials[i] if i < len(res.differentials) else res.tail
            ker = outgoing.kernel()
            if not socle(e).space.issubset(ker.space):
                out.append(f"soc(E^{i}) not inside ker d^{i}")
        for i, mult in enumerate(res.multiplicities):
            inj = sum(c * indecomposable_injective(res.base.algebra, s).dim for s, c in mult.items())
            if inj != res.terms[i].dim:
                out.append(f"multiplicities of E^{i} do not add up")
    else:
        maps = [res.augmentation, *res.differentials]
        if not res.augmentation.is_surjective():
            out.append("augmentation is not surjective")
        for i in range(len(maps) - 1):
            # maps[i+1]: P_(i+1) -> P_i, maps[i]: P_i -> P_(i-1)
            if not (maps[i + 1].matrix @ maps[i].matrix).is_zero():
                out.append(f"d{i} o d{i + 1} != 0")
            if maps[i + 1].rank != res.terms[i].dim - maps[i].rank:
                out.append(f"not exact at P_{i}")
        for i, p in enumerate(res.terms):
            outgoing = maps[i]
            ker = outgoing.kernel()
            if not ker.space.issubset(radical_submodule(p).space):
                out.append(f"ker of P_{i} cover not inside P_{i} rad")
    return out


# -- Bass numbers and Ext ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class BassTable:
    module: RightModule
    degree_bound: int
    entries: tuple[tuple[int, ...], ...]  # entries[i][s]
    completion: Completion

    def mu(self, i: int, s: int) -> int:
        if i <= self.degree_bound:
            return self.entries[i][s]
        c = self.completion
        if c.kind == "exact_zero_tail":
            return 0
        if c.kind == "periodic" and c.start <= self.degree_bound:
            a, b = c.start, c.period_end
            return self.entries[a + (i - a) % (b - a)][s]
        raise TruncatedError(f"mu_{i} is unknown beyond degree {self.degree_bound}")

    def support(self) -> set[int]:
        return {s for row in self.entries for s, v in enumerate(row) if v}


def _hom_multiplicity(simple_idx: int, target: RightModule) -> int:
    st = structure(target.algebra)
    h = len(hom_space(st.simples[simple_idx], target))
    q, r = divmod(h, st.end_dims[simple_idx])
    if r:
        raise ArithmeticError("hom dimension not divisible by the residue field dimension")
    return q


def bass_table(m: RightModule, n: int = 4, resolution: MinimalResolution | None = None) -> BassTable:
    cache = m.__dict__.setdefault("_bass_cache", {})
    if resolution is None and n in cache:
        return cache[n]
    table = _bass_table(m, n, resolution or minimal_injective_resolution(m, n))
    cache[n] = table
    return table


def _bass_table(m: RightModule, n: int, res: MinimalResolution) -> BassTable:
    st = structure(m.algebra)
    k = len(st.simples)
    rows = []
    for i in range(n + 1):
        if i < len(res.terms):
            e = res.terms[i]
            row = tuple(_hom_multiplicity(s, e) for s in range(k))
            if row != tuple(res.multiplicities[i].get(s, 0) for s in range(k)):
                raise ArithmeticError("socle multiplicities disagree with the envelope decomposition")
        else:  # past an exact zero tail
            row = (0,) * k
        rows.append(row)
    return BassTable(m, n, tuple(rows), res.completion)


def bass_number(s: int, m: RightModule, i: int, n: int | None = None) -> int:
    """mu_i of the atom of simple s at m: dim Hom(S, E^i(m)) / dim End(S)."""
    n = i if n is None else n
    if i > n:
        raise TruncatedError(f"degree {i} beyond bound {n}")
    return bass_table(m, n).mu(i, s)


def projective_resolution_of_simple(algebra, s: int, n: int) -> MinimalResolution:
    cache = algebra.__dict__.setdefault("_proj_res_cache", {})
    for (ss, nn), res in cache.items():
        if ss == s and nn >= n:
            return res
    res = minimal_projective_resolution(structure(algebra).simples[s], n)
    cache[(s, n)] = res
    return res


def ext_dimensions(s: int, m: RightModule, n: int) -> list[int]:
    """dim_{k(alpha)} Ext^i(S_s, m) for i = 0..n, from Hom(P_*, m)."""
    a = m.algebra
    st = structure(a)
    res = projective_resolution_of_simple(a, s, n + 1)
    f = a.field
    terms = [res.term(i) if i < len(res.terms) or res.completion.kind == "exact_zero_tail" else None for i in range(n + 2)]
    homs = []
    for i in range(n + 2):
        t = terms[i]
        if t is None:
            raise TruncatedError("projective resolution shorter than requested")
        homs.append(hom_space(t, m))

    def coboundary_rank(i: int) -> int:
        # delta^i: Hom(P_i, m) -> Hom(P_(i+1), m), f -> d_(i+1) f
        if i < 0 or not homs[i] or terms[i + 1].dim == 0:
            return 0
        d = res.differentials[i].matrix
        rows = np.stack([(d @ h.matrix).a.reshape(-1) for h in homs[i]])
        return Matrix.wrap(f, rows).rank()

    out = []
    for i in range(n + 1):
        dim = len(homs[i]) - coboundary_rank(i) - coboundary_rank(i - 1)
        q, r = divmod(dim, st.end_dims[s])
        if r:
            raise ArithmeticError("Ext dimension not divisible by the residue field dimension")
        out.append(q)
    return out


def ext_dimension(s: int, m: RightModule, i: int) -> int:
    return ext_dimensions(s, m, i)[i]


@dataclass
class MainTheoremReport:
    module: RightModule
    degree_bound: int
    bass: BassTable
    ext: tuple[tuple[int, ...], ...]  # ext[i][s]
    cosyzygy_homs: tuple[tuple[int, ...], ...]
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_main_theorem(m: RightModule, n: int = 4) -> MainTheoremReport:
    """Compare mu_i(alpha, m) with dim Ext^i(S_alpha, m) for all atoms, i <= n.

    The two sides come from disjoint pipelines: the minimal injective
    resolution of m and minimal projective resolutions of the simples.
    """
    st = structure(m.algebra)
    k = len(st.simples)
    res = minimal_injective_resolution(m, n)
    table = bass_table(m, n, res)
    ext_cols = [ext_dimensions(s, m, n) for s in range(k)]
    ext = tuple(tuple(ext_cols[s][i] for s in range(k)) for i in range(n + 1))
    failures = []
    cos_rows = []
    for i in range(n + 1):
        cos = res.cosyzygies[i] if i < len(res.cosyzygies) else RightModule.zero(m.algebra)
        row = tuple(_hom_multiplicity(s, cos) if cos.dim else 0 for s in range(k))
        cos_rows.append(row)
        for s in range(k):
            if table.entries[i][s] != ext[i][s]:
                failures.append(f"mu_{i}(S{s}) = {table.entries[i][s]} but Ext^{i} has dimension {ext[i][s]}")
            if row[s] != table.entries[i][s]:
                failures.append(f"Hom(S{s}, cosyzygy {i}) disagrees with Hom(S{s}, E^{i})")
    failures.extend(resolution_problems(res))
    return MainTheoremReport(m, n, table, ext, tuple(cos_rows), failures)
