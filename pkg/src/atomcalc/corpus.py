"""Test corpora of modules: exhaustive up to isomorphism, or random."""
from __future__ import annotations

import random
from itertools import product

from .core.algebra import Algebra, spin_subspace
from .core.iso import is_isomorphic
from .core.modules import RightModule, Submodule, combination, direct_sum, hom_space, quotient
from .core.structure import (
    composition_multiplicities,
    radical_submodule,
    socle,
    socle_multiplicities,
    structure,
)
from .atoms import enumerate_submodules
from .homology import indecomposable_injective
from .linalg import Matrix, Subspace, all_vectors, solve


def invariants(m: RightModule) -> tuple:
    """Isomorphism invariants used to avoid most isomorphism tests."""
    if m.dim == 0:
        return (0,)
    layers = []
    cur = m
    while cur.dim:
        r = radical_submodule(cur)
        layers.append(cur.dim - r.dim)
        cur = r.module
    return (m.dim, composition_multiplicities(m), socle_multiplicities(m), tuple(layers),
            len(hom_space(m, m)))


class IsoClasses:
    """Collects modules, keeping one representative per isomorphism class."""

    def __init__(self):
        self.buckets: dict[tuple, list[RightModule]] = {}

    def add(self, m: RightModule) -> bool:
        bucket = self.buckets.setdefault(invariants(m), [])
        if any(is_isomorphic(m, x) for x in bucket):
            return False
        bucket.append(m)
        return True

    def modules(self) -> list[RightModule]:
        out = [m for b in self.buckets.values() for m in b]
        return sorted(out, key=lambda m: invariants(m))

    def __len__(self):
        return sum(len(b) for b in self.buckets.values())


def _simple_submodules(m: RightModule, simples) -> list[Subspace]:
    """Every simple submodule of m over a finite field."""
    out: set[Subspace] = set()
    for s in simples:
        basis = hom_space(s, m)
        for coeffs in all_vectors(m.field, len(basis)):
            if any(coeffs):
                img = combination(basis, list(coeffs))
                out.add(Subspace.span(m.field, m.dim, img))
    return sorted(out, key=lambda s: s.basis.tolist())


def modules_up_to_dim(a: Algebra, max_dim: int = 4) -> list[RightModule]:
    """Every module of dimension <= max_dim up to isomorphism (finite fields).

    A module with socle multiplicities m embeds essentially into
    I = sum E(S_s)^(m_s), and its image contains soc(I).  Such submodules
    are reached from soc(I) by repeatedly adding a simple submodule of the
    quotient.
    """
    f = a.field
    if f.p is None:
        raise ValueError("exhaustive enumeration needs a finite field")
    st = structure(a)
    simples = st.simples
    dims = [s.dim for s in simples]
    found = IsoClasses()
    found.add(RightModule.zero(a))
    ranges = [range(max_dim // d + 1) for d in dims]
    for mult in product(*ranges):
        base = sum(c * d for c, d in zip(mult, dims))
        if base == 0 or base > max_dim:
            continue
        parts = [indecomposable_injective(a, s) for s, c in enumerate(mult) for _ in range(c)]
        inj = direct_sum(parts, a)
        start = socle(inj).space
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for space in frontier:
                sub = Submodule(inj, space)
                found.add(sub.module)
                if space.dim == max_dim:
                    continue
                q, proj = quotient(inj, sub)
                for simple_sub in _simple_submodules(q, simples):
                    if space.dim + simple_sub.dim > max_dim:
                        continue
                    # preimage in inj: space + lift of the simple submodule
                    lift = Subspace.span(f, inj.dim, solve(proj.matrix, simple_sub.basis))
                    bigger = space + lift
                    if bigger not in seen:
                        seen.add(bigger)
                        nxt.append(bigger)
            frontier = nxt
    return found.modules()


def random_modules(a: Algebra, count: int = 200, max_dim: int = 4, seed: int = 0) -> list[RightModule]:
    """Random modules of dimension <= max_dim built by sums, submodules and quotients.

    Every module is obtained from simple, projective and injective modules
    through operations that keep the action closed, then conjugated by a
    random change of basis.
    """
    rng = random.Random(seed)
    f = a.field
    st = structure(a)
    pool = list(st.simples)
    pool += [p.module for p in st.indecomposable_projectives]
    pool += [indecomposable_injective(a, s) for s in range(len(st.simples))]
    out: list[RightModule] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 100 * count:
            raise RuntimeError("could not build enough random modules")
        k = rng.randint(1, 3)
        parts = [rng.choice(pool) for _ in range(k)]
        if sum(p.dim for p in parts) > 3 * max_dim:
            continue
        m = direct_sum(parts, a)
        op = rng.choice(("sub", "quot", "both", "none"))
        if op in ("sub", "both"):
            vecs = [Matrix(f, [[f.random_element(rng) for _ in range(m.dim)]]) for _ in range(rng.randint(1, 2))]
            space = Subspace.span(f, m.dim, [])
            for v in vecs:
                space = space + spin_subspace(f, v, m.generator_action)
            m = Submodule(m, space).module
        if op in ("quot", "both") and m.dim:
            v = Matrix(f, [[f.random_element(rng) for _ in range(m.dim)]])
            m, _ = quotient(m, Submodule(m, spin_subspace(f, v, m.generator_action)))
        if m.dim == 0 or m.dim > max_dim:
            continue
        g = _random_invertible(f, m.dim, rng)
        out.append(m.change_basis(g))
    return out


def _random_invertible(f, n: int, rng) -> Matrix:
    while True:
        g = Matrix(f, [[f.random_element(rng) for _ in range(n)] for _ in range(n)])
        if g.det() != 0:
            return g


def short_exact_sequences(modules: list[RightModule], budget: int = 4096, per_module: int | None = None,
                          seed: int = 0) -> list[Submodule]:
    """Submodules L of corpus modules, each giving 0 -> L -> M -> M/L -> 0."""
    rng = random.Random(seed)
    out = []
    for m in modules:
        if m.dim == 0:
            continue
        subs = enumerate_submodules(m, budget)
        if per_module is not None and len(subs) > per_module:
            subs = rng.sample(subs, per_module)
        out.extend(subs)
    return out
