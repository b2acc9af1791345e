"""Radical, simple modules, primitive idempotents and projective covers.

Everything here is computed once per algebra and cached on it through
:func:`structure`.  The opposite algebra shares the radical and the
idempotents, and its simple modules are the duals of ours in the same
order, so atoms of an algebra and of its opposite line up index by index.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..linalg import Matrix, Subspace, image, kernel, solve, vstack
from .algebra import Algebra, quotient_algebra
from .iso import is_isomorphic
from .meataxe import composition_factors, find_proper_submodule
from .modules import (
    ModuleMap,
    RightModule,
    Submodule,
    direct_sum,
    dual,
    hom_space,
    quotient,
    submodule_generated,
)


class StructureError(ArithmeticError):
    """A computed structure failed its own verification."""


# -- radical ----------------------------------------------------------------


def _trace_gram(a: Algebra) -> Matrix:
    f = a.field
    t = f.array([[sum(m.a[i, i] for i in range(a.dim))] for m in a.right_mult])
    d = a.dim
    g = f.zeros(d, d)
    for j in range(d):
        # column j: Tr(R(e_i e_j)) for all i
        g[:, j] = f.matmul(a.right_mult[j].a, t)[:, 0]
    return Matrix.wrap(f, g)


def _generalized_trace(x: Matrix, p: int, i: int) -> int:
    """Tr(lift(x)^(p^i)) / p^i mod p, for an integer lift with entries in [0, p)."""
    lifted = np.array(x.a, dtype=object)
    power = lifted
    for _ in range(i):
        acc = power
        for _ in range(p - 1):
            acc = acc.dot(power)
        power = acc
    tr = int(sum(power[k, k] for k in range(power.shape[0])))
    q = p**i
    if tr % q:
        raise StructureError("generalized trace is not divisible as expected")
    return (tr // q) % p


def radical_raw(a: Algebra) -> Subspace:
    """Jacobson radical from trace forms.

    Characteristic 0 or p > dim: kernel of the trace form (Dickson).  Small
    characteristic: the chain I_{-1} = A, I_i = {x in I_{i-1} : g_i(xy) = 0
    for all y} of generalized trace functions g_i (Ronyai / Cohen-Ivanyos-
    Wales), which ends at the radical for i = floor(log_p dim).
    """
    f = a.field
    d = a.dim
    if f.p is None or f.p > d:
        return kernel(_trace_gram(a))
    p = f.p
    levels = int(math.floor(math.log(d, p) + 1e-9))
    ideal = Subspace.full(f, d)
    for i in range(levels + 1):
        if ideal.dim == 0:
            break
        b = ideal.basis
        g = f.zeros(b.rows, d)
        for r in range(b.rows):
            for k in range(d):
                prod = b.row(r) @ a.right_mult[k]
                g[r, k] = _generalized_trace(a.right_matrix(prod), p, i)
        coeff = kernel(Matrix.wrap(f, g))
        ideal = Subspace.span(f, d, coeff.basis @ b)
    return ideal


def ideal_product(a: Algebra, x: Subspace, y: Subspace) -> Subspace:
    f = a.field
    if x.dim == 0 or y.dim == 0:
        return Subspace.zero(f, a.dim)
    rows = [x.basis @ a.right_matrix(y.basis.row(j)) for j in range(y.dim)]
    return Subspace.span(f, a.dim, vstack(f, rows, a.dim))


def is_two_sided_ideal(a: Algebra, x: Subspace) -> bool:
    return all(x.contains(x.basis @ r) for r in a.right_mult) and all(
        x.contains(x.basis @ l) for l in a.left_mult
    )


def nilpotency_index(a: Algebra, x: Subspace) -> int | None:
    """Least k with x^k = 0, or None if x is not nilpotent."""
    if x.dim == 0:
        return 1
    power = x
    for k in range(1, a.dim + 2):
        if power.dim == 0:
            return k
        power = ideal_product(a, power, x)
    return None


def radical_by_annihilators(a: Algebra, rng=None) -> Subspace:
    """rad A as the intersection of the annihilators of the composition factors of A_A."""
    f = a.field
    rad = Subspace.full(f, a.dim)
    for s in composition_factors(RightModule.regular(a), rng):
        rad = rad & annihilator(s)
    return rad


def annihilator(m: RightModule) -> Subspace:
    """{a in A : m * a = 0} as a subspace of A."""
    f = m.field
    a = m.algebra
    if m.dim == 0:
        return Subspace.full(f, a.dim)
    rows = np.stack([r.a.reshape(-1) for r in m.action])
    return kernel(Matrix.wrap(f, rows))


# -- the cached structure ---------------------------------------------------


@dataclass
class Idempotent:
    element: Matrix
    simple: int


class AlgebraStructure:
    """Radical, simples, primitive idempotents and indecomposable projectives."""

    def __init__(self, algebra: Algebra, *, radical: Subspace, simples, idempotents):
        self.algebra = algebra
        self.radical = radical
        self.simples: tuple[RightModule, ...] = tuple(simples)
        self.idempotents: tuple[Idempotent, ...] = tuple(idempotents)

    @classmethod
    def compute(cls, algebra: Algebra) -> "AlgebraStructure":
        rng = random.Random(algebra.seed)
        rad = radical_raw(algebra)
        if not _verify_radical(algebra, rad):
            rad = radical_by_annihilators(algebra, rng)
            if not _verify_radical(algebra, rad):
                raise StructureError("no verified radical")
        simples = _simple_modules(algebra, rng)
        idems = _primitive_idempotents(algebra, rad, simples, rng)
        return cls(algebra, radical=rad, simples=simples, idempotents=idems)

    def opposite(self) -> "AlgebraStructure":
        op = self.algebra.op
        return AlgebraStructure(
            op,
            radical=self.radical,
            simples=[dual(s) for s in self.simples],
            idempotents=self.idempotents,
        )

    @cached_property
    def radical_basis(self) -> list[Matrix]:
        return [self.radical.basis.row(i) for i in range(self.radical.dim)]

    @cached_property
    def nilpotency_index(self) -> int:
        k = nilpotency_index(self.algebra, self.radical)
        assert k is not None
        return k

    @cached_property
    def primary_idempotents(self) -> tuple[Matrix, ...]:
        """One primitive idempotent e_s per simple s, with top(e_s A) = S_s."""
        out = []
        for s in range(len(self.simples)):
            out.append(next(e.element for e in self.idempotents if e.simple == s))
        return tuple(out)

    @cached_property
    def indecomposable_projectives(self) -> tuple[Submodule, ...]:
        """e_s A as submodules of the regular module."""
        reg = RightModule.regular(self.algebra)
        f = self.algebra.field
        out = []
        for e in self.primary_idempotents:
            rows = vstack(f, [e @ r for r in self.algebra.right_mult], self.algebra.dim)
            out.append(Submodule(reg, Subspace.span(f, self.algebra.dim, rows)))
        return tuple(out)

    @cached_property
    def end_dims(self) -> tuple[int, ...]:
        return tuple(len(hom_space(s, s)) for s in self.simples)

    def top_multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for e in self.idempotents:
            out[e.simple] = out.get(e.simple, 0) + 1
        return out

    def simple_index(self, s: RightModule) -> int:
        """Index of the simple isomorphic to s."""
        for i, t in enumerate(self.simples):
            if t.dim == s.dim and is_isomorphic(s, t):
                return i
        raise StructureError("module is not isomorphic to any computed simple")


def structure(a: Algebra) -> AlgebraStructure:
    st = a.__dict__.get("_structure")
    if st is None:
        st = AlgebraStructure.compute(a)
        a.__dict__["_structure"] = st
        a.op.__dict__["_structure"] = st.opposite()
    return st


def _verify_radical(a: Algebra, rad: Subspace) -> bool:
    if not is_two_sided_ideal(a, rad):
        return False
    if nilpotency_index(a, rad) is None:
        return False
    if rad.dim == a.dim:
        return False
    if rad.dim == 0:
        return radical_raw(a).dim == 0 if a.field.p is None or a.field.p > a.dim else True
    q, _, _ = quotient_algebra(a, rad)
    return radical_raw(q).dim == 0


def _sort_key(m: RightModule):
    vals = []
    for r in m.action:
        vals.extend(r.a.reshape(-1).tolist())
    return (m.dim, vals)


def _simple_modules(a: Algebra, rng) -> list[RightModule]:
    reps: list[RightModule] = []
    for s in composition_factors(RightModule.regular(a), rng):
        if not any(t.dim == s.dim and is_isomorphic(s, t) for t in reps):
            reps.append(s)
    reps.sort(key=_sort_key)
    return [RightModule(a, s.action, f"S{i}") for i, s in enumerate(reps)]


def retraction(w: RightModule, x: Submodule) -> ModuleMap:
    """pi: w -> x.module with pi restricted to x the identity (x a summand)."""
    xm = x.module
    basis = hom_space(w, xm)
    f = w.field
    if xm.dim == 0:
        return ModuleMap(w, xm, Matrix.zeros(f, w.dim, 0))
    rows = Matrix.wrap(f, np.stack([(x.space.basis @ h.matrix).a.reshape(-1) for h in basis])) if basis else None
    target = Matrix.wrap(f, Matrix.identity(f, xm.dim).a.reshape(1, -1).copy())
    c = solve(rows, target) if rows is not None else None
    if c is None:
        raise StructureError("submodule is not a direct summand")
    mat = Matrix.zeros(f, w.dim, xm.dim)
    for k, h in enumerate(basis):
        if c.a[0, k]:
            mat = mat + h.matrix.scale(c.a[0, k])
    return ModuleMap(w, xm, mat)


def _split_semisimple_idempotents(b: Algebra, rng) -> list[Matrix]:
    """Complete set of orthogonal primitive idempotents of a semisimple algebra."""
    f = b.field
    reg = RightModule.regular(b)
    work = [b.unit]
    done = []
    while work:
        e = work.pop()
        rows = vstack(f, [e @ r for r in b.right_mult], b.dim)
        eb = Submodule(reg, Subspace.span(f, b.dim, rows))
        sub = find_proper_submodule(eb.module, rng)
        if sub is None:
            done.append(e)
            continue
        pi = retraction(eb.module, sub)
        # phi = incl_sub o pi is an idempotent endomorphism of eB; f1 = phi(e)
        phi = pi.matrix @ sub.space.basis  # eB -> eB in eB coordinates
        e_coords = eb.space.coordinates(e)
        f1 = (e_coords @ phi) @ eb.space.basis
        work.append(e - f1)
        work.append(f1)
    done.sort(key=lambda m: m.a.reshape(-1).tolist())
    return done


def lift_idempotent(a: Algebra, x: Matrix, max_iter: int = 64) -> Matrix:
    """Newton iteration e <- 3e^2 - 2e^3 until e is idempotent."""
    e = x
    for _ in range(max_iter):
        e2 = a.mul(e, e)
        if e2 == e:
            return e
        e3 = a.mul(e2, e)
        e = e2.scale(3) - e3.scale(2)
    raise StructureError("idempotent lifting did not converge")


def _primitive_idempotents(a: Algebra, rad: Subspace, simples, rng) -> list[Idempotent]:
    f = a.field
    if rad.dim == 0:
        b, free = a, list(range(a.dim))
    else:
        b, _, free = quotient_algebra(a, rad)
    ebar = _split_semisimple_idempotents(b, rng)

    def lift_vec(y: Matrix) -> Matrix:
        v = f.zeros(1, a.dim)
        v[0, free] = y.a[0]
        return Matrix.wrap(f, v)

    lifted: list[Matrix] = []
    one = a.unit
    acc = Matrix.zeros(f, 1, a.dim)
    for k, y in enumerate(ebar):
        u = one - acc
        if k == len(ebar) - 1:
            e = u
        else:
            x = a.mul(a.mul(u, lift_vec(y)), u)
            e = lift_idempotent(a, x)
        lifted.append(e)
        acc = acc + e
    out = []
    for e in lifted:
        hits = [i for i, s in enumerate(simples) if not s.act(e).is_zero()]
        if len(hits) != 1:
            raise StructureError("lifted idempotent is not primitive")
        out.append(Idempotent(e, hits[0]))
    return out


# -- module-level structure ---------------------------------------------------


def radical_of(a: Algebra) -> Subspace:
    return structure(a).radical


def simple_modules(a: Algebra) -> tuple[RightModule, ...]:
    return structure(a).simples


def socle(m: RightModule) -> Submodule:
    """{x : x * rad A = 0}."""
    st = structure(m.algebra)
    f = m.field
    if m.dim == 0 or st.radical.dim == 0:
        return Submodule.whole(m)
    big = np.concatenate([m.act(r).a for r in st.radical_basis], axis=1)
    return Submodule(m, kernel(Matrix.wrap(f, big)))


def radical_submodule(m: RightModule) -> Submodule:
    """m * rad A."""
    st = structure(m.algebra)
    f = m.field
    if m.dim == 0 or st.radical.dim == 0:
        return Submodule.zero(m)
    big = np.concatenate([m.act(r).a for r in st.radical_basis], axis=0)
    return Submodule(m, image(Matrix.wrap(f, big)))


def top(m: RightModule) -> tuple[RightModule, ModuleMap]:
    return quotient(m, radical_submodule(m))


@dataclass(frozen=True, eq=False)
class ProjectiveCover:
    module: RightModule
    cover: ModuleMap
    summands: tuple[int, ...]  # simple index of each indecomposable summand


def projective_cover(m: RightModule) -> ProjectiveCover:
    """Minimal epimorphism from a direct sum of indecomposable projectives.

    Generators are chosen greedily in each m * e_s, skipping vectors already
    in the span of earlier generators plus m * rad A; each accepted vector
    contributes one copy of e_s A.
    """
    a = m.algebra
    st = structure(a)
    f = a.field
    if m.dim == 0:
        z = RightModule.zero(a)
        return ProjectiveCover(z, ModuleMap(z, m, Matrix.zeros(f, 0, 0)), ())
    covered = radical_submodule(m)
    gens: list[tuple[int, Matrix]] = []
    for s, e in enumerate(st.primary_idempotents):
        candidates = image(m.act(e))
        for i in range(candidates.dim):
            v = candidates.basis.row(i)
            if covered.space.contains(v):
                continue
            gens.append((s, v))
            covered = covered + submodule_generated(m, v)
            if covered.dim == m.dim:
                break
        if covered.dim == m.dim:
            break
    if covered.dim != m.dim:
        raise StructureError("generators do not cover the module")
    projs = [st.indecomposable_projectives[s] for s, _ in gens]
    total = direct_sum([p.module for p in projs])
    blocks = []
    for (s, v), p in zip(gens, projs):
        pb = p.space.basis
        blocks.append(vstack(f, [v @ m.act(pb.row(j)) for j in range(pb.rows)], m.dim))
    cover = ModuleMap(total, m, vstack(f, blocks, m.dim))
    return ProjectiveCover(total, cover, tuple(s for s, _ in gens))


def composition_multiplicities(m: RightModule) -> tuple[int, ...]:
    """[m : S_s] = dim Hom(e_s A, m) / dim End(S_s) = dim(m e_s) / dim End(S_s)."""
    st = structure(m.algebra)
    out = []
    for s, e in enumerate(st.primary_idempotents):
        d = m.act(e).rank() if m.dim else 0
        q, r = divmod(d, st.end_dims[s])
        assert r == 0
        out.append(q)
    return tuple(out)


def socle_multiplicities(m: RightModule) -> tuple[int, ...]:
    """Multiplicity of each simple in soc(m): dim Hom(S, m) / dim End(S)."""
    st = structure(m.algebra)
    out = []
    for s, simple in enumerate(st.simples):
        q, r = divmod(len(hom_space(simple, m)), st.end_dims[s])
        assert r == 0
        out.append(q)
    return tuple(out)


def is_simple(m: RightModule) -> bool:
    return m.dim > 0 and find_proper_submodule(m) is None
