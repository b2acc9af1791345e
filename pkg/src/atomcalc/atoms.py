"""Monoform modules, the atom spectrum, atomic objects and residue fields."""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Literal

from .core.algebra import Algebra, spin_subspace
from .core.iso import find_isomorphism
from .core.modules import ModuleMap, RightModule, Submodule, hom_space, quotient, combination
from .core.structure import (
    composition_multiplicities,
    radical_submodule,
    socle,
    socle_multiplicities,
    structure,
)
from .core.meataxe import simple_submodule
from .core.structure import retraction
from .homology import indecomposable_injective
from .linalg import Matrix, Subspace, all_vectors, hstack, kernel

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    """An exhaustive search would exceed the enumeration budget."""


def default_budget() -> int:
    return int(os.environ.get("ATOMCALC_BUDGET", DEFAULT_BUDGET))


# -- residue fields and atoms -------------------------------------------------


@dataclass(frozen=True)
class ResidueField:
    characteristic: int
    degree: int  # dimension over the ground field
    commutative: bool

    def __str__(self):
        p, n = self.characteristic, self.degree
        if p:
            return f"F_{p}" if n == 1 else f"F_{p}^{n}"
        if n == 1:
            return "Q"
        if self.commutative:
            return f"number field of degree {n}"
        return f"rational division algebra of dimension {n}"

    def describe(self) -> dict:
        return {"characteristic": self.characteristic, "degree": self.degree,
                "commutative": self.commutative, "name": str(self)}


@dataclass(frozen=True, eq=False)
class Atom:
    algebra: Algebra
    simple_index: int
    residue_field: ResidueField

    def __eq__(self, other):
        return (isinstance(other, Atom) and other.algebra is self.algebra
                and other.simple_index == self.simple_index)

    def __hash__(self):
        return hash((id(self.algebra), self.simple_index))

    def __lt__(self, other: "Atom"):
        return self.simple_index < other.simple_index

    def __repr__(self):
        return f"Atom({self.name}, k={self.residue_field})"

    @property
    def simple(self) -> RightModule:
        return structure(self.algebra).simples[self.simple_index]

    @property
    def name(self) -> str:
        return self.simple.name or f"S{self.simple_index}"


def _endomorphism_algebra(m: RightModule) -> tuple[Algebra, list[ModuleMap]]:
    basis = hom_space(m, m)
    return Algebra.from_matrices(m.field, [b.matrix for b in basis]), basis


def _residue_descriptor(algebra: Algebra, s: int) -> ResidueField:
    simple = structure(algebra).simples[s]
    end, _ = _endomorphism_algebra(simple)
    f = algebra.field
    comm = end.is_commutative
    if f.p and not comm:
        raise ArithmeticError("a finite division ring is commutative")
    return ResidueField(f.p or 0, end.dim, comm)


def aspec(algebra: Algebra) -> tuple[Atom, ...]:
    """Atoms in canonical order (the order of the simple modules)."""
    cache = algebra.__dict__
    if "_aspec" not in cache:
        st = structure(algebra)
        cache["_aspec"] = tuple(
            Atom(algebra, s, _residue_descriptor(algebra, s)) for s in range(len(st.simples))
        )
    return cache["_aspec"]


def atom_by_name(algebra: Algebra, name: str) -> Atom:
    for a in aspec(algebra):
        if a.name == name or f"S{a.simple_index}" == name:
            return a
    raise KeyError(name)


# -- submodule enumeration ----------------------------------------------------


def invariant_subspaces(field, dim: int, mats, budget: int | None = None) -> list[Subspace]:
    """Every subspace of field^dim stable under x -> x @ g for g in mats."""
    budget = default_budget() if budget is None else budget
    f = field
    if f.p is None:
        raise BudgetExceeded("exhaustive enumeration needs a finite field")
    if f.p ** dim > budget:
        raise BudgetExceeded(f"{f.p}^{dim} vectors exceeds the budget of {budget}")
    cyclic: set[Subspace] = set()
    for coeffs in all_vectors(f, dim):
        nz = [c for c in coeffs if c]
        if not nz or nz[0] != 1:
            continue  # one representative per line
        cyclic.add(spin_subspace(f, Matrix(f, [list(coeffs)]), mats))
    subs: set[Subspace] = {Subspace.zero(f, dim)}
    for c in sorted(cyclic, key=lambda s: s.dim):
        subs |= {s + c for s in subs}
    return sorted(subs, key=lambda s: (s.dim, s.basis.tolist()))


def enumerate_submodules(m: RightModule, budget: int | None = None) -> list[Submodule]:
    """Every submodule of m, by spinning all vectors and closing under sums."""
    return [Submodule(m, s) for s in invariant_subspaces(m.field, m.dim, m.generator_action, budget)]


# -- monoform certificates ----------------------------------------------------

Verdict = Literal["monoform", "not_monoform", "uniform_only", "not_uniform"]


@dataclass(frozen=True, eq=False)
class MonoformCertificate:
    module: RightModule
    verdict: Verdict
    method: Literal["socle_criterion", "exhaustive"]
    # a nonzero N and a nonzero X embedding into both module and module/N
    witness: Submodule | None = None
    common: RightModule | None = None
    into_module: ModuleMap | None = None
    into_quotient: ModuleMap | None = None
    quotient_module: RightModule | None = None
    # two nonzero submodules meeting in zero
    pair: tuple[Submodule, Submodule] | None = None

    @property
    def is_monoform(self) -> bool:
        return self.verdict == "monoform"

    @property
    def is_uniform(self) -> bool:
        return self.verdict in ("monoform", "uniform_only")

    def verify(self) -> bool:
        """Re-check the witnesses."""
        if self.verdict == "monoform":
            return sum(socle_multiplicities(self.module)) == 1
        ok = True
        if self.witness is not None:
            q, _ = quotient(self.module, self.witness)
            ok &= self.witness.dim > 0 and self.witness.dim < self.module.dim
            ok &= self.common.dim > 0
            for f, tgt in ((self.into_module, self.module), (self.into_quotient, q)):
                ok &= f.source.same_as(self.common) and f.target.dim == tgt.dim
                ok &= f.is_homomorphism() and f.is_injective()
            ok &= self.into_quotient.target.same_as(q)
        if self.pair is not None:
            x, y = self.pair
            ok &= x.dim > 0 and y.dim > 0 and (x & y).dim == 0
        if self.verdict == "not_uniform":
            ok &= self.pair is not None
        return bool(ok)


def _idempotent_for(algebra: Algebra, s: int) -> Matrix:
    for e in structure(algebra).idempotents:
        if e.simple == s:
            return e.element
    raise LookupError(s)  # pragma: no cover


def _nonzero_hom(x: RightModule, y: RightModule) -> ModuleMap:
    basis = hom_space(x, y)
    return basis[0]


def _socle_criterion(h: RightModule) -> MonoformCertificate:
    a = h.algebra
    soc = socle(h)
    mult = socle_multiplicities(h)
    if sum(mult) != 1:
        x1 = simple_submodule(soc.module)
        r = retraction(soc.module, x1)
        comp = r.kernel()
        x2 = simple_submodule(comp.module)
        emb1 = Submodule(h, Subspace.span(h.field, h.dim, x1.space.basis @ soc.space.basis))
        emb2 = Submodule(h, Subspace.span(
            h.field, h.dim, x2.space.basis @ comp.space.basis @ soc.space.basis))
        q, proj = quotient(h, emb2)
        x = emb1.module
        into_q = ModuleMap(x, q, (emb1.inclusion.matrix @ proj.matrix))
        return MonoformCertificate(h, "not_uniform", "socle_criterion", emb2, x, emb1.inclusion,
                                   into_q, q, (emb1, emb2))
    s = mult.index(1)
    if composition_multiplicities(h)[s] == 1:
        return MonoformCertificate(h, "monoform", "socle_criterion")
    # S occurs again above the socle: a cyclic Y = vA with v = v e_s in h/soc
    # has top S, and S embeds into h/N for N the preimage of Y rad.
    qsoc, proj = quotient(h, soc)
    e = _idempotent_for(a, s)
    ve = Subspace.span(h.field, qsoc.dim, qsoc.act(e))
    v = ve.basis.row(0)
    y = spin_subspace(h.field, v, qsoc.generator_action)
    ysub = Submodule(qsoc, y)
    yrad = radical_submodule(ysub.module)
    yrad_in_q = Subspace.span(h.field, qsoc.dim, yrad.space.basis @ y.basis)
    q2, proj2 = quotient(qsoc, Submodule(qsoc, yrad_in_q))
    to_q2 = proj.matrix @ proj2.matrix
    n_space = kernel(to_q2)
    n = Submodule(h, n_space)
    qh, projh = quotient(h, n)
    x = soc.module
    into_q = _nonzero_hom(x, qh)
    return MonoformCertificate(h, "uniform_only", "socle_criterion", n, x, soc.inclusion, into_q, qh)


def _exhaustive(h: RightModule, budget: int | None) -> MonoformCertificate:
    subs = enumerate_submodules(h, budget)
    nonzero = [s for s in subs if s.dim > 0]
    minimal = [s for s in nonzero if not any(t.dim < s.dim and t.issubset(s) for t in nonzero)]
    pair = None
    if len(minimal) > 1:
        pair = (minimal[0], minimal[1])
    for n in nonzero:
        if n.dim == h.dim:
            continue
        q, proj = quotient(h, n)
        qsubs = [t for t in enumerate_submodules(q, budget) if t.dim > 0]
        for x in nonzero:
            for y in qsubs:
                if y.dim != x.dim:
                    continue
                iso = find_isomorphism(x.module, y.module)
                if iso is not None:
                    into_q = ModuleMap(x.module, q, iso.matrix @ y.inclusion.matrix)
                    verdict = "not_uniform" if pair else "uniform_only"
                    return MonoformCertificate(h, verdict, "exhaustive", n, x.module, x.inclusion,
                                               into_q, q, pair)
    if pair:  # pragma: no cover - non-uniform modules are never monoform
        raise ArithmeticError("non-uniform module passed the monoform search")
    return MonoformCertificate(h, "monoform", "exhaustive")


def is_monoform(h: RightModule, method: str = "socle_criterion", budget: int | None = None) -> MonoformCertificate:
    if h.dim == 0:
        raise ValueError("the zero module is not monoform")
    if method == "socle_criterion":
        return _socle_criterion(h)
    if method == "exhaustive":
        return _exhaustive(h, budget)
    raise ValueError(f"unknown method {method!r}")


def is_uniform_exhaustive(h: RightModule, budget: int | None = None) -> bool:
    """Every two nonzero submodules meet nontrivially."""
    nonzero = [s for s in enumerate_submodules(h, budget) if s.dim > 0]
    return all((x & y).dim > 0 for i, x in enumerate(nonzero) for y in nonzero[i + 1:])


def atom_of(h: RightModule) -> Atom:
    cert = is_monoform(h)
    if not cert.is_monoform:
        raise ValueError(f"module is not monoform ({cert.verdict})")
    st = structure(h.algebra)
    return aspec(h.algebra)[st.simple_index(socle(h).module)]


def share_subobject(h1: RightModule, h2: RightModule, budget: int | None = None) -> bool:
    """Brute-force search for a nonzero module embedding into both."""
    s1 = [s for s in enumerate_submodules(h1, budget) if s.dim > 0]
    s2 = [s for s in enumerate_submodules(h2, budget) if s.dim > 0]
    return any(x.dim == y.dim and find_isomorphism(x.module, y.module) is not None
               for x in s1 for y in s2)


# -- atomic objects -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AtomicObject:
    atom: Atom
    envelope: RightModule
    submodule: Submodule
    end_dim: int  # dim End(E)
    end_radical_dim: int

    @property
    def module(self) -> RightModule:
        return self.submodule.module

    @property
    def dim(self) -> int:
        return self.submodule.dim


def atomic_object(alpha: Atom) -> AtomicObject:
    """H = intersection of kernels of the non-automorphisms of E(alpha).

    End(E) is local, so its non-units form its radical and a basis of the
    radical suffices.
    """
    e = indecomposable_injective(alpha.algebra, alpha.simple_index)
    f = e.field
    end, basis = _endomorphism_algebra(e)
    rad = structure(end).radical
    jmats = [combination(basis, list(rad.basis.row(i).a[0])) for i in range(rad.dim)]
    if jmats:
        h = kernel(hstack(f, jmats, e.dim))
    else:
        h = Subspace.full(f, e.dim)
    sub = Submodule(e, h)
    return AtomicObject(alpha, e, sub, end.dim, rad.dim)


def residue_field(alpha: Atom) -> ResidueField:
    """k(alpha), after checking the three ways of computing its dimension agree."""
    ao = atomic_object(alpha)
    d_simple = len(hom_space(alpha.simple, alpha.simple))
    d_atomic = len(hom_space(ao.module, ao.module))
    d_quot = ao.end_dim - ao.end_radical_dim
    if not d_simple == d_atomic == d_quot == alpha.residue_field.degree:
        raise ArithmeticError(
            f"residue field dimensions disagree: End(S)={d_simple}, End(H)={d_atomic}, End(E)/rad={d_quot}")
    return alpha.residue_field


def residue_dimensions(alpha: Atom) -> tuple[int, int, int]:
    ao = atomic_object(alpha)
    return (len(hom_space(alpha.simple, alpha.simple)), len(hom_space(ao.module, ao.module)),
            ao.end_dim - ao.end_radical_dim)


def monoform_submodules(m: RightModule, budget: int | None = None,
                        method: str = "socle_criterion") -> list[Submodule]:
    """Nonzero monoform submodules of m, found by enumeration."""
    return [s for s in enumerate_submodules(m, budget)
            if s.dim > 0 and is_monoform(s.module, method, budget).is_monoform]
