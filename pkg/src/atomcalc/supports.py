"""Associated atoms, small atom supports and E-stable subcategories."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain, combinations
from typing import Iterable, Literal

from .atoms import Atom, aspec
from .core.algebra import Algebra
from .core.modules import RightModule, Submodule, direct_sum, quotient
from .core.structure import socle_multiplicities
from .homology import bass_table, indecomposable_injective


@dataclass(frozen=True)
class AtomSet:
    algebra: Algebra = field(compare=False, repr=False)
    members: frozenset[int]  # simple indices
    complete: bool = True
    degree_bound: int | None = None  # set for lower bounds

    @classmethod
    def of(cls, algebra: Algebra, members: Iterable, complete=True, degree_bound=None) -> "AtomSet":
        idx = frozenset(m.simple_index if isinstance(m, Atom) else int(m) for m in members)
        return cls(algebra, idx, complete, degree_bound)

    @property
    def atoms(self) -> tuple[Atom, ...]:
        spec = aspec(self.algebra)
        return tuple(spec[i] for i in sorted(self.members))

    @property
    def completeness(self) -> str:
        return "complete" if self.complete else f"lower_bound({self.degree_bound})"

    def names(self) -> list[str]:
        return [a.name for a in self.atoms]

    def __le__(self, other: "AtomSet") -> bool:
        return self.members <= other.members

    def __or__(self, other: "AtomSet") -> "AtomSet":
        return AtomSet(self.algebra, self.members | other.members, self.complete and other.complete,
                       self.degree_bound if not self.complete else other.degree_bound)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.atoms)


def associated_atoms(m: RightModule) -> AtomSet:
    """Atoms whose simple maps nonzero into m."""
    mult = socle_multiplicities(m) if m.dim else ()
    return AtomSet.of(m.algebra, [s for s, c in enumerate(mult) if c])


def small_atom_support(m: RightModule, n: int = 4) -> AtomSet:
    """Atoms with some nonzero Bass number, complete when the resolution is certified."""
    if m.dim == 0:
        return AtomSet.of(m.algebra, [])
    table = bass_table(m, n)
    comp = table.completion.complete
    return AtomSet.of(m.algebra, table.support(), comp, None if comp else n)


Membership = Literal["in", "out", "unknown"]


def estable_membership(phi: AtomSet, m: RightModule, n: int = 4) -> Membership:
    supp = small_atom_support(m, n)
    if not supp <= phi:
        return "out"
    return "in" if supp.complete else "unknown"


def _subsets(k: int):
    return chain.from_iterable(combinations(range(k), r) for r in range(k + 1))


@dataclass
class ClassificationReport:
    algebra: Algebra
    degree_bound: int
    subsets_checked: int = 0
    sum_pairs_checked: int = 0
    unknown: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_classification(a: Algebra, n: int = 4, corpus: list[RightModule] | None = None) -> ClassificationReport:
    """asupp(asupp^-1 Phi) = Phi for every Phi, witnessed by injective hulls of atoms.

    With a corpus, membership is also checked to be closed under finite
    direct sums and direct summands.
    """
    rep = ClassificationReport(a, n)
    spec = aspec(a)
    single = {}
    for alpha in spec:
        e = indecomposable_injective(a, alpha.simple_index)
        supp = small_atom_support(e, n)
        single[alpha.simple_index] = e
        if supp.members != {alpha.simple_index} or not supp.complete:
            rep.failures.append(f"asupp E({alpha.name}) = {supp.names()}")
    for phi_idx in _subsets(len(spec)):
        rep.subsets_checked += 1
        phi = AtomSet.of(a, phi_idx)
        witnesses = [single[i] for i in phi_idx]
        union = AtomSet.of(a, [])
        for i, w in zip(phi_idx, witnesses):
            if estable_membership(phi, w, n) != "in":
                rep.failures.append(f"E({spec[i].name}) lies outside the class of {sorted(phi_idx)}")
            union = union | small_atom_support(w, n)
        if union.members != phi.members:
            rep.failures.append(f"asupp of witnesses for {sorted(phi_idx)} is {sorted(union.members)}")
        if witnesses:
            total = direct_sum(witnesses)
            if small_atom_support(total, n).members != phi.members:
                rep.failures.append(f"asupp of the witness sum for {sorted(phi_idx)} differs")
    if corpus:
        supports = [small_atom_support(m, n) for m in corpus]
        for m, s in zip(corpus, supports):
            if m.dim and not s.members:
                rep.failures.append("nonzero module with empty support")
        for i, j in combinations(range(len(corpus)), 2):
            si, sj = supports[i], supports[j]
            s = small_atom_support(direct_sum([corpus[i], corpus[j]]), n)
            rep.sum_pairs_checked += 1
            if not (s.complete and si.complete and sj.complete):
                rep.unknown += 1
                continue
            for phi_idx in _subsets(len(spec)):
                phi = frozenset(phi_idx)
                both = si.members <= phi and sj.members <= phi
                if both != (s.members <= phi):
                    rep.failures.append(f"direct sum/summand closure fails for modules {i}, {j}")
                    break
    return rep


@dataclass
class ClosureReport:
    status: Literal["ok", "violated", "unknown"]
    supports: dict[str, AtomSet]
    associated: dict[str, AtomSet]
    failures: list[str]

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def verify_closure(sub: Submodule, n: int = 4) -> ClosureReport:
    """Support and associated-atom inclusions for 0 -> L -> M -> M/L -> 0."""
    m = sub.parent
    l_mod = sub.module
    n_mod, _ = quotient(m, sub)
    sup = {"L": small_atom_support(l_mod, n), "M": small_atom_support(m, n), "N": small_atom_support(n_mod, n)}
    ass = {"L": associated_atoms(l_mod), "M": associated_atoms(m), "N": associated_atoms(n_mod)}
    failures = []
    if not all(s.complete for s in sup.values()):
        return ClosureReport("unknown", sup, ass, failures)
    for x, y, z in (("L", "M", "N"), ("M", "L", "N"), ("N", "L", "M")):
        if not sup[x].members <= sup[y].members | sup[z].members:
            failures.append(f"asupp {x} not inside asupp {y} and asupp {z}")
    if not ass["L"].members <= ass["M"].members:
        failures.append("AAss L not inside AAss M")
    if not ass["M"].members <= ass["L"].members | ass["N"].members:
        failures.append("AAss M not inside AAss L and AAss N")
    for k in "LMN":
        if not ass[k].members <= sup[k].members:
            failures.append(f"AAss {k} not inside asupp {k}")
    return ClosureReport("violated" if failures else "ok", sup, ass, failures)
