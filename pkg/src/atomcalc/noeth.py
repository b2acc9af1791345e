"""Algebras over artinian commutative base rings: primes, localization, Bass numbers.

The base ring R is a finite product of local commutative algebras R_1..R_t.
Its primes are the factors, and localizing at the i-th prime is projection
onto the block cut out by the central idempotent eps_i.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .atoms import BudgetExceeded, invariant_subspaces
from .core.algebra import Algebra, direct_product, quotient_algebra, subalgebra_coords
from .core.iso import find_isomorphism, find_monomorphism
from .core.modules import RightModule, Submodule, direct_sum, hom_space, quotient
from .core.structure import annihilator, structure
from .constructions import row_module, triangular, triangular_central_map
from .homology import bass_table, ext_dimensions, indecomposable_injective
from .linalg import Matrix, Subspace, all_vectors, hstack, image, kernel


class NoethError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ArtinianBaseRing:
    """Product of local commutative algebras over a common field."""

    factors: tuple[Algebra, ...]

    def __post_init__(self):
        if not self.factors:
            raise NoethError("a base ring needs at least one factor")
        fields = {x.field for x in self.factors}
        if len(fields) != 1:
            raise NoethError("factors must share a field")
        for i, x in enumerate(self.factors):
            if not x.is_commutative:
                raise NoethError(f"factor {i} is not commutative")
            st = structure(x)
            # local: one simple, and A/J is that simple's endomorphism field
            if len(st.simples) != 1 or x.dim - st.radical.dim != st.end_dims[0]:
                raise NoethError(f"factor {i} is not local")

    @classmethod
    def local(cls, r: Algebra) -> "ArtinianBaseRing":
        return cls((r,))

    @cached_property
    def ring(self) -> Algebra:
        return self.factors[0] if len(self.factors) == 1 else direct_product(self.factors)

    @property
    def field(self):
        return self.factors[0].field

    @property
    def t(self) -> int:
        return len(self.factors)

    def maximal_ideal(self, i: int) -> Subspace:
        return structure(self.factors[i]).radical

    def factor_units(self) -> list[Matrix]:
        """Units of the factors as elements of the product."""
        f = self.field
        out = []
        off = 0
        d = self.ring.dim
        for x in self.factors:
            v = f.zeros(1, d)
            v[0, off : off + x.dim] = x.unit.a[0]
            out.append(Matrix.wrap(f, v))
            off += x.dim
        return out


@dataclass(frozen=True, eq=False)
class NoethAlgebra:
    """Lambda with a central copy of the base ring given by ``central_map``."""

    lam: Algebra
    base: ArtinianBaseRing
    central_map: Matrix  # (dim R) x (dim Lambda)

    def __post_init__(self):
        r = self.base.ring
        lam = self.lam
        cm = self.central_map
        if cm.shape != (r.dim, lam.dim):
            raise NoethError("central map has the wrong shape")
        if r.unit @ cm != lam.unit:
            raise NoethError("central map does not preserve the unit")
        for i in range(r.dim):
            xi = r.basis_vector(i)
            for j in range(r.dim):
                xj = r.basis_vector(j)
                if r.mul(xi, xj) @ cm != lam.mul(xi @ cm, xj @ cm):
                    raise NoethError(f"central map is not multiplicative on ({i}, {j})")
        for i in range(r.dim):
            z = r.basis_vector(i) @ cm
            for k in range(lam.dim):
                b = lam.basis_vector(k)
                if lam.mul(z, b) != lam.mul(b, z):
                    raise NoethError(f"image of base element {i} does not commute with basis element {k}")

    @property
    def field(self):
        return self.lam.field

    @cached_property
    def factor_idempotents(self) -> tuple[Matrix, ...]:
        return tuple(u @ self.central_map for u in self.base.factor_units())


def triangular_algebra(base: ArtinianBaseRing) -> NoethAlgebra:
    """Lower triangular 2x2 matrices over R, with R embedded diagonally."""
    r = base.ring
    return NoethAlgebra(triangular(r), base, triangular_central_map(r))


def as_noeth(base: ArtinianBaseRing) -> NoethAlgebra:
    """R as an algebra over itself."""
    r = base.ring
    return NoethAlgebra(r, base, Matrix.identity(r.field, r.dim))


# -- prime ideals --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PrimeIdeal:
    algebra: NoethAlgebra
    space: Subspace
    simple_index: int  # simple module with this annihilator
    base_prime: int  # factor index of P meet R

    @property
    def simple(self) -> RightModule:
        return structure(self.algebra.lam).simples[self.simple_index]

    @property
    def name(self) -> str:
        return f"P({self.simple.name or self.simple_index})"


def is_two_sided(lam: Algebra, space: Subspace) -> bool:
    for k in range(lam.dim):
        if not (space.contains(space.basis @ lam.right_mult[k])
                and space.contains(space.basis @ lam.left_mult[k])):
            return False
    return True


def _condition_matrix(lam: Algebra, a: Matrix, p: Subspace) -> Matrix:
    """Rows: b -> coordinates of a e_k b modulo P, for every basis e_k.

    b satisfies a Lambda b in P iff b lies in the left kernel.
    """
    blocks = [p.reduce(lam.left_matrix(lam.mul(a, lam.basis_vector(k)))) for k in range(lam.dim)]
    return hstack(lam.field, blocks, lam.dim)


def is_prime_ideal(lam: Algebra, p: Subspace, budget: int = 10**6) -> bool:
    """a Lambda b in P forces a in P or b in P, checked for every a outside P.

    For fixed a the admissible b form a subspace, which must lie in P.
    The condition only depends on a modulo P, so a ranges over nonzero
    classes of Lambda/P.  Over Q the equivalent test that Lambda/P is a
    simple algebra is used.
    """
    f = lam.field
    if p.dim == lam.dim or not is_two_sided(lam, p):
        return False
    free = p.complement_columns()
    if f.p is None:
        q, _, _ = quotient_algebra(lam, p)
        st = structure(q)
        return st.radical.dim == 0 and len(st.simples) == 1
    if f.p ** len(free) > budget:
        raise BudgetExceeded(f"{f.p}^{len(free)} classes exceeds the budget of {budget}")
    for coeffs in all_vectors(f, len(free)):
        if not any(coeffs):
            continue
        v = f.zeros(1, lam.dim)
        for c, col in zip(coeffs, free):
            v[0, col] = c
        a = Matrix.wrap(f, v)
        ok_b = kernel(_condition_matrix(lam, a, p))
        if not ok_b.issubset(p):
            return False
    return True


def two_sided_ideals(lam: Algebra, budget: int = 10**6) -> list[Subspace]:
    """All two-sided ideals, by enumerating bimodule-invariant subspaces."""
    mats = list(lam.right_mult) + list(lam.left_mult)
    return invariant_subspaces(lam.field, lam.dim, mats, budget)


def prime_ideals(n: NoethAlgebra, check: bool = True) -> list[PrimeIdeal]:
    """Annihilators of the simple modules, with primality verified."""
    lam = n.lam
    st = structure(lam)
    out = []
    seen = set()
    for s, simple in enumerate(st.simples):
        p = annihilator(simple)
        if p in seen:
            raise NoethError("two simples share an annihilator")
        seen.add(p)
        if check and not is_prime_ideal(lam, p):
            raise NoethError(f"annihilator of simple {s} failed the primality check")
        owners = [i for i, e in enumerate(n.factor_idempotents) if not p.contains(e)]
        if len(owners) != 1:
            raise NoethError("prime does not contract to a single base prime")
        out.append(PrimeIdeal(n, p, s, owners[0]))
    return out


# -- localization --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Localization:
    algebra: NoethAlgebra
    prime: int
    block: Algebra  # Lambda eps
    space: Subspace  # Lambda eps inside Lambda
    projection: Matrix  # Lambda -> block coordinates, x -> x eps

    def element(self, x: Matrix) -> Matrix:
        """Coordinates in the block of x eps."""
        return self.space.coordinates(self.algebra.lam.mul(x, self.eps))

    @property
    def eps(self) -> Matrix:
        return self.algebra.factor_idempotents[self.prime]

    def lift(self, y: Matrix) -> Matrix:
        return y @ self.space.basis

    def is_homomorphism(self) -> bool:
        lam = self.algebra.lam
        for i in range(lam.dim):
            for j in range(lam.dim):
                x, y = lam.basis_vector(i), lam.basis_vector(j)
                if lam.mul(x, y) @ self.projection != self.block.mul(x @ self.projection, y @ self.projection):
                    return False
        return lam.unit @ self.projection == self.block.unit

    def module(self, m: RightModule) -> "LocalizedModule":
        """M_p = M eps as a block module, with the canonical map and its section."""
        f = m.field
        e_act = m.act(self.eps)
        sp = image(e_act)
        basis = sp.basis
        acts = []
        for k in range(self.block.dim):
            a = m.act(self.lift(self.block.basis_vector(k)))
            acts.append(sp.coordinates(basis @ a) if sp.dim else Matrix.zeros(f, 0, 0))
        mp = RightModule(self.block, tuple(acts), m.name and f"{m.name}_p")
        canonical = sp.coordinates(e_act) if sp.dim else Matrix.zeros(f, m.dim, 0)
        return LocalizedModule(m, mp, canonical, basis)


@dataclass(frozen=True, eq=False)
class LocalizedModule:
    source: RightModule
    module: RightModule
    canonical: Matrix  # M -> M_p
    section: Matrix  # M_p -> M

    def canonical_is_lambda_linear(self, loc: Localization) -> bool:
        """x a eps = x eps (a eps): the canonical map intertwines the actions."""
        lam = loc.algebra.lam
        for k in range(lam.dim):
            a = lam.basis_vector(k)
            lhs = self.source.act(a) @ self.canonical
            rhs = self.canonical @ self.module.act(loc.element(a))
            if lhs != rhs:
                return False
        return True

    def splits(self) -> bool:
        """The section followed by the canonical map is the identity."""
        return (self.section @ self.canonical).is_identity()


def localize(n: NoethAlgebra, i: int) -> Localization:
    if not 0 <= i < n.base.t:
        raise NoethError(f"no base prime {i}")
    lam = n.lam
    eps = n.factor_idempotents[i]
    right = lam.right_matrix(eps)
    space = image(right)
    block = subalgebra_coords(lam, space, eps)
    proj = space.coordinates(right)
    return Localization(n, i, block, space, proj)


def split_epi_witness(n: NoethAlgebra, i: int, m: RightModule) -> LocalizedModule:
    """Canonical map M -> M_p with a Lambda-linear section (a block projection)."""
    loc = localize(n, i)
    lm = loc.module(m)
    if not (lm.canonical_is_lambda_linear(loc) and lm.splits()):
        raise ArithmeticError("canonical map is not a split epimorphism")
    # the section is Lambda-linear because eps is central
    for k in range(n.lam.dim):
        a = n.lam.basis_vector(k)
        if lm.section @ m.act(a) != lm.module.act(loc.element(a)) @ lm.section:
            raise ArithmeticError("section is not Lambda-linear")
    return lm


# -- simples of localizations ------------------------------------------------


@dataclass
class PrimeReport:
    prime: PrimeIdeal
    local_simple: int  # index among the simples of the block
    residue_dim: int
    local_residue_dim: int
    socle_dim: int
    failures: list[str] = field(default_factory=list)


def simple_of_prime(p: PrimeIdeal) -> tuple[RightModule, PrimeReport]:
    """S(P) over Lambda_p, with the residue-field and socle checks."""
    n = p.algebra
    loc = localize(n, p.base_prime)
    s = p.simple
    sp = loc.module(s).module
    bst = structure(loc.block)
    failures = []
    idx = None
    for j, t in enumerate(bst.simples):
        if t.dim == sp.dim and find_isomorphism(sp, t) is not None:
            idx = j
    if idx is None:
        failures.append(f"{p.name}: S(P) is not a simple module of the localization")
    k_lam = len(hom_space(s, s))
    k_loc = len(hom_space(sp, sp))
    if k_lam != k_loc:
        failures.append(f"{p.name}: residue field dimensions {k_lam} and {k_loc} differ")
    # {x in I(P) : xP = 0} is isomorphic to the simple attached to P
    inj = indecomposable_injective(n.lam, p.simple_index)
    cols = [inj.act(p.space.basis.row(r)) for r in range(p.space.dim)]
    killed = kernel(hstack(inj.field, cols, inj.dim)) if cols else Subspace.full(inj.field, inj.dim)
    sub = Submodule(inj, killed)
    if not sub.is_closed() or sub.dim != s.dim or find_isomorphism(sub.module, s) is None:
        failures.append(f"{p.name}: the P-torsion of I(P) is not the attached simple")
    rep = PrimeReport(p, -1 if idx is None else idx, k_lam, k_loc, sub.dim, failures)
    return sp, rep


def verify_prime_bijection(n: NoethAlgebra) -> list[str]:
    """Spec Lambda -> disjoint union of simples of the Lambda_p is a bijection."""
    failures = []
    primes = prime_ideals(n)
    lam_st = structure(n.lam)
    # artinian: prime = maximal; every prime must be a maximal two-sided ideal
    for i in range(n.base.t):
        loc = localize(n, i)
        block_simples = structure(loc.block).simples
        hits = []
        for p in primes:
            if p.base_prime != i:
                continue
            _, rep = simple_of_prime(p)
            failures.extend(rep.failures)
            hits.append(rep.local_simple)
        if sorted(hits) != list(range(len(block_simples))):
            failures.append(f"base prime {i}: primes hit simples {sorted(hits)} of {len(block_simples)}")
    if len(primes) != len(lam_st.simples):
        failures.append("number of primes differs from the number of simples")
    return failures


def verify_spec_equals_max(n: NoethAlgebra, budget: int = 10**6) -> list[str]:
    """Every prime ideal found by exhaustive search is a maximal ideal and an annihilator."""
    lam = n.lam
    primes = {p.space for p in prime_ideals(n)}
    ideals = two_sided_ideals(lam, budget)
    proper = [x for x in ideals if x.dim < lam.dim]
    maximal = {x for x in proper if not any(x.dim < y.dim and x.issubset(y) for y in proper)}
    passing = {x for x in proper if is_prime_ideal(lam, x, budget)}
    failures = []
    if passing != primes:
        failures.append("ideals passing the primality test differ from the annihilators of simples")
    if maximal != primes:
        failures.append("maximal ideals differ from the prime ideals")
    return failures


# -- Bass numbers via localization --------------------------------------------


@dataclass
class LocalizationBass:
    prime: PrimeIdeal
    degree: int
    over_lambda: int
    over_localization: int

    @property
    def ok(self) -> bool:
        return self.over_lambda == self.over_localization


def bass_via_localization(p: PrimeIdeal, m: RightModule, i: int, n: int | None = None) -> LocalizationBass:
    """mu_i(P, M) over Lambda against dim Ext^i(S(P), M_p) over Lambda_p."""
    bound = max(i, n or 0)
    left = bass_table(m, bound).mu(i, p.simple_index) if m.dim else 0
    sp, rep = simple_of_prime(p)
    loc = localize(p.algebra, p.base_prime)
    mp = loc.module(m).module
    if mp.dim == 0:
        right = 0
    else:
        right = ext_dimensions(rep.local_simple, mp, i)[i]
    return LocalizationBass(p, i, left, right)


def classical_bass(v: RightModule, i: int, n: int | None = None) -> int:
    """mu_i(p, V) over a local commutative ring."""
    if v.dim == 0:
        return 0
    return bass_table(v, max(i, n or 0)).mu(i, 0)


def goto_nishida(p: PrimeIdeal, m: RightModule) -> tuple[bool, int | None]:
    """(P associated to M, smallest i with Lambda/P embedding in M^i, or None)."""
    lam = p.algebra.lam
    reg = RightModule.regular(lam)
    lp, _ = quotient(reg, Submodule(reg, p.space))
    hom_nonzero = bool(hom_space(p.simple, m)) if m.dim else False
    for i in range(1, lp.dim + 1):
        target = direct_sum([m] * i, lam) if m.dim else m
        if target.dim < lp.dim:
            continue
        mono = find_monomorphism(lp, target)
        if mono is not None:
            return hom_nonzero, i
    return hom_nonzero, None


# -- row modules over triangular matrices ----------------------------------


@dataclass
class FinalExampleReport:
    tuple_: tuple[int, int, int, int]  # mu0(P1), mu0(P2), mu1(P1), mu1(P2)
    classical: tuple[int, int]  # mu0(p, V), mu1(p, V)
    localized: dict
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures

    def equations(self) -> list[tuple[str, int, int]]:
        a, b, c, d = self.tuple_
        m0, m1 = self.classical
        return [
            ("mu_0(P1, M) = mu_0(p, V)", a, m0),
            ("mu_0(P2, M) = 0", b, 0),
            ("mu_1(P1, M) = mu_1(p, V)", c, m1),
            ("mu_1(P2, M) = mu_0(p, V)", d, m0),
        ]


def first_row_prime(n: NoethAlgebra) -> tuple[PrimeIdeal, PrimeIdeal]:
    """(P1, P2): P1 is attached to the simple on which e11 acts nonzero."""
    lam = n.lam
    r = n.base.ring.dim
    e11 = n.base.ring.unit @ _first_block(lam.field, r)
    primes = prime_ideals(n)
    p1 = [p for p in primes if not p.simple.act(e11).is_zero()]
    p2 = [p for p in primes if p.simple.act(e11).is_zero()]
    if len(p1) != 1 or len(p2) != 1:
        raise NoethError("expected one prime for each diagonal position")
    return p1[0], p2[0]


def _first_block(f, r: int) -> Matrix:
    m = f.zeros(r, 3 * r)
    for k in range(r):
        m[k, k] = f.one
    return Matrix.wrap(f, m)


def verify_final_example(r: Algebra, v: RightModule, n: int = 4) -> FinalExampleReport:
    """Bass numbers of M = [V 0] over triangular matrices on a local ring R."""
    base = ArtinianBaseRing.local(r)
    na = triangular_algebra(base)
    m = row_module(na.lam, v)
    p1, p2 = first_row_prime(na)
    table = bass_table(m, n)
    tup = (table.mu(0, p1.simple_index), table.mu(0, p2.simple_index),
           table.mu(1, p1.simple_index), table.mu(1, p2.simple_index))
    classical = (classical_bass(v, 0, n), classical_bass(v, 1, n))
    rep = FinalExampleReport(tup, classical, {}, [])
    for name, lhs, rhs in rep.equations():
        if lhs != rhs:
            rep.failures.append(f"{name} fails: {lhs} != {rhs}")
    for label, p in (("P1", p1), ("P2", p2)):
        for i in (0, 1):
            lb = bass_via_localization(p, m, i, n)
            rep.localized[(label, i)] = (lb.over_lambda, lb.over_localization)
            if not lb.ok:
                rep.failures.append(f"mu_{i}({label}) = {lb.over_lambda} but the localized Ext has dimension {lb.over_localization}")
    return rep
