"""Right modules, module maps, submodules and hom spaces."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from ..linalg import Field, Matrix, Subspace, _right_null_basis, block_diag, kernel, image
from .algebra import Algebra, combine, spin_subspace


class ModuleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RightModule:
    """Right module with ``action[i]`` the matrix of x -> x * e_i."""

    algebra: Algebra
    action: tuple[Matrix, ...]
    name: str | None = None

    def __post_init__(self):
        if len(self.action) != self.algebra.dim:
            raise ModuleError(f"{len(self.action)} action matrices for an algebra of dimension {self.algebra.dim}")

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def dim(self) -> int:
        return self.action[0].rows

    def __repr__(self):
        label = f"{self.name}, " if self.name else ""
        return f"RightModule({label}dim={self.dim})"

    def act(self, a: Matrix) -> Matrix:
        """Matrix of x -> x * a for an algebra element a."""
        return combine(self.field, a, self.action, self.dim)

    @cached_property
    def generator_action(self) -> tuple[Matrix, ...]:
        return tuple(self.action[g] for g in self.algebra.generators)

    def same_as(self, other: "RightModule") -> bool:
        return self.algebra == other.algebra and self.action == other.action

    def renamed(self, name: str | None) -> "RightModule":
        return RightModule(self.algebra, self.action, name)

    # constructors ----------------------------------------------------------

    @classmethod
    def from_lists(cls, algebra: Algebra, matrices, name=None) -> "RightModule":
        f = algebra.field
        acts = tuple(Matrix(f, m) if not isinstance(m, Matrix) else m for m in matrices)
        if acts and acts[0].rows == 0:
            acts = tuple(Matrix.zeros(f, 0, 0) for _ in acts)
        return cls(algebra, acts, name)

    @classmethod
    def regular(cls, algebra: Algebra) -> "RightModule":
        return cls(algebra, algebra.right_mult, "A")

    @classmethod
    def zero(cls, algebra: Algebra) -> "RightModule":
        z = Matrix.zeros(algebra.field, 0, 0)
        return cls(algebra, tuple(z for _ in range(algebra.dim)), "0")

    def change_basis(self, g: Matrix) -> "RightModule":
        """Same module in the basis given by the rows of invertible g."""
        gi = g.inverse()
        if gi is None:
            raise ModuleError("base change matrix is singular")
        return RightModule(self.algebra, tuple(g @ a @ gi for a in self.action), self.name)


def module_diagnostic(m: RightModule) -> str | None:
    """None when m is a unital module, else a description of the first failure."""
    a = m.algebra
    n = m.dim
    for i, r in enumerate(m.action):
        if r.shape != (n, n):
            return f"action matrix {i} has shape {r.shape}, expected {(n, n)}"
    if not m.act(a.unit).is_identity():
        return "unit does not act as the identity"
    for i in range(a.dim):
        for j in range(a.dim):
            prod = a.basis_vector(i) @ a.right_mult[j]
            if m.action[i] @ m.action[j] != m.act(prod):
                return f"rho(e_{i}) rho(e_{j}) != rho(e_{i} e_{j})"
    return None


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """Homomorphism x -> x @ matrix from source to target."""

    source: RightModule
    target: RightModule
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.source.dim, self.target.dim):
            raise ModuleError(f"map matrix {self.matrix.shape} does not fit {self.source.dim} -> {self.target.dim}")

    def __repr__(self):
        return f"ModuleMap({self.source.dim} -> {self.target.dim})"

    def is_homomorphism(self) -> bool:
        f = self.matrix
        return all(
            rs @ f == f @ rt for rs, rt in zip(self.source.action, self.target.action)
        )

    @cached_property
    def rank(self) -> int:
        return self.matrix.rank()

    def is_injective(self) -> bool:
        return self.rank == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank == self.target.dim

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def kernel(self) -> "Submodule":
        return Submodule(self.source, kernel(self.matrix))

    def image(self) -> "Submodule":
        return Submodule(self.target, image(self.matrix))

    def then(self, other: "ModuleMap") -> "ModuleMap":
        """Composite: first self, then other."""
        return ModuleMap(self.source, other.target, self.matrix @ other.matrix)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix + other.matrix)

    def scale(self, c) -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix.scale(c))

    @classmethod
    def identity(cls, m: RightModule) -> "ModuleMap":
        return cls(m, m, Matrix.identity(m.field, m.dim))

    @classmethod
    def zero(cls, m: RightModule, n: RightModule) -> "ModuleMap":
        return cls(m, n, Matrix.zeros(m.field, m.dim, n.dim))


@dataclass(frozen=True, eq=False)
class Submodule:
    parent: RightModule
    space: Subspace

    @property
    def dim(self) -> int:
        return self.space.dim

    def __eq__(self, other):
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.parent is other.parent and self.space == other.space

    def __hash__(self):
        return hash((id(self.parent), self.space))

    def __repr__(self):
        return f"Submodule(dim={self.dim} of {self.parent!r})"

    def is_closed(self) -> bool:
        b = self.space.basis
        return all(self.space.contains(b @ r) for r in self.parent.action)

    def issubset(self, other: "Submodule") -> bool:
        return self.space.issubset(other.space)

    def __le__(self, other: "Submodule") -> bool:
        return self.issubset(other)

    def __add__(self, other: "Submodule") -> "Submodule":
        return Submodule(self.parent, self.space + other.space)

    def __and__(self, other: "Submodule") -> "Submodule":
        return Submodule(self.parent, self.space & other.space)

    @cached_property
    def module(self) -> RightModule:
        """The submodule as a module in the coordinates of its echelon basis."""
        b = self.space.basis
        acts = tuple(self.space.coordinates(b @ r) for r in self.parent.action)
        if self.dim == 0:
            acts = tuple(Matrix.zeros(self.parent.field, 0, 0) for _ in acts)
        return RightModule(self.parent.algebra, acts)

    @cached_property
    def inclusion(self) -> ModuleMap:
        return ModuleMap(self.module, self.parent, self.space.basis)

    @classmethod
    def whole(cls, m: RightModule) -> "Submodule":
        return cls(m, Subspace.full(m.field, m.dim))

    @classmethod
    def zero(cls, m: RightModule) -> "Submodule":
        return cls(m, Subspace.zero(m.field, m.dim))


def _check_same_algebra(m: RightModule, n: RightModule):
    if not (m.algebra is n.algebra or m.algebra == n.algebra):
        raise ModuleError("modules over different algebras")


def submodule_generated(m: RightModule, vectors) -> Submodule:
    """Smallest submodule containing ``vectors``."""
    f = m.field
    if isinstance(vectors, Matrix):
        start = vectors
    else:
        vectors = list(vectors)
        start = Matrix(f, vectors) if vectors else Matrix.zeros(f, 0, m.dim)
        if start.cols != m.dim:
            start = Matrix(f, np.asarray(vectors, dtype=object).reshape(len(vectors), m.dim))
    if m.dim == 0:
        return Submodule.zero(m)
    return Submodule(m, spin_subspace(f, start, m.generator_action))


def quotient(m: RightModule, s: Submodule) -> tuple[RightModule, ModuleMap]:
    """m / s with basis the unit vectors at the non-pivot columns of s."""
    f = m.field
    free = s.space.complement_columns()
    eye = Matrix.identity(f, m.dim)
    proj = Matrix.wrap(f, np.ascontiguousarray(s.space.reduce(eye).a[:, free]))
    if not free:
        q = RightModule.zero(m.algebra)
        return q, ModuleMap(m, q, Matrix.zeros(f, m.dim, 0))
    acts = tuple(
        Matrix.wrap(f, f.matmul(np.ascontiguousarray(r.a[free]), proj.a)) for r in m.action
    )
    q = RightModule(m.algebra, acts)
    return q, ModuleMap(m, q, proj)


def direct_sum(mods: Sequence[RightModule], algebra: Algebra | None = None) -> RightModule:
    if not mods:
        if algebra is None:
            raise ModuleError("empty direct sum needs an algebra")
        return RightModule.zero(algebra)
    a = mods[0].algebra
    f = a.field
    acts = tuple(block_diag(f, [m.action[i] for m in mods]) for i in range(a.dim))
    return RightModule(a, acts)


def sum_inclusions(mods: Sequence[RightModule], total: RightModule) -> list[ModuleMap]:
    f = total.field
    out = []
    off = 0
    for m in mods:
        mat = f.zeros(m.dim, total.dim)
        for i in range(m.dim):
            mat[i, off + i] = f.one
        out.append(ModuleMap(m, total, Matrix.wrap(f, mat)))
        off += m.dim
    return out


def sum_projections(mods: Sequence[RightModule], total: RightModule) -> list[ModuleMap]:
    return [ModuleMap(total, inc.source, inc.matrix.T) for inc in sum_inclusions(mods, total)]


def dual(m: RightModule) -> RightModule:
    """k-dual, a right module over the opposite algebra (transposed action)."""
    return RightModule(m.algebra.op, tuple(r.T for r in m.action))


def dual_map(f: ModuleMap) -> ModuleMap:
    return ModuleMap(dual(f.target), dual(f.source), f.matrix.T)


def hom_space(m: RightModule, n: RightModule) -> list[ModuleMap]:
    """Basis of Hom_A(m, n), solved as one linear system.

    Unknown X (m x n) must satisfy rho_m(g) X = X rho_n(g) for algebra
    generators g.  Row-major vectorisation turns this into
    (rho_m(g) (x) I - I (x) rho_n(g)^T) vec(X) = 0.
    """
    _check_same_algebra(m, n)
    f = m.field
    dm, dn = m.dim, n.dim
    if dm == 0 or dn == 0:
        return []
    eye_m, eye_n = f.eye(dm), f.eye(dn)
    blocks = []
    for rm, rn in zip(m.generator_action, n.generator_action):
        blocks.append(f.reduce(np.kron(rm.a, eye_n) - np.kron(eye_m, rn.a.T)))
    if blocks:
        system = np.concatenate(blocks, axis=0)
        null = _right_null_basis(f, system)
    else:
        null = f.eye(dm * dn)
    return [ModuleMap(m, n, Matrix.wrap(f, np.ascontiguousarray(v.reshape(dm, dn)))) for v in null]


def hom_dim(m: RightModule, n: RightModule) -> int:
    return len(hom_space(m, n))


def combination(maps: Sequence[ModuleMap], coeffs) -> Matrix:
    f = maps[0].matrix.field
    acc = f.zeros(*maps[0].matrix.shape)
    for c, h in zip(coeffs, maps):
        if c:
            acc = acc + h.matrix.a * c
    return Matrix.wrap(f, f.reduce(acc))


def maps_as_rows(maps: Sequence[ModuleMap], source_dim: int, target_dim: int, field: Field) -> Matrix:
    if not maps:
        return Matrix.zeros(field, 0, source_dim * target_dim)
    return Matrix.wrap(field, np.stack([h.matrix.a.reshape(-1) for h in maps]))
