"""Finite-dimensional associative algebras given by structure constants."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

import numpy as np

from ..linalg import Field, Matrix, Subspace, solve


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Diagnostic:
    """First failing algebra law, with the basis triple (or pair) involved."""

    law: str
    indices: tuple[int, ...]

    def __str__(self):
        return f"{self.law} fails at basis indices {self.indices}"


@dataclass(frozen=True, eq=False)
class Algebra:
    """Unital associative algebra with basis e_0..e_{d-1}.

    ``right_mult[j]`` is the d x d matrix of ``x -> x * e_j``, so
    ``right_mult[j][i][k]`` is the structure constant c[i][j][k] in
    ``e_i e_j = sum_k c[i][j][k] e_k``.
    """

    field: Field
    right_mult: tuple[Matrix, ...]
    unit: Matrix  # 1 x d
    names: tuple[str, ...] | None = None
    seed: int = dc_field(default=0, compare=False)

    @property
    def dim(self) -> int:
        return len(self.right_mult)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.field == other.field and self.unit == other.unit and self.right_mult == other.right_mult

    def __hash__(self):
        return hash((self.field, self.unit, self.right_mult))

    def __repr__(self):
        return f"Algebra(dim={self.dim}, field={self.field})"

    # construction --------------------------------------------------------

    @classmethod
    def from_structure_constants(cls, field: Field, constants, unit, names=None, seed: int = 0) -> "Algebra":
        """``constants[i][j][k]`` is the coefficient of e_k in e_i e_j."""
        c = field.array(constants)
        d = c.shape[0]
        if c.shape != (d, d, d):
            raise AlgebraError(f"structure constants must have shape (d, d, d), got {c.shape}")
        if d < 1:
            raise AlgebraError("an algebra needs dimension at least 1")
        mats = tuple(Matrix.wrap(field, np.ascontiguousarray(c[:, j, :])) for j in range(d))
        u = Matrix(field, [list(unit)])
        if u.cols != d:
            raise AlgebraError("unit has the wrong length")
        return cls(field, mats, u, tuple(names) if names else None, seed)

    @classmethod
    def from_sparse(cls, field: Field, dim: int, entries, unit, names=None, seed: int = 0) -> "Algebra":
        """From (i, j, k, value) quadruples; unspecified constants are zero."""
        c = np.zeros((dim, dim, dim), dtype=object)
        c.fill(0)
        for i, j, k, v in entries:
            for idx in (i, j, k):
                if not 0 <= idx < dim:
                    raise AlgebraError(f"structure constant index {idx} out of range for dim {dim}")
            c[i, j, k] = c[i, j, k] + field(v)
        return cls.from_structure_constants(field, c, unit, names, seed)

    @classmethod
    def from_matrices(cls, field: Field, basis: Sequence[Matrix], seed: int = 0) -> "Algebra":
        """Algebra spanned by square matrices closed under multiplication.

        The identity must lie in the span.  Products are expressed back in
        the basis by solving a linear system.
        """
        n = basis[0].rows if basis else 0
        d = len(basis)
        flat = Matrix(field, np.stack([b.a.reshape(-1) for b in basis]) if d else field.zeros(0, n * n))
        prods = []
        for bi in basis:
            prods.append([bi @ bj for bj in basis])
        rows = Matrix(field, np.stack([prods[i][j].a.reshape(-1) for i in range(d) for j in range(d)]))
        coeff = solve(flat, rows)
        if coeff is None:
            raise AlgebraError("matrices are not closed under multiplication")
        c = coeff.a.reshape(d, d, d)
        unit = solve(flat, Matrix(field, Matrix.identity(field, n).a.reshape(1, -1)))
        if unit is None:
            raise AlgebraError("identity is not in the span")
        return cls.from_structure_constants(field, c, unit.a[0], seed=seed)

    # elements ------------------------------------------------------------

    def basis_vector(self, i: int) -> Matrix:
        v = self.field.zeros(1, self.dim)
        v[0, i] = self.field.one
        return Matrix.wrap(self.field, v)

    def element(self, coords) -> Matrix:
        return Matrix(self.field, [list(coords)])

    def right_matrix(self, a: Matrix) -> Matrix:
        """Matrix of x -> x * a for an element a (row vector)."""
        return combine(self.field, a, self.right_mult, self.dim)

    def mul(self, a: Matrix, b: Matrix) -> Matrix:
        return a @ self.right_matrix(b)

    @cached_property
    def left_mult(self) -> tuple[Matrix, ...]:
        """``left_mult[i]`` is the matrix of x -> e_i * x."""
        d = self.dim
        out = []
        for i in range(d):
            ei = self.basis_vector(i)
            out.append(Matrix.wrap(self.field, np.ascontiguousarray(np.concatenate([(ei @ self.right_mult[j]).a for j in range(d)], axis=0))))
        return tuple(out)

    def left_matrix(self, a: Matrix) -> Matrix:
        return combine(self.field, a, self.left_mult, self.dim)

    def constants(self) -> np.ndarray:
        return np.stack([m.a for m in self.right_mult], axis=1)

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Basis indices that generate the algebra; chosen greedily."""
        gens: list[int] = []
        sub = Subspace.span(self.field, self.dim, self.unit)
        for j in range(self.dim):
            if sub.contains(self.basis_vector(j)):
                continue
            gens.append(j)
            sub = spin_subspace(self.field, sub.basis, [self.right_mult[g] for g in gens])
            if sub.dim == self.dim:
                break
        return tuple(gens)

    @cached_property
    def is_commutative(self) -> bool:
        return all(self.left_mult[i] == self.right_mult[i] for i in range(self.dim))

    @cached_property
    def op(self) -> "Algebra":
        o = opposite(self)
        o.__dict__["op"] = self
        return o


def combine(field: Field, coords: Matrix, mats: Sequence[Matrix], n: int) -> Matrix:
    """sum_k coords[k] * mats[k], where every matrix is n x n."""
    acc = field.zeros(n, n)
    c = coords.a[0]
    for k in np.flatnonzero(c):
        acc = acc + mats[k].a * c[k]
    return Matrix.wrap(field, field.reduce(acc))


def spin_subspace(field: Field, start: Matrix, mats: Sequence[Matrix]) -> Subspace:
    """Smallest subspace containing the rows of ``start`` and stable under ``mats``."""
    n = start.cols
    sub = Subspace.span(field, n, start)
    frontier = sub.basis
    while frontier.rows:
        new = np.concatenate([field.matmul(frontier.a, m.a) for m in mats], axis=0) if mats else field.zeros(0, n)
        res = sub.reduce(Matrix.wrap(field, new))
        if res.is_zero():
            break
        grown = sub.sum(Subspace.span(field, n, res))
        frontier = Subspace.span(field, n, res).basis
        sub = grown
    return sub


def validate(a: Algebra) -> Diagnostic | None:
    """None when ``a`` is associative and unital, else the first failure."""
    d = a.dim
    for m in a.right_mult:
        if m.shape != (d, d):
            return Diagnostic("shape", ())
    # (e_i e_j) e_k == e_i (e_j e_k)
    for i in range(d):
        ei = a.basis_vector(i)
        for j in range(d):
            eij = ei @ a.right_mult[j]
            for k in range(d):
                lhs = eij @ a.right_mult[k]
                rhs = ei @ a.right_matrix(a.basis_vector(j) @ a.right_mult[k])
                if lhs != rhs:
                    return Diagnostic("associativity", (i, j, k))
    for i in range(d):
        ei = a.basis_vector(i)
        if a.unit @ a.right_mult[i] != ei:
            return Diagnostic("left unit", (i,))
        if ei @ a.right_matrix(a.unit) != ei:
            return Diagnostic("right unit", (i,))
    return None


def opposite(a: Algebra) -> Algebra:
    """c_op[i][j][k] = c[j][i][k]."""
    c = a.constants()
    return Algebra.from_structure_constants(a.field, np.transpose(c, (1, 0, 2)), a.unit.a[0], a.names, a.seed)


def subalgebra_coords(a: Algebra, space: Subspace, unit: Matrix, seed: int | None = None) -> Algebra:
    """Algebra structure on a multiplicatively closed subspace with its own unit.

    Coordinates are taken with respect to the canonical basis of ``space``.
    Used for corner algebras eAe and blocks A*eps.
    """
    f = a.field
    b = space.basis
    d = b.rows
    rmats = [a.right_matrix(b.row(j)) for j in range(d)]
    consts = np.empty((d, d, d), dtype=f.dtype)
    for j in range(d):
        prod = b @ rmats[j]
        coords = space.coordinates(prod)
        if not space.contains(prod):
            raise AlgebraError("subspace is not closed under multiplication")
        consts[:, j, :] = coords.a
    u = space.coordinates(unit)
    return Algebra.from_structure_constants(f, consts, u.a[0], seed=a.seed if seed is None else seed)


def quotient_algebra(a: Algebra, ideal: Subspace) -> tuple[Algebra, Matrix, list[int]]:
    """A / I with coordinates at the non-pivot columns of ``ideal``.

    Returns the algebra, the projection matrix (d x q) and the list of
    complement columns used to lift quotient elements back into ``a``.
    """
    f = a.field
    free = ideal.complement_columns()
    q = len(free)
    eye = Matrix.identity(f, a.dim)
    proj = ideal.reduce(eye).a[:, free]
    proj = Matrix.wrap(f, np.ascontiguousarray(proj))
    consts = np.empty((q, q, q), dtype=f.dtype)
    lifts = eye.a[free]
    for jj, j in enumerate(free):
        prod = f.matmul(lifts, a.right_mult[j].a)
        consts[:, jj, :] = f.matmul(prod, proj.a)
    unit = f.matmul(a.unit.a, proj.a)[0]
    if q == 0:
        raise AlgebraError("quotient by the whole algebra")
    return Algebra.from_structure_constants(f, consts, unit, seed=a.seed), proj, free


def direct_product(algebras: Sequence[Algebra]) -> Algebra:
    """A_1 x ... x A_t with block basis."""
    f = algebras[0].field
    d = sum(x.dim for x in algebras)
    c = np.empty((d, d, d), dtype=object)
    c.fill(0)
    unit = []
    off = 0
    for x in algebras:
        cx = x.constants()
        c[off : off + x.dim, off : off + x.dim, off : off + x.dim] = cx
        unit.extend(x.unit.a[0].tolist())
        off += x.dim
    return Algebra.from_structure_constants(f, c, unit, seed=algebras[0].seed)
