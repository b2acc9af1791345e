"""Exact matrix arithmetic over prime fields and the rationals.

Matrices are thin immutable wrappers around numpy arrays.  Over F_p the
entries are ``int64`` residues in ``[0, p)`` (``object`` dtype for primes
too large for safe int64 accumulation); over Q they are
:class:`fractions.Fraction` objects in an ``object`` array.

Vectors are rows.  A matrix ``m`` acts by ``x -> x @ m``, so the kernel of
``m`` is its *left* null space.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

# products of two residues summed over up to 2**23 terms stay below 2**63
_INT64_PRIME_LIMIT = 1 << 20


class ShapeError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Field:
    """F_p when ``p`` is set, the rationals when ``p is None``."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not _is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")
            if self.p >= 1 << 62:
                raise ValueError("prime does not fit in a machine word")

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @classmethod
    def rationals(cls) -> "Field":
        return cls(None)

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def characteristic(self) -> int:
        return self.p or 0

    @property
    def dtype(self):
        if self.p is not None and self.p < _INT64_PRIME_LIMIT:
            return np.int64
        return object

    def __str__(self):
        return f"F_{self.p}" if self.p else "Q"

    # scalars
    def __call__(self, x):
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in {self}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    def elements(self) -> range:
        if self.p is None:
            raise ValueError("Q has no finite element list")
        return range(self.p)

    def random_element(self, rng, spread: int = 5):
        if self.p is None:
            return Fraction(rng.randint(-spread, spread))
        return rng.randrange(self.p)

    # arrays
    def reduce(self, arr: np.ndarray) -> np.ndarray:
        if self.p is None:
            return arr
        return arr % self.p

    def array(self, data, shape: tuple[int, int] | None = None) -> np.ndarray:
        if isinstance(data, np.ndarray) and data.dtype == self.dtype and self.p is not None:
            a = data % self.p
        elif self.p is None:
            src = np.asarray(data, dtype=object)
            a = np.empty(src.shape, dtype=object)
            flat_src = src.reshape(-1)
            flat = a.reshape(-1)
            for i in range(flat_src.size):
                flat[i] = Fraction(flat_src[i])
        else:
            src = np.asarray(data, dtype=object)
            a = np.empty(src.shape, dtype=self.dtype)
            flat_src = src.reshape(-1)
            flat = a.reshape(-1)
            for i in range(flat_src.size):
                flat[i] = self(flat_src[i])
        if shape is not None:
            a = a.reshape(shape)
        return a

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.p is None:
            a = np.empty((rows, cols), dtype=object)
            a.fill(Fraction(0))
            return a
        return np.zeros((rows, cols), dtype=self.dtype)

    def eye(self, n: int) -> np.ndarray:
        a = self.zeros(n, n)
        for i in range(n):
            a[i, i] = self.one
        return a

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
        if a.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        return self.reduce(a @ b)


# -- row reduction ----------------------------------------------------------


def rref(field: Field, a: np.ndarray, pivot_limit: int | None = None):
    """Reduced row-echelon form of ``a``.

    Pivots are taken at the first nonzero entry of each column, scanning
    columns left to right and only among the first ``pivot_limit`` columns.
    Returns ``(reduced, pivots)`` where ``reduced`` keeps all rows (zero rows
    at the bottom) and ``pivots`` lists pivot columns.
    """
    a = np.array(a, dtype=a.dtype, copy=True)
    rows, cols = a.shape
    limit = cols if pivot_limit is None else pivot_limit
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        piv = a[r, c]
        if piv != 1:
            a[r] = field.reduce(a[r] * field.inv(piv))
        col = a[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            a[others] = field.reduce(a[others] - np.multiply.outer(col[others], a[r]))
        pivots.append(c)
        r += 1
    return a, pivots


def _right_null_basis(field: Field, a: np.ndarray) -> np.ndarray:
    """Rows spanning {x : a @ x = 0}, one per free column."""
    rows, cols = a.shape
    red, pivots = rref(field, a)
    free = [c for c in range(cols) if c not in set(pivots)]
    out = field.zeros(len(free), cols)
    for j, f in enumerate(free):
        out[j, f] = field.one
        for i, pc in enumerate(pivots):
            if red[i, f] != 0:
                out[j, pc] = field.reduce(-red[i, f])
    return out


# -- matrices ---------------------------------------------------------------


class Matrix:
    """Immutable exact matrix."""

    __slots__ = ("field", "a", "_hash")

    def __init__(self, field: Field, data, shape: tuple[int, int] | None = None, *, _trusted=False):
        self.field = field
        if _trusted:
            a = data
        else:
            a = field.array(data, shape)
            if a.ndim != 2:
                raise ShapeError("matrix data must be two-dimensional")
        a.flags.writeable = False
        self.a = a
        self._hash = None

    @classmethod
    def wrap(cls, field: Field, a: np.ndarray) -> "Matrix":
        # caller guarantees canonical entries
        return cls(field, a, _trusted=True)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls.wrap(field, field.zeros(rows, cols))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls.wrap(field, field.eye(n))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def __repr__(self):
        return f"Matrix({self.field}, {self.tolist()})"

    def tolist(self) -> list[list]:
        if self.field.p is None:
            return [[Fraction(x) for x in row] for row in self.a]
        return [[int(x) for x in row] for row in self.a]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.all(self.a == other.a))
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.shape, tuple(self.a.reshape(-1).tolist())))
        return self._hash

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError(f"{self.shape} + {other.shape}")
        return Matrix.wrap(self.field, self.field.reduce(self.a + other.a))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError(f"{self.shape} - {other.shape}")
        return Matrix.wrap(self.field, self.field.reduce(self.a - other.a))

    def __neg__(self) -> "Matrix":
        return Matrix.wrap(self.field, self.field.reduce(-self.a))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix.wrap(self.field, self.field.matmul(self.a, other.a))

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix.wrap(self.field, self.field.reduce(self.a * c))

    @property
    def T(self) -> "Matrix":
        return Matrix.wrap(self.field, np.ascontiguousarray(self.a.T))

    def is_zero(self) -> bool:
        return not np.any(self.a)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.field, self.rows)

    def row(self, i: int) -> "Matrix":
        return Matrix.wrap(self.field, self.a[i : i + 1].copy())

    def __getitem__(self, idx):
        return self.a[idx]

    def rank(self) -> int:
        return len(rref(self.field, self.a)[1])

    def inverse(self) -> "Matrix | None":
        if self.rows != self.cols:
            raise ShapeError("inverse of a non-square matrix")
        n = self.rows
        aug = np.concatenate([self.a, self.field.eye(n)], axis=1)
        red, piv = rref(self.field, aug, pivot_limit=n)
        if len(piv) < n:
            return None
        return Matrix.wrap(self.field, np.ascontiguousarray(red[:, n:]))

    def det(self):
        """Determinant by elimination."""
        if self.rows != self.cols:
            raise ShapeError("determinant of a non-square matrix")
        f = self.field
        a = np.array(self.a, copy=True)
        n = self.rows
        d = f.one
        for c in range(n):
            nz = np.flatnonzero(a[c:, c])
            if nz.size == 0:
                return f.zero
            k = c + int(nz[0])
            if k != c:
                a[[c, k]] = a[[k, c]]
                d = f(-d)
            piv = a[c, c]
            d = f(d * piv) if f.p else d * piv
            inv = f.inv(piv)
            below = a[c + 1 :, c].copy()
            idx = np.flatnonzero(below)
            if idx.size:
                rows = c + 1 + idx
                a[rows] = f.reduce(a[rows] - np.multiply.outer(f.reduce(below[idx] * inv), a[c]))
        return d


def vstack(field: Field, mats: Sequence[Matrix], cols: int) -> Matrix:
    if not mats:
        return Matrix.zeros(field, 0, cols)
    return Matrix.wrap(field, np.concatenate([m.a for m in mats], axis=0))


def hstack(field: Field, mats: Sequence[Matrix], rows: int) -> Matrix:
    if not mats:
        return Matrix.zeros(field, rows, 0)
    return Matrix.wrap(field, np.concatenate([m.a for m in mats], axis=1))


def block_diag(field: Field, mats: Sequence[Matrix]) -> Matrix:
    r = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    out = field.zeros(r, c)
    i = j = 0
    for m in mats:
        out[i : i + m.rows, j : j + m.cols] = m.a
        i += m.rows
        j += m.cols
    return Matrix.wrap(field, out)


# -- subspaces --------------------------------------------------------------


class Subspace:
    """Row space in canonical reduced row-echelon form.

    Two subspaces are equal exactly when their bases are identical.
    """

    __slots__ = ("field", "ambient_dim", "basis", "pivots", "_hash")

    def __init__(self, field: Field, ambient_dim: int, basis: Matrix, pivots: Sequence[int]):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = tuple(pivots)
        self._hash = None

    @classmethod
    def span(cls, field: Field, ambient_dim: int, vectors) -> "Subspace":
        if isinstance(vectors, Matrix):
            a = vectors.a
        else:
            vectors = list(vectors)
            if not vectors:
                a = field.zeros(0, ambient_dim)
            else:
                a = field.array(vectors).reshape(len(vectors), ambient_dim)
        if a.shape[1] != ambient_dim:
            raise ShapeError(f"vectors of length {a.shape[1]} in ambient dimension {ambient_dim}")
        red, piv = rref(field, a)
        return cls(field, ambient_dim, Matrix.wrap(field, np.ascontiguousarray(red[: len(piv)])), piv)

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, Matrix.zeros(field, 0, ambient_dim), ())

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, Matrix.identity(field, ambient_dim), range(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis={self.basis.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient_dim, self.basis))
        return self._hash

    def _same_ambient(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim or self.field != other.field:
            raise ShapeError(
                f"ambient mismatch: {self.ambient_dim} over {self.field} vs "
                f"{other.ambient_dim} over {other.field}"
            )

    def coordinates(self, vectors: Matrix) -> Matrix:
        """Coordinates of vectors assumed to lie in the subspace."""
        return Matrix.wrap(self.field, np.ascontiguousarray(vectors.a[:, list(self.pivots)]))

    def reduce(self, vectors: Matrix) -> Matrix:
        """Residues of ``vectors`` modulo the subspace (zero at pivots)."""
        if self.dim == 0:
            return vectors
        coeff = vectors.a[:, list(self.pivots)]
        return Matrix.wrap(self.field, self.field.reduce(vectors.a - self.field.matmul(coeff, self.basis.a)))

    def contains(self, vectors) -> bool:
        if not isinstance(vectors, Matrix):
            vectors = Matrix(self.field, [list(vectors)])
        return self.reduce(vectors).is_zero()

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubset(self, other: "Subspace") -> bool:
        self._same_ambient(other)
        return self.dim <= other.dim and other.contains(self.basis)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubset(other)

    def sum(self, other: "Subspace") -> "Subspace":
        self._same_ambient(other)
        return Subspace.span(self.field, self.ambient_dim, vstack(self.field, [self.basis, other.basis], self.ambient_dim))

    def __add__(self, other: "Subspace") -> "Subspace":
        return self.sum(other)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._same_ambient(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        # (a, b) with a U = b V
        stacked = vstack(self.field, [self.basis, -other.basis], self.ambient_dim)
        _, ker = rank_kernel(stacked)
        coeff = Matrix.wrap(self.field, np.ascontiguousarray(ker.basis.a[:, : self.dim]))
        return Subspace.span(self.field, self.ambient_dim, coeff @ self.basis)

    def __and__(self, other: "Subspace") -> "Subspace":
        return self.intersect(other)

    def complement_columns(self) -> list[int]:
        """Non-pivot coordinates; their unit vectors span a complement."""
        piv = set(self.pivots)
        return [c for c in range(self.ambient_dim) if c not in piv]

    def vectors(self) -> Iterator[Matrix]:
        """Every vector of a subspace over a finite field."""
        p = self.field.p
        if p is None:
            raise ValueError("cannot enumerate a subspace over Q")
        for coeffs in _tuples(p, self.dim):
            c = Matrix.wrap(self.field, np.array([coeffs], dtype=self.field.dtype).reshape(1, self.dim))
            yield c @ self.basis


def _tuples(p: int, n: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for head in range(p):
        for tail in _tuples(p, n - 1):
            yield (head,) + tail


# -- kernel and solving -----------------------------------------------------


def rank_kernel(m: Matrix) -> tuple[int, Subspace]:
    """Rank of ``m`` and the kernel of ``x -> x @ m``."""
    f = m.field
    ker_rows = _right_null_basis(f, np.ascontiguousarray(m.a.T))
    ker = Subspace.span(f, m.rows, Matrix.wrap(f, ker_rows))
    return m.rows - ker.dim, ker


def kernel(m: Matrix) -> Subspace:
    return rank_kernel(m)[1]


def image(m: Matrix) -> Subspace:
    """Row space of ``m``, the image of ``x -> x @ m``."""
    return Subspace.span(m.field, m.cols, m)


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """Canonical ``x`` with ``x @ a == b``, or None.

    Free coordinates of the solution are set to zero.
    """
    if a.field != b.field:
        raise ValueError("field mismatch")
    if a.cols != b.cols:
        raise ShapeError(f"x @ a = b needs a.cols == b.cols, got {a.shape} and {b.shape}")
    f = a.field
    k = a.rows
    if b.rows == 0:
        return Matrix.zeros(f, 0, k)
    aug = np.concatenate([a.a.T, b.a.T], axis=1)
    red, piv = rref(f, aug, pivot_limit=k)
    if np.any(red[len(piv) :, k:]):
        return None
    x = f.zeros(k, b.rows)
    for i, pc in enumerate(piv):
        x[pc] = red[i, k:]
    return Matrix.wrap(f, np.ascontiguousarray(x.T))


def intersect(u: Subspace, v: Subspace) -> Subspace:
    return u.intersect(v)


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    return u.sum(v)


def all_vectors(field: Field, n: int) -> Iterable[tuple[int, ...]]:
    if field.p is None:
        raise ValueError("cannot enumerate vectors over Q")
    return _tuples(field.p, n)
