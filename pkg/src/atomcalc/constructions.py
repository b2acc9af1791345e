"""Standard algebras and modules used by the fixtures and tests."""
from __future__ import annotations

import numpy as np

from .core.algebra import Algebra
from .core.modules import RightModule
from .linalg import Field, Matrix

# basis order of a lower triangular 2x2 matrix algebra
TRIANGULAR_UNITS = ("e11", "e21", "e22")
_TRI_PRODUCTS = {(0, 0): 0, (1, 0): 1, (2, 1): 1, (2, 2): 2}


def truncated_polynomial(field: Field, n: int) -> Algebra:
    """k[x]/(x^n) with basis 1, x, ..., x^(n-1)."""
    entries = [(i, j, i + j, 1) for i in range(n) for j in range(n) if i + j < n]
    unit = [1] + [0] * (n - 1)
    return Algebra.from_sparse(field, n, entries, unit, names=[f"x^{i}" for i in range(n)])


def cyclic_group_algebra(field: Field, n: int) -> Algebra:
    """k[C_n] with basis g^0, ..., g^(n-1)."""
    entries = [(i, j, (i + j) % n, 1) for i in range(n) for j in range(n)]
    unit = [1] + [0] * (n - 1)
    return Algebra.from_sparse(field, n, entries, unit, names=[f"g^{i}" for i in range(n)])


def field_extension(field: Field, modulus: list[int]) -> Algebra:
    """k[x]/(f) for a monic f given by coefficients, leading first."""
    f = field
    deg = len(modulus) - 1
    mod = [f(c) for c in modulus]
    if mod[0] != f.one:
        raise ValueError("modulus must be monic")

    def reduce_power(e: int) -> list:
        # coefficients of x^e mod f, constant term first
        v = [f.zero] * deg
        if e < deg:
            v[e] = f.one
            return v
        prev = reduce_power(e - 1)
        # multiply by x
        top = prev[-1]
        shifted = [f.zero] + prev[:-1]
        # x^deg = -sum mod[deg - k] x^k
        for k in range(deg):
            shifted[k] = f(shifted[k] - top * mod[deg - k])
        return shifted

    entries = []
    for i in range(deg):
        for j in range(deg):
            for k, c in enumerate(reduce_power(i + j)):
                if c:
                    entries.append((i, j, k, c))
    unit = [1] + [0] * (deg - 1)
    return Algebra.from_sparse(f, deg, entries, unit, names=[f"x^{i}" for i in range(deg)])


def triangular(base: Algebra) -> Algebra:
    """Lower triangular 2x2 matrices over ``base``.

    Basis: e11 (x) r_k, then e21 (x) r_k, then e22 (x) r_k.
    """
    r = base.dim
    c = base.constants()
    d = 3 * r
    out = np.empty((d, d, d), dtype=object)
    out.fill(0)
    for (u, v), w in _TRI_PRODUCTS.items():
        out[u * r : (u + 1) * r, v * r : (v + 1) * r, w * r : (w + 1) * r] = c
    unit = [0] * d
    for k, x in enumerate(base.unit.a[0]):
        unit[k] = x
        unit[2 * r + k] = x
    names = None
    if r == 1:
        names = list(TRIANGULAR_UNITS)
    elif base.names:
        names = [f"{e}*{n}" for e in TRIANGULAR_UNITS for n in base.names]
    return Algebra.from_structure_constants(base.field, out, unit, names=names, seed=base.seed)


def triangular_central_map(base: Algebra) -> Matrix:
    """r -> (e11 + e22) (x) r, as a (dim R) x (3 dim R) matrix."""
    f = base.field
    r = base.dim
    m = f.zeros(r, 3 * r)
    for k in range(r):
        m[k, k] = f.one
        m[k, 2 * r + k] = f.one
    return Matrix.wrap(f, m)


def row_module(lam: Algebra, v: RightModule, second: bool = False) -> RightModule:
    """[V 0] over the triangular algebra on the base of ``v``.

    With ``second`` the module is [V V]-style row module built from V: the
    pair (x, y) with (x, y) * [[a, 0], [b, c]] = (xa + yb, yc).
    """
    base = v.algebra
    f = base.field
    r = base.dim
    n = v.dim
    acts = []
    for block in range(3):
        for k in range(r):
            rv = v.action[k]
            if not second:
                acts.append(rv if block == 0 else Matrix.zeros(f, n, n))
                continue
            m = f.zeros(2 * n, 2 * n)
            if block == 0:
                m[:n, :n] = rv.a
            elif block == 1:
                m[n:, :n] = rv.a
            else:
                m[n:, n:] = rv.a
            acts.append(Matrix.wrap(f, m))
    return RightModule(lam, tuple(acts))


def triangular_modules(lam: Algebra) -> dict[str, RightModule]:
    """S1 = [K 0], S2 = [K K]/[K 0] and H = [K K] over the triangular algebra of a field."""
    one, zero = [[1]], [[0]]
    s1 = RightModule.from_lists(lam, [one, zero, zero], "S1")
    s2 = RightModule.from_lists(lam, [zero, zero, one], "S2")
    h = RightModule.from_lists(
        lam,
        [[[1, 0], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]]],
        "H",
    )
    return {"S1": s1, "S2": s2, "H": h}


def quotient_by_power(r: Algebra, k: int) -> RightModule:
    """R/(x^k) over R = k[x]/(x^n), basis 1, x, ..., x^(k-1)."""
    f = r.field
    n = r.dim
    acts = []
    for j in range(n):
        m = f.zeros(k, k)
        for i in range(k):
            if i + j < k:
                m[i, i + j] = f.one
        acts.append(Matrix.wrap(f, m))
    return RightModule(r, tuple(acts), f"R/(x^{k})")


def power_ideal(r: Algebra, k: int) -> RightModule:
    """(x^k) inside R = k[x]/(x^n), basis x^k, ..., x^(n-1)."""
    f = r.field
    n = r.dim
    size = n - k
    acts = []
    for j in range(n):
        m = f.zeros(size, size)
        for i in range(size):
            if i + j < size:
                m[i, i + j] = f.one
        acts.append(Matrix.wrap(f, m))
    return RightModule(r, tuple(acts), f"(x^{k})")
