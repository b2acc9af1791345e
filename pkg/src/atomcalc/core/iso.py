"""Deciding isomorphism of modules.

The search looks for an invertible element of Hom(m, n):

1. ``trials`` random combinations of the hom basis;
2. over F_p with p**h <= ``exhaustive_limit``, every combination, tested in
   vectorised batches;
3. otherwise the determinant of the generic combination, expanded as a
   polynomial in the h basis coefficients.  By the Noether-Deuring theorem
   the modules are isomorphic iff that polynomial (as a function on F_p^h,
   or as a polynomial over Q) is nonzero, and a point where it does not
   vanish is then located one variable at a time.
"""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from ..linalg import Matrix
from .modules import ModuleMap, RightModule, combination, hom_space

EXHAUSTIVE_LIMIT = 10**6
RANDOM_TRIALS = 64
_BATCH = 4096


@lru_cache(maxsize=None)
def _inverse_table(p: int) -> np.ndarray:
    t = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        t[x] = pow(x, -1, p)
    return t


def batched_invertible(stack: np.ndarray, p: int) -> np.ndarray:
    """Boolean mask of the invertible matrices in a (B, n, n) stack over F_p."""
    a = stack % p
    b, n, _ = a.shape
    alive = np.ones(b, dtype=bool)
    inv = _inverse_table(p)
    idx = np.arange(b)
    for c in range(n):
        nz = a[:, c:, c] != 0
        alive &= nz.any(axis=1)
        piv = c + nz.argmax(axis=1)
        top = a[idx, c].copy()
        a[idx, c] = a[idx, piv]
        a[idx, piv] = top
        a[:, c, :] = a[:, c, :] * inv[a[:, c, c]][:, None] % p
        if c + 1 < n:
            fac = a[:, c + 1 :, c]
            a[:, c + 1 :, :] = (a[:, c + 1 :, :] - fac[:, :, None] * a[:, c, None, :]) % p
    return alive


def _exhaustive(basis: list[ModuleMap], p: int, n: int) -> Matrix | None:
    h = len(basis)
    f = basis[0].matrix.field
    stack = np.stack([b.matrix.a.reshape(-1) for b in basis]).astype(np.int64)
    total = p**h
    powers = p ** np.arange(h, dtype=np.int64)
    for start in range(1, total, _BATCH):
        ks = np.arange(start, min(start + _BATCH, total), dtype=np.int64)
        coeffs = (ks[:, None] // powers[None, :]) % p
        mats = (coeffs @ stack % p).reshape(-1, n, n)
        ok = np.flatnonzero(batched_invertible(mats, p))
        if ok.size:
            return Matrix.wrap(f, np.ascontiguousarray(mats[ok[0]]))
    return None


def _generic_det_function(basis: list[ModuleMap]):
    """det(sum c_k H_k) as {exponents: coefficient}.

    Over F_p exponents are reduced modulo c^p = c, so distinct keys are
    distinct functions on F_p^h.
    """
    f = basis[0].matrix.field
    h = len(basis)
    n = basis[0].matrix.rows
    syms = sympy.symbols(f"c0:{h}")
    entries = [[0] * n for _ in range(n)]
    for s, b in zip(syms, basis):
        for i in range(n):
            for j in range(n):
                v = b.matrix.a[i, j]
                if v:
                    entries[i][j] += s * (sympy.Rational(v.numerator, v.denominator) if f.p is None else int(v))
    det = sympy.Matrix(entries).det(method="berkowitz")
    poly = sympy.Poly(sympy.expand(det), *syms)
    out: dict[tuple[int, ...], object] = {}
    p = f.p
    for mon, coeff in poly.terms():
        if p is None:
            c = Fraction(int(coeff.p), int(coeff.q))
            key = mon
        else:
            c = int(coeff) % p
            key = tuple(((e - 1) % (p - 1)) + 1 if e >= p else e for e in mon)
        if c:
            new = out.get(key, 0) + c
            out[key] = new % p if p else new
            if not out[key]:
                del out[key]
    return out


def _substitute(func: dict, var: int, value, p: int | None) -> dict:
    out: dict = {}
    for mon, c in func.items():
        term = c * value ** mon[var]
        key = mon[:var] + (0,) + mon[var + 1 :]
        new = out.get(key, 0) + term
        if p:
            new %= p
        if new:
            out[key] = new
        else:
            out.pop(key, None)
    return out


def _locate_point(func: dict, h: int, p: int | None) -> list:
    point = []
    for var in range(h):
        candidates = range(p) if p else range(0, 10**6)
        for t in candidates:
            sub = _substitute(func, var, t, p)
            if sub:
                func = sub
                point.append(t)
                break
        else:  # pragma: no cover - excluded by the nonvanishing check
            raise ArithmeticError("no nonvanishing point found")
    return point


def find_isomorphism(
    m: RightModule,
    n: RightModule,
    *,
    rng: random.Random | None = None,
    trials: int = RANDOM_TRIALS,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> ModuleMap | None:
    """An invertible homomorphism m -> n, or None when m and n are not isomorphic."""
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return ModuleMap(m, n, Matrix.zeros(m.field, 0, 0))
    basis = hom_space(m, n)
    if not basis:
        return None
    if len(hom_space(n, m)) != len(basis):
        return None
    f = m.field
    rng = rng or random.Random(m.algebra.seed)
    h = len(basis)
    for _ in range(trials):
        coeffs = [f.random_element(rng, spread=50) for _ in range(h)]
        mat = combination(basis, coeffs)
        if mat.det() != 0:
            return ModuleMap(m, n, mat)
    if f.p is not None and f.p**h <= exhaustive_limit:
        mat = _exhaustive(basis, f.p, m.dim)
        return None if mat is None else ModuleMap(m, n, mat)
    func = _generic_det_function(basis)
    if not func:
        return None
    point = _locate_point(func, h, f.p)
    mat = combination(basis, [f(t) for t in point])
    assert mat.det() != 0
    return ModuleMap(m, n, mat)


def is_isomorphic(m: RightModule, n: RightModule, **kw) -> bool:
    return find_isomorphism(m, n, **kw) is not None


def find_monomorphism(m: RightModule, n: RightModule, *, rng=None, trials: int = RANDOM_TRIALS,
                      exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> ModuleMap | None:
    """An injective homomorphism m -> n found by search.

    Random combinations first, then all combinations when p**h is within
    ``exhaustive_limit``.  Returns None when the search space is exhausted
    (a proof of nonexistence) and raises when it is too large to exhaust.
    """
    if m.dim == 0:
        return ModuleMap(m, n, Matrix.zeros(m.field, 0, n.dim))
    basis = hom_space(m, n)
    if not basis or n.dim < m.dim:
        return None
    f = m.field
    rng = rng or random.Random(m.algebra.seed)
    for _ in range(trials):
        mat = combination(basis, [f.random_element(rng, spread=50) for _ in basis])
        if mat.rank() == m.dim:
            return ModuleMap(m, n, mat)
    if f.p is None or f.p ** len(basis) > exhaustive_limit:
        raise RuntimeError("monomorphism search space exceeds the exhaustive limit")
    from ..linalg import all_vectors

    for coeffs in all_vectors(f, len(basis)):
        if any(coeffs):
            mat = combination(basis, coeffs)
            if mat.rank() == m.dim:
                return ModuleMap(m, n, mat)
    return None
