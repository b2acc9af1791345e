"""Meataxe: proper submodules, Norton's irreducibility test, composition factors."""
from __future__ import annotations

import random
from fractions import Fraction

import sympy
from sympy.polys.matrices import DomainMatrix

from ..linalg import Field, Matrix, Subspace, kernel
from .algebra import spin_subspace
from .modules import RightModule, Submodule, quotient

MAX_ATTEMPTS = 500


def _sympy_domain(field: Field):
    return sympy.GF(field.p) if field.p else sympy.QQ


def charpoly(m: Matrix) -> list:
    """Coefficients of det(xI - m), leading coefficient first."""
    f = m.field
    dom = _sympy_domain(f)
    if f.p:
        rows = [[dom(int(x)) for x in r] for r in m.a]
    else:
        rows = [[dom(x.numerator, x.denominator) for x in r] for r in m.a]
    cp = DomainMatrix(rows, m.shape, dom).charpoly()
    return [_from_domain(f, c) for c in cp]


def _from_domain(f: Field, c):
    if f.p:
        return int(c) % f.p
    return Fraction(int(c.numerator), int(c.denominator))


def irreducible_factors(coeffs: list, field: Field) -> list[list]:
    """Distinct monic irreducible factors, by increasing degree."""
    x = sympy.Symbol("x")
    if field.p:
        poly = sympy.Poly([int(c) for c in coeffs], x, modulus=field.p)
    else:
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], x, domain=sympy.QQ)
    _, facs = poly.factor_list()
    out = []
    for fac, _mult in facs:
        fac = fac.monic()
        cs = [_poly_coeff(field, c) for c in fac.all_coeffs()]
        out.append(cs)
    out.sort(key=lambda c: (len(c), [int(v) if field.p else v for v in c]))
    return out


def _poly_coeff(field: Field, c):
    if field.p:
        return int(c) % field.p
    c = sympy.Rational(c)
    return Fraction(int(c.p), int(c.q))


def poly_eval(coeffs: list, m: Matrix) -> Matrix:
    """Horner evaluation of a polynomial (leading coefficient first) at m."""
    f = m.field
    n = m.rows
    acc = Matrix.zeros(f, n, n)
    eye = Matrix.identity(f, n)
    for c in coeffs:
        acc = acc @ m + eye.scale(c)
    return acc


def random_element(algebra, rng: random.Random) -> Matrix:
    f = algebra.field
    return Matrix(f, [[f.random_element(rng) for _ in range(algebra.dim)]])


def find_proper_submodule(m: RightModule, rng: random.Random | None = None) -> Submodule | None:
    """A proper nonzero submodule of m, or None when m is irreducible.

    Irreducibility is certified by Norton's criterion.
    """
    if m.dim == 0:
        raise ValueError("the zero module is not irreducible")
    if m.dim == 1:
        return None
    rng = rng or random.Random(m.algebra.seed)
    f = m.field
    gens = m.generator_action
    gens_t = tuple(g.T for g in gens)
    for _ in range(MAX_ATTEMPTS):
        x = m.act(random_element(m.algebra, rng))
        for fac in irreducible_factors(charpoly(x), f):
            fx = poly_eval(fac, x)
            null = kernel(fx)
            v = null.basis.row(0)
            w_sub = spin_subspace(f, v, gens)
            if w_sub.dim < m.dim:
                return Submodule(m, w_sub)
            null_t = kernel(fx.T)
            wt = spin_subspace(f, null_t.basis.row(0), gens_t)
            if wt.dim < m.dim:
                return Submodule(m, kernel(wt.basis.T))
            if null.dim == len(fac) - 1:
                return None
    raise RuntimeError(f"meataxe made no decision after {MAX_ATTEMPTS} random elements")


def is_irreducible(m: RightModule, rng=None) -> bool:
    return m.dim > 0 and find_proper_submodule(m, rng) is None


def composition_factors(m: RightModule, rng: random.Random | None = None) -> list[RightModule]:
    """Composition factors of m (with repetition), bottom of the series first."""
    rng = rng or random.Random(m.algebra.seed)
    if m.dim == 0:
        return []
    sub = find_proper_submodule(m, rng)
    if sub is None:
        return [m]
    q, _ = quotient(m, sub)
    return composition_factors(sub.module, rng) + composition_factors(q, rng)


def simple_submodule(m: RightModule, rng: random.Random | None = None) -> Submodule:
    """Some simple submodule of a nonzero module."""
    rng = rng or random.Random(m.algebra.seed)
    current = Submodule.whole(m)
    while True:
        sub = find_proper_submodule(current.module, rng)
        if sub is None:
            return current
        basis = sub.space.basis @ current.space.basis
        current = Submodule(m, Subspace.span(m.field, m.dim, basis))
