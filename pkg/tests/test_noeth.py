from itertools import product

import pytest

from atomcalc.constructions import (
    power_ideal,
    quotient_by_power,
    row_module,
    triangular,
    triangular_central_map,
    truncated_polynomial,
)
from atomcalc.core.algebra import direct_product
from atomcalc.core.iso import is_isomorphic
from atomcalc.core.modules import RightModule, direct_sum
from atomcalc.core.structure import simple_modules
from atomcalc.homology import indecomposable_injective
from atomcalc.linalg import Matrix, Subspace
from atomcalc.noeth import (
    ArtinianBaseRing,
    NoethAlgebra,
    NoethError,
    as_noeth,
    bass_via_localization,
    first_row_prime,
    goto_nishida,
    is_prime_ideal,
    localize,
    prime_ideals,
    simple_of_prime,
    split_epi_witness,
    triangular_algebra,
    two_sided_ideals,
    verify_final_example,
    verify_prime_bijection,
    verify_spec_equals_max,
)

from conftest import F2, F3, QQ, tri

K = truncated_polynomial(F2, 1)
KX2 = truncated_polynomial(F2, 2)


def brute_is_prime(lam, p: Subspace) -> bool:
    """No a, b outside P with a Lambda b inside P."""
    f = lam.field
    elems = [lam.element(list(c)) for c in product(range(f.p), repeat=lam.dim)]
    outside = [x for x in elems if not p.contains(x)]
    for a in outside:
        for b in outside:
            if all(p.contains(lam.mul(lam.mul(a, lam.basis_vector(k)), b)) for k in range(lam.dim)):
                return False
    return True


# -- base rings and algebras ----------------------------------------------------------


def test_base_ring_must_be_local():
    with pytest.raises(NoethError, match="not local"):
        ArtinianBaseRing((direct_product([K, K]),))
    with pytest.raises(NoethError, match="not commutative"):
        ArtinianBaseRing((tri(F2),))


def test_base_ring_factors_share_a_field():
    with pytest.raises(NoethError, match="share a field"):
        ArtinianBaseRing((KX2, truncated_polynomial(F3, 2)))


def test_nonsplit_field_is_a_local_base():
    from atomcalc.constructions import field_extension

    assert ArtinianBaseRing((field_extension(F2, [1, 1, 1]),)).t == 1


def test_triangular_over_field_is_the_three_dim_algebra():
    na = triangular_algebra(ArtinianBaseRing.local(K))
    assert na.lam.dim == 3
    assert list(na.lam.names) == ["e11", "e21", "e22"]


def test_triangular_over_dual_numbers():
    na = triangular_algebra(ArtinianBaseRing.local(KX2))
    assert na.lam.dim == 6
    x = Matrix(F2, [[0, 1]]) @ na.central_map
    for k in range(6):
        b = na.lam.basis_vector(k)
        assert na.lam.mul(x, b) == na.lam.mul(b, x)


def test_central_map_must_be_central():
    lam = triangular(K)
    bad = Matrix(F2, [[1, 0, 0]])  # e11 is not central and not the unit
    with pytest.raises(NoethError):
        NoethAlgebra(lam, ArtinianBaseRing.local(K), bad)


def test_triangular_over_product_splits_into_blocks():
    base = ArtinianBaseRing((K, KX2))
    na = triangular_algebra(base)
    dims = [localize(na, i).block.dim for i in range(2)]
    assert dims == [3, 6]


# -- primes -----------------------------------------------------------------------------


def test_primes_of_triangular():
    na = triangular_algebra(ArtinianBaseRing.local(K))
    spaces = {p.space for p in prime_ideals(na)}
    assert spaces == {Subspace.span(F2, 3, [[0, 1, 0], [0, 0, 1]]),
                      Subspace.span(F2, 3, [[1, 0, 0], [0, 1, 0]])}


def test_local_ring_has_one_prime():
    na = as_noeth(ArtinianBaseRing.local(KX2))
    (p,) = prime_ideals(na)
    assert p.space == Subspace.span(F2, 2, [[0, 1]])


def test_product_base_has_one_prime_per_factor():
    base = ArtinianBaseRing((K, KX2, truncated_polynomial(F2, 3)))
    assert len(prime_ideals(as_noeth(base))) == 3


@pytest.mark.parametrize("lam", [triangular(K), KX2, triangular(KX2)], ids=["tri", "kx2", "tri_kx2"])
def test_primality_matches_brute_force(lam):
    for ideal in two_sided_ideals(lam):
        if ideal.dim == lam.dim:
            assert not is_prime_ideal(lam, ideal)
            continue
        assert is_prime_ideal(lam, ideal) == brute_is_prime(lam, ideal)


def test_primality_over_q():
    na = triangular_algebra(ArtinianBaseRing.local(truncated_polynomial(QQ, 1)))
    assert len(prime_ideals(na)) == 2
    assert not is_prime_ideal(na.lam, Subspace.span(QQ, 3, [[0, 1, 0]]))


def test_two_sided_ideals_of_triangular():
    # 0, rad, two maximal ideals, the whole algebra
    assert [x.dim for x in two_sided_ideals(triangular(K))] == [0, 1, 2, 2, 3]


# -- localization ---------------------------------------------------------------------------


def test_local_localization_is_identity():
    na = triangular_algebra(ArtinianBaseRing.local(KX2))
    loc = localize(na, 0)
    assert loc.block.dim == na.lam.dim
    assert loc.projection.is_identity()
    assert loc.is_homomorphism()


def test_two_factor_localization_kills_other_block():
    base = ArtinianBaseRing((K, KX2))
    na = as_noeth(base)
    loc0 = localize(na, 0)
    assert loc0.block.dim == 1 and loc0.is_homomorphism()
    other = na.factor_idempotents[1]
    assert loc0.element(other).is_zero()
    with pytest.raises(NoethError):
        localize(na, 2)


def test_split_epi_for_injectives():
    base = ArtinianBaseRing((K, KX2))
    na = triangular_algebra(base)
    for s in range(len(simple_modules(na.lam))):
        inj = indecomposable_injective(na.lam, s)
        for i in range(2):
            lm = split_epi_witness(na, i, inj)
            assert lm.splits()


# -- simples attached to primes ---------------------------------------------------------------


def test_simple_of_first_prime_over_field():
    na = triangular_algebra(ArtinianBaseRing.local(K))
    p1, p2 = first_row_prime(na)
    s, rep = simple_of_prime(p1)
    assert rep.failures == []
    assert s.dim == 1 and rep.residue_dim == 1
    s1 = RightModule.from_lists(na.lam, [[[1]], [[0]], [[0]]])
    assert is_isomorphic(p1.simple, s1)


def test_simple_of_prime_of_local_ring():
    na = as_noeth(ArtinianBaseRing.local(KX2))
    (p,) = prime_ideals(na)
    s, rep = simple_of_prime(p)
    assert rep.failures == [] and is_isomorphic(s, quotient_by_power(KX2, 1))


def test_simple_of_second_prime_over_dual_numbers():
    na = triangular_algebra(ArtinianBaseRing.local(KX2))
    _, p2 = first_row_prime(na)
    s, rep = simple_of_prime(p2)
    assert s.dim == 1 and rep.local_residue_dim == 1 and rep.failures == []


@pytest.mark.parametrize("factors", [(K,), (KX2,), (K, KX2), (truncated_polynomial(F3, 3),)])
def test_prime_bijection_and_maximality(factors):
    base = ArtinianBaseRing(factors)
    for na in (triangular_algebra(base), as_noeth(base)):
        assert verify_prime_bijection(na) == []
        assert verify_spec_equals_max(na) == []


# -- Bass numbers through localization -----------------------------------------------------------


def test_bass_via_localization_s1():
    na = triangular_algebra(ArtinianBaseRing.local(K))
    _, p2 = first_row_prime(na)
    s1 = RightModule.from_lists(na.lam, [[[1]], [[0]], [[0]]])
    lb = bass_via_localization(p2, s1, 1)
    assert (lb.over_lambda, lb.over_localization) == (1, 1)


def test_bass_via_localization_zero():
    na = triangular_algebra(ArtinianBaseRing.local(K))
    p1, _ = first_row_prime(na)
    lb = bass_via_localization(p1, RightModule.zero(na.lam), 0)
    assert lb.ok and lb.over_lambda == 0


def test_bass_via_localization_product_base():
    base = ArtinianBaseRing((K, KX2))
    na = triangular_algebra(base)
    lam = na.lam
    mods = [indecomposable_injective(lam, s) for s in range(len(simple_modules(lam)))]
    m = direct_sum(mods[:2] + list(simple_modules(lam)))
    for p in prime_ideals(na):
        for i in range(3):
            assert bass_via_localization(p, m, i, 3).ok


def test_goto_nishida_s1():
    na = triangular_algebra(ArtinianBaseRing.local(K))
    p1, _ = first_row_prime(na)
    assoc, i = goto_nishida(p1, p1.simple)
    assert assoc and i == 1


# -- row modules over triangular matrices ------------------------------------------------------

# (R, V, (mu_0(p, V), mu_1(p, V))) with the classical values derived by hand:
# mu_0 is dim soc V, and mu_1 vanishes exactly when V is injective over the
# self-injective ring R.
CASES = [
    ("F2", lambda: K, lambda r: quotient_by_power(r, 1), (1, 0)),
    ("F2[x]/x^2, R/(x)", lambda: KX2, lambda r: quotient_by_power(r, 1), (1, 1)),
    ("F2[x]/x^2, R", lambda: KX2, lambda r: RightModule.regular(r), (1, 0)),
    ("F3[x]/x^3, R/(x)", lambda: truncated_polynomial(F3, 3), lambda r: quotient_by_power(r, 1), (1, 1)),
    ("F3[x]/x^3, rad R", lambda: truncated_polynomial(F3, 3), lambda r: power_ideal(r, 1), (1, 1)),
]


@pytest.mark.parametrize("label,make_r,make_v,classical", CASES, ids=[c[0] for c in CASES])
def test_row_module_equations(label, make_r, make_v, classical):
    r = make_r()
    rep = verify_final_example(r, make_v(r), 4)
    assert rep.ok, rep.failures
    m0, m1 = classical
    assert rep.classical == classical
    assert rep.tuple_ == (m0, 0, m1, m0)
    assert all(a == b for a, b in rep.localized.values())


def test_row_module_shape():
    r = KX2
    lam = triangular(r)
    m = row_module(lam, quotient_by_power(r, 1))
    assert m.dim == 1
    # the whole second row acts as zero on [V 0]
    assert all(m.action[k].is_zero() for k in range(2, 6))
    assert triangular_central_map(r).shape == (2, 6)
