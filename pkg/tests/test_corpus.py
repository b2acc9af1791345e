from itertools import product

import numpy as np
import pytest

from atomcalc.constructions import cyclic_group_algebra, truncated_polynomial
from atomcalc.core.iso import is_isomorphic
from atomcalc.core.modules import RightModule, module_diagnostic
from atomcalc.corpus import IsoClasses, invariants, modules_up_to_dim, random_modules, short_exact_sequences
from atomcalc.linalg import Matrix

from conftest import F2, QQ, tri


def f2_matrices(n):
    for entries in product(range(2), repeat=n * n):
        yield np.array(entries, dtype=np.int64).reshape(n, n)


def gl2(n):
    return [g for g in f2_matrices(n) if Matrix(F2, g).det() != 0]


def orbit_key(mats, group):
    """Smallest encoding of the tuple over all base changes."""
    keys = []
    for g in group:
        gi = Matrix(F2, g).inverse().a
        keys.append(tuple(((g @ m @ gi) % 2).tobytes() for m in mats))
    return min(keys)


def brute_count_all_actions(a, n):
    """Iso classes of n-dim modules, from every tuple of action matrices."""
    group = gl2(n)
    seen = set()
    for mats in product(list(f2_matrices(n)), repeat=a.dim):
        m = RightModule(a, tuple(Matrix(F2, x) for x in mats))
        if module_diagnostic(m) is None:
            seen.add(orbit_key(mats, group))
    return len(seen)


def brute_count_one_generator(relation, n):
    """Iso classes of n-dim modules over k[x]/(relation), as conjugacy classes."""
    group = gl2(n)
    seen = set()
    for x in f2_matrices(n):
        if relation(x):
            seen.add(orbit_key([x], group))
    return len(seen)


def by_dim(mods):
    out = {}
    for m in mods:
        out[m.dim] = out.get(m.dim, 0) + 1
    return out


def test_triangular_counts_match_brute_force():
    a = tri(F2)
    counts = by_dim(modules_up_to_dim(a, 2))
    assert counts == {0: 1, 1: brute_count_all_actions(a, 1), 2: brute_count_all_actions(a, 2)}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dual_number_counts_match_brute_force(n):
    a = truncated_polynomial(F2, 2)
    expected = brute_count_one_generator(lambda x: not ((x @ x) % 2).any(), n)
    assert by_dim(modules_up_to_dim(a, 3))[n] == expected


@pytest.mark.parametrize("n", [1, 2, 3])
def test_group_algebra_counts_match_brute_force(n):
    a = cyclic_group_algebra(F2, 2)
    expected = brute_count_one_generator(lambda x: np.array_equal((x @ x) % 2, np.eye(len(x), dtype=np.int64)), n)
    assert by_dim(modules_up_to_dim(a, 3))[n] == expected


def test_corpus_has_no_isomorphic_duplicates():
    mods = modules_up_to_dim(tri(F2), 3)
    for i, m in enumerate(mods):
        for n in mods[i + 1:]:
            assert not is_isomorphic(m, n)


def test_iso_classes_deduplicate():
    a = tri(F2)
    reg = RightModule.regular(a)
    g = Matrix(F2, [[1, 1, 0], [0, 1, 0], [1, 0, 1]])
    classes = IsoClasses()
    assert classes.add(reg)
    assert not classes.add(reg.change_basis(g))
    assert len(classes) == 1
    assert invariants(reg) == invariants(reg.change_basis(g))


def test_random_modules_are_valid_and_reproducible():
    a = tri(QQ)
    first = random_modules(a, count=20, max_dim=4, seed=5)
    second = random_modules(a, count=20, max_dim=4, seed=5)
    assert len(first) == 20
    assert all(module_diagnostic(m) is None and m.dim <= 4 for m in first)
    assert [m.action for m in first] == [m.action for m in second]


def test_short_exact_sequences_cover_all_submodules():
    mods = modules_up_to_dim(tri(F2), 2)
    subs = short_exact_sequences(mods)
    nonzero = [m for m in mods if m.dim]
    assert len(subs) >= 2 * len(nonzero)
    assert all(s.is_closed() for s in subs)
