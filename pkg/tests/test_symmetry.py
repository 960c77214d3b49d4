"""Symmetry group: the action, orbits, and the exhaustive census."""

import numpy as np
import pytest

from bellpoly.inequality import (
    SignTable,
    bell_table_from_id,
    coefficients_from_signs,
    id_to_signs,
    mermin_sign_table,
    signs_from_coefficients,
    signs_to_id,
)
from bellpoly.symmetry import (
    GroupElement,
    apply,
    classify_all,
    compose,
    group_order,
    identity,
    inverse,
    is_factorizing_orbit,
    is_permutation_invariant_orbit,
    orbit,
    orbit_of_id,
    permute_word,
    random_element,
)
from bellpoly.transform import DimensionMismatchError


def test_group_order_table():
    assert [group_order(n) for n in (2, 3, 4, 5)] == [64, 768, 12288, 245760]
    with pytest.raises(ValueError):
        group_order(0)


def test_permute_word_routes_bits():
    # send bit 0 to bit 2, bit 1 to bit 0, bit 2 to bit 1
    assert permute_word(0b001, (2, 0, 1)) == 0b100
    assert permute_word(0b110, (2, 0, 1)) == 0b011


def test_group_element_validation():
    with pytest.raises(ValueError):
        GroupElement((0, 0), 0, 0, 1)
    with pytest.raises(ValueError):
        GroupElement((0, 1), 4, 0, 1)
    with pytest.raises(ValueError):
        GroupElement((0, 1), 0, 0, 0)


def test_apply_identity_and_global_sign():
    f = id_to_signs(3, 23)
    assert apply(identity(3), f) == f
    flip = GroupElement((0, 1, 2), 0, 0, -1)
    assert apply(flip, f) == -f


def test_apply_chsh_xor_shift():
    f = SignTable(2, (1, 1, 1, -1))
    shifted = apply(GroupElement((0, 1), 0b11, 0, 1), f)
    assert shifted.signs == (-1, 1, 1, 1)


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        apply(identity(2), id_to_signs(3, 0))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_group_law_and_inverse(n):
    rng = np.random.default_rng(n)
    for _ in range(40):
        g1 = random_element(n, rng)
        g2 = random_element(n, rng)
        f = id_to_signs(n, int(rng.integers(0, 1 << (1 << n))))
        assert apply(compose(g1, g2), f) == apply(g1, apply(g2, f))
        assert apply(inverse(g1), apply(g1, f)) == f
        assert compose(g1, inverse(g1)) == identity(n)


def test_action_closure_preserves_extremality():
    rng = np.random.default_rng(17)
    for _ in range(25):
        f = id_to_signs(3, int(rng.integers(0, 256)))
        g = random_element(3, rng)
        image = apply(g, f)
        # transforming the coefficient table and re-deriving signs agrees
        assert signs_from_coefficients(coefficients_from_signs(image)) == image


@pytest.mark.parametrize(
    "value, size",
    [(0, 16), (1, 128), (3, 48), (6, 48), (23, 16)],
)
def test_orbit_sizes_n3(value, size):
    orb = orbit(id_to_signs(3, value))
    assert orb.size == size
    assert orb.canonical_id == value
    assert group_order(3) % orb.size == 0


def test_orbit_membership_and_apply_agree():
    rng = np.random.default_rng(9)
    orb = orbit_of_id(3, 23)
    for _ in range(30):
        g = random_element(3, rng)
        assert signs_to_id(apply(g, id_to_signs(3, 23))) in orb


def test_orbit_of_mermin_n4():
    orb = orbit(mermin_sign_table(4))
    assert orb.canonical_id == 6014
    assert orb.size == 32


def test_orbit_rejects_large_n():
    with pytest.raises(ValueError):
        orbit_of_id(7, 0)
    with pytest.raises(ValueError):
        classify_all(5)


def test_census_n2():
    records = classify_all(2)
    assert [(r.canonical_id, r.size) for r in records] == [(0, 8), (1, 8)]
    assert sum(r.size for r in records) == 16


def test_census_n3_matches_published_table():
    records = classify_all(3)
    assert [(r.canonical_id, r.size) for r in records] == [
        (0, 16),
        (1, 128),
        (3, 48),
        (6, 48),
        (23, 16),
    ]
    assert sum(r.size for r in records) == 256
    assert all(group_order(3) % r.size == 0 for r in records)
    flags = {r.canonical_id: (r.permutation_invariant, r.factorizing) for r in records}
    assert flags[0] == (True, True)  # the product a1 b1 c1
    assert flags[3] == (False, True)  # CHSH times a single site
    assert flags[23] == (True, False)  # maximal-violation orbit
    assert flags[6] == (False, False)


def test_flag_helpers_recompute_from_records():
    records = classify_all(3)
    for rec in records:
        assert is_permutation_invariant_orbit(rec) == rec.permutation_invariant
        assert is_factorizing_orbit(rec) == rec.factorizing


def test_orbit_contains():
    orb = orbit_of_id(3, 0)
    assert 0 in orb
    assert 255 in orb  # global sign flip of the all-plus table
    assert 23 not in orb


def test_violations_constant_on_orbits_via_table_structure():
    # orbit members have identical multisets of |coefficients|
    from collections import Counter

    orb = orbit_of_id(3, 6)
    reference = Counter(abs(v) for v in bell_table_from_id(3, 6).coefficients.numerators)
    rng = np.random.default_rng(1)
    for value in rng.choice(orb.member_ids, size=10, replace=False):
        table = bell_table_from_id(3, int(value))
        assert Counter(abs(v) for v in table.coefficients.numerators) == reference
