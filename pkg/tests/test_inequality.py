"""Inequality data model: codec, extremality, evaluation, rendering."""

import math
import random

import numpy as np
import pytest

from bellpoly.inequality import (
    BellTable,
    NotExtremalError,
    SignTable,
    bell_table_from_id,
    bell_table_from_json,
    bell_table_to_json,
    coefficients_from_signs,
    evaluate,
    id_to_signs,
    is_extremal,
    mermin_sign_table,
    parse_polynomial,
    polynomial_string,
    signs_from_coefficients,
    signs_to_id,
)
from bellpoly.transform import DimensionMismatchError

MERMIN3 = BellTable.from_numerators(3, (0, 1, 1, 0, 1, 0, 0, -1), 1)
GHZ_MERMIN_VECTOR = (0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0, -1.0)


def test_sign_table_rejects_bad_entries():
    with pytest.raises(ValueError):
        SignTable(2, (1, 1, 0, -1))
    with pytest.raises(DimensionMismatchError):
        SignTable(2, (1, 1, 1))


def test_all_plus_signs_give_product_polynomial():
    beta = coefficients_from_signs(id_to_signs(3, 0))
    assert beta.coefficients.numerators == (1, 0, 0, 0, 0, 0, 0, 0)
    assert beta.coefficients.log_denominator == 0
    assert polynomial_string(beta) == "a1 b1 c1"


def test_chsh_prototype_coefficients():
    f = SignTable(2, (1, 1, 1, -1))
    beta = coefficients_from_signs(f)
    assert beta.coefficients.numerators == (1, 1, 1, -1)
    assert beta.coefficients.log_denominator == 1
    assert signs_from_coefficients(beta) == f


def test_signs_coefficients_roundtrip_exhaustive_n3():
    for value in range(256):
        f = id_to_signs(3, value)
        assert signs_from_coefficients(coefficients_from_signs(f)) == f


def test_uniform_quarter_table_is_not_extremal():
    beta = BellTable.from_numerators(2, (1, 1, 1, 1), 2)
    with pytest.raises(NotExtremalError):
        signs_from_coefficients(beta)
    assert not is_extremal(beta)


def test_zero_table_is_not_extremal():
    assert not is_extremal(BellTable.from_numerators(2, (0, 0, 0, 0), 0))


def test_id_codec_bijective_small_n():
    for n in (2, 3):
        for value in range(1 << (1 << n)):
            assert signs_to_id(id_to_signs(n, value)) == value


def test_id_codec_random_large_n():
    rnd = random.Random(42)
    for n in (4, 5, 6):
        for _ in range(300):
            value = rnd.getrandbits(1 << n)
            assert signs_to_id(id_to_signs(n, value)) == value


def test_id_range_errors():
    with pytest.raises(ValueError):
        id_to_signs(2, 1 << 4)
    with pytest.raises(ValueError):
        id_to_signs(3, -1)


def test_evaluate_on_classical_extreme_points_is_tight():
    from bellpoly.classical import extreme_point

    rng = np.random.default_rng(3)
    for _ in range(50):
        beta = bell_table_from_id(3, int(rng.integers(0, 256)))
        r = int(rng.integers(0, 8))
        sign = 1 if rng.integers(0, 2) else -1
        value = evaluate(beta, extreme_point(3, r, sign))
        assert abs(abs(value) - 1.0) < 1e-12


def test_classical_maximum_is_exactly_one_exhaustive():
    from bellpoly.classical import extreme_point

    for n in (2, 3):
        points = [
            extreme_point(n, r, sign)
            for r in range(1 << n)
            for sign in (1, -1)
        ]
        for value in range(1 << (1 << n)):
            beta = bell_table_from_id(n, value)
            best = max(evaluate(beta, p) for p in points)
            # dyadic coefficients against +-1 entries: float arithmetic is exact
            assert best == 1.0


def test_evaluate_chsh_cosine_family():
    phi = (math.pi / 2, math.pi / 2)
    xi = [
        math.cos(phi[0] * (s & 1) + phi[1] * ((s >> 1) & 1) - math.pi / 4)
        for s in range(4)
    ]
    chsh = BellTable.from_numerators(2, (1, 1, 1, -1), 1)
    assert evaluate(chsh, xi) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_evaluate_mermin_on_ghz_vector():
    assert evaluate(MERMIN3, GHZ_MERMIN_VECTOR) == pytest.approx(2.0, abs=1e-12)


def test_evaluate_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        evaluate(MERMIN3, (1.0, 0.0))


def test_polynomial_string_chsh_exact():
    chsh = BellTable.from_numerators(2, (1, 1, 1, -1), 1)
    assert polynomial_string(chsh) == "1/2 a1 b1 + 1/2 a1 b2 + 1/2 a2 b1 - 1/2 a2 b2"


def test_polynomial_string_zero():
    assert polynomial_string(BellTable.from_numerators(2, (0, 0, 0, 0), 0)) == "0"


def test_polynomial_string_leading_negative_and_fractions():
    beta = bell_table_from_id(3, 1)
    # f = -1 only at r=0: coefficients 3/4 at a1b1c1 and -1/4 elsewhere
    text = polynomial_string(beta)
    assert text.startswith("3/4 a1 b1 c1 - 1/4 a1 b1 c2")
    assert parse_polynomial(text) == beta


def test_parse_polynomial_roundtrip_random():
    rng = np.random.default_rng(11)
    for n in (2, 3):
        for _ in range(40):
            beta = bell_table_from_id(n, int(rng.integers(0, 1 << (1 << n))))
            assert parse_polynomial(polynomial_string(beta)) == beta


def test_parse_polynomial_errors():
    with pytest.raises(ValueError):
        parse_polynomial("a1 + b1")  # terms must cover every site
    with pytest.raises(ValueError):
        parse_polynomial("1/3 a1 b1 + 2/3 a2 b2")  # not dyadic
    with pytest.raises(ValueError):
        parse_polynomial("a3 b1")  # has to mention site 2 as well
    with pytest.raises(ValueError):
        parse_polynomial("0")  # zero needs an explicit site count
    assert parse_polynomial("0", n=2).coefficients.numerators == (0, 0, 0, 0)


def test_mermin_sign_table_ids():
    assert signs_to_id(mermin_sign_table(3)) == 129
    assert signs_to_id(mermin_sign_table(6)) == 1692930046964590721
    f = mermin_sign_table(4)
    for r in range(16):
        expected = -1 if r.bit_count() % 4 in (0, 3) else 1
        assert f.signs[r] == expected


def test_bell_table_json_roundtrip():
    beta = bell_table_from_id(3, 23)
    assert bell_table_from_json(bell_table_to_json(beta)) == beta
    with pytest.raises(ValueError):
        bell_table_from_json({"n": 2})
