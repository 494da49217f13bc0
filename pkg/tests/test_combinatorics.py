import math
import random

import pytest
from hypothesis import given, strategies as st

from wgcalc.combinatorics import (
    Permutation,
    all_permutations,
    character,
    character_table,
    class_representative,
    conjugacy_class_size,
    content_product,
    cycle_type,
    diagonal_length,
    dimension,
    format_cycle_type,
    parse_cycle_type,
    partitions_of,
    random_permutation,
    transpose,
    validate_partition,
    z_centralizer,
)
from wgcalc.numerics import N, PolynomialN

PARTITION_COUNTS = {1: 1, 2: 2, 3: 3, 4: 5, 5: 7, 6: 11, 7: 15, 8: 22}


def test_partition_counts_and_order():
    for k, c in PARTITION_COUNTS.items():
        assert len(partitions_of(k)) == c
    assert partitions_of(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))


def test_validate_partition():
    assert validate_partition([3, 1], 4) == (3, 1)
    with pytest.raises(ValueError):
        validate_partition([1, 3])
    with pytest.raises(ValueError):
        validate_partition([2, 0])
    with pytest.raises(ValueError):
        validate_partition([2, 1], 4)


def test_transpose_and_diagonal():
    assert transpose((3, 1)) == (2, 1, 1)
    assert diagonal_length((3, 2, 2)) == 2
    for k in range(1, 8):
        for lam in partitions_of(k):
            assert transpose(transpose(lam)) == lam


def test_dimensions_frozen():
    assert [dimension(l) for l in partitions_of(4)] == [1, 3, 2, 3, 1]
    assert dimension((3, 2, 1)) == 16
    assert dimension((4, 2, 1)) == 35


@pytest.mark.parametrize("k", range(1, 8))
def test_sum_of_squares_and_class_sizes(k):
    assert sum(dimension(l) ** 2 for l in partitions_of(k)) == math.factorial(k)
    assert sum(conjugacy_class_size(mu) for mu in partitions_of(k)) == math.factorial(k)
    for mu in partitions_of(k):
        assert z_centralizer(mu) * conjugacy_class_size(mu) == math.factorial(k)


def test_character_table_s3_s4():
    # rows lambda, columns mu, both reverse-lex
    assert character_table(3) == ((1, 1, 1), (-1, 0, 2), (1, -1, 1))
    assert character_table(4)[1] == (-1, 0, -1, 1, 3)
    assert character((2, 2), (2, 2)) == 2


@pytest.mark.parametrize("k", range(1, 8))
def test_character_orthogonality(k):
    ps = partitions_of(k)
    for a in ps:
        for b in ps:
            s = sum(conjugacy_class_size(mu) * character(a, mu) * character(b, mu) for mu in ps)
            assert s == (math.factorial(k) if a == b else 0)
    for lam in ps:
        assert character(lam, (1,) * k) == dimension(lam)


def test_character_conjugate_is_sign_twist():
    for k in range(1, 7):
        for lam in partitions_of(k):
            for mu in partitions_of(k):
                sgn = (-1) ** (k - len(mu))
                assert character(transpose(lam), mu) == sgn * character(lam, mu)


def test_character_weight_mismatch():
    with pytest.raises(ValueError):
        character((2, 1), (2,))


def test_content_product():
    assert content_product((2, 1), 3) == 3 * 4 * 2
    assert content_product((1, 1), N) == N * (N - 1)
    assert content_product((3,), 0) == 0
    assert content_product((2,), N) == PolynomialN([0, 1, 1])


def test_permutation_parse_and_compose():
    s = Permutation.parse("2 1 3")
    t = Permutation.parse("(1 2 3)")
    assert s(1) == 2 and t(3) == 1
    assert (s * t)(1) == s(t(1))
    assert Permutation.parse("e", k=3) == Permutation.identity(3)
    assert Permutation.parse("(1 2)(3)") == s
    assert cycle_type(t) == (3,)
    assert s.sign() == -1 and t.sign() == 1
    assert s.cycle_str() == "(1 2)"
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])


perm_pairs = st.integers(1, 6).flatmap(
    lambda k: st.tuples(st.permutations(range(k)), st.permutations(range(k)))
)


@given(perm_pairs)
def test_group_laws(pair):
    a, b = (Permutation(list(x)) for x in pair)
    assert (a * b).inverse() == b.inverse() * a.inverse()
    assert (a * a.inverse()) == Permutation.identity(a.k)
    assert (a * b).sign() == a.sign() * b.sign()
    assert cycle_type(a * b) == cycle_type(b * a)
    assert cycle_type(a) == cycle_type(b * a * b.inverse())


def test_all_permutations_and_representatives():
    for k in range(1, 6):
        perms = all_permutations(k)
        assert len(perms) == math.factorial(k) == len(set(perms))
        counts = {}
        for p in perms:
            counts[cycle_type(p)] = counts.get(cycle_type(p), 0) + 1
        for mu in partitions_of(k):
            assert counts[mu] == conjugacy_class_size(mu)
            assert cycle_type(class_representative(mu)) == mu


def test_cycle_type_format():
    assert format_cycle_type((3, 1, 1)) == "3,1,1"
    assert parse_cycle_type("3,1,1") == (3, 1, 1)
    assert parse_cycle_type("1, 3, 1") == (3, 1, 1)


def test_random_permutation_reproducible():
    a = random_permutation(6, random.Random(3))
    b = random_permutation(6, random.Random(3))
    assert a == b and a.k == 6
