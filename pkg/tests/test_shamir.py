from __future__ import annotations

import itertools
import random
from collections import Counter

import pytest

from svss.errors import (
    BadThresholdError,
    DuplicateIndexError,
    FieldTooSmallError,
    MixedFieldsError,
    NotEnoughSharesError,
)
from svss.fields import binary_field, prime_field
from svss.polynomials import Polynomial
from svss.shamir import Share, ShareSet, deal, deal_polynomial, reconstruct, shares_from_values

GF7 = prime_field(7)


def share(index, value, field=GF7):
    return Share(index, field.element(value))


class TestDeal:
    def test_worked_polynomial(self):
        dealt = deal_polynomial(Polynomial(GF7, (3, 2)), 3, 2)
        assert [(s.index, s.value.value) for s in dealt] == [(1, 5), (2, 0), (3, 2)]

    def test_threshold_one_copies_the_secret(self, rng):
        dealt = deal(GF7.element(4), 1, 5, rng)
        assert dealt.values() == [4] * 5

    @pytest.mark.parametrize(("t", "n"), [(4, 3), (0, 3)])
    def test_bad_threshold(self, rng, t, n):
        with pytest.raises(BadThresholdError):
            deal(GF7.element(1), t, n, rng)

    def test_field_too_small(self, rng):
        with pytest.raises(FieldTooSmallError):
            deal(GF7.element(1), 2, 7, rng)

    def test_seeded_deal_is_reproducible(self):
        first = deal(GF7.element(3), 2, 3, random.Random(5))
        second = deal(GF7.element(3), 2, 3, random.Random(5))
        assert first == second

    def test_by_index(self, rng):
        dealt = deal(GF7.element(3), 2, 3, rng)
        assert dealt.by_index(2).index == 2
        with pytest.raises(KeyError):
            dealt.by_index(9)


class TestReconstruct:
    def test_worked_example(self):
        assert reconstruct([share(1, 5), share(3, 2)], 2) == GF7.element(3)

    def test_threshold_one(self, rng):
        dealt = deal(GF7.element(6), 1, 4, rng)
        assert reconstruct([dealt.by_index(3)], 1) == GF7.element(6)

    def test_not_enough_shares(self):
        with pytest.raises(NotEnoughSharesError):
            reconstruct([share(1, 5)], 2)

    def test_duplicate_index(self):
        with pytest.raises(DuplicateIndexError):
            reconstruct([share(1, 5), share(1, 2)], 2)

    def test_mixed_fields(self):
        with pytest.raises(MixedFieldsError):
            reconstruct([share(1, 5), share(2, 1, prime_field(11))], 2)

    @pytest.mark.parametrize("field", [prime_field(257), prime_field(2**61 - 1), binary_field(8)])
    def test_every_subset_reconstructs(self, field, rng):
        for n in range(1, 9):
            for t in range(1, n + 1):
                secret = field.random_element(rng)
                dealt = deal(secret, t, n, rng)
                for subset in itertools.combinations(dealt.shares, t):
                    assert reconstruct(list(subset), t) == secret

    def test_tampered_share_changes_the_secret(self, rng):
        field = prime_field(101)
        for _ in range(200):
            dealt = deal(field.element(rng.randrange(101)), 3, 5, rng)
            subset = list(dealt.shares[:3])
            victim = rng.randrange(3)
            bump = rng.randrange(1, 101)
            subset[victim] = Share(subset[victim].index, subset[victim].value + field.element(bump))
            assert reconstruct(subset, 3) != reconstruct(list(dealt.shares[:3]), 3)


@pytest.mark.parametrize(("p", "t"), [(5, 2), (7, 3), (11, 2)])
def test_t_minus_one_shares_reveal_nothing(p, t):
    """Every secret is completed by the same number of polynomials of degree < t."""

    field = prime_field(p)
    fixed = {i: (3 * i + 1) % p for i in range(1, t)}
    completions: Counter[int] = Counter()
    for coefficients in itertools.product(range(p), repeat=t):
        polynomial = Polynomial(field, coefficients)
        if all(polynomial.evaluate_raw(i) == y for i, y in fixed.items()):
            completions[coefficients[0]] += 1
    assert set(completions) == set(range(p))
    assert len(set(completions.values())) == 1


def test_shares_from_values_numbers_from_one():
    shares = shares_from_values([10, 20, 30], prime_field(31))
    assert [(s.index, s.value.value) for s in shares] == [(1, 10), (2, 20), (3, 30)]


def test_share_set_rejects_duplicate_indices():
    with pytest.raises(DuplicateIndexError):
        ShareSet((share(1, 1), share(1, 2)), 1, 2, GF7)


def test_share_index_starts_at_one():
    with pytest.raises(ValueError):
        share(0, 1)
