import random

import pytest
from hypothesis import given, settings, strategies as st

from f2fix.twisted import (
    brute_twisted_oracle,
    check_twisted,
    normalize_instance,
    phi_of,
    solve_conjugator_equation,
    solve_twisted,
    syllable_count_bound,
    syllable_length_bound,
)
from f2fix.words import (
    IDENTITY,
    Word,
    apply,
    invert,
    multiply,
    parse_word,
    power,
    reduce,
    stats,
)

W = parse_word

A = W("a")


def proper_z(s: str) -> bool:
    """z gives an injective, non-surjective phi_z (at least two b-letters)."""
    return stats(reduce(s)).t_b >= 2


random_z = st.builds(lambda s: reduce(s), st.text("abAB", min_size=2, max_size=6)).filter(
    lambda z: stats(z).t_b >= 2
)
random_words = st.builds(lambda s: reduce(s), st.text("abAB", max_size=5))


class TestNormalizeInstance:
    def test_reference_instance(self):
        inst, zdec = normalize_instance(W("b"), W("A^2ba^2ba^2"), -2)
        assert (inst.p, inst.z, inst.k) == (W("a^2b"), W("ba^2b"), 0)
        assert (zdec.z0, zdec.z1, zdec.q, zdec.shift) == (IDENTITY, W("ba^2b"), 0, -2)

    def test_already_normalized(self):
        inst, zdec = normalize_instance(W("b"), W("bab"), 0)
        assert (inst.p, inst.z, inst.k) == (W("b"), W("bab"), 0)
        assert (zdec.z0, zdec.z1, zdec.q, zdec.shift) == (IDENTITY, W("bab"), 0, 0)

    def test_conjugated_core(self):
        _, zdec = normalize_instance(W("b"), W("B^2ab^2a"), 0)
        assert (zdec.z0, zdec.z1, zdec.q) == (W("b^2"), W("a"), 1)

    def test_rejects_power_of_a(self):
        with pytest.raises(ValueError):
            normalize_instance(W("b"), W("a^3"), 0)

    @given(random_words, random_z, st.integers(-3, 3))
    @settings(max_examples=60, deadline=None)
    def test_decomposition_reassembles(self, p, z, k):
        inst, zdec = normalize_instance(p, z, k)
        reassembled = multiply(
            multiply(invert(zdec.z0), zdec.z1),
            multiply(zdec.z0, power(A, zdec.q)),
        )
        assert reassembled == inst.z
        assert zdec.z_length() == len(inst.z)
        # the normalized z has no leading a-power
        assert inst.z.syllables[0][0] == "b"

    @given(random_words, random_z, st.integers(-3, 3), random_words)
    @settings(max_examples=60, deadline=None)
    def test_same_witnesses(self, p, z, k, w):
        inst, _ = normalize_instance(p, z, k)
        assert check_twisted(p, z, k, w) == check_twisted(inst.p, inst.z, inst.k, w)


class TestSyllableCountBound:
    def test_no_trailing_a_power(self):
        inst, zdec = normalize_instance(W("b"), W("A^2ba^2ba^2"), -2)
        assert syllable_count_bound(inst.p, zdec, inst.k) == 5

    def test_repeated_b_core(self):
        inst, zdec = normalize_instance(W("b"), W("b^2a"), 0)
        assert syllable_count_bound(inst.p, zdec, inst.k) == 3

    def test_pure_a_core_with_long_b_syllable(self):
        inst, zdec = normalize_instance(W("b"), W("B^2ab^2a"), 0)
        assert syllable_count_bound(inst.p, zdec, inst.k) == 6

    def test_at_least_one(self):
        inst, zdec = normalize_instance(IDENTITY, W("bab"), 0)
        assert syllable_count_bound(inst.p, zdec, inst.k) >= 1


class TestSyllableLengthBound:
    def test_value(self):
        assert syllable_length_bound(W("a^2b"), W("ba^2b"), 5) == 31

    def test_rejects_non_positive(self):
        with pytest.raises(ValueError):
            syllable_length_bound(W("a"), W("bab"), 0)


class TestCheckTwisted:
    def test_reference_witnesses(self):
        p, z, k = W("b"), W("A^2ba^2ba^2"), -2
        assert check_twisted(p, z, k, W("a^2ba"))
        assert check_twisted(p, z, k, W("a^2b"))
        assert not check_twisted(p, z, k, W("ab"))


class TestSolveTwisted:
    def test_reference_instance(self):
        p, z, k = W("b"), W("A^2ba^2ba^2"), -2
        w = solve_twisted(p, z, k)
        assert w is not None
        assert check_twisted(p, z, k, w)

    def test_identity_witness(self):
        assert solve_twisted(W("a"), W("bab"), 1) == IDENTITY

    def test_single_b(self):
        # W = b solves b = phi(W)·W⁻¹ for z = b²
        w = solve_twisted(W("b"), W("b^2"), 0)
        assert w is not None
        assert check_twisted(W("b"), W("b^2"), 0, w)

    def test_unsolvable(self):
        assert solve_twisted(W("aB"), W("abAB"), 1) is None

    def test_rejects_surjective(self):
        with pytest.raises(ValueError):
            solve_twisted(W("a"), W("b"), 0)
        with pytest.raises(ValueError):
            solve_twisted(W("a"), W("a^2"), 0)

    def test_planted_witnesses_are_found(self):
        # build solvable instances from a known witness; the solver must
        # find some witness (not necessarily the planted one) and the
        # returned witness must satisfy the syllable bounds
        rng = random.Random(7)
        for _ in range(40):
            z = _random_proper_z(rng)
            k = rng.randint(-3, 3)
            w = _random_b_ending(rng)
            p = multiply(multiply(apply(phi_of(z), w), power(A, k)), invert(w))
            got = solve_twisted(p, z, k)
            assert got is not None
            assert check_twisted(p, z, k, got)
            inst, zdec = normalize_instance(p, z, k)
            b1 = syllable_count_bound(inst.p, zdec, inst.k)
            b2 = syllable_length_bound(inst.p, inst.z, b1)
            assert stats(got).s <= b1
            assert all(abs(e) <= b2 for _, e in got.syllables)

    def test_agrees_with_oracle(self):
        rng = random.Random(11)
        for _ in range(40):
            p = _random_word(rng, rng.randint(1, 3))
            z = _random_proper_z(rng)
            k = rng.randint(-2, 2)
            got = solve_twisted(p, z, k)
            seen = brute_twisted_oracle(p, z, k, 8)
            if got is None:
                assert seen is None
            else:
                assert check_twisted(p, z, k, got)

    def test_image_never_a_pure_a_power(self):
        # for a normalized z, no witness ending in a b-letter produces a
        # power of a; this is what lets the solver accept only on b-moves
        rng = random.Random(13)
        for _ in range(60):
            z = normalize_instance(W("b"), _random_proper_z(rng), 0)[0].z
            k = rng.randint(-3, 3)
            w = _random_b_ending(rng)
            image = multiply(
                multiply(apply(phi_of(z), w), power(A, k)), invert(w)
            )
            assert stats(image).t_b >= 1


class TestSolveConjugatorEquation:
    def test_reference_instance(self):
        p, z = W("b"), W("A^2ba^2ba^2")
        w, k = solve_conjugator_equation(p, z)
        assert k == -2
        assert check_twisted(p, z, k, w)

    def test_identity(self):
        assert solve_conjugator_equation(IDENTITY, W("bab")) == (IDENTITY, 0)

    def test_agrees_with_oracle(self):
        rng = random.Random(17)
        for _ in range(15):
            p = _random_word(rng, rng.randint(1, 3))
            z = _random_proper_z(rng)
            got = solve_conjugator_equation(p, z)
            if got is None:
                for k in range(-4, 5):
                    assert brute_twisted_oracle(p, z, k, 7) is None
            else:
                w, k = got
                assert check_twisted(p, z, k, w)


class TestBruteOracle:
    def test_identity_witness(self):
        assert brute_twisted_oracle(W("a"), W("bab"), 1, 3) == IDENTITY

    def test_finds_reference_witness(self):
        p, z, k = W("b"), W("A^2ba^2ba^2"), -2
        w = brute_twisted_oracle(p, z, k, 4)
        assert w is not None
        assert check_twisted(p, z, k, w)

    def test_none_when_too_short(self):
        assert brute_twisted_oracle(W("aB"), W("abAB"), 1, 6) is None


def _random_word(rng: random.Random, n: int) -> Word:
    while True:
        w = reduce("".join(rng.choice("abAB") for _ in range(n)))
        if len(w) == n:
            return w


def _random_proper_z(rng: random.Random) -> Word:
    while True:
        z = _random_word(rng, rng.randint(2, 6))
        if stats(z).t_b >= 2:
            return z


def _random_b_ending(rng: random.Random) -> Word:
    while True:
        w = _random_word(rng, rng.randint(1, 5))
        if w.letters()[-1] in "bB":
            return w
