import random

import pytest

from f2fix.mofix import (
    COMPLETE,
    Budget,
    MOFixReport,
    bs_identity_search,
    brute_mofix_oracle,
    classify_second_mofp,
    mofix,
    mofix_case1,
    mofix_case2,
)
from f2fix.primitives import is_primitive
from f2fix.stallings import fold, is_injective, is_surjective, rank
from f2fix.words import (
    Endomorphism,
    apply,
    are_conjugate,
    class_up_to_inversion,
    compose,
    invert,
    multiply,
    parse_word,
    power,
    reduce,
    stats,
)

W = parse_word

PSI_1 = Endomorphism(W("a"), W("baba^2"))
PSI_2 = Endomorphism(W("a"), W("A^2Baba^2bA"))
PSI_2_REBASED = Endomorphism(W("bABa^2BabA"), W("bAbABa^2BabA"))


def classes_of(report: MOFixReport) -> set:
    return set(report.classes)


class TestCase1:
    def test_b_squared(self):
        report = mofix_case1(Endomorphism(W("a"), W("b^2")))
        assert report.status == COMPLETE
        assert classes_of(report) == {class_up_to_inversion(W("a"))}

    def test_both_squared(self):
        report = mofix_case1(Endomorphism(W("a^2"), W("b^2")))
        assert report.status == COMPLETE
        assert report.classes == ()

    def test_conjugated_square(self):
        report = mofix_case1(Endomorphism(W("a"), W("ab^2a")))
        assert classes_of(report) == {class_up_to_inversion(W("a"))}

    def test_rejects_unimodular(self):
        with pytest.raises(ValueError):
            mofix_case1(PSI_2)

    def test_rejects_automorphism(self):
        with pytest.raises(ValueError):
            mofix_case1(Endomorphism(W("a"), W("ab")))


class TestIdentitySearch:
    def test_reference_endo(self):
        hit = bs_identity_search(PSI_2)
        assert (hit.p, hit.q, hit.x) == (1, 1, W("a"))

    def test_fixed_generator(self):
        hit = bs_identity_search(Endomorphism(W("a"), W("b^2")))
        assert (hit.p, hit.q, hit.x) == (1, 1, W("a"))

    def test_witness_identity_holds(self):
        from f2fix.words import endo_power

        for psi in (PSI_1, PSI_2, PSI_2_REBASED):
            hit = bs_identity_search(psi)
            lhs = apply(endo_power(psi, hit.p), hit.x)
            rhs = multiply(
                multiply(invert(hit.g), power(hit.x, hit.q)), hit.g
            )
            assert lhs == rhs


class TestClassifySecondMofp:
    def test_reference_form_ii(self):
        assert classify_second_mofp(PSI_2) == W("ba^3")

    def test_form_iii(self):
        u = W("a^2ba")
        phi = Endomorphism(W("a"), multiply(multiply(invert(u), W("b")), u))
        assert classify_second_mofp(phi) == W("b")

    def test_no_match(self):
        assert classify_second_mofp(Endomorphism(W("a"), W("AbabaB"))) is None

    def test_conjugation_by_a_power_is_not_form_iii(self):
        # b -> a⁻¹ba is an automorphism: the precondition filter rejects it
        with pytest.raises(ValueError):
            classify_second_mofp(Endomorphism(W("a"), W("Aba")))

    def test_rejects_moved_a(self):
        with pytest.raises(ValueError):
            classify_second_mofp(Endomorphism(W("ab"), W("b")))

    def test_second_class_forms_basis_with_a(self):
        # the two representatives together generate everything
        y = classify_second_mofp(PSI_2)
        assert rank(fold([W("a"), y])) == 2
        assert is_surjective(Endomorphism(W("a"), y))


class TestCase2:
    def test_reference_two_classes(self):
        report = mofix_case2(PSI_2)
        assert report.status == COMPLETE
        assert classes_of(report) == {
            class_up_to_inversion(W("a")),
            class_up_to_inversion(W("ba^3")),
        }

    def test_rebased_reference(self):
        report = mofix_case2(PSI_2_REBASED)
        assert report.status == COMPLETE
        expected = {
            class_up_to_inversion(W("aB")),
            class_up_to_inversion(multiply(W("b"), power(W("aB"), 3))),
        }
        assert classes_of(report) == expected

    def test_rejects_automorphism(self):
        with pytest.raises(ValueError):
            mofix_case2(Endomorphism(W("a"), W("ab")))

    def test_budget_exhaustion_is_inconclusive(self):
        report = mofix_case2(PSI_2, Budget(max_p=1, max_len=0))
        assert report.status == "Inconclusive"
        assert report.classes == ()


class TestDispatch:
    def test_case1_route(self):
        report = mofix(PSI_1)
        assert classes_of(report) == {class_up_to_inversion(W("a"))}

    def test_case2_route(self):
        report = mofix(PSI_2)
        assert len(report.classes) == 2

    def test_rejects_identity(self):
        with pytest.raises(ValueError):
            mofix(Endomorphism(W("a"), W("b")))

    def test_rejects_non_injective(self):
        with pytest.raises(ValueError):
            mofix(Endomorphism(W("ab"), W("abab")))


class TestBruteOracle:
    def test_reference_endos(self):
        assert brute_mofix_oracle(PSI_1, 6) == {class_up_to_inversion(W("a"))}
        assert brute_mofix_oracle(PSI_2, 6) == {
            class_up_to_inversion(W("a")),
            class_up_to_inversion(W("ba^3")),
        }

    def test_identity_keeps_everything(self):
        ident = Endomorphism(W("a"), W("b"))
        found = brute_mofix_oracle(ident, 2)
        assert {c.rep for c in found} == {W("a"), W("b"), W("ab"), W("aB")}


AUTOS = [
    Endomorphism(W("a"), W("b")),
    Endomorphism(W("ab"), W("b")),
    Endomorphism(W("b"), W("a")),
    Endomorphism(W("A"), W("b")),
    Endomorphism(W("a"), W("ba")),
]


def random_unimodular_mono(rng: random.Random) -> Endomorphism:
    """a↦a, b↦Z with sigma_b(Z) = ±1, conjugated through random
    automorphisms: always injective, non-surjective, det ±1."""
    while True:
        z = reduce("".join(rng.choice("abAB") for _ in range(rng.randint(3, 5))))
        if stats(z).t_b >= 2 and stats(z).sigma_b in (1, -1):
            break
    psi = Endomorphism(W("a"), z)
    alpha = AUTOS[rng.randrange(len(AUTOS))]
    beta = AUTOS[rng.randrange(len(AUTOS))]
    candidate = compose(alpha, compose(psi, beta))
    if is_injective(candidate) and not is_surjective(candidate):
        return candidate
    return psi


class TestAgainstOracle:
    def test_random_unimodular_monos(self):
        rng = random.Random(23)
        complete = 0
        for _ in range(30):
            psi = random_unimodular_mono(rng)
            report = mofix(psi)
            seen = brute_mofix_oracle(psi, 6)
            assert len(seen) <= 2
            for cls in seen:
                assert is_primitive(cls.rep)
            if report.status == COMPLETE:
                complete += 1
                assert seen <= classes_of(report)
                for cls in report.classes:
                    rep = cls.rep
                    assert are_conjugate(apply(psi, rep), rep)
                    assert is_primitive(rep)
                    if len(rep) <= 6:
                        assert cls in seen
        # roughly half of these adversarial det-±1 monomorphisms admit no
        # identity within the default budget; the rest must be Complete
        assert complete >= 15
