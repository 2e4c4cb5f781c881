"""Top-level pipeline: classify an endomorphism of F(a,b), compute a basis
of its fixed subgroup, and compute its stable image.

For a non-surjective monomorphism the fixed subgroup is cyclic: the maximal
outer fixed points narrow the candidates down to at most two conjugacy
classes, and for each class a change of basis turns "does the class meet the
fixed subgroup" into a twisted-conjugacy instance the solver decides exactly.
Non-injective maps have cyclic image and are settled directly.  For
automorphisms only a bounded fallback is provided, and its incompleteness is
reported as a distinct status.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .mofix import Budget, DEFAULT_BUDGET, INCONCLUSIVE, mofix
from .primitives import complete_to_basis, is_primitive
from .stallings import fold, is_injective, is_surjective, subgroup_basis
from .twisted import solve_conjugator_equation
from .words import (
    Endomorphism,
    Word,
    apply,
    are_conjugate,
    cyclic_reduce,
    endo_power,
    enumerate_words,
    invert,
    multiply,
    parse_word,
    word_from_reduced_letters,
)
from .primitives import change_basis

_A = parse_word("a")
_B = parse_word("b")
_INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}

NON_INJECTIVE = "NonInjective"
AUTOMORPHISM = "Automorphism"
NON_SURJECTIVE_MONO = "NonSurjectiveMono"

COMPLETE = "Complete"
AUT_FALLBACK_INCOMPLETE = "AutFallbackIncomplete"


@dataclass(frozen=True)
class FixResult:
    """A generating set of the fixed subgroup (each element fixed
    letter-exactly) plus how much trust the computation earned."""

    basis: tuple[Word, ...]
    status: str


def classify_endo(psi: Endomorphism) -> str:
    """One of NonInjective, Automorphism, NonSurjectiveMono."""
    if not is_injective(psi):
        return NON_INJECTIVE
    if is_surjective(psi):
        return AUTOMORPHISM
    return NON_SURJECTIVE_MONO


def _checked(basis: list[Word], psi: Endomorphism, status: str) -> FixResult:
    for z in basis:
        assert apply(psi, z) == z, f"unsound basis element {z}"
    return FixResult(tuple(basis), status)


def fix_non_injective(psi: Endomorphism) -> FixResult:
    """Fixed subgroup of a non-injective map: the image is cyclic, say <w>,
    and the fixed subgroup is <w> when w is fixed and trivial otherwise."""
    if is_injective(psi):
        raise ValueError("fix_non_injective needs a non-injective map")
    gens = [w for w in (psi.image_a, psi.image_b) if w]
    if not gens:
        return FixResult((), COMPLETE)
    basis = subgroup_basis(fold(gens))
    assert len(basis) <= 1
    w = basis[0]
    if apply(psi, w) == w:
        return _checked([w], psi, COMPLETE)
    return FixResult((), COMPLETE)


def fix_from_mofp(psi: Endomorphism, x: Word) -> Optional[Word]:
    """Given an outer fixed primitive x of a non-surjective monomorphism,
    a generator of the fixed subgroup inside the class of x, or None when
    the class misses the fixed subgroup.

    Rebases so x becomes the first letter: then psi'(a) = P⁻¹·a·P and
    psi'(b) = Q, and conjugating by P gives the map a -> a, b -> Z with
    Z = P·Q·P⁻¹.  The class of a meets the fixed subgroup exactly when
    P = phi_Z(W)·a^k·W⁻¹ is solvable, and a witness W yields the fixed
    generator as W·a·W⁻¹ (orientation settled by direct check).
    """
    if classify_endo(psi) != NON_SURJECTIVE_MONO:
        raise ValueError("fix_from_mofp needs a non-surjective monomorphism")
    if not is_primitive(x):
        raise ValueError(f"{x} is not primitive")
    if not are_conjugate(apply(psi, x), x):
        raise ValueError(f"{x} is not an outer fixed element")

    basis = complete_to_basis(x)
    rebased = change_basis(psi, basis)
    cls, p_word = cyclic_reduce(rebased.image_a)
    assert cls.rep == _A
    assert multiply(multiply(invert(p_word), _A), p_word) == rebased.image_a
    z = multiply(multiply(p_word, rebased.image_b), invert(p_word))

    hit = solve_conjugator_equation(p_word, z)
    if hit is None:
        return None
    w, _ = hit
    for candidate in (
        multiply(multiply(w, _A), invert(w)),
        multiply(multiply(invert(w), _A), w),
    ):
        mapped = apply(basis.alpha, candidate)
        if apply(psi, mapped) == mapped:
            return mapped
    raise AssertionError("twisted-conjugacy witness produced no fixed element")


def fix(psi: Endomorphism, budget: Budget = DEFAULT_BUDGET) -> FixResult:
    """A basis of the fixed subgroup of psi.

    Non-surjective monomorphisms get the full pipeline (at most one
    generator); non-injective maps are settled directly; automorphisms get a
    bounded enumeration whose incompleteness is reported as
    AutFallbackIncomplete.
    """
    kind = classify_endo(psi)
    if kind == NON_INJECTIVE:
        return fix_non_injective(psi)
    if kind == AUTOMORPHISM:
        fixed = [w for w in enumerate_words(budget.max_len) if apply(psi, w) == w]
        basis = subgroup_basis(fold(fixed)) if fixed else []
        return _checked(basis, psi, AUT_FALLBACK_INCOMPLETE)

    report = mofix(psi, budget)
    if report.status == INCONCLUSIVE:
        return FixResult((), INCONCLUSIVE)
    for cls in report.classes:
        z = fix_from_mofp(psi, cls.rep)
        if z is not None:
            return _checked([z], psi, COMPLETE)
    return FixResult((), COMPLETE)


def stable_image(psi: Endomorphism, budget: Budget = DEFAULT_BUDGET) -> FixResult:
    """A basis of the stable image — the intersection of the images of all
    powers of psi.  It equals the whole group for automorphisms and the
    fixed subgroup of psi² otherwise."""
    if is_surjective(psi):
        return FixResult((_A, _B), COMPLETE)
    return fix(endo_power(psi, 2), budget)


def brute_fix_oracle(psi: Endomorphism, max_len: int) -> list[Word]:
    """All reduced words w with 1 <= |w| <= max_len and psi(w) = w, by
    depth-first enumeration carrying the image along incrementally."""
    images = {
        "a": psi.image_a.letters(),
        "b": psi.image_b.letters(),
    }
    images["A"] = _invert_letters(images["a"])
    images["B"] = _invert_letters(images["b"])
    out: list[Word] = []

    def search(w: str, image: str) -> None:
        if w and w == image:
            out.append(word_from_reduced_letters(w))
        if len(w) == max_len:
            return
        for y in "aAbB":
            if w and y == _INVERSE[w[-1]]:
                continue
            search(w + y, _concat(image, images[y]))

    search("", "")
    return out


def _invert_letters(letters: str) -> str:
    return "".join(_INVERSE[ch] for ch in reversed(letters))


def _concat(x: str, y: str) -> str:
    i = 0
    limit = min(len(x), len(y))
    while i < limit and x[len(x) - 1 - i] == _INVERSE[y[i]]:
        i += 1
    return x[: len(x) - i] + y[i:]
