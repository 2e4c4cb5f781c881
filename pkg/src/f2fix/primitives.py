"""Primitive elements of F(a,b): construction from exponent sums,
primitivity testing, completion to a basis, and basis change.

Primitive construction runs the subtractive Euclidean algorithm on the
exponent-sum pair as a chain of elementary Nielsen automorphisms, so the
automorphism carrying a to the primitive — and its inverse — come for free.
Conjugacy classes of primitives are uniquely determined by their
abelianization, which powers the primitivity test.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from .stallings import fold, is_surjective
from .words import (
    IDENTITY,
    IDENTITY_ENDO,
    Endomorphism,
    Word,
    apply,
    compose,
    conjugacy_witness,
    invert,
    multiply,
    parse_word,
    reduce,
    sigma,
)


@dataclass(frozen=True)
class Auto:
    """An automorphism bundled with its inverse."""

    fwd: Endomorphism
    inv: Endomorphism


_IDENTITY_AUTO = Auto(IDENTITY_ENDO, IDENTITY_ENDO)

# elementary building blocks
_SWAP = Auto(
    Endomorphism(parse_word("b"), parse_word("a")),
    Endomorphism(parse_word("b"), parse_word("a")),
)
_FLIP_A = Auto(
    Endomorphism(parse_word("A"), parse_word("b")),
    Endomorphism(parse_word("A"), parse_word("b")),
)
_FLIP_B = Auto(
    Endomorphism(parse_word("a"), parse_word("B")),
    Endomorphism(parse_word("a"), parse_word("B")),
)
# b -> ab (adds the a-count into b's column of the abelianization)
_ADD_A_TO_B = Auto(
    Endomorphism(parse_word("a"), parse_word("ab")),
    Endomorphism(parse_word("a"), parse_word("Ab")),
)
# a -> ab
_ADD_B_TO_A = Auto(
    Endomorphism(parse_word("ab"), parse_word("b")),
    Endomorphism(parse_word("aB"), parse_word("b")),
)


def compose_autos(outer: Auto, inner_: Auto) -> Auto:
    """The automorphism applying ``inner_`` first, then ``outer``."""
    return Auto(compose(outer.fwd, inner_.fwd), compose(inner_.inv, outer.inv))


def inner_auto(g: Word) -> Auto:
    """Conjugation x -> g⁻¹ x g as an Auto."""
    gl, gi = g, invert(g)
    return Auto(
        Endomorphism(multiply(multiply(gi, parse_word("a")), gl),
                     multiply(multiply(gi, parse_word("b")), gl)),
        Endomorphism(multiply(multiply(gl, parse_word("a")), gi),
                     multiply(multiply(gl, parse_word("b")), gi)),
    )


def _primitive_auto(p: int, q: int) -> Auto:
    """An automorphism whose image of a has exponent sums exactly (p, q)."""
    if gcd(p, q) != 1:
        raise ValueError(f"({p}, {q}) is not a coprime pair")

    # record the subtractive-Euclid moves on (|p|, |q|), innermost first
    moves: list[Auto] = []
    pp, qq = abs(p), abs(q)
    while True:
        if (pp, qq) == (1, 0):
            base = _IDENTITY_AUTO
            break
        if (pp, qq) == (0, 1):
            base = _SWAP
            break
        if pp >= qq:
            moves.append(_ADD_A_TO_B)  # from (pp - qq, qq) to (pp, qq)
            pp -= qq
        else:
            moves.append(_ADD_B_TO_A)  # from (pp, qq - pp) to (pp, qq)
            qq -= pp

    auto = base
    for mv in reversed(moves):
        auto = compose_autos(mv, auto)
    if p < 0:
        auto = compose_autos(_FLIP_A, auto)
    if q < 0:
        auto = compose_autos(_FLIP_B, auto)
    return auto


def construct_primitive(p: int, q: int) -> Word:
    """A primitive word with exponent sums (p, q); requires gcd(p, q) = 1."""
    return _primitive_auto(p, q).fwd.image_a


def is_primitive(w: Word) -> bool:
    """True iff w belongs to some free basis of F(a,b)."""
    p, q = sigma(w)
    if gcd(p, q) != 1:
        return False
    return conjugacy_witness(construct_primitive(p, q), w) is not None


@dataclass(frozen=True)
class BasisPair:
    """A free basis (x, t) of F(a,b) with the basis-change maps:
    alpha sends a -> x, b -> t; alpha_inv is its inverse."""

    x: Word
    t: Word
    alpha: Endomorphism
    alpha_inv: Endomorphism


def _checked_basis_pair(alpha: Auto) -> BasisPair:
    a, b = parse_word("a"), parse_word("b")
    assert apply(alpha.inv, alpha.fwd.image_a) == a
    assert apply(alpha.inv, alpha.fwd.image_b) == b
    assert apply(alpha.fwd, alpha.inv.image_a) == a
    assert apply(alpha.fwd, alpha.inv.image_b) == b
    pair = BasisPair(alpha.fwd.image_a, alpha.fwd.image_b, alpha.fwd, alpha.inv)
    assert is_surjective(alpha.fwd)
    return pair


def complete_to_basis(x: Word) -> BasisPair:
    """Extend the primitive x to a free basis (x, t) of F(a,b)."""
    p, q = sigma(x)
    if gcd(p, q) != 1:
        raise ValueError(f"{x} is not primitive (exponent sums not coprime)")
    base = _primitive_auto(p, q)
    g = conjugacy_witness(base.fwd.image_a, x)
    if g is None:
        raise ValueError(f"{x} is not primitive")
    return _checked_basis_pair(compose_autos(inner_auto(g), base))


def make_basis_pair(x: Word, t: Word) -> BasisPair:
    """Build a BasisPair from explicit basis words, inverting a -> x, b -> t
    by recorded Nielsen reduction of the pair (x, t)."""
    u, v = x, t
    gammas: list[Auto] = []  # alpha = tau ∘ gammas[-1]⁻¹ ∘ ... ; see below
    a, b = parse_word("a"), parse_word("b")

    # replacement moves: new u (or v) and the elementary automorphism gamma
    # with alpha' = alpha ∘ gamma, i.e. gamma.fwd describes the move on (a, b)
    def candidates(u: Word, v: Word):
        vi = invert(v)
        ui = invert(u)
        yield multiply(u, v), v, Auto(Endomorphism(multiply(a, b), b),
                                      Endomorphism(multiply(a, invert(b)), b))
        yield multiply(u, vi), v, Auto(Endomorphism(multiply(a, invert(b)), b),
                                       Endomorphism(multiply(a, b), b))
        yield multiply(v, u), v, Auto(Endomorphism(multiply(b, a), b),
                                      Endomorphism(multiply(invert(b), a), b))
        yield multiply(vi, u), v, Auto(Endomorphism(multiply(invert(b), a), b),
                                       Endomorphism(multiply(b, a), b))
        yield u, multiply(v, u), Auto(Endomorphism(a, multiply(b, a)),
                                      Endomorphism(a, multiply(b, invert(a))))
        yield u, multiply(v, ui), Auto(Endomorphism(a, multiply(b, invert(a))),
                                       Endomorphism(a, multiply(b, a)))
        yield u, multiply(u, v), Auto(Endomorphism(a, multiply(a, b)),
                                      Endomorphism(a, multiply(invert(a), b)))
        yield u, multiply(ui, v), Auto(Endomorphism(a, multiply(invert(a), b)),
                                       Endomorphism(a, multiply(a, b)))
        # conjugation moves, for pairs stuck at a cyclic obstruction
        yield multiply(multiply(v, u), vi), v, Auto(
            Endomorphism(multiply(multiply(b, a), invert(b)), b),
            Endomorphism(multiply(multiply(invert(b), a), b), b))
        yield multiply(multiply(vi, u), v), v, Auto(
            Endomorphism(multiply(multiply(invert(b), a), b), b),
            Endomorphism(multiply(multiply(b, a), invert(b)), b))
        yield u, multiply(multiply(u, v), ui), Auto(
            Endomorphism(a, multiply(multiply(a, b), invert(a))),
            Endomorphism(a, multiply(multiply(invert(a), b), a)))
        yield u, multiply(multiply(ui, v), u), Auto(
            Endomorphism(a, multiply(multiply(invert(a), b), a)),
            Endomorphism(a, multiply(multiply(a, b), invert(a))))

    while len(u) + len(v) > 2:
        best = None
        for nu, nv, gamma in candidates(u, v):
            if len(nu) + len(nv) < len(u) + len(v):
                best = (nu, nv, gamma)
                break
        if best is None:
            raise ValueError(f"({x}, {t}) is not a free basis of F(a,b)")
        u, v, gamma = best
        gammas.append(gamma)

    # now (u, v) is a pair of letters; it must hit both generators
    tau = Auto(Endomorphism(u, v), _invert_letter_pair(u, v))
    if tau.inv is None:
        raise ValueError(f"({x}, {t}) is not a free basis of F(a,b)")

    # alpha_n = alpha ∘ gamma_1 ∘ ... ∘ gamma_k = tau, hence
    # alpha = tau ∘ gamma_k⁻¹ ∘ ... ∘ gamma_1⁻¹ and
    # alpha⁻¹ = gamma_1 ∘ ... ∘ gamma_k ∘ tau⁻¹.
    fwd = tau.fwd
    for gamma in reversed(gammas):
        fwd = compose(fwd, gamma.inv)
    inv = IDENTITY_ENDO
    for gamma in gammas:
        inv = compose(inv, gamma.fwd)
    inv = compose(inv, tau.inv)
    return _checked_basis_pair(Auto(fwd, inv))


def _invert_letter_pair(u: Word, v: Word) -> Optional[Endomorphism]:
    """Inverse of the letter-automorphism a -> u, b -> v (|u| = |v| = 1)."""
    images: dict[str, Word] = {}
    for src, img in (("a", u), ("b", v)):
        ch = img.letters()
        gen, positive = ch.lower(), ch.islower()
        if gen in images:
            return None
        images[gen] = parse_word(src) if positive else invert(parse_word(src))
    if set(images) != {"a", "b"}:
        return None
    return Endomorphism(images["a"], images["b"])


def change_basis(phi: Endomorphism, basis: BasisPair) -> Endomorphism:
    """Express phi in the coordinates of the given basis."""
    return compose(basis.alpha_inv, compose(phi, basis.alpha))
