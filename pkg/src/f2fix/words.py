"""Exact arithmetic in the free group F(a,b).

Words are stored freely reduced, run-length encoded as syllables
(generator, nonzero exponent).  Letters are written a, b for the
generators and A, B for their inverses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional

GENERATORS = ("a", "b")

_LETTER_TO_PAIR = {"a": ("a", 1), "A": ("a", -1), "b": ("b", 1), "B": ("b", -1)}
_PAIR_TO_LETTER = {("a", 1): "a", ("a", -1): "A", ("b", 1): "b", ("b", -1): "B"}
_INVERSE_LETTER = {"a": "A", "A": "a", "b": "B", "B": "b"}

# Letter order used for every lexicographic comparison: a < A < b < B.
LETTER_ORDER = {"a": 0, "A": 1, "b": 2, "B": 3}
LETTERS = ("a", "A", "b", "B")


def _lex_key(letters: tuple[str, ...] | str) -> tuple[int, ...]:
    return tuple(LETTER_ORDER[ch] for ch in letters)


@dataclass(frozen=True)
class Word:
    """A freely reduced word: tuple of (generator, nonzero exponent) syllables."""

    syllables: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        prev = None
        for gen, exp in self.syllables:
            if gen not in GENERATORS:
                raise ValueError(f"bad generator {gen!r}")
            if exp == 0:
                raise ValueError("zero exponent syllable")
            if gen == prev:
                raise ValueError("adjacent syllables share a generator")
            prev = gen

    def __len__(self) -> int:
        return sum(abs(exp) for _, exp in self.syllables)

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def letters(self) -> str:
        """The word as a string of single letters, e.g. a²b⁻¹ -> 'aaB'."""
        return "".join(
            _PAIR_TO_LETTER[(gen, 1 if exp > 0 else -1)] * abs(exp)
            for gen, exp in self.syllables
        )

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


IDENTITY = Word()


def _letters_to_syllables(letters: str) -> tuple[tuple[str, int], ...]:
    sylls: list[tuple[str, int]] = []
    for ch in letters:
        gen, sign = _LETTER_TO_PAIR[ch]
        if sylls and sylls[-1][0] == gen:
            sylls[-1] = (gen, sylls[-1][1] + sign)
        else:
            sylls.append((gen, sign))
    return tuple(sylls)


def reduce_letters(letters: str) -> str:
    """Freely reduce a string of letters with a cancellation stack."""
    stack: list[str] = []
    for ch in letters:
        if stack and stack[-1] == _INVERSE_LETTER[ch]:
            stack.pop()
        else:
            stack.append(ch)
    return "".join(stack)


def reduce(letters: str) -> Word:
    """The unique freely reduced word equal to the given letter sequence."""
    return Word(_letters_to_syllables(reduce_letters(letters)))


def word_from_reduced_letters(letters: str) -> Word:
    """Wrap an already-reduced letter string as a Word (no re-check of reducedness)."""
    return Word(_letters_to_syllables(letters))


def invert_letters(letters: str) -> str:
    return "".join(_INVERSE_LETTER[ch] for ch in reversed(letters))


def multiply(u: Word, v: Word) -> Word:
    return reduce(u.letters() + v.letters())


def invert(u: Word) -> Word:
    return Word(tuple((gen, -exp) for gen, exp in reversed(u.syllables)))


def power(u: Word, n: int) -> Word:
    if n == 0:
        return IDENTITY
    base = u if n > 0 else invert(u)
    return reduce(base.letters() * abs(n))


def sigma(w: Word) -> tuple[int, int]:
    """Signed exponent sums (sigma_a, sigma_b)."""
    sa = sb = 0
    for gen, exp in w.syllables:
        if gen == "a":
            sa += exp
        else:
            sb += exp
    return sa, sb


@dataclass(frozen=True)
class SyllableStats:
    s: int
    s_a: int
    s_b: int
    s_a2: int
    s_b2: int
    t_a: int
    t_b: int
    sigma_a: int
    sigma_b: int


def stats(w: Word) -> SyllableStats:
    s_a = s_b = s_a2 = s_b2 = t_a = t_b = sig_a = sig_b = 0
    for gen, exp in w.syllables:
        if gen == "a":
            s_a += 1
            t_a += abs(exp)
            sig_a += exp
            if abs(exp) >= 2:
                s_a2 += 1
        else:
            s_b += 1
            t_b += abs(exp)
            sig_b += exp
            if abs(exp) >= 2:
                s_b2 += 1
    return SyllableStats(s_a + s_b, s_a, s_b, s_a2, s_b2, t_a, t_b, sig_a, sig_b)


# ---------------------------------------------------------------------------
# Endomorphisms


@dataclass(frozen=True)
class Endomorphism:
    """An endomorphism of F(a,b), given by the images of a and b."""

    image_a: Word
    image_b: Word

    def __repr__(self) -> str:
        return f"Endomorphism(a->{format_word(self.image_a)}, b->{format_word(self.image_b)})"


IDENTITY_ENDO = Endomorphism(reduce("a"), reduce("b"))


def apply(phi: Endomorphism, w: Word) -> Word:
    img = {"a": phi.image_a.letters(), "b": phi.image_b.letters()}
    img["A"] = invert_letters(img["a"])
    img["B"] = invert_letters(img["b"])
    return reduce("".join(img[ch] for ch in w.letters()))


def compose(phi: Endomorphism, chi: Endomorphism) -> Endomorphism:
    """The endomorphism x -> phi(chi(x)): chi is applied first."""
    return Endomorphism(apply(phi, chi.image_a), apply(phi, chi.image_b))


def endo_power(phi: Endomorphism, n: int) -> Endomorphism:
    if n < 1:
        raise ValueError("endo_power needs n >= 1")
    result = phi
    for _ in range(n - 1):
        result = compose(phi, result)
    return result


def inner(g: Word) -> Endomorphism:
    """Conjugation by g: x -> g⁻¹ x g."""
    gl = g.letters()
    gi = invert_letters(gl)
    return Endomorphism(reduce(gi + "a" + gl), reduce(gi + "b" + gl))


# ---------------------------------------------------------------------------
# Conjugacy


@dataclass(frozen=True)
class CyclicWord:
    """A conjugacy class, held by the lexicographically least rotation
    (letter order a < A < b < B) of a cyclically reduced representative."""

    letters_canonical: tuple[str, ...]

    @property
    def rep(self) -> Word:
        return word_from_reduced_letters("".join(self.letters_canonical))

    def __len__(self) -> int:
        return len(self.letters_canonical)

    def __repr__(self) -> str:
        return f"CyclicWord({format_word(self.rep)!r})"


def _canonical_rotation(letters: str) -> tuple[str, ...]:
    if not letters:
        return ()
    n = len(letters)
    doubled = letters + letters
    best = min(range(n), key=lambda i: _lex_key(doubled[i : i + n]))
    return tuple(doubled[best : best + n])


def cyclic_reduce(w: Word) -> tuple[CyclicWord, Word]:
    """Write w = g⁻¹ c g with c cyclically reduced, g minimal.

    Returns (the conjugacy class of c, g); the cyclically reduced core
    itself is recoverable as core_of(w).
    """
    core, g = _core_and_conjugator(w)
    return CyclicWord(_canonical_rotation(core)), g


def _core_and_conjugator(w: Word) -> tuple[str, Word]:
    """Peel cancelling ends: w = u·c·u⁻¹ letterwise; return (c, g=u⁻¹)."""
    letters = w.letters()
    i, j = 0, len(letters)
    while i < j - 1 and letters[i] == _INVERSE_LETTER[letters[j - 1]]:
        i += 1
        j -= 1
    prefix = letters[:i]
    return letters[i:j], word_from_reduced_letters(invert_letters(prefix))


def core_of(w: Word) -> Word:
    """The cyclically reduced core c with w = g⁻¹ c g (original rotation kept)."""
    core, _ = _core_and_conjugator(w)
    return word_from_reduced_letters(core)


def cyclic_word(w: Word) -> CyclicWord:
    return cyclic_reduce(w)[0]


def are_conjugate(u: Word, v: Word) -> bool:
    return cyclic_word(u) == cyclic_word(v)


def conjugacy_witness(u: Word, v: Word) -> Optional[Word]:
    """Some g with g⁻¹ u g = v, or None when u and v are not conjugate."""
    cu, gu = _core_and_conjugator(u)
    cv, gv = _core_and_conjugator(v)
    if len(cu) != len(cv):
        return None
    if not cu:
        return IDENTITY if not cv else None
    doubled = cu + cu
    n = len(cu)
    for i in range(n):
        if doubled[i : i + n] == cv:
            s = cu[:i]
            g = reduce(invert_letters(gu.letters()) + s + gv.letters())
            assert multiply(multiply(invert(g), u), g) == v
            return g
    return None


def class_up_to_inversion(w: Word) -> CyclicWord:
    """Canonical representative of {[w], [w⁻¹]}: the lex-smaller canonical rotation."""
    c = cyclic_word(w)
    ci = cyclic_word(invert(w))
    return min(c, ci, key=lambda x: _lex_key(x.letters_canonical))


def root(w: Word) -> tuple[Word, int]:
    """Write w = r^n with n maximal (roots are unique in a free group)."""
    if not w:
        raise ValueError("the identity has no root")
    core, g = _core_and_conjugator(w)
    t = len(core)
    for n in range(t, 0, -1):
        if t % n:
            continue
        piece = core[: t // n]
        if piece * n == core:
            gl = g.letters()
            r = reduce(invert_letters(gl) + piece + gl)
            return r, n
    raise AssertionError("unreachable: n = 1 always matches")


# ---------------------------------------------------------------------------
# Text syntax

_TOKEN = re.compile(r"([abAB])(?:\^(-?\d+))?")


def parse_word(text: str) -> Word:
    """Parse the word syntax: a,b generators; A,B inverses; optional caret
    exponents ('a^2B^3', 'a^-1' accepted); whitespace ignored; '1' or '' is
    the identity."""
    stripped = "".join(text.split())
    if stripped in ("", "1"):
        return IDENTITY
    letters: list[str] = []
    pos = 0
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if not m:
            raise ValueError(f"bad word syntax at position {pos} in {text!r}")
        ch, exp_text = m.group(1), m.group(2)
        exp = 1 if exp_text is None else int(exp_text)
        if exp < 0:
            ch = _INVERSE_LETTER[ch]
            exp = -exp
        letters.append(ch * exp)
        pos = m.end()
    return reduce("".join(letters))


def format_word(w: Word) -> str:
    """Canonical text form: uppercase for inverses, '^n' for |exponent| >= 2."""
    if not w:
        return "1"
    parts = []
    for gen, exp in w.syllables:
        ch = _PAIR_TO_LETTER[(gen, 1 if exp > 0 else -1)]
        n = abs(exp)
        parts.append(ch if n == 1 else f"{ch}^{n}")
    return "".join(parts)


# ---------------------------------------------------------------------------
# Enumeration (shortlex, letter order a < A < b < B)


def words_of_length(n: int) -> Iterator[Word]:
    """All freely reduced words of letter-length exactly n, in lex order."""
    if n == 0:
        yield IDENTITY
        return

    def extend(prefix: list[str], remaining: int) -> Iterator[str]:
        if remaining == 0:
            yield "".join(prefix)
            return
        last = prefix[-1] if prefix else None
        for ch in LETTERS:
            if last is not None and ch == _INVERSE_LETTER[last]:
                continue
            prefix.append(ch)
            yield from extend(prefix, remaining - 1)
            prefix.pop()

    for s in extend([], n):
        yield word_from_reduced_letters(s)


def enumerate_words(max_len: int, min_len: int = 1) -> Iterator[Word]:
    """Shortlex enumeration of reduced words with min_len <= length <= max_len."""
    for n in range(min_len, max_len + 1):
        yield from words_of_length(n)
