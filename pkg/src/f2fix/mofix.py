"""Maximal outer fixed points (MOFix) of non-surjective monomorphisms of
F(a,b).

An outer fixed point of psi is a conjugacy class [w] with psi(w) ~ w; it is
maximal when w is not a proper power.  The computation splits on the
determinant of the abelianized map: when det != ±1 a single linear-algebra
step decides everything; when det = ±1 the module searches for an identity
psi^p(x) ~ x^q within a budget, pins the first class [x] down from it, and
recognizes a possible second class by pattern-matching the image of the
complementary basis element.  A brute-force oracle double-checks results.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .abelianization import det, mat_mul, matrix_of, solve_fixed_vector, vec_mat
from .primitives import change_basis, complete_to_basis, construct_primitive, is_primitive
from .stallings import is_injective, is_surjective
from .words import (
    CyclicWord,
    Endomorphism,
    Word,
    apply,
    are_conjugate,
    class_up_to_inversion,
    compose,
    conjugacy_witness,
    core_of,
    cyclic_reduce,
    enumerate_words,
    inner,
    invert,
    invert_letters,
    multiply,
    parse_word,
    power,
    root,
    stats,
    word_from_reduced_letters,
)

_A = parse_word("a")
_B = parse_word("b")

COMPLETE = "Complete"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Budget:
    """Limits for the identity search: powers p = 1..max_p and shortlex
    candidates x with |x| <= max_len."""

    max_p: int = 6
    max_len: int = 8


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class BSIdentity:
    """A witness psi^p(x) = g⁻¹·x^q·g with p, q nonzero and x nontrivial."""

    p: int
    q: int
    x: Word
    g: Word


@dataclass(frozen=True)
class MOFixReport:
    """Maximal outer fixed points, one canonical representative per class up
    to inversion, plus whether the budgeted search was conclusive."""

    classes: tuple[CyclicWord, ...]
    status: str
    witness: Optional[tuple[int, Word]] = None


def _require_non_surjective_mono(psi: Endomorphism) -> None:
    if not is_injective(psi):
        raise ValueError(f"{psi} is not injective")
    if is_surjective(psi):
        raise ValueError(f"{psi} is an automorphism")


def _report(reps: list[Word], witness: Optional[tuple[int, Word]] = None) -> MOFixReport:
    classes = []
    for rep in reps:
        cls = class_up_to_inversion(rep)
        if cls not in classes:
            classes.append(cls)
    classes.sort(key=lambda c: (len(c), c.letters_canonical))
    return MOFixReport(tuple(classes), COMPLETE, witness)


def mofix_case1(psi: Endomorphism) -> MOFixReport:
    """MOFix for det != ±1: the abelianization has at most one fixed
    direction, so at most one candidate class exists and a single conjugacy
    check settles it.  Always Complete."""
    _require_non_surjective_mono(psi)
    mat = matrix_of(psi)
    if det(mat) in (1, -1):
        raise ValueError("determinant ±1 needs the identity-search path")
    pair = solve_fixed_vector(mat)
    if pair is None:
        return _report([])
    x = construct_primitive(*pair)
    if are_conjugate(apply(psi, x), x):
        return _report([x])
    return _report([])


_INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}


def _concat_letters(x: str, y: str) -> str:
    i = 0
    limit = min(len(x), len(y))
    while i < limit and x[len(x) - 1 - i] == _INVERSE[y[i]]:
        i += 1
    return x[: len(x) - i] + y[i:]


def _cyclic_core_letters(s: str) -> str:
    i, j = 0, len(s)
    while j - i >= 2 and s[i] == _INVERSE[s[j - 1]]:
        i += 1
        j -= 1
    return s[i:j]


def _root_exponent(core: str) -> int:
    """Largest n with core = r^n, for a cyclically reduced letter string."""
    if len(core) < 2:
        return 1
    period = (core + core).find(core, 1)
    return len(core) // period if len(core) % period == 0 else 1


def bs_identity_search(psi: Endomorphism, budget: Budget = DEFAULT_BUDGET) -> Optional[BSIdentity]:
    """First identity psi^p(x) = g⁻¹·x^q·g in scan order (p ascending,
    x shortlex), or None when the budget is exhausted.

    Candidates are prescreened before any word arithmetic: conjugacy forces
    sigma(x)·M^p = q·sigma(x) on the abelianization, which pins q whenever
    sigma(x) != (0,0), and the cyclic cores must satisfy
    |core(psi^p(x))| = |q|·|core(x)|.  Images are carried as letter strings
    so only the rare survivors reach an exact conjugacy check.
    """
    entries = []
    for x in enumerate_words(budget.max_len):
        letters = x.letters()
        st = stats(x)
        core = _cyclic_core_letters(letters)
        entries.append((x, letters, (st.sigma_a, st.sigma_b), len(core), _root_exponent(core)))

    mat = matrix_of(psi)
    mat_p = mat
    phi_p = psi
    for p in range(1, budget.max_p + 1):
        img = {"a": phi_p.image_a.letters(), "b": phi_p.image_b.letters()}
        img["A"] = invert_letters(img["a"])
        img["B"] = invert_letters(img["b"])
        for x, letters, sig, core_len, n_x in entries:
            qs: Optional[tuple[int, ...]]
            if sig != (0, 0):
                sv = vec_mat(sig, mat_p)
                sa, sb = sig
                if sa != 0:
                    if sv[0] % sa or sb * (sv[0] // sa) != sv[1]:
                        continue
                    q0 = sv[0] // sa
                else:
                    if sv[1] % sb or sv[0] != 0:
                        continue
                    q0 = sv[1] // sb
                if q0 == 0:
                    continue
                qs = (q0,)
            else:
                qs = None
            v_letters = ""
            for ch in letters:
                v_letters = _concat_letters(v_letters, img[ch])
            if not v_letters:
                continue
            core_v = _cyclic_core_letters(v_letters)
            if qs is None:
                n_v = _root_exponent(core_v)
                if n_v % n_x:
                    continue
                m = n_v // n_x
                qs = (m, -m)
            if len(core_v) != abs(qs[0]) * core_len:
                continue
            v = word_from_reduced_letters(v_letters)
            for q in qs:
                g = conjugacy_witness(power(x, q), v)
                if g is not None:
                    return BSIdentity(p, q, x, g)
        mat_p = mat_mul(mat_p, mat)
        phi_p = compose(psi, phi_p)
    return None


def _central_decomposition(
    v: Word,
) -> Optional[tuple[int, Word, int, int, int, int]]:
    """Split v letter-exactly as a^{-j}·W⁻¹·a^p·b^s·a^q·W·a^t around the
    middle b-letter, with W nonempty, starting and ending in b-syllables.

    Returns (j, W, p, s, q, t) or None when v does not fit the shape.
    """
    letters = v.letters()
    b_positions = [i for i, ch in enumerate(letters) if ch in "bB"]
    if len(b_positions) % 2 == 0 or len(b_positions) < 3:
        return None
    mid = b_positions[len(b_positions) // 2]
    s = 1 if letters[mid] == "b" else -1

    def signed_run(chunk: str, from_start: bool) -> int:
        run = 0
        for ch in chunk if from_start else reversed(chunk):
            if ch == "a":
                run += 1
            elif ch == "A":
                run -= 1
            else:
                break
        return run

    lead = signed_run(letters, True)
    trail = signed_run(letters, False)
    left = letters[abs(lead) : mid]
    right = letters[mid + 1 : len(letters) - abs(trail)]
    p = signed_run(left, False)
    q = signed_run(right, True)
    w_inv = left[: len(left) - abs(p)]
    w = right[abs(q) :]
    if not w or w_inv != invert_letters(w):
        return None
    if w[0] not in "bB" or w[-1] not in "bB":
        return None
    return -lead, word_from_reduced_letters(w), p, s, q, trail


def classify_second_mofp(phi: Endomorphism) -> Optional[Word]:
    """For phi fixing a (injective, non-surjective, det ±1), the second
    maximal outer fixed point besides [a^{±1}], as a representative word, or
    None when [a^{±1}] is the only one.

    phi(b) is matched against the three possible shapes:
    (i)   phi(b)^e = a^{-j}·W⁻¹·a^p·b^e·a^q·W·a^{j-1} with p+q = 1  -> a·b^e
    (ii)  phi(b)   = a^{-j}·W⁻¹·a^p·b·a^q·W·a^{j-en} with p+q = en  -> b·a^{en}
    (iii) phi(b)   = U⁻¹·b·U with U not a power of a                -> b
    """
    if phi.image_a != _A:
        raise ValueError("classify_second_mofp needs phi(a) = a")
    _require_non_surjective_mono(phi)
    if det(matrix_of(phi)) not in (1, -1):
        raise ValueError("classify_second_mofp needs determinant ±1")

    fb = phi.image_b
    decomp = _central_decomposition(fb)
    if decomp is not None:
        j, _, p, s, q, t = decomp
        if s == 1 and p + q == 1 and t == j - 1:
            return parse_word("ab")
        n = p + q
        if s == 1 and n != 0 and t == j - n:
            return multiply(_B, power(_A, n))
    decomp = _central_decomposition(invert(fb))
    if decomp is not None:
        j, _, p, s, q, t = decomp
        if s == -1 and p + q == 1 and t == j - 1:
            return parse_word("aB")
    if core_of(fb) == _B:
        _, u = cyclic_reduce(fb)
        if stats(u).t_b >= 1:
            return _B
    return None


def _endo_power_capped(psi: Endomorphism, n: int, cap: int = 200_000) -> Optional[Endomorphism]:
    """psi^n, or None when the images outgrow the cap (a budget concern:
    iterated composition of an expanding map can explode exponentially)."""
    phi = psi
    for _ in range(n - 1):
        phi = compose(psi, phi)
        if len(phi.image_a) + len(phi.image_b) > cap:
            return None
    return phi


def mofix_case2(psi: Endomorphism, budget: Budget = DEFAULT_BUDGET) -> MOFixReport:
    """MOFix for det = ±1, in three steps: find an identity psi^p(x) ~ x^q
    within the budget (none found -> Inconclusive; |q| >= 2 -> no fixed
    points at all); rebase so a power of psi fixes x = root and classify its
    second class; finally keep only classes genuinely fixed by psi itself."""
    _require_non_surjective_mono(psi)
    if det(matrix_of(psi)) not in (1, -1):
        raise ValueError("determinant != ±1 belongs to the linear-algebra path")

    hit = bs_identity_search(psi, budget)
    if hit is None:
        return MOFixReport((), INCONCLUSIVE)
    witness = (hit.p, hit.x)
    if abs(hit.q) >= 2:
        return _report([], witness)

    x = root(hit.x)[0]
    chi = _endo_power_capped(psi, 2 * hit.p)
    if chi is None:
        return MOFixReport((), INCONCLUSIVE, witness)
    if not are_conjugate(apply(chi, x), x):
        # the orientation of the identity can obstruct one doubling
        chi = _endo_power_capped(psi, 4 * hit.p)
        if chi is None or not are_conjugate(apply(chi, x), x):
            return MOFixReport((), INCONCLUSIVE, witness)
    if not is_primitive(x):
        return MOFixReport((), INCONCLUSIVE, witness)

    g = conjugacy_witness(x, apply(chi, x))
    phi = compose(inner(invert(g)), chi)
    assert apply(phi, x) == x
    basis = complete_to_basis(x)
    rebased = change_basis(phi, basis)
    assert rebased.image_a == _A

    candidates = [x]
    second = classify_second_mofp(rebased)
    if second is not None:
        candidates.append(apply(basis.alpha, second))
    kept = [z for z in candidates if are_conjugate(apply(psi, z), z)]
    return _report(kept, witness)


def mofix(psi: Endomorphism, budget: Budget = DEFAULT_BUDGET) -> MOFixReport:
    """Maximal outer fixed points of a non-surjective monomorphism."""
    _require_non_surjective_mono(psi)
    if det(matrix_of(psi)) in (1, -1):
        return mofix_case2(psi, budget)
    return mofix_case1(psi)


def brute_mofix_oracle(psi: Endomorphism, max_len: int) -> set[CyclicWord]:
    """All classes [w] with psi(w) ~ w and w not a proper power, for
    cyclically reduced w with |w| <= max_len, up to inversion."""
    found: set[CyclicWord] = set()
    for w in enumerate_words(max_len):
        if core_of(w) != w:
            continue
        if root(w)[1] != 1:
            continue
        if are_conjugate(apply(psi, w), w):
            found.add(class_up_to_inversion(w))
    return found
