"""Twisted conjugacy for endomorphisms of F(a,b) fixing the generator a.

For a word Z, let phi_Z be the endomorphism a -> a, b -> Z.  This module
decides whether a word P and a power a^k are phi_Z-twisted conjugate,
i.e. whether P = phi_Z(W)·a^k·W⁻¹ for some W, and produces a witness W.

The solver normalizes Z to the shape Z0⁻¹·Z1·Z0·a^q (no leading a-power),
computes bounds on the syllable count and syllable lengths of a minimal
witness, and runs a breadth-first search over the reduced words
Q = phi_Z(W)⁻¹·P·W, extending W one letter at a time.  The search is
exhaustive within the bounds, so a None answer is definitive.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .stallings import FoldedGraph, fold, is_surjective
from .words import (
    IDENTITY,
    Endomorphism,
    Word,
    apply,
    cyclic_reduce,
    enumerate_words,
    invert,
    invert_letters,
    multiply,
    parse_word,
    power,
    sigma,
    stats,
    word_from_reduced_letters,
)

_INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}
_A = parse_word("a")


def _traces_in(graph: FoldedGraph, letters: str) -> bool:
    """Whether the reduced letter string spells a path from the basepoint."""
    cur = graph.basepoint
    for ch in letters:
        if ch in ("a", "b"):
            nxt = graph.out.get((cur, ch))
        else:
            nxt = graph.inn.get((cur, ch.lower()))
        if nxt is None:
            return False
        cur = nxt
    return True


def _concat_reduced(x: str, y: str) -> str:
    """Product of two reduced letter strings; cancellation can only happen
    at the junction, so only the junction is scanned."""
    i = 0
    limit = min(len(x), len(y))
    while i < limit and x[len(x) - 1 - i] == _INVERSE[y[i]]:
        i += 1
    return x[: len(x) - i] + y[i:]


@dataclass(frozen=True)
class TwistedInstance:
    """A twisted-conjugacy instance: is p = phi_z(W)·a^k·W⁻¹ solvable?"""

    p: Word
    z: Word
    k: int


@dataclass(frozen=True)
class ZDecomposition:
    """The normalized shape z = z0⁻¹·z1·z0·a^q, reduced as written, with z1
    cyclically reduced; ``shift`` records the leading a-power absorbed from
    the original z during normalization."""

    z0: Word
    z1: Word
    q: int
    shift: int

    def z_length(self) -> int:
        return 2 * len(self.z0) + len(self.z1) + abs(self.q)


def phi_of(z: Word) -> Endomorphism:
    """The endomorphism a -> a, b -> z."""
    return Endomorphism(_A, z)


def _require_injective(z: Word) -> None:
    if stats(z).t_b == 0:
        raise ValueError(f"phi_Z is not injective: Z = {z} is a power of a")


def _require_proper(z: Word) -> None:
    _require_injective(z)
    if is_surjective(phi_of(z)):
        raise ValueError(f"phi_Z is surjective for Z = {z}")


def normalize_instance(
    p: Word, z: Word, k: int
) -> tuple[TwistedInstance, ZDecomposition]:
    """Absorb the leading a-power q0 of z: the instance (p, z, k) has the
    same witnesses as (a^{-q0}·p, z'·a^{q0}, k - q0), where z = a^{q0}·z'.

    Also splits the normalized z as z0⁻¹·z1·z0·a^q with z1 cyclically
    reduced.  Raises ValueError when z is a power of a (phi_z not injective).
    """
    _require_injective(z)
    syl = z.syllables
    q0 = syl[0][1] if syl[0][0] == "a" else 0
    if q0:
        a_q0 = power(_A, q0)
        p = multiply(invert(a_q0), p)
        z = multiply(Word(syl[1:]), a_q0)
        k = k - q0

    zsyl = z.syllables
    if zsyl[-1][0] == "a":
        q = zsyl[-1][1]
        middle = Word(zsyl[:-1])
    else:
        q = 0
        middle = z
    _, g = cyclic_reduce(middle)
    z0 = g
    z1 = multiply(multiply(g, middle), invert(g))

    decomposition = ZDecomposition(z0, z1, q, q0)
    # reassembly must reproduce z with no cancellation
    assert decomposition.z_length() == len(z)
    reassembled = multiply(multiply(invert(z0), z1), multiply(z0, power(_A, q)))
    assert reassembled == z
    return TwistedInstance(p, z, k), decomposition


def syllable_count_bound(p: Word, zdec: ZDecomposition, k: int) -> int:
    """An upper bound on the syllable count of any witness W ending in a
    b-syllable, for the normalized instance (p, z, k).

    The universal bound is 12·|z|·|p| + 2|k|; sharper bounds apply when the
    trailing a-power q vanishes, when z1 has more than one b-letter, or when
    z1 is a pure a-power and z0 has a long b-syllable.
    """
    z_len = zdec.z_length()
    candidates = [12 * z_len * len(p) + 2 * abs(k)]
    z1_stats = stats(zdec.z1)
    if zdec.q == 0:
        candidates.append(len(p) + 2)
    if z1_stats.t_b > 1:
        candidates.append(2 * (len(p) + abs(k)) + 1)
    if z1_stats.t_b == 0 and zdec.q != 0 and stats(zdec.z0).s_b2 >= 1:
        candidates.append(z_len * len(p))
    return max(min(candidates), 1)


def syllable_length_bound(p: Word, z: Word, s: int) -> int:
    """An upper bound |z|·(s + 2) + |p| on the length of every syllable of a
    witness with at most s syllables (normalized instance)."""
    if s < 1:
        raise ValueError("syllable_length_bound needs s >= 1")
    return len(z) * (s + 2) + len(p)


def check_twisted(p: Word, z: Word, k: int, w: Word) -> bool:
    """Verify p = phi_z(w)·a^k·w⁻¹ by direct substitution."""
    lhs = multiply(multiply(apply(phi_of(z), w), power(_A, k)), invert(w))
    return lhs == p


def solve_twisted(
    p: Word, z: Word, k: int, *, max_nodes: int = 2_000_000
) -> Optional[Word]:
    """A witness W with p = phi_z(W)·a^k·W⁻¹ and W ending in a b-syllable
    (or W = ε when p = a^k), or None when no witness exists.

    Requires phi_z injective and non-surjective.  The search is breadth
    first over the states Q = phi_z(W)⁻¹·p·W, one letter of W at a time,
    accepting when Q = a^k.  Branches are cut when the exponent sums of Q
    cannot be corrected by any remaining tail, and when the witness under
    construction would exceed the syllable-count or syllable-length bound;
    both cuts preserve completeness, so None is a definitive answer.
    """
    _require_proper(z)
    inst, zdec = normalize_instance(p, z, k)
    target = power(_A, inst.k).letters()
    if inst.p.letters() == target:
        return IDENTITY

    b1 = syllable_count_bound(inst.p, zdec, inst.k)
    b2 = syllable_length_bound(inst.p, inst.z, b1)
    depth_cap = b1 * b2

    z_letters = inst.z.letters()
    step_left = {"a": "A", "A": "a", "b": invert_letters(z_letters), "B": z_letters}
    za, zb = sigma(inst.z)
    kk = inst.k

    def admissible(sa: int, sb: int, remaining: int) -> bool:
        # a tail T finishing the witness needs sigma_b(Q) = y·(sigma_b(z)-1)
        # and sigma_a(Q) - y·sigma_a(z) = k, where y = sigma_b(T), |y| <= |T|
        if zb != 1:
            if sb % (zb - 1):
                return False
            y = sb // (zb - 1)
            return sa - y * za == kk and abs(y) <= remaining
        if sb != 0:
            return False
        if za == 0:
            return sa == kk
        return (sa - kk) % za == 0 and abs((sa - kk) // za) <= remaining

    # per-letter change to sigma(Q) when extending W by that letter
    sigma_delta = {"a": (0, 0), "A": (0, 0), "b": (-za, 1 - zb), "B": (za, zb - 1)}

    # Stallings graph of the image subgroup <a, z>.  If the tail T does not
    # begin by cancelling the last letter of the state Q, then Q·T = im(T)·a^k
    # with no cancellation between Q and T; since T ends in a b-letter the
    # a^k can only cancel into the image's trailing a-run, so in fact
    # im(T) = Q·T·a^(-k) with no cancellation at all.  Hence the whole of Q
    # is a prefix of an image word — it must spell a path from the basepoint
    # of this graph — and the next letter of T must extend that path.
    image_graph = fold([_A, inst.z])
    trace_cache: dict[str, Optional[int]] = {}

    def _walk_end(prefix: str) -> Optional[int]:
        """End vertex of the basepoint path spelling prefix, None if absent."""
        cur: Optional[int] = image_graph.basepoint
        for ch in prefix:
            if ch in ("a", "b"):
                cur = image_graph.out.get((cur, ch))
            else:
                cur = image_graph.inn.get((cur, ch.lower()))
            if cur is None:
                return None
        return cur

    def image_prefix_end(q_letters: str) -> Optional[int]:
        if q_letters not in trace_cache:
            trace_cache[q_letters] = _walk_end(q_letters)
        return trace_cache[q_letters]

    # Left-end decode for the non-cancelling regime.  Because the normalized
    # z starts with a b-letter, im(T) spells out as a^(e0)·z0⁻¹·z1^(m)·z0·…
    # where e0 is the leading a-exponent of T and sign(m) matches T's first
    # b-letter.  Reading the leading a-run of Q and comparing what follows
    # against z0⁻¹·z1 (positive) and z0⁻¹·z1⁻¹ (negative) pins down e0 and
    # hence the only letters the tail can start with.
    z0_inv = invert(zdec.z0).letters()
    w_plus = z0_inv + zdec.z1.letters()
    w_minus = z0_inv + invert(zdec.z1).letters()
    forced_cache: dict[str, Optional[str]] = {}

    def forced_first(q_letters: str) -> Optional[str]:
        """Letters the tail may start with in the non-cancelling regime,
        or None when the decode is uninformative."""
        if q_letters not in forced_cache:
            run = 0
            for ch in q_letters:
                if ch == "a":
                    run += 1
                elif ch == "A":
                    run -= 1
                else:
                    break
            rest = q_letters[abs(run):]
            if not rest:
                forced_cache[q_letters] = None  # pure a-power: no forcing
            else:
                allowed = []
                for model, e0, accept in (
                    (w_plus, run, "b"),
                    (w_minus, run + zdec.q, "B"),
                ):
                    n = min(len(rest), len(model))
                    if rest[:n] != model[:n]:
                        continue
                    allowed.append("a" if e0 > 0 else "A" if e0 < 0 else accept)
                forced_cache[q_letters] = "".join(allowed)
        return forced_cache[q_letters]

    # In the non-cancelling regime the whole tail T satisfies, exactly,
    # t_b(phi(T)) = t_b(Q) + t_b(T), while spelling phi(T) out of copies of
    # z gives t_b(phi(T)) >= t_b(z1)·t_b(T) (only whole z0-blocks can cancel,
    # costing 2·t_b(z0) per collapsed junction).  With t_b(z1) >= 2 that caps
    # the number of b-letters left in the tail.
    b_growth = stats(zdec.z1).t_b

    def tail_b_cap(q_letters: str) -> Optional[int]:
        if b_growth < 2:
            return None
        t_b_q = q_letters.count("b") + q_letters.count("B")
        return t_b_q // (b_growth - 1)

    start = inst.p.letters()
    sa0, sb0 = sigma(inst.p)
    if not admissible(sa0, sb0, depth_cap):
        return None

    no_cap = b1 * b2 + 1  # effectively unlimited b-letter budget

    # node: (Q letters, last letter, syllable count, current syllable length,
    #        depth, parent index, sigma_a(Q), sigma_b(Q), b-letter budget)
    nodes: list[tuple[str, str, int, int, int, int, int, int, int]] = [
        (start, "", 0, 0, 0, -1, sa0, sb0, no_cap)
    ]
    queue: deque[int] = deque([0])
    # Pareto fronts of (syllable count, current syllable length, spent
    # b-budget) per state; breadth-first order makes domination sound
    fronts: dict[tuple[str, str], list[tuple[int, int, int]]] = {
        (start, ""): [(0, 0, -no_cap)]
    }

    def witness(parent: int, letter: str) -> Word:
        letters: list[str] = [letter]
        idx = parent
        while idx > 0:
            letters.append(nodes[idx][1])
            idx = nodes[idx][5]
        w = word_from_reduced_letters("".join(reversed(letters)))
        assert check_twisted(p, z, k, w)
        return w

    while queue:
        idx = queue.popleft()
        q_letters, last, scount, cur_len, depth, _, sa, sb, budget = nodes[idx]
        cancel_letter = _INVERSE[q_letters[-1]] if q_letters else ""
        q_prefix_ok = None
        walk_end_vertex: Optional[int] = None
        q_b_cap = -1  # lazily computed tail_b_cap for this state
        for y in "aAbB":
            if last and y == _INVERSE[last]:
                continue
            nbudget = budget
            if y != cancel_letter:
                # non-cancelling move: the whole state must spell a readable
                # prefix of an image word which the next letter extends, the
                # left-end decode must allow the letter, and the remaining
                # tail needs enough b-letters to regrow the state
                if q_prefix_ok is None:
                    end = image_prefix_end(q_letters)
                    q_prefix_ok = end is not None
                    walk_end_vertex = end
                    q_forced = forced_first(q_letters)
                if not q_prefix_ok:
                    continue
                if q_forced is not None and y not in q_forced:
                    continue
                if y in ("a", "b"):
                    step = image_graph.out.get((walk_end_vertex, y))
                else:
                    step = image_graph.inn.get((walk_end_vertex, y.lower()))
                if step is None:
                    continue
                if q_b_cap == -1:
                    q_b_cap = -2 if (cap := tail_b_cap(q_letters)) is None else cap
                if q_b_cap != -2:
                    nbudget = min(nbudget, q_b_cap)
                # |im(T)| = |Q| + |T| + |k| exactly, while spelling gives
                # |im(T)| <= |T| + (|z| - 1)·t_b(T)
                if nbudget * (len(z_letters) - 1) < len(q_letters) + abs(kk):
                    continue
            if y in "bB":
                nbudget -= 1
                if nbudget < 0:
                    continue
            if last and y.lower() == last.lower():
                ns, nl = scount, cur_len + 1
            else:
                ns, nl = scount + 1, 1
            if ns > b1 or nl > b2:
                continue
            da, db = sigma_delta[y]
            nsa, nsb = sa + da, sb + db
            ndepth = depth + 1
            if not admissible(nsa, nsb, depth_cap - ndepth):
                continue
            nq = _concat_reduced(_concat_reduced(step_left[y], q_letters), y)
            if nq == target and y in "bB":
                return witness(idx, y)
            key = (nq, y)
            entry = (ns, nl, -nbudget)
            front = fronts.get(key)
            if front is None:
                fronts[key] = [entry]
            else:
                if any(
                    s0 <= ns and l0 <= nl and g0 <= -nbudget for s0, l0, g0 in front
                ):
                    continue
                front[:] = [e for e in front if not all(n <= o for n, o in zip(entry, e))]
                front.append(entry)
            nodes.append((nq, y, ns, nl, ndepth, idx, nsa, nsb, nbudget))
            queue.append(len(nodes) - 1)
            if len(nodes) > max_nodes:
                raise RuntimeError(
                    "twisted-conjugacy search exceeded the node budget"
                )
    return None


def solve_conjugator_equation(p: Word, z: Word) -> Optional[tuple[Word, int]]:
    """Some (W, k) with p = phi_z(W)·a^k·W⁻¹, or None.

    Any solution has |k| <= |z| or |W| <= |p|, so two phases are complete:
    phase 1 runs solve_twisted for k = 0, 1, -1, ..., |z|, -|z|; phase 2
    scans all W with |W| <= |p| in shortlex order, testing whether
    phi_z(W)⁻¹·p·W is a power of a.
    """
    _require_proper(z)
    for magnitude in range(len(z) + 1):
        for k in ([0] if magnitude == 0 else [magnitude, -magnitude]):
            w = solve_twisted(p, z, k)
            if w is not None:
                return w, k
    phi = phi_of(z)
    for w in itertools.chain([IDENTITY], enumerate_words(len(p))):
        rest = multiply(multiply(invert(apply(phi, w)), p), w)
        if stats(rest).t_b == 0:
            return w, sigma(rest)[0]
    return None


def brute_twisted_oracle(p: Word, z: Word, k: int, max_len: int) -> Optional[Word]:
    """Exhaustively search all reduced W with |W| <= max_len for a witness
    of p = phi_z(W)·a^k·W⁻¹ (depth-first, letters in order a, a⁻¹, b, b⁻¹).

    Maintains the reduced word phi_z(W)⁻¹·p·W incrementally; every returned
    witness also passes check_twisted by construction.
    """
    target = power(_A, k).letters()
    z_letters = z.letters()
    step_left = {"a": "A", "A": "a", "b": invert_letters(z_letters), "B": z_letters}

    def search(q_letters: str, last: str, depth: int, w: str) -> Optional[str]:
        if q_letters == target:
            return w
        if depth == max_len:
            return None
        for y in "aAbB":
            if last and y == _INVERSE[last]:
                continue
            hit = search(
                _concat_reduced(_concat_reduced(step_left[y], q_letters), y),
                y,
                depth + 1,
                w + y,
            )
            if hit is not None:
                return hit
        return None

    found = search(p.letters(), "", 0, "")
    if found is None:
        return None
    w = word_from_reduced_letters(found)
    assert check_twisted(p, z, k, w)
    return w
