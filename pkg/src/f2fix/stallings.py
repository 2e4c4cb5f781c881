"""Stallings subgroup graphs for finitely generated subgroups of F(a,b).

A folded graph answers rank, membership and basis queries for the subgroup
generated by a list of words, and classifies endomorphisms as injective
and/or surjective.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .words import (
    Endomorphism,
    Word,
    invert_letters,
    reduce,
    word_from_reduced_letters,
)

_GENS = ("a", "b")


@dataclass(frozen=True)
class FoldedGraph:
    """A folded, core Stallings graph with basepoint 0.

    ``out[(v, g)]`` is the endpoint of the g-labeled edge leaving v;
    ``inn[(v, g)]`` the origin of the g-labeled edge entering v.
    """

    vertices: frozenset[int]
    out: dict[tuple[int, str], int]
    inn: dict[tuple[int, str], int] = field(repr=False, default_factory=dict)
    basepoint: int = 0

    def rank(self) -> int:
        return len(self.out) - len(self.vertices) + 1


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        p = self.parent.setdefault(x, x)
        if p != x:
            p = self.parent[x] = self.find(p)
        return p

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        # keep the basepoint's representative stable at 0 when involved
        if ry == 0:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


def fold(gens: list[Word]) -> FoldedGraph:
    """The folded core graph of the subgroup generated by the given words."""
    edges: set[tuple[int, str, int]] = set()
    next_id = 1
    for w in gens:
        letters = w.letters()
        cur = 0
        for i, ch in enumerate(letters):
            nxt = 0 if i == len(letters) - 1 else next_id
            if nxt != 0:
                next_id += 1
            if ch in _GENS:
                edges.add((cur, ch, nxt))
            else:
                edges.add((nxt, ch.lower(), cur))
            cur = nxt

    uf = _UnionFind()
    uf.find(0)
    changed = True
    while changed:
        changed = False
        canon = {(uf.find(u), lab, uf.find(v)) for u, lab, v in edges}
        out_seen: dict[tuple[int, str], int] = {}
        in_seen: dict[tuple[int, str], int] = {}
        for u, lab, v in canon:
            if (u, lab) in out_seen and out_seen[(u, lab)] != v:
                uf.union(out_seen[(u, lab)], v)
                changed = True
            else:
                out_seen[(u, lab)] = v
            if (v, lab) in in_seen and in_seen[(v, lab)] != u:
                uf.union(in_seen[(v, lab)], u)
                changed = True
            else:
                in_seen[(v, lab)] = u
        edges = canon

    edges = {(uf.find(u), lab, uf.find(v)) for u, lab, v in edges}
    base = uf.find(0)
    vertices = {base} | {u for u, _, _ in edges} | {v for _, _, v in edges}

    # core-prune: drop non-basepoint vertices of degree <= 1
    while True:
        degree: dict[int, int] = {v: 0 for v in vertices}
        for u, _, v in edges:
            degree[u] += 1
            degree[v] += 1
        hairs = {v for v in vertices if v != base and degree[v] <= 1}
        if not hairs:
            break
        edges = {e for e in edges if e[0] not in hairs and e[2] not in hairs}
        vertices -= hairs

    # relabel so the basepoint is 0 and vertices are consecutive
    order = {base: 0}
    for v in sorted(vertices):
        order.setdefault(v, len(order))
    out = {(order[u], lab): order[v] for u, lab, v in edges}
    inn = {(order[v], lab): order[u] for u, lab, v in edges}
    return FoldedGraph(frozenset(order.values()), out, inn)


def rank(g: FoldedGraph) -> int:
    return g.rank()


def _walk(g: FoldedGraph, start: int, ch: str) -> Optional[int]:
    if ch in _GENS:
        return g.out.get((start, ch))
    return g.inn.get((start, ch.lower()))


def contains(g: FoldedGraph, w: Word) -> bool:
    """Generalised word problem: is w in the subgroup represented by g?"""
    cur: Optional[int] = g.basepoint
    for ch in w.letters():
        cur = _walk(g, cur, ch)
        if cur is None:
            return False
    return cur == g.basepoint


def subgroup_basis(g: FoldedGraph) -> list[Word]:
    """A free basis, one word per edge outside a breadth-first spanning tree.

    Deterministic edge order at each vertex: a-forward, a-backward,
    b-forward, b-backward.
    """
    path: dict[int, str] = {g.basepoint: ""}
    queue = [g.basepoint]
    tree_edges: set[tuple[int, str, int]] = set()
    visit_order: list[tuple[int, str, int, str]] = []  # (u, lab, v, letter)
    while queue:
        u = queue.pop(0)
        for lab in _GENS:
            for forward in (True, False):
                v = g.out.get((u, lab)) if forward else g.inn.get((u, lab))
                if v is None:
                    continue
                edge = (u, lab, v) if forward else (v, lab, u)
                letter = lab if forward else lab.upper()
                visit_order.append((u, letter, v, lab))
                if v not in path:
                    path[v] = path[u] + letter
                    tree_edges.add(edge)
                    queue.append(v)

    basis: list[Word] = []
    used: set[tuple[int, str, int]] = set()
    for u, letter, v, lab in visit_order:
        edge = (u, lab, v) if letter.islower() else (v, lab, u)
        if edge in tree_edges or edge in used:
            continue
        used.add(edge)
        eu, elab, ev = edge
        w = reduce(path[eu] + elab + invert_letters(path[ev]))
        if w:
            basis.append(w)
    return basis


def is_injective(phi: Endomorphism) -> bool:
    """An endomorphism of F(a,b) is injective iff its images generate a
    rank-2 subgroup (Hopf property)."""
    return fold([phi.image_a, phi.image_b]).rank() == 2


def is_surjective(phi: Endomorphism) -> bool:
    g = fold([phi.image_a, phi.image_b])
    return len(g.vertices) == 1 and g.rank() == 2
