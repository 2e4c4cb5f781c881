"""The abelianization action of an endomorphism of F(a,b) as a 2x2 integer
matrix, and the linear algebra used when its determinant is not ±1.

Convention: row vectors.  The exponent-sum vector of a word transforms as
sigma(phi(w)) = sigma(w) · matrix_of(phi), where row 1 of the matrix is the
exponent-sum pair of phi(a) and row 2 that of phi(b).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from .words import Endomorphism, sigma


@dataclass(frozen=True)
class IntMat2:
    m11: int
    m12: int
    m21: int
    m22: int

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.m11, self.m12), (self.m21, self.m22)


IDENTITY_MAT = IntMat2(1, 0, 0, 1)


def matrix_of(phi: Endomorphism) -> IntMat2:
    (a1, a2), (b1, b2) = sigma(phi.image_a), sigma(phi.image_b)
    return IntMat2(a1, a2, b1, b2)


def det(m: IntMat2) -> int:
    return m.m11 * m.m22 - m.m12 * m.m21


def mat_mul(m: IntMat2, n: IntMat2) -> IntMat2:
    return IntMat2(
        m.m11 * n.m11 + m.m12 * n.m21,
        m.m11 * n.m12 + m.m12 * n.m22,
        m.m21 * n.m11 + m.m22 * n.m21,
        m.m21 * n.m12 + m.m22 * n.m22,
    )


def vec_mat(v: tuple[int, int], m: IntMat2) -> tuple[int, int]:
    p, q = v
    return p * m.m11 + q * m.m21, p * m.m12 + q * m.m22


def solve_fixed_vector(m: IntMat2) -> Optional[tuple[int, int]]:
    """The normalized coprime row vector (p, q) with (p,q)(M - I) = (0,0).

    Only meaningful when det(M) != ±1; in that case a nonzero solution
    exists iff det(M - I) = 0, and it is unique up to scaling.
    Normalization: divide by the gcd, require p >= 0, and q = +1 when p = 0.
    """
    if det(m) in (1, -1):
        raise ValueError("solve_fixed_vector requires |det| != 1")
    m_minus_i = IntMat2(m.m11 - 1, m.m12, m.m21, m.m22 - 1)
    if det(m_minus_i) != 0:
        return None
    if (m.m11, m.m21) != (1, 0):
        p0, q0 = -m.m21, m.m11 - 1
    else:
        p0, q0 = m.m22 - 1, -m.m12
    assert (p0, q0) != (0, 0)
    g = gcd(p0, q0)
    p0, q0 = p0 // g, q0 // g
    if p0 < 0 or (p0 == 0 and q0 < 0):
        p0, q0 = -p0, -q0
    return p0, q0
