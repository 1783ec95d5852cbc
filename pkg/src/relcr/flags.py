"""Flags of subspaces as stand-ins for the parabolic subgroups of GL(V).

A flag is a strictly increasing chain of proper nonzero subspaces; the whole
space is implicit at the top and the empty chain is the trivial flag (whose
stabilizer is all of GL(V)).  The coarsening order, stability under a matrix
group, opposition and the induced graded decomposition are all decided by
exact linear algebra on the chains.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .exactlin import (
    RatMatrix,
    Subspace,
    image_under,
    subspace_contains,
    subspace_intersect,
    subspace_sum,
)


@dataclass(frozen=True)
class Flag:
    ambient_dim: int
    chain: tuple  # tuple of Subspace, strictly increasing, dims in (0, n)

    def __post_init__(self):
        prev = None
        for s in self.chain:
            if not isinstance(s, Subspace) or s.ambient_dim != self.ambient_dim:
                raise ValueError("chain members must be subspaces of the ambient space")
            if s.dim == 0 or s.dim == self.ambient_dim:
                raise ValueError("chain members must be proper and nonzero")
            if prev is not None:
                if not (subspace_contains(s, prev) and prev.dim < s.dim):
                    raise ValueError("chain must be strictly increasing")
            prev = s

    @staticmethod
    def of(ambient_dim: int, subspaces: Sequence[Subspace]) -> "Flag":
        return Flag(ambient_dim, tuple(subspaces))

    @staticmethod
    def trivial(ambient_dim: int) -> "Flag":
        return Flag(ambient_dim, ())

    @property
    def is_trivial(self) -> bool:
        return not self.chain

    @property
    def length(self) -> int:
        return len(self.chain)

    def dims(self) -> tuple:
        return tuple(s.dim for s in self.chain)


@dataclass(frozen=True)
class GroupH:
    """A finitely generated subgroup of GL_n(Q), given by its generators.

    Stability of a subspace under the group generated (equivalently, under its
    Zariski closure) is stability under every generator, which is what every
    checker here tests.  The empty generator list is the trivial group.
    """

    ambient_dim: int
    generators: tuple  # tuple of invertible RatMatrix

    def __post_init__(self):
        for g in self.generators:
            if g.rows != self.ambient_dim or g.cols != self.ambient_dim:
                raise ValueError("generator shape mismatch")
            if not g.is_invertible():
                raise ValueError("generators must be invertible")

    @staticmethod
    def of(ambient_dim: int, generators: Sequence) -> "GroupH":
        mats = tuple(g if isinstance(g, RatMatrix) else RatMatrix.from_rows(g) for g in generators)
        return GroupH(ambient_dim, mats)

    @staticmethod
    def trivial(ambient_dim: int) -> "GroupH":
        return GroupH(ambient_dim, ())


@dataclass(frozen=True)
class GradedDecomposition:
    """An ordered decomposition V = V_1 + ... + V_m into independent pieces."""

    ambient_dim: int
    pieces: tuple  # tuple of Subspace

    def __post_init__(self):
        total = Subspace.zero(self.ambient_dim)
        dimsum = 0
        for p in self.pieces:
            if p.ambient_dim != self.ambient_dim:
                raise ValueError("piece of wrong ambient dimension")
            total = subspace_sum(total, p)
            dimsum += p.dim
        if dimsum != self.ambient_dim or total.dim != self.ambient_dim:
            raise ValueError("pieces must be independent and sum to the full space")


def flag_coarser_eq(f1: Flag, f2: Flag) -> bool:
    """The order f1 <= f2: every subspace of f1's chain occurs in f2's chain.

    For GL(V) this is exactly containment of the stabilizers the other way
    around (a coarser flag has the bigger stabilizer).
    """
    if f1.ambient_dim != f2.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    members = set(f2.chain)
    return all(s in members for s in f1.chain)


@lru_cache(maxsize=65536)
def _stable_under(s: Subspace, g: RatMatrix) -> bool:
    return image_under(g, s) == s


def subspace_is_stable(s: Subspace, h: GroupH) -> bool:
    """True iff g.s = s for every generator g of h."""
    if s.ambient_dim != h.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return all(_stable_under(s, g) for g in h.generators)


def is_stable(f: Flag, h: GroupH) -> bool:
    if f.ambient_dim != h.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return all(subspace_is_stable(s, h) for s in f.chain)


def stabilizes_decomposition(d: GradedDecomposition, h: GroupH) -> bool:
    if d.ambient_dim != h.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return all(subspace_is_stable(p, h) for p in d.pieces)


def verify_opposite(f1: Flag, f2: Flag) -> Optional[GradedDecomposition]:
    """Decide opposition of two flags; on success return the graded pieces.

    With chains U_1 < ... < U_m and W_1 < ... < W_m (and the conventions
    U_0 = W_0 = 0, U_{m+1} = W_{m+1} = V), the flags are opposite iff the
    lengths agree, dim W_j = n - dim U_{m+1-j} for all j, and
    U_i  intersect  W_{m+1-i} = 0 for all i.  The pieces are then
    V_i = U_i intersect W_{m+2-i}; their partial sums from the left rebuild
    f1's chain and from the right rebuild f2's chain, which is re-verified
    here rather than trusted.  Returns None if the flags are not opposite.
    """
    if f1.ambient_dim != f2.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if f1.is_trivial or f2.is_trivial:
        raise ValueError("opposition is defined for nonempty flags")
    n = f1.ambient_dim
    m = f1.length
    if f2.length != m:
        return None
    full = Subspace.full(n)

    def u(i: int) -> Subspace:
        return full if i == m + 1 else f1.chain[i - 1]

    def w(j: int) -> Subspace:
        return full if j == m + 1 else f2.chain[j - 1]

    for j in range(1, m + 1):
        if w(j).dim != n - u(m + 1 - j).dim:
            return None
    for i in range(1, m + 1):
        if subspace_intersect(u(i), w(m + 1 - i)).dim != 0:
            return None
    pieces = [subspace_intersect(u(i), w(m + 2 - i)) for i in range(1, m + 2)]
    if sum(p.dim for p in pieces) != n:
        return None
    # graded reconstruction backs the linear test
    acc = Subspace.zero(n)
    for i in range(m):
        acc = subspace_sum(acc, pieces[i])
        if acc != u(i + 1):
            return None
    acc = Subspace.zero(n)
    for j in range(m):
        acc = subspace_sum(acc, pieces[m - j])
        if acc != w(j + 1):
            return None
    return GradedDecomposition(n, tuple(pieces))
