from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relcr.exactlin import RatMatrix, Subspace
from relcr.flags import (
    Flag,
    GradedDecomposition,
    GroupH,
    flag_coarser_eq,
    is_stable,
    stabilizes_decomposition,
    subspace_is_stable,
    verify_opposite,
)


def coord(n, *idxs):
    return Subspace.coordinate(n, [i - 1 for i in idxs])


def test_flag_validation():
    with pytest.raises(ValueError):
        Flag.of(3, (Subspace.full(3),))
    with pytest.raises(ValueError):
        Flag.of(3, (coord(3, 1, 2), coord(3, 1)))
    f = Flag.of(3, (coord(3, 1), coord(3, 1, 2)))
    assert f.dims() == (1, 2)


def test_coarser_eq():
    f12 = Flag.of(3, (coord(3, 1), coord(3, 1, 2)))
    assert flag_coarser_eq(Flag.trivial(3), f12)
    assert flag_coarser_eq(Flag.of(3, (coord(3, 1),)), f12)
    assert not flag_coarser_eq(Flag.of(3, (coord(3, 2),)), f12)


def test_is_stable_trivial_group():
    assert is_stable(Flag.of(2, (coord(2, 1),)), GroupH.trivial(2))


def test_is_stable_eigenvector_and_permutation():
    diag = GroupH.of(2, [[[1, 0], [0, 2]]])
    assert is_stable(Flag.of(2, (coord(2, 1),)), diag)
    swap = GroupH.of(2, [[[0, 1], [1, 0]]])
    assert not is_stable(Flag.of(2, (coord(2, 1),)), swap)


def test_verify_opposite_lines():
    f1 = Flag.of(2, (coord(2, 1),))
    f2 = Flag.of(2, (coord(2, 2),))
    dec = verify_opposite(f1, f2)
    assert dec is not None
    assert dec.pieces == (coord(2, 1), coord(2, 2))
    assert verify_opposite(f1, f1) is None


def test_verify_opposite_two_step():
    # the opposite pair of the type-{1,3} flag in Q^4
    f1 = Flag.of(4, (coord(4, 1), coord(4, 1, 2, 3)))
    f2 = Flag.of(4, (coord(4, 4), coord(4, 2, 3, 4)))
    dec = verify_opposite(f1, f2)
    assert dec is not None
    assert dec.pieces == (coord(4, 1), coord(4, 2, 3), coord(4, 4))


def test_verify_opposite_symmetry():
    f1 = Flag.of(4, (coord(4, 1), coord(4, 1, 2, 3)))
    f2 = Flag.of(4, (coord(4, 4), coord(4, 2, 3, 4)))
    d12 = verify_opposite(f1, f2)
    d21 = verify_opposite(f2, f1)
    assert d12 is not None and d21 is not None
    assert d21.pieces == tuple(reversed(d12.pieces))
    # non-opposite stays non-opposite after swapping
    g = Flag.of(4, (coord(4, 1), coord(4, 1, 2, 4)))
    assert verify_opposite(f1, g) is None and verify_opposite(g, f1) is None


def test_verify_opposite_skew_basis():
    # opposite complements need not be coordinate spans
    f1 = Flag.of(4, (coord(4, 1), coord(4, 1, 2, 3)))
    w2 = Subspace.span(4, [[0, 1, 0, 0], [1, 0, 1, 0], [0, 0, 0, 1]])
    f2 = Flag.of(4, (coord(4, 4), w2))
    dec = verify_opposite(f1, f2)
    assert dec is not None
    assert dec.pieces[0] == coord(4, 1)
    assert dec.pieces[2] == coord(4, 4)
    assert dec.pieces[1].dim == 2


def test_stabilizes_decomposition():
    swap = GroupH.of(3, [[[0, 1, 0], [1, 0, 0], [0, 0, 1]]])
    assert stabilizes_decomposition(GradedDecomposition(3, (coord(3, 1, 2), coord(3, 3))), swap)
    assert not stabilizes_decomposition(GradedDecomposition(3, (coord(3, 1), coord(3, 2), coord(3, 3))), swap)
    assert stabilizes_decomposition(GradedDecomposition(3, (coord(3, 1), coord(3, 2), coord(3, 3))), GroupH.trivial(3))


small = st.integers(min_value=-2, max_value=2)


@st.composite
def group_and_flag(draw):
    n = draw(st.integers(min_value=2, max_value=4))
    gens = []
    for _ in range(draw(st.integers(min_value=1, max_value=2))):
        rows = [[draw(small) for _ in range(n)] for _ in range(n)]
        m = RatMatrix.from_rows(rows)
        if not m.is_invertible():
            m = RatMatrix.identity(n)
        gens.append(m)
    h = GroupH(n, tuple(gens))
    k = draw(st.integers(min_value=1, max_value=n - 1))
    s = Subspace.span(n, [[draw(small) for _ in range(n)] for _ in range(k)])
    return h, s


@given(group_and_flag(), st.randoms(use_true_random=False))
@settings(max_examples=50, deadline=None)
def test_stability_invariant_under_words(hs, rng):
    # stability under generators equals stability under random words in them
    h, s = hs
    stable = subspace_is_stable(s, h)
    word = RatMatrix.identity(h.ambient_dim)
    for _ in range(rng.randint(1, 4)):
        g = h.generators[rng.randrange(len(h.generators))]
        word = word * (g.inverse() if rng.random() < 0.5 else g)
    word_group = GroupH(h.ambient_dim, (word,))
    if stable:
        assert subspace_is_stable(s, word_group)
