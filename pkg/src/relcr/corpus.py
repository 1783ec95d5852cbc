"""Golden scenarios and the matrix-group builders they rely on.

The builders produce finite generator sets whose Zariski closures are the
classical test subjects: flag stabilizers (parabolic subgroups), block
diagonal Levi subgroups, tori and symplectic transvection groups.  All
stability checks in this library are generator-wise, so any generating set
that is dense in the intended subgroup gives the same answers.
"""

from __future__ import annotations

from fractions import Fraction

from .exactlin import RatMatrix, Subspace
from .flags import GroupH


def elementary(n: int, i: int, j: int, c=1) -> RatMatrix:
    """I + c E_ij (0-based indices, i != j)."""
    if i == j:
        raise ValueError("off-diagonal index pair required")
    rows = [[Fraction(1) if a == b else Fraction(0) for b in range(n)] for a in range(n)]
    rows[i][j] = Fraction(c)
    return RatMatrix.from_rows(rows)


def dilation(n: int, i: int, c=2) -> RatMatrix:
    rows = [[Fraction(1) if a == b else Fraction(0) for b in range(n)] for a in range(n)]
    rows[i][i] = Fraction(c)
    return RatMatrix.from_rows(rows)


def diagonal_matrix(entries) -> RatMatrix:
    n = len(entries)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i, e in enumerate(entries):
        rows[i][i] = Fraction(e)
    return RatMatrix.from_rows(rows)


def coordinate_flag_stabilizer(n: int, levels) -> GroupH:
    """Generators dense in the stabilizer of the coordinate flag whose j-th
    step spans the coordinates of level <= j.  levels: per-coordinate level,
    0-based coordinates, levels need not start at any particular value."""
    if len(levels) != n:
        raise ValueError("need one level per coordinate")
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j and levels[i] <= levels[j]:
                gens.append(elementary(n, i, j))
    for i in range(n):
        gens.append(dilation(n, i))
    return GroupH(n, tuple(gens))


def subspace_stabilizer(n: int, coords) -> GroupH:
    """Stabilizer of the coordinate span of the given 0-based coordinates:
    the maximal parabolic Stab(<e_c : c in coords>)."""
    inside = set(coords)
    levels = [1 if c in inside else 2 for c in range(n)]
    return coordinate_flag_stabilizer(n, levels)


def block_diagonal_group(n: int, blocks) -> GroupH:
    """Generators dense in GL(block_1) x ... x GL(block_m), block diagonal."""
    gens = []
    covered = set()
    for block in blocks:
        for i in block:
            for j in block:
                if i != j:
                    gens.append(elementary(n, i, j))
        covered |= set(block)
    if covered != set(range(n)):
        raise ValueError("blocks must cover all coordinates")
    for i in range(n):
        gens.append(dilation(n, i))
    return GroupH(n, tuple(gens))


def symplectic_transvection(gram: RatMatrix, v) -> RatMatrix:
    """T_v : x -> x + omega(x, v) v, an isometry of the alternating form."""
    n = gram.rows
    vv = [Fraction(x) for x in v]
    jv = gram.apply(vv)  # omega(e_j, v) = (J v)_j with the convention omega(x, y) = x^T J y
    rows = [[Fraction(1) if a == b else Fraction(0) for b in range(n)] for a in range(n)]
    for i in range(n):
        for j in range(n):
            rows[i][j] += vv[i] * jv[j]
    return RatMatrix.from_rows(rows)


# ---------------------------------------------------------------------------
# the golden corpus


def example43_torus():
    from .toruscr import TorusK

    return TorusK.of(4, [[1, 0, 0, -1], [0, 1, -1, 0]])


def standard_symplectic_q4():
    from .structcr import BilinForm

    return BilinForm(
        4,
        RatMatrix.from_rows([[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]]),
        "symplectic",
    )


def _run_example43_flags():
    from collections import Counter

    from .toruscr import enumerate_flag_types, flag_of_type, minimal_flags

    k = example43_torus()
    counts = Counter(flag_of_type(ft, k).dims() for ft, _ in enumerate_flag_types(k))
    if counts != Counter({(1, 2, 3): 8, (2,): 4, (1, 3): 4, (): 1}):
        return False, f"unexpected flag dimension census {dict(counts)}"
    lengths = {len(flag_of_type(ft, k).dims()) for ft, _ in minimal_flags(k)}
    if lengths != {1, 2}:
        return False, f"minimal flag lengths {lengths}"
    return True, "flag patterns (2,4), (1,3,4), (1,2,3,4); minimal lengths 1 and 2"


def _run_example43_verdicts():
    from .exactlin import Subspace
    from .structcr import stable_complements
    from .toruscr import relcr_torus_crosscheck

    k = example43_torus()
    h = subspace_stabilizer(4, [0, 1, 2])
    rep = relcr_torus_crosscheck(h, k)
    if not rep.relcr:
        return False, "Stab(<e1,e2,e3>) should be relatively cr (trivially)"
    fam = stable_complements(Subspace.coordinate(4, [0, 1, 2]), h)
    if not fam.is_empty:
        return False, "the flag stabilizer must not stabilize any complement"
    return True, "relatively cr by all three checkers; no stable complement of <e1,e2,e3>"


def _run_section4_product():
    from .toruscr import TorusK, relcr_torus_crosscheck

    k = example43_torus()
    k1 = TorusK.of(4, [[1, 0, 0, 0], [0, 1, 0, 0]])
    k2 = TorusK.of(4, [[0, 0, 1, 0], [0, 0, 0, 1]])
    h = subspace_stabilizer(4, [1, 3])
    got = (
        relcr_torus_crosscheck(h, k).relcr,
        relcr_torus_crosscheck(h, k1).relcr,
        relcr_torus_crosscheck(h, k2).relcr,
    )
    if got != (False, True, True):
        return False, f"Stab<e2,e4> verdicts (K, K1, K2) = {got}"
    ht = subspace_stabilizer(4, [0])
    got2 = (relcr_torus_crosscheck(ht, k).relcr, relcr_torus_crosscheck(ht, k1).relcr)
    if got2 != (True, False):
        return False, f"Stab<e1> verdicts (K, K1) = {got2}"
    return True, "both directions of the product criterion fail without its hypotheses"


def _run_cor47_positive():
    import random

    from .flags import GroupH
    from .toruscr import TorusK, relcr_torus_product

    rng = random.Random(29)
    for _ in range(10):
        while True:
            a = [[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)]
            b = [[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)]
            ma, mb = RatMatrix.from_rows(a), RatMatrix.from_rows(b)
            if ma.is_invertible() and mb.is_invertible():
                break
        rows = [list(ma.row(0)) + [0, 0], list(ma.row(1)) + [0, 0],
                [0, 0] + list(mb.row(0)), [0, 0] + list(mb.row(1))]
        h = GroupH.of(4, [rows])
        k1 = TorusK.of(4, [[1, 0, 0, 0], [0, 1, 0, 0]])
        k2 = TorusK.of(4, [[0, 0, 1, 0], [0, 0, 0, 1]])
        rep = relcr_torus_product(h, [k1, k2])
        if not rep.equivalence_asserted:
            return False, "hypotheses should hold for block-diagonal H"
        if rep.joint_verdict != (rep.factor_verdicts[0] and rep.factor_verdicts[1]):
            return False, "product verdict differs from factor conjunction"
    return True, "product verdict equals factor conjunction on block-diagonal samples"


def _classical_pool(h, b):
    from .structcr import build_pool, form_adjoint

    return build_pool(h, extra_gens=tuple(form_adjoint(g, b) for g in h.generators))


def _run_classical_irreducible():
    from .flags import GroupH
    from .structcr import RELCR_WITNESSED, relcr_classical

    b = standard_symplectic_q4()
    vs = ([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 1, 1])
    h = GroupH(4, tuple(symplectic_transvection(b.gram, v) for v in vs))
    verdict = relcr_classical(h, b, _classical_pool(h, b))
    if verdict.value != RELCR_WITNESSED or verdict.witnesses:
        return False, f"expected vacuous witness, got {verdict.value}"
    return True, "irreducible symplectic group: relatively cr vacuously"


def _run_classical_parabolic():
    from .structcr import NOT_RELCR_WITNESSED, recheck_refutation, relcr_classical

    b = standard_symplectic_q4()
    h = coordinate_flag_stabilizer(4, (1, 2, 2, 3))
    verdict = relcr_classical(h, b, _classical_pool(h, b))
    if verdict.value != NOT_RELCR_WITNESSED:
        return False, f"expected a refutation, got {verdict.value}"
    entry = next(e for e in verdict.witnesses if "proof" in e)
    if not recheck_refutation(entry, h, b):
        return False, "refutation proof failed its independent recheck"
    return True, "flag stabilizer refuted with an exact emptiness proof (re-verified)"


def _run_classical_diagonal():
    from .flags import GroupH
    from .structcr import RELCR_WITNESSED, relcr_classical

    b = standard_symplectic_q4()
    h = GroupH(4, (diagonal_matrix([2, 3, Fraction(1, 3), Fraction(1, 2)]),))
    verdict = relcr_classical(h, b, _classical_pool(h, b))
    if verdict.value != RELCR_WITNESSED or not verdict.witnesses:
        return False, f"expected coordinate witnesses, got {verdict.value}"
    if not all(e["checks"]["flags_opposite"] for e in verdict.witnesses):
        return False, "a witness pair failed the opposition check"
    return True, "every stable isotropic coordinate subspace has its dual partner"


def _run_g2_fixture():
    from .g2model import fixture_matches_build, g2_data
    from .toruscr import enumerate_flag_types, flag_of_type

    if not fixture_matches_build():
        return False, "shipped fixture differs from the rebuilt model"
    d = g2_data()
    patterns = {
        flag_of_type(ft, d.torus).dims()
        for ft, _ in enumerate_flag_types(d.torus)
        if not ft.is_trivial
    }
    if patterns != {(2, 5), (1, 3, 4, 6), (1, 2, 3, 4, 5, 6)}:
        return False, f"torus flag patterns {patterns}"
    return True, "fixture reproducible; torus patterns {2,5}, {1,3,4,6}, {1..6}"


def _run_g2_delta():
    from .exactlin import Subspace
    from .g2model import delta, g2_data, is_doubly_singular

    d = g2_data()
    for i in (0, 1, 2, 4, 5, 6):
        u = Subspace.coordinate(7, [i])
        if not is_doubly_singular(u, d):
            return False, f"coordinate line e{i + 1} should be doubly singular"
        if delta(u, d).dim != 3:
            return False, f"delta of e{i + 1} is not 3-dimensional"
    if is_doubly_singular(Subspace.coordinate(7, [3]), d):
        return False, "the zero-weight line must not be doubly singular"
    return True, "delta is 3-dimensional on every doubly singular coordinate line"


def _run_g2_levi():
    from .g2model import g2_data, relcr_g2
    from .structcr import RELCR_WITNESSED

    d = g2_data()
    h = block_diagonal_group(7, [[0, 1], [2, 3, 4], [5, 6]])
    pool = _classical_pool(h, d.bilinear)
    verdict = relcr_g2(h, d, pool)
    if verdict.value != RELCR_WITNESSED:
        return False, f"expected a witnessed positive verdict, got {verdict.value}"
    dims = {e["u_dim"] for e in verdict.witnesses}
    if dims != {2}:
        return False, f"witness dimensions {dims}"
    return True, "GL2 x GL3 x GL2 witnessed through the coordinate opposite {2,5} flag"


CORPUS = (
    ("example43_flags", _run_example43_flags),
    ("example43_verdicts", _run_example43_verdicts),
    ("section4_product", _run_section4_product),
    ("cor47_positive", _run_cor47_positive),
    ("classical_irreducible", _run_classical_irreducible),
    ("classical_parabolic", _run_classical_parabolic),
    ("classical_diagonal", _run_classical_diagonal),
    ("g2_fixture", _run_g2_fixture),
    ("g2_delta", _run_g2_delta),
    ("g2_levi", _run_g2_levi),
)


def run_corpus(name_filter: str = ""):
    """Run the golden corpus; yields (name, passed, detail)."""
    for name, fn in CORPUS:
        if name_filter and name_filter not in name:
            continue
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"exception: {exc}"
        yield name, ok, detail
