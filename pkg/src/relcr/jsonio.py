"""JSON codecs for the wire formats.

Rationals travel as strings "p/q" (or "p" when the denominator is 1);
matrices as row-major arrays of arrays of such strings.  Subspace bases are
canonicalized on load, so a round trip normalizes the presentation.
"""

from __future__ import annotations

from fractions import Fraction

from .exactlin import RatMatrix, Subspace, rat, rat_str
from .flags import Flag, GroupH


def matrix_to_json(m: RatMatrix) -> list:
    return [[rat_str(x) for x in m.row(i)] for i in range(m.rows)]


def matrix_from_json(data, cols_hint=None) -> RatMatrix:
    if not isinstance(data, list):
        raise ValueError("matrix must be an array of arrays")
    if not data:
        if cols_hint is None:
            raise ValueError("cannot infer width of an empty matrix")
        return RatMatrix(0, cols_hint, ())
    try:
        return RatMatrix.from_rows([[rat(x) for x in row] for row in data])
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ValueError(f"malformed matrix: {exc}") from exc


def vector_to_json(v) -> list:
    return [rat_str(rat(x)) for x in v]


def vector_from_json(data) -> tuple:
    return tuple(rat(x) for x in data)


def subspace_to_json(s: Subspace) -> list:
    return matrix_to_json(s.basis)


def subspace_from_json(data, ambient_dim: int) -> Subspace:
    m = matrix_from_json(data, cols_hint=ambient_dim)
    if m.cols != ambient_dim:
        raise ValueError("subspace basis width does not match ambient dimension")
    return Subspace.span(ambient_dim, m.row_list())


def flag_to_json(f: Flag) -> dict:
    return {"ambient_dim": f.ambient_dim, "chain": [subspace_to_json(s) for s in f.chain]}


def flag_from_json(data) -> Flag:
    n = int(data["ambient_dim"])
    chain = tuple(subspace_from_json(m, n) for m in data.get("chain", []))
    return Flag(n, chain)


def group_to_json(h: GroupH) -> dict:
    return {"ambient_dim": h.ambient_dim, "generators": [matrix_to_json(g) for g in h.generators]}


def group_from_json(data) -> GroupH:
    n = int(data["ambient_dim"])
    gens = tuple(matrix_from_json(g) for g in data.get("generators", []))
    return GroupH(n, gens)
