import numpy as np
import pytest

from artifact.conic import canonical_cones, enumerate_conic_structures
from artifact.coproduct import square
from artifact.errors import NotAClosureOperator, NotAnEMOrder
from artifact.lattice_core import boolean_frame, chain_frame
from artifact.properties import (
    EMOrder,
    cone_properties,
    em_cones,
    em_isomorphism_suite,
    em_order_from_monads,
    em_respects_meets,
    induced_property_theorem,
    internal_properties,
    property_report,
)
from artifact.relations import diagonal, open_relation, top_relation

S = chain_frame(3)
B = boolean_frame(2)


def sierpinski_R():
    sq = square(S)
    return open_relation(S, sq.frame.index("(a⊗⊤)∨(⊤⊗a)"))


def test_sierpinski_relation_flags():
    flags = internal_properties(sierpinski_R())
    assert flags == {"reflexive": False, "transitive": False,
                     "symmetric": True, "interpolative": True}


def test_diagonal_and_top_have_every_property():
    for frame in (S, B):
        for r in (diagonal(frame), top_relation(frame)):
            report = property_report(r)
            assert all(report.internal.values())
            assert all(report.cone_level.values())


def test_cone_flags_by_hand():
    c = canonical_cones(S, "bottom")            # ↑ = ↓ = constant ⊥
    flags = cone_properties(c)
    assert not flags["inflationary"]
    assert flags["subidempotent"] and flags["equal_cones"] and flags["cone_interpolative"]


@pytest.mark.parametrize("frame", [S, B], ids=["S", "B4"])
def test_induced_property_theorem_on_every_conic_structure(frame):
    seen = set()
    for c in enumerate_conic_structures(frame):
        out = induced_property_theorem(c)
        assert out["interpolative_status"] == "one-way only"
        if out["interpolative"]:
            assert out["cone_interpolative"]
        seen.add((out["reflexive"], out["transitive"], out["symmetric"]))
    assert len(seen) > 1            # the suite is not degenerate


def brute_em(frame, up, dn):
    n = frame.n
    return np.array([[frame.le(u, dn[v]) and frame.le(v, up[u]) for v in range(n)]
                     for u in range(n)])


def monadic(frame):
    out = []
    for c in enumerate_conic_structures(frame):
        f = cone_properties(c)
        if f["inflationary"] and f["subidempotent"]:
            out.append(c)
    return out


def test_monadic_counts():
    assert len(monadic(S)) == 4
    assert len(monadic(B)) == 4


@pytest.mark.parametrize("frame", [S, B], ids=["S", "B4"])
def test_em_order_matches_definition(frame):
    for c in monadic(frame):
        o = em_order_from_monads(frame, c.up, c.dn)
        assert np.array_equal(o.leq, brute_em(frame, c.up.table, c.dn.table))
        up, dn = em_cones(o)
        assert list(up) == list(c.up.table) and list(dn) == list(c.dn.table)


def test_em_isomorphism_suite():
    rows = em_isomorphism_suite([S, B])
    assert len(rows) == 8
    for row in rows:
        assert row["cones_roundtrip"] and row["order_roundtrip"] and row["respects_meets"]


def test_em_order_rejections():
    with pytest.raises(NotAnEMOrder):
        EMOrder(S, np.zeros((3, 3), dtype=bool))             # not reflexive
    rel = np.eye(3, dtype=bool)
    rel[0, 1] = rel[1, 2] = True
    with pytest.raises(NotAnEMOrder):
        EMOrder(S, rel)                                      # not transitive
    rel = np.eye(4, dtype=bool)
    rel[0, 1] = True                          # (⊥,{x}) ∨ ({y},{y}) = ({y},⊤) is missing
    with pytest.raises(NotAnEMOrder):
        EMOrder(B, rel)


def test_closure_operator_rejections():
    with pytest.raises(NotAClosureOperator) as e:
        em_order_from_monads(S, [0, 0, 2], [0, 1, 2])
    assert e.value.witness == ("up", "inflationary")
    with pytest.raises(NotAClosureOperator):
        em_order_from_monads(B, [0, 1, 2, 3], [0, 2, 1, 3])


def test_discrete_order_respects_meets():
    o = EMOrder(B, np.eye(4, dtype=bool))
    assert em_respects_meets(o)
