import itertools

import numpy as np
import pytest

from artifact.conic import cones_of, is_fixed_point
from artifact.coproduct import square
from artifact.config import size_cap
from artifact.errors import AmbientMismatch, BaseMismatch, SizeCapExceeded, SourceNotOpen
from artifact.lattice_core import PointPoset, boolean_frame, chain_frame, identity_map
from artifact.locale_maps import LocaleMap, terminal_map
from artifact.relations import (
    LocalicRelation,
    closed_relation,
    compose,
    diagonal,
    empty_relation,
    from_spatial,
    has_open_cones,
    is_monotone,
    kernel_pair,
    open_relation,
    opens,
    opposite,
    quotient_map,
    rectangle_kernel_law,
    spatial_cones,
    to_open_cone,
    top_relation,
)
from artifact.sublocales import identity_nucleus, Sublocale, sublocale_eq, sublocale_leq

S = chain_frame(3)
B = boolean_frame(2)


def sierpinski_R():
    sq = square(S)
    a = S.index("a")
    u = sq.frame.join_of(sq.rect(a, S.top), sq.rect(S.top, a))
    return open_relation(S, u)


def labelled(table, cod):
    return [cod.labels[int(v)] for v in table]


def test_sierpinski_source_and_target():
    r = to_open_cone(sierpinski_R())
    u = "(a⊗⊤)∨(⊤⊗a)"
    assert labelled(r.s_inv.table, r.frame) == ["⊥", "a⊗⊤", u]
    assert labelled(r.t_inv.table, r.frame) == ["⊥", "⊤⊗a", u]
    assert r.frame.labels == ("⊥", "a⊗a", "a⊗⊤", "⊤⊗a", u)
    assert labelled(r.s_shriek.table, S) == ["⊥", "a", "a", "⊤", "⊤"]
    assert labelled(r.t_shriek.table, S) == ["⊥", "a", "⊤", "a", "⊤"]
    assert labelled(r.up.table, S) == ["⊥", "⊤", "⊤"]
    assert labelled(r.dn.table, S) == ["⊥", "⊤", "⊤"]


def test_sierpinski_not_a_fixed_point():
    r = sierpinski_R()
    assert not is_fixed_point(r)
    assert sublocale_eq(cones_of(to_open_cone(r)).induced.sub, top_relation(S).sub)


def test_closed_relation_without_open_cones():
    sq = square(S)
    a = S.index("a")
    u = sq.frame.join_of(sq.rect(a, S.top), sq.rect(S.top, a))
    rc = closed_relation(S, u)
    assert not has_open_cones(rc)
    with pytest.raises(SourceNotOpen) as e:
        to_open_cone(rc)
    assert e.value.witness is not None


def test_standard_relations_order():
    d, t, e = diagonal(S), top_relation(S), empty_relation(S)
    assert e <= d <= t
    assert not (t <= d)


def test_relation_needs_matching_ambient():
    with pytest.raises(AmbientMismatch):
        LocalicRelation(S, Sublocale(identity_nucleus(square(B).frame)))


# -- spatial relations ---------------------------------------------------------------

def discrete2():
    return PointPoset(np.eye(2, dtype=bool), ["p", "q"])


def test_spatial_cones_discrete():
    x = discrete2()
    f = opens(x)
    r = to_open_cone(from_spatial(x, [("p", "q")]))
    name = lambda v: f.labels[int(v)]  # noqa: E731
    assert name(r.up(f.index("{p}"))) == "{q}"
    assert name(r.dn(f.index("{q}"))) == "{p}"
    assert name(r.up(f.index("{q}"))) == "∅"
    up, dn = spatial_cones(x, [("p", "q")])
    assert list(up) == list(r.up.table) and list(dn) == list(r.dn.table)


def test_spatial_diagonal_is_localic_diagonal():
    x = discrete2()
    f = opens(x)
    assert sublocale_eq(from_spatial(x, [("p", "p"), ("q", "q")]).sub, diagonal(f).sub)


def test_spatial_order_on_sierpinski_space():
    x = PointPoset.from_relations(["p", "q"], [("p", "q")])
    pairs = [("p", "p"), ("p", "q"), ("q", "q")]
    f = opens(x)
    r = from_spatial(x, pairs)
    up, dn = spatial_cones(x, pairs)
    assert [f.labels[v] for v in up] == ["∅", "{p,q}", "{p,q}"]
    assert [f.labels[v] for v in dn] == ["∅", "{p}", "{p,q}"]
    oc = to_open_cone(r)
    assert list(oc.up.table) == list(up) and list(oc.dn.table) == list(dn)


# -- composition -----------------------------------------------------------------

def suite(frame):
    sq = square(frame)
    rels = [diagonal(frame), top_relation(frame)]
    for u in range(sq.frame.n):
        for make in (open_relation, closed_relation):
            r = make(frame, u)
            if has_open_cones(r):
                rels.append(r)
    return rels


@pytest.mark.parametrize("frame", [S, B], ids=["S", "B4"])
def test_compose_matches_materialized_oracle(frame):
    rels = suite(frame)
    pairs = list(itertools.product(rels[:8], repeat=2))
    for r, q in pairs:
        lazy = compose(r, q)
        if r.frame.points.m * q.frame.points.m > 10:
            continue                       # the materialized pullback would be huge
        full = compose(r, q, materialize=True)
        assert sublocale_eq(lazy.sub, full.sub)


def test_compose_sierpinski():
    r = sierpinski_R()
    assert sublocale_eq(compose(r, r).sub, top_relation(S).sub)
    assert sublocale_eq(compose(diagonal(S), r).sub, r.sub)
    assert sublocale_eq(compose(r, diagonal(S)).sub, r.sub)


def test_materialized_compose_respects_cap():
    t = top_relation(B)
    with size_cap(1000), pytest.raises(SizeCapExceeded):
        compose(t, t, materialize=True)


def test_compose_base_mismatch():
    with pytest.raises(BaseMismatch):
        compose(diagonal(S), diagonal(B))


def test_opposite():
    r = sierpinski_R()
    assert sublocale_eq(opposite(r).sub, r.sub)
    oc = to_open_cone(open_relation(B, square(B).rect(B.index("{x}"), B.index("{y}"))))
    op = opposite(oc)
    assert list(op.up.table) == list(oc.dn.table)
    assert sublocale_eq(opposite(op).sub, oc.sub)


# -- kernel pairs and quotients -------------------------------------------------------

def test_kernel_pair_of_terminal_map_is_top():
    for frame in (S, B):
        k = kernel_pair(terminal_map(frame))
        assert sublocale_eq(k.sub, top_relation(frame).sub)


def test_kernel_pair_of_identity_is_diagonal():
    k = kernel_pair(LocaleMap(identity_map(B)))
    assert sublocale_eq(k.sub, diagonal(B).sub)


def test_quotient_map_recovers_equivalences():
    for rel in (diagonal(B), top_relation(B)):
        q = quotient_map(rel)
        assert sublocale_eq(kernel_pair(q).sub, rel.sub)


def test_monotone_maps_between_relations():
    ident = LocaleMap(identity_map(S))
    assert not is_monotone(ident, diagonal(S), sierpinski_R())   # (b,b) lies outside R
    assert is_monotone(ident, sierpinski_R(), top_relation(S))
    assert is_monotone(ident, diagonal(S), top_relation(S))
    assert not is_monotone(ident, top_relation(S), diagonal(S))


def test_rectangle_kernel_law_on_suite():
    for frame in (S, B):
        for r in suite(frame):
            assert rectangle_kernel_law(r)


def test_relations_sit_inside_their_induced_relation():
    for frame in (S, B):
        for r in suite(frame):
            assert sublocale_leq(r.sub, cones_of(to_open_cone(r)).induced.sub)


def test_compose_on_a_wide_pullback():
    # O T ⊗ O T has 81 points here, past one machine word.
    c4 = chain_frame(4)
    t = top_relation(c4)
    assert sublocale_eq(compose(t, t).sub, t.sub)
    d = diagonal(c4)
    assert sublocale_eq(compose(d, t).sub, t.sub)


def test_compose_matches_point_set_composition():
    # Every sublocale of a finite locale is spatial, so composition must agree
    # with composing the underlying sets of pairs.
    from conftest import compose_sets, fence, point_set
    for frame in (S, B, fence()):
        rels = suite(frame)[:10]
        for r, q in itertools.product(rels, repeat=2):
            assert point_set(compose(r, q)) == compose_sets(point_set(r), point_set(q))


def test_point_sets_of_standard_relations():
    from conftest import point_set
    assert point_set(diagonal(S)) == {(0, 0), (1, 1)}
    assert len(point_set(top_relation(B))) == 4
