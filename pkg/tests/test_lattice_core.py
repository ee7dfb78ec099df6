import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact.errors import (
    CodomainMismatch,
    NotAFrameMap,
    NotALattice,
    NotAPoset,
    NotComposable,
    NotDistributive,
    NotMeetPreserving,
    NotMonotone,
    SizeCapExceeded,
    UnknownName,
)
from artifact.config import size_cap
from artifact.lattice_core import (
    FrameMap,
    MonotoneMap,
    PointPoset,
    adjunction_holds,
    boolean_frame,
    build_frame,
    chain_frame,
    constant_map,
    frame_from_poset,
    heyting,
    identity_map,
    is_frame_map,
    is_join_basis,
    join_irreducibles,
    left_adjoint_of,
    right_adjoint_of,
    truth_frame,
)

from conftest import random_poset


def posets(max_points=5):
    return st.builds(lambda seed, m, d: random_poset(np.random.default_rng(seed), m, d),
                     st.integers(0, 2**32 - 1), st.integers(0, max_points),
                     st.floats(0.0, 1.0))


def brute_downsets(p):
    out = []
    for bits in range(1 << p.m):
        members = [i for i in range(p.m) if bits >> i & 1]
        if all(p.leq[j, i] <= (bits >> j & 1) for i in members for j in range(p.m)):
            out.append(bits)
    return out


# -- construction errors --------------------------------------------------------

def test_cycle_is_not_a_poset():
    with pytest.raises(NotAPoset) as e:
        build_frame(["a", "b"], [("a", "b"), ("b", "a")])
    assert set(e.value.witness) == {"a", "b"}


def test_two_tops_is_not_a_lattice():
    with pytest.raises(NotALattice):
        build_frame(["0", "x", "y"], [("0", "x"), ("0", "y")])


@pytest.mark.parametrize("shape", ["N5", "M3"])
def test_non_distributive_lattices(shape):
    if shape == "N5":
        elems, order = ["0", "a", "b", "c", "1"], [("0", "a"), ("a", "b"), ("b", "1"),
                                                    ("0", "c"), ("c", "1")]
    else:
        elems, order = ["0", "a", "b", "c", "1"], [("0", "a"), ("0", "b"), ("0", "c"),
                                                    ("a", "1"), ("b", "1"), ("c", "1")]
    with pytest.raises(NotDistributive) as e:
        build_frame(elems, order)
    assert len(e.value.witness) == 3


def test_unknown_element_in_order():
    with pytest.raises(UnknownName):
        build_frame(["a"], [("a", "z")])


def test_build_frame_matches_chain_frame():
    f = build_frame(["⊥", "a", "⊤"], [("⊥", "a"), ("a", "⊤")])
    g = chain_frame(3)
    assert f.labels == g.labels
    assert np.array_equal(f.meet, g.meet) and np.array_equal(f.join, g.join)
    assert f.points.m == 2


def test_build_frame_boolean_square():
    f = build_frame(["⊥", "l", "r", "⊤"], [("⊥", "l"), ("⊥", "r"), ("l", "⊤"), ("r", "⊤")])
    assert f.points.m == 2
    assert f.labels[f.meet_of(f.index("l"), f.index("r"))] == "⊥"
    assert f.labels[f.join_of(f.index("l"), f.index("r"))] == "⊤"


def test_default_labels():
    assert chain_frame(3).labels == ("⊥", "a", "⊤")
    assert truth_frame().labels == ("⊥", "⊤")
    assert boolean_frame(2).labels == ("∅", "{x}", "{y}", "{x,y}")
    assert chain_frame(1).n == 1


def test_index_unknown_label():
    with pytest.raises(UnknownName):
        chain_frame(3).index("nope")


def test_downset_cap():
    with size_cap(10), pytest.raises(SizeCapExceeded):
        boolean_frame(4)


# -- Birkhoff laws on random posets -------------------------------------------------

@given(posets())
def test_downsets_match_bruteforce(p):
    f = frame_from_poset(p)
    assert sorted(f.enc) == sorted(brute_downsets(p))
    assert list(f.enc) == sorted(f.enc, key=lambda b: (bin(b).count("1"), b))


@given(posets(4))
def test_lattice_laws(p):
    f = frame_from_poset(p)
    m, j, leq = f.meet, f.join, f.leq
    assert np.array_equal(m, m.T) and np.array_equal(j, j.T)
    idx = np.arange(f.n)
    assert (m[idx[:, None], j] == idx[:, None]).all()            # absorption x ∧ (x ∨ y) = x
    for x, y, z in itertools.product(range(f.n), repeat=3):
        assert m[x, j[y, z]] == j[m[x, y], m[x, z]]
    assert leq[f.bot].all() and leq[:, f.top].all()


@given(posets(4))
def test_heyting_adjunction(p):
    f = frame_from_poset(p)
    for x, y in itertools.product(range(f.n), repeat=2):
        h = heyting(f, x, y)
        for z in range(f.n):
            assert f.le(f.meet_of(z, x), y) == f.le(z, h)


@given(posets(5))
def test_irreducibles_are_points(p):
    f = frame_from_poset(p)
    points, enc, index = join_irreducibles(f)
    assert points is p and list(enc) == list(f.enc) and len(index) == f.n
    irr = f.irreducibles
    assert sorted(f.enc[i] for i in irr) == sorted(p.down)
    assert is_join_basis(f, irr)


def test_product_poset_and_dual():
    a, b = PointPoset.chain(2), PointPoset.antichain(2)
    prod = a.product(b)
    assert prod.m == 4 and prod.labels[1] == "(0,1)"
    assert np.array_equal(a.dual().leq, a.leq.T)


def test_wide_posets_keep_exact_bitsets():
    p = PointPoset.chain(80)
    assert p.down[79] == (1 << 80) - 1 and type(p.down[79]) is int
    assert p.up[0] == (1 << 80) - 1 and p.up[79] == 1 << 79


def test_not_a_poset_rejected():
    leq = np.array([[1, 1], [1, 1]], dtype=bool)
    with pytest.raises(NotAPoset):
        PointPoset(leq, ["a", "b"])


# -- maps and adjoints ---------------------------------------------------------------

def test_monotone_check():
    f = chain_frame(3)
    with pytest.raises(NotMonotone):
        MonotoneMap(f, f, [2, 1, 0])


def test_frame_map_witnesses():
    f = chain_frame(3)
    v = is_frame_map(MonotoneMap(f, f, [0, 2, 2]))
    assert v
    v = is_frame_map(MonotoneMap(f, f, [1, 1, 2]))
    assert not v and v.witness[0] == "bottom"
    b = boolean_frame(2)
    v = is_frame_map(MonotoneMap(b, b, [0, 3, 3, 3]))
    assert not v and v.witness[0] == "meet"
    with pytest.raises(NotAFrameMap):
        FrameMap(b, b, [0, 3, 3, 3])


def test_composition():
    f = chain_frame(3)
    g = MonotoneMap(f, f, [0, 2, 2])
    assert (g @ identity_map(f)) == g
    two = truth_frame()
    with pytest.raises(NotComposable):
        MonotoneMap(two, two, [0, 1]) @ g
    assert isinstance(identity_map(f) @ identity_map(f), FrameMap)


def test_constant_map():
    f = chain_frame(3)
    c = constant_map(f, f, 1)
    assert list(c.table) == [1, 1, 1]


def all_monotone(dom, cod):
    for table in itertools.product(range(cod.n), repeat=dom.n):
        try:
            yield MonotoneMap(dom, cod, table)
        except NotMonotone:
            continue


def brute_left_adjoint(g):
    dom, cod = g.dom, g.cod
    out = []
    for y in range(cod.n):
        cands = [x for x in range(dom.n) if cod.le(y, g(x))]
        least = [x for x in cands if all(dom.le(x, z) for z in cands)]
        out.append(least[0] if least else None)
    return out


@pytest.mark.parametrize("pair", ["chain3->bool4", "bool4->chain3", "bool4->bool4"])
def test_adjoints_against_bruteforce(pair, backend):
    frames = {"chain3": chain_frame(3), "bool4": boolean_frame(2)}
    a, b = (frames[s] for s in pair.split("->"))
    seen = 0
    for g in all_monotone(a, b):
        expect = brute_left_adjoint(g)
        if None in expect or not is_meet_preserving(g):
            with pytest.raises(NotMeetPreserving):
                left_adjoint_of(g)
            continue
        f = left_adjoint_of(g)
        assert list(f.table) == expect
        assert adjunction_holds(f, g)
        seen += 1
    assert seen > 0


def is_meet_preserving(g):
    a, b = g.dom, g.cod
    if g(a.top) != b.top:
        return False
    return all(g(a.meet_of(x, y)) == b.meet_of(g(x), g(y)) for x in range(a.n) for y in range(a.n))


def test_right_adjoint_of_frame_map():
    b = boolean_frame(2)
    f = FrameMap(truth_frame(), b, [0, 3])
    g = right_adjoint_of(f)
    assert adjunction_holds(f, g)
    assert [g.cod.labels[v] for v in g.table] == ["⊥", "⊥", "⊥", "⊤"]


def test_adjunction_witness():
    f = chain_frame(3)
    v = adjunction_holds(identity_map(f), MonotoneMap(f, f, [0, 0, 2]))
    assert not v and v.witness is not None


def test_codomain_mismatch_exists():
    assert issubclass(CodomainMismatch, Exception)
