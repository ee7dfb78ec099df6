import itertools

import numpy as np
import pytest

from artifact.coproduct import (
    cideal_coproduct_oracle,
    codiagonal,
    copair,
    copair_is_unique,
    coproduct,
    injections,
    square,
    swap,
    tensor_map,
)
from artifact.errors import CodomainMismatch, NotAFrameMap, NotSquare
from artifact.lattice_core import (
    FrameMap,
    MonotoneMap,
    boolean_frame,
    chain_frame,
    identity_map,
    is_frame_map,
    truth_frame,
)

S = chain_frame(3)


def oracle_matches(left, right):
    frame, iso = cideal_coproduct_oracle(left, right)
    fast = coproduct(left, right).frame
    if frame.n != fast.n or set(iso) != set(fast.enc):
        return False
    pos = [fast.index_of_bits[b] for b in iso]
    return np.array_equal(frame.leq, fast.leq[np.ix_(pos, pos)])


def test_sierpinski_square_has_six_elements():
    sq = square(S)
    assert sq.frame.n == 6
    assert sq.frame.labels == ("⊥", "a⊗a", "a⊗⊤", "⊤⊗a", "(a⊗⊤)∨(⊤⊗a)", "⊤⊗⊤")


def test_boolean_square_has_sixteen():
    assert square(boolean_frame(2)).frame.n == 16


def test_oracle_on_library(frame_library):
    names = sorted(frame_library)
    for a, b in itertools.combinations_with_replacement(names, 2):
        assert oracle_matches(frame_library[a], frame_library[b]), (a, b)


def test_oracle_asymmetric_pair():
    assert oracle_matches(chain_frame(4), boolean_frame(2))


def test_rectangles_and_labels():
    sq = square(S)
    a = S.index("a")
    assert sq.frame.labels[sq.rect(a, S.top)] == "a⊗⊤"
    assert sq.rect(S.bot, a) == sq.frame.bot
    u = sq.frame.join_of(sq.rect(a, S.top), sq.rect(S.top, a))
    assert sq.maximal_rectangles(sq.frame.enc[u]) == [(a, S.top), (S.top, a)] or \
        sorted(sq.maximal_rectangles(sq.frame.enc[u])) == sorted([(a, S.top), (S.top, a)])


def test_injections_are_frame_maps():
    i1, i2 = injections(square(S))
    assert is_frame_map(i1) and is_frame_map(i2)
    sq = square(S).frame
    assert [sq.labels[v] for v in i1.table] == ["⊥", "a⊗⊤", "⊤⊗⊤"]


def all_frame_maps(dom, cod):
    for table in itertools.product(range(cod.n), repeat=dom.n):
        try:
            m = MonotoneMap(dom, cod, table)
        except Exception:
            continue
        if is_frame_map(m):
            yield FrameMap(dom, cod, table, check=False)


def test_copair_universal_property():
    c = square(S)
    target = boolean_frame(2)
    maps = list(all_frame_maps(S, target))
    assert maps
    all_out = list(all_frame_maps(c.frame, target))
    i1, i2 = injections(c)
    for h, k in itertools.product(maps, repeat=2):
        m = copair(c, h, k)
        assert (m @ i1) == h and (m @ i2) == k
        for cand in all_out:
            assert copair_is_unique(c, h, k, cand)


def test_copair_errors():
    c = square(S)
    two = truth_frame()
    h = FrameMap(S, S, [0, 2, 2])
    with pytest.raises(CodomainMismatch):
        copair(c, h, identity_map(two))
    bad = MonotoneMap(S, S, [1, 1, 2])
    with pytest.raises(NotAFrameMap):
        copair(c, bad, h)


def test_codiagonal_and_swap():
    c = square(S)
    d = codiagonal(c)
    assert [S.labels[v] for v in d.table] == ["⊥", "a", "a", "a", "a", "⊤"]
    sw = swap(c)
    assert (sw @ sw) == identity_map(c.frame)
    assert c.frame.labels[sw(c.frame.index("a⊗⊤"))] == "⊤⊗a"
    with pytest.raises(NotSquare):
        swap(coproduct(S, boolean_frame(1)))


def test_tensor_map_of_identities_is_identity():
    c = square(S)
    t = tensor_map(c, c, identity_map(S), identity_map(S))
    assert t == identity_map(c.frame)
