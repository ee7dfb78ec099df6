import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact.coproduct import square
from artifact.errors import AmbientMismatch, HypothesisViolated, NotANucleus
from artifact.lattice_core import FrameMap, boolean_frame, chain_frame, frame_from_poset, truth_frame
from artifact.sublocales import (
    Nucleus,
    Sublocale,
    closed_sublocale,
    convert_representation,
    identity_nucleus,
    nucleus_from_congruence,
    nucleus_from_sublocale_set,
    open_sublocale,
    saturate,
    saturated_bruteforce,
    simplified_saturated,
    sublocale_eq,
    sublocale_leq,
    top_nucleus,
)

from conftest import random_poset

S = chain_frame(3)


def frames(max_points=4):
    return st.builds(lambda seed, m: frame_from_poset(random_poset(np.random.default_rng(seed), m)),
                     st.integers(0, 2**32 - 1), st.integers(1, max_points))


@st.composite
def frame_and_pairs(draw):
    f = draw(frames())
    pairs = draw(st.lists(st.tuples(st.integers(0, f.n - 1), st.integers(0, f.n - 1)),
                          max_size=4))
    return f, pairs


@given(frame_and_pairs())
def test_saturation_matches_bruteforce(fp):
    f, pairs = fp
    nu = saturate(f, pairs)
    fixed = frozenset(int(x) for x in np.flatnonzero(nu.table == np.arange(f.n)))
    assert fixed == saturated_bruteforce(f, pairs)


@given(frame_and_pairs())
def test_saturation_is_a_nucleus_identifying_pairs(fp):
    f, pairs = fp
    nu = saturate(f, pairs)      # the constructor checks the nucleus laws
    for a, b in pairs:
        assert nu(a) == nu(b)


def test_saturation_on_square_matches_bruteforce():
    sq = square(S)
    f = sq.frame
    for a, b in itertools.combinations(range(f.n), 2):
        nu = saturate(f, [(a, b)])
        fixed = frozenset(int(x) for x in np.flatnonzero(nu.table == np.arange(f.n)))
        assert fixed == saturated_bruteforce(f, [(a, b)])


def test_nucleus_law_checks():
    with pytest.raises(NotANucleus) as e:
        Nucleus(S, [0, 0, 2])
    assert e.value.witness == ("a",)
    with pytest.raises(NotANucleus):
        Nucleus(S, [1, 2, 2])       # not idempotent
    b = boolean_frame(2)
    with pytest.raises(NotANucleus):
        Nucleus(b, [0, 3, 3, 3])    # not meet-preserving


def test_open_and_closed_sublocales():
    a = S.index("a")
    o = open_sublocale(S, a)
    c = closed_sublocale(S, a)
    assert [S.labels[x] for x in o.fixed] == ["⊥", "⊤"]  # a→x
    assert [S.labels[x] for x in c.fixed] == ["a", "⊤"]  # a ∨ x
    assert o.quotient.labels == ("⊥", "a")
    assert c.quotient.labels == ("⊥", "⊤")
    assert o.quotient.n == 2 and c.quotient.n == 2


def test_open_sublocale_labels_are_downset_of_u():
    sq = square(S)
    f = sq.frame
    u = f.index("(a⊗⊤)∨(⊤⊗a)")
    sub = open_sublocale(f, u)
    assert sub.quotient.labels == ("⊥", "a⊗a", "a⊗⊤", "⊤⊗a", "(a⊗⊤)∨(⊤⊗a)")


def test_sublocale_order():
    b = boolean_frame(2)
    x, y = b.index("{x}"), b.index("{y}")
    small, big = open_sublocale(b, x), open_sublocale(b, b.top)
    assert sublocale_leq(small, big)
    assert not sublocale_leq(big, small)
    assert sublocale_eq(closed_sublocale(b, y), small)
    with pytest.raises(AmbientMismatch):
        sublocale_leq(small, Sublocale(identity_nucleus(S)))


def test_representation_round_trips():
    b = boolean_frame(3)
    for u in range(b.n):
        sub = closed_sublocale(b, u)
        congruence, fixed = convert_representation(sub)
        assert nucleus_from_sublocale_set(b, fixed) == sub.nucleus
        assert nucleus_from_congruence(b, congruence) == sub.nucleus


def test_quotient_surjection_is_frame_map_and_factors():
    b = boolean_frame(2)
    sub = open_sublocale(b, b.index("{x}"))
    assert sub.surjection.cod is sub.quotient
    two = truth_frame()
    h = FrameMap(b, two, [int(b.le(b.index("{x}"), v)) for v in range(b.n)])
    hbar = sub.factor(h)
    assert np.array_equal(hbar.table[sub.surjection.table], h.table)
    with pytest.raises(HypothesisViolated):
        sub.factor(FrameMap(b, b, np.arange(b.n)))


def test_extreme_nuclei():
    assert Sublocale(top_nucleus(S)).quotient.n == 1
    assert Sublocale(identity_nucleus(S)).quotient.n == S.n


def test_simplified_saturation_hypothesis():
    b = boolean_frame(2)
    x, y = b.index("{x}"), b.index("{y}")
    # pairs stable under meets with the basis
    stable = [(x, b.bot), (b.top, y)]
    assert simplified_saturated(b, stable) == saturated_bruteforce(b, stable)
    with pytest.raises(HypothesisViolated):
        simplified_saturated(b, [(x, y)])
