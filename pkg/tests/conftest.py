import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from artifact import _kernels
from artifact.lattice_core import PointPoset, boolean_frame, chain_frame, frame_from_poset

settings.register_profile(
    "repo", max_examples=int(os.environ.get("HYPOTHESIS_EXAMPLES", "60")), deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def fence():
    """Downsets of p < q > r: five opens."""
    return frame_from_poset(PointPoset.from_relations(["p", "q", "r"], [("p", "q"), ("r", "q")]))


def library():
    frames = {f"chain{n}": chain_frame(n) for n in range(1, 6)}
    frames.update({f"bool{2 ** k}": boolean_frame(k) for k in (1, 2, 3)})
    frames["fence"] = fence()
    return frames


@pytest.fixture(scope="session")
def frame_library():
    return library()


@pytest.fixture(params=_kernels.available())
def backend(request):
    with _kernels.use_backend(request.param):
        yield request.param


def random_poset(rng, m, density=0.4):
    """A random partial order on m points (strictly upper-triangular, then closed)."""
    leq = np.eye(m, dtype=bool)
    for i in range(m):
        for j in range(i + 1, m):
            leq[i, j] = rng.random() < density
    for k in range(m):
        leq |= leq[:, [k]] & leq[[k], :]
    return PointPoset(leq, [f"p{i}" for i in range(m)])


# -- acceptance summary ------------------------------------------------------------

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])


def point_set(rel):
    """Points (i, j) of X×X lying in a relation: those whose prime open it fixes."""
    sq = rel.square
    f, pp = sq.frame, sq.product_points
    nu = rel.sub.nucleus.table
    out = set()
    for k in range(pp.m):
        e = f.index_of_bits[pp.all_bits & ~pp.up[k]]
        if nu[e] == e:
            out.add(divmod(k, rel.base.points.m))
    return out


def compose_sets(r, q):
    """Set-level R∘Q (first R, then Q)."""
    return {(x, z) for x, y in r for y2, z in q if y == y2}
