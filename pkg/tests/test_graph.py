import itertools

import numpy as np
import pytest

from oracles import symplectic_adjacency
from sympswitch.gf2 import Gf2Matrix, solve_affine
from sympswitch.graph import (
    SrgCertificate,
    SrgFailure,
    SympGraph,
    build_symplectic,
    common_neighbor_mask,
    common_neighbors,
    edge_difference,
    srg_parameters,
    verify_srg,
)
from sympswitch.orbits import ah_partition, canonical_quadruple, orbit_partition_S
from sympswitch.switching import apply_switch


@pytest.mark.parametrize("nu, n, k", [(3, 63, 32), (4, 255, 128)])
def test_build_sizes(nu, n, k):
    g = build_symplectic(nu)
    assert g.n == n
    assert {g.degree(v) for v in range(n)} == {k}


def test_build_matches_explicit_form(sp6, sp8):
    assert np.array_equal(sp6.dense(), symplectic_adjacency(3))
    assert np.array_equal(sp8.dense(), symplectic_adjacency(4))


def test_build_adjacency_examples(sp6):
    e = lambda i: sp6.index_of(1 << (i - 1))  # noqa: E731
    assert sp6.adjacent(e(1), e(2))
    assert not sp6.adjacent(e(1), e(3))


@pytest.mark.parametrize("nu", [2, 9])
def test_build_rejects_nu(nu):
    with pytest.raises(ValueError):
        build_symplectic(nu)


def test_graph_is_read_only(sp6):
    with pytest.raises(ValueError):
        sp6.packed[0, 0] = 1


def test_constructor_validates():
    with pytest.raises(ValueError, match="symmetric"):
        SympGraph.from_dense(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError, match="diagonal"):
        SympGraph.from_dense(np.eye(2))


def test_labels(sp6):
    assert sp6.label_of(0) == 1
    assert sp6.index_of(63) == 62
    with pytest.raises(KeyError):
        sp6.index_of(0)


@pytest.mark.parametrize("nu", [3, 4])
def test_verify_srg_symplectic(nu):
    cert = verify_srg(build_symplectic(nu))
    assert isinstance(cert, SrgCertificate)
    assert cert.params == srg_parameters(nu)


def test_srg_parameter_values():
    assert srg_parameters(3) == (63, 32, 16, 16)
    assert srg_parameters(4) == (255, 128, 64, 64)


def test_verify_srg_path_fails():
    res = verify_srg(SympGraph.from_edges(3, [(0, 1), (1, 2)]))
    assert isinstance(res, SrgFailure) and not res
    assert res.reason == "not regular"


def test_verify_srg_names_bad_pair(sp6):
    # cycle C6 is regular but not strongly regular
    c6 = SympGraph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
    res = verify_srg(c6)
    assert not res and res.reason == "mu not constant"
    u, v = res.pair
    assert not c6.adjacent(u, v) and u != v

    # toggling one pair of Sp(6,2) breaks regularity at those two vertices
    dense = sp6.dense()
    dense[0, 5] ^= 1
    dense[5, 0] ^= 1
    res = verify_srg(SympGraph.from_dense(dense))
    assert not res and res.reason == "not regular" and 0 in res.pair


def test_petersen_is_srg():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    cert = verify_srg(SympGraph.from_edges(10, outer + inner + spokes))
    assert cert.params == (10, 3, 0, 1)


def test_common_neighbors_examples(sp8):
    nu = 4
    idx = sp8.index_of
    x, y, z = idx(0b1), idx(0b100), idx(0b10000)
    assert len(common_neighbors(sp8, [x, y, z])) == 2 ** (2 * nu - 3)
    w = idx(0b1 ^ 0b100)
    assert len(common_neighbors(sp8, [x, y, w])) == 0
    assert common_neighbors(sp8) == frozenset(range(sp8.n))


def test_common_neighbors_overlap_error(sp6):
    with pytest.raises(ValueError, match="overlap"):
        common_neighbors(sp6, [1, 2], [2])


def test_adjacency_patterns_partition_the_rest(sp6):
    rng = np.random.default_rng(1)
    for _ in range(50):
        triple = [int(t) for t in rng.choice(sp6.n, 3, replace=False)]
        total = 0
        for pattern in itertools.product([0, 1], repeat=3):
            a = [v for v, p in zip(triple, pattern) if p]
            b = [v for v, p in zip(triple, pattern) if not p]
            total += len(common_neighbors(sp6, a, b))
        assert total == sp6.n - 3


def test_common_neighbors_agree_with_affine_count(sp6):
    dim = 6
    for x, y, z in itertools.combinations(range(1, 64), 3):
        if x ^ y ^ z == 0:
            continue
        sol = solve_affine(Gf2Matrix.form_rows([x, y, z], dim), [1, 1, 1], enumerate_limit=64)
        expected = sol.count - len({x, y, z} & set(sol.solutions))
        got = common_neighbor_mask(sp6, [x - 1, y - 1, z - 1]).bit_count()
        assert got == expected


def test_edge_difference(sp6):
    assert edge_difference(sp6, sp6) == set()
    dense = sp6.dense()
    dense[3, 10] ^= 1
    dense[10, 3] ^= 1
    assert edge_difference(sp6, SympGraph.from_dense(dense)) == {(3, 10)}
    with pytest.raises(ValueError):
        edge_difference(sp6, build_symplectic(4))


def test_edge_difference_of_s_switch(sp6):
    quad = canonical_quadruple(3)
    part = orbit_partition_S(sp6, quad)
    xs, _ = apply_switch(sp6, part, "S")
    s2 = part.cell("S2").members
    s = part.cell("S").members
    expected = {tuple(sorted((a, b))) for a in s2 for b in s}
    assert edge_difference(sp6, xs) == expected
    # the two-cell {S, V \ S} switch gives the same graph
    xah, _ = apply_switch(sp6, ah_partition(sp6, quad), "VminusS")
    assert edge_difference(xs, xah) == set()
