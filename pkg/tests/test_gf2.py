import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_solutions, symp_form_matrix
from sympswitch.gf2 import (
    AffineSolutionSet,
    BitVector,
    Gf2Matrix,
    check_nu,
    pair_swap,
    rank,
    solve_affine,
    symp_form,
)
from sympswitch.orbits import canonical_quadruple

E = lambda i: 1 << (i - 1)  # noqa: E731

vec6 = st.integers(min_value=0, max_value=63)
vec8 = st.integers(min_value=0, max_value=255)


def test_symp_form_examples():
    assert symp_form(E(1), E(2)) == 1
    assert symp_form(E(1), E(3)) == 0
    assert symp_form(BitVector.unit(1, 6), BitVector.unit(2, 6)) == 1


def test_symp_form_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension mismatch"):
        symp_form(BitVector.unit(1, 6), BitVector.unit(1, 8))


@given(vec8)
def test_alternating(x):
    assert symp_form(x, x) == 0


@given(vec8, vec8, vec8)
def test_bilinear_and_symmetric(x, y, z):
    assert symp_form(x ^ y, z) == symp_form(x, z) ^ symp_form(y, z)
    assert symp_form(x, y) == symp_form(y, x)


@given(vec8, vec8)
def test_matches_explicit_matrix(x, y):
    assert symp_form(x, y) == symp_form_matrix(x, y, 4)


@pytest.mark.parametrize("nu", [3, 4])
def test_nondegenerate(nu):
    dim = 2 * nu
    for x in range(1, 1 << dim):
        assert any(symp_form(x, E(i)) for i in range(1, dim + 1))


def test_pair_swap_examples():
    assert pair_swap(0b01) == 0b10  # block [10] -> [01]
    v = BitVector.from_string("111000")
    assert str(pair_swap(v)) == "110100"


@given(vec8)
def test_pair_swap_involution_and_form(y):
    assert pair_swap(pair_swap(y)) == y
    for x in (1, 6, 0xA5, 0xFF):
        assert symp_form(x, y) == (x & pair_swap(y)).bit_count() % 2


def test_bitvector_validation():
    with pytest.raises(ValueError):
        BitVector(1, 5)
    with pytest.raises(ValueError):
        BitVector(1 << 6, 6)
    assert BitVector.from_string("11101000").block(2) == (1, 0)
    assert (BitVector.unit(1, 6) + BitVector.unit(1, 6)).bits == 0


def test_check_nu_bounds():
    assert check_nu(3) == 3
    for bad in (2, 9):
        with pytest.raises(ValueError):
            check_nu(bad)


def test_rank_examples():
    assert rank([E(1), E(2), E(3)], 6) == 3
    assert rank([E(1), E(1)], 6) == 1
    x, y = 0b101, 0b110010
    assert rank([x, y, x ^ y], 6) == 2
    assert rank(Gf2Matrix((), 6)) == 0


def test_solve_affine_examples():
    quad = canonical_quadruple(3)
    m = quad.form_matrix()
    res = solve_affine(m, [1, 1, 1])
    assert res.count == 2 ** (2 * 3 - 3)
    assert res.rank == 3 and res.consistent

    empty = solve_affine(Gf2Matrix((), 6), [])
    assert empty.count == 64 and empty.rank == 0

    x, y = 0b000011, 0b001100
    dep = solve_affine(Gf2Matrix.form_rows([x, y, x ^ y], 6), [1, 1, 1])
    assert dep == AffineSolutionSet(2, False, 0)


def test_solve_affine_rhs_length():
    with pytest.raises(ValueError):
        solve_affine(Gf2Matrix((1, 2), 6), [1])


def test_enumeration_lists_solutions():
    m = Gf2Matrix.form_rows([E(1), E(3)], 6)
    res = solve_affine(m, [1, 0], enumerate_limit=100)
    assert list(res.solutions) == brute_force_solutions(list(m.rows), [1, 0], 6)
    assert solve_affine(m, [1, 0], enumerate_limit=4).solutions is None
    with pytest.raises(ValueError):
        solve_affine(m, [1, 0], enumerate_limit=1 << 30)


@settings(max_examples=200)
@given(st.lists(vec6, max_size=7), st.data())
def test_solve_affine_matches_brute_force(rows, data):
    rhs = data.draw(st.lists(st.integers(0, 1), min_size=len(rows), max_size=len(rows)))
    res = solve_affine(Gf2Matrix(tuple(rows), 6), rhs, enumerate_limit=64)
    truth = brute_force_solutions(rows, rhs, 6)
    assert res.count == len(truth)
    assert res.consistent == bool(truth)
    assert list(res.solutions) == truth
    if res.consistent:
        assert res.count == 2 ** (6 - res.rank)
