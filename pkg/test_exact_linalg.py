from fractions import Fraction
from itertools import combinations
from math import gcd
from functools import reduce

import numpy as np
import pytest
from sympy import Matrix

from exact_linalg import (LinalgError, QuotientError, PrimeFieldMatrix, residue, formula_vector,
                          rref, rank, kernel_basis, solve, quotient_coords, cohomology_basis,
                          smith_normal_form)


def test_rank_examples():
    assert rank([[2, 4], [6, 8]], 5) == 2
    assert rank([[1, 0], [0, 2]], 2) == 1
    assert rank(np.zeros((0, 3), dtype=np.int64), 3) == 0


def test_rref_returns_pivots():
    reduced, pivots, r = rref([[0, 2, 4], [0, 1, 2]], 3)
    assert r == 1
    assert pivots == [1]
    assert reduced[0].tolist() == [0, 1, 2]


@pytest.mark.parametrize("p", [2, 3, 7])
def test_rank_nullity(p):
    rng = np.random.default_rng(p)
    matrix = rng.integers(-5, 6, size=(6, 9))
    kernel = kernel_basis(matrix, p)
    assert kernel.shape[1] == 9 - rank(matrix, p)
    assert not np.mod(matrix @ kernel, p).any()


def test_solve():
    matrix = [[1, 1], [0, 1]]
    x = solve(matrix, [3, 1], 5)
    assert x.tolist() == [2, 1]
    assert solve([[1, 1], [1, 1]], [0, 1], 5) is None


def test_residue_of_fractions():
    assert residue(Fraction(-1, 2), 3) == 1
    assert residue(-4, 3) == 2
    with pytest.raises(LinalgError):
        residue(Fraction(1, 2), 2)


def test_formula_vector():
    index = {"a": 0, "b": 1, "c": 2}
    assert formula_vector(index, {"a": 2, "c": -1}).tolist() == [2, 0, -1]
    assert formula_vector(index, {"b": Fraction(1, 2)}, 5).tolist() == [0, 3, 0]
    with pytest.raises(LinalgError):
        formula_vector(index, {"b": Fraction(1, 2)})


def test_prime_field_matrix_reduces_and_limits():
    matrix = PrimeFieldMatrix(np.array([[-1, 5]]), 3)
    assert matrix.entries.tolist() == [[2, 2]]
    assert (matrix.rows, matrix.cols) == (1, 2)
    with pytest.raises(LinalgError):
        PrimeFieldMatrix(np.eye(2, dtype=np.int64), 2 ** 31 + 11)


def test_quotient_coords():
    generators = np.array([[1], [0], [0]])
    coboundaries = np.array([[0], [1], [0]])
    coords = quotient_coords([2, 7, 0], generators, coboundaries, 5)
    assert coords.tolist() == [2]
    with pytest.raises(QuotientError):
        quotient_coords([0, 0, 1], generators, coboundaries, 5)


def test_cohomology_basis_of_circle():
    # one vertex, one loop: d0 = 0
    reps, bounds = cohomology_basis([np.zeros((1, 1), dtype=np.int64)], [1, 1], 3)
    assert [r.shape[1] for r in reps] == [1, 1]
    assert bounds[1].shape[1] == 0


def test_cohomology_basis_of_interval():
    # two vertices joined by an edge
    d0 = np.array([[-1, 1]])
    reps, _ = cohomology_basis([d0], [2, 1], 2)
    assert [r.shape[1] for r in reps] == [1, 0]


def test_smith_normal_form_example():
    form = smith_normal_form([[2, 4], [6, 8]])
    assert form.invariant_factors == [2, 4]
    assert form.rank == 2
    assert form.left * Matrix([[2, 4], [6, 8]]) * form.right == form.diagonal


def _minor_gcds(matrix: Matrix):
    rows, cols = matrix.shape
    result = []
    for size in range(1, min(rows, cols) + 1):
        minors = [matrix.extract(list(r), list(c)).det()
                  for r in combinations(range(rows), size)
                  for c in combinations(range(cols), size)]
        value = reduce(gcd, (abs(int(x)) for x in minors), 0)
        if value == 0:
            break
        result.append(value)
    return result


@pytest.mark.parametrize("seed", range(6))
def test_smith_normal_form_matches_minor_gcds(seed):
    rng = np.random.default_rng(seed)
    matrix = Matrix(rng.integers(-6, 7, size=(3, 4)).tolist())
    form = smith_normal_form(matrix)
    factors = form.invariant_factors
    assert all(d > 0 for d in factors)
    assert all(factors[i + 1] % factors[i] == 0 for i in range(len(factors) - 1))
    products = []
    running = 1
    for d in factors:
        running *= d
        products.append(running)
    assert products == _minor_gcds(matrix)
    assert form.left * matrix * form.right == form.diagonal
    assert abs(form.left.det()) == 1 and abs(form.right.det()) == 1


def test_smith_normal_form_zero_and_empty():
    assert smith_normal_form([[0, 0], [0, 0]]).invariant_factors == []
    assert smith_normal_form(Matrix(0, 3, [])).rank == 0
