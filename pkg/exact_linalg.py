"""
Exact linear algebra over F_p (numpy int64, p < 2^31) and over Z (sympy)
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix, eye

MAX_PRIME = 2 ** 31


class LinalgError(ValueError):
    """Raised for inconsistent linear algebra requests"""


class QuotientError(LinalgError):
    """Raised when a vector is not in the span of cocycle representatives and coboundaries"""


@dataclass(frozen=True)
class PrimeFieldMatrix:
    """Dense matrix with entries reduced into 0..p-1"""
    entries: np.ndarray
    p: int

    def __post_init__(self):
        if self.p >= MAX_PRIME:
            raise LinalgError(f"p must be below 2^31, got {self.p}")
        object.__setattr__(self, "entries", as_residues(self.entries, self.p))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class SmithForm:
    """left * M * right = diagonal, with unimodular left and right"""
    diagonal: Matrix
    left: Matrix
    right: Matrix

    @property
    def invariant_factors(self) -> List[int]:
        size = min(self.diagonal.shape)
        return [int(self.diagonal[i, i]) for i in range(size) if self.diagonal[i, i] != 0]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def as_residues(values, p: int) -> np.ndarray:
    """Copy into an int64 array reduced mod p"""
    array = np.array(values, dtype=np.int64)
    return np.mod(array, p)


def residue(value, p: int) -> int:
    """Reduce an int or Fraction mod p; the denominator must be a p-unit"""
    value = Fraction(value)
    if value.denominator % p == 0:
        raise LinalgError(f"{value} has a denominator divisible by {p}")
    return (value.numerator * pow(value.denominator, -1, p)) % p


def formula_vector(index: Dict[str, int], formula: Dict[str, Fraction], p: Optional[int] = None) -> np.ndarray:
    """
    Vector indexed by labels from a {label: coefficient} formula

    Args:
        index: Label to position map
        formula: Coefficients, integers or Fractions
        p: Reduce mod p when given, otherwise coefficients must be integral
    """
    vec = np.zeros(len(index), dtype=np.int64)
    for label, coef in formula.items():
        position = index[label]
        if p is None:
            if Fraction(coef).denominator != 1:
                raise LinalgError(f"non-integral coefficient {coef} on {label}")
            vec[position] += int(coef)
        else:
            vec[position] = (vec[position] + residue(coef, p)) % p
    return vec


def rref(matrix, p: int) -> Tuple[np.ndarray, List[int], int]:
    """
    Reduced row echelon form over F_p

    Args:
        matrix: 2-d array-like or PrimeFieldMatrix
        p: Prime modulus

    Returns:
        (reduced matrix, pivot columns, rank)
    """
    if isinstance(matrix, PrimeFieldMatrix):
        p = matrix.p
        matrix = matrix.entries
    reduced = as_residues(matrix, p)
    if reduced.ndim != 2:
        raise LinalgError("rref expects a 2-d matrix")
    rows, cols = reduced.shape
    pivots: List[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        candidates = np.nonzero(reduced[row:, col])[0]
        if candidates.size == 0:
            continue
        pivot_row = row + int(candidates[0])
        if pivot_row != row:
            reduced[[row, pivot_row]] = reduced[[pivot_row, row]]
        inverse = pow(int(reduced[row, col]), -1, p)
        reduced[row] = (reduced[row] * inverse) % p
        factors = reduced[:, col].copy()
        factors[row] = 0
        targets = np.nonzero(factors)[0]
        if targets.size:
            reduced[targets] = (reduced[targets] - np.outer(factors[targets], reduced[row])) % p
        pivots.append(col)
        row += 1
    return reduced, pivots, row


def rank(matrix, p: int) -> int:
    array = np.asarray(matrix)
    if array.size == 0:
        return 0
    return rref(array, p)[2]


def kernel_basis(matrix, p: int) -> np.ndarray:
    """Columns form a basis of {x : M x = 0} over F_p"""
    array = np.asarray(matrix, dtype=np.int64)
    cols = array.shape[1]
    if array.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    reduced, pivots, _ = rref(array, p)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for index, free_col in enumerate(free):
        basis[free_col, index] = 1
        for row, pivot_col in enumerate(pivots):
            basis[pivot_col, index] = (-reduced[row, free_col]) % p
    return basis


def column_space_basis(matrix, p: int) -> np.ndarray:
    """Independent subset of the columns spanning the column space"""
    array = as_residues(matrix, p)
    if array.size == 0:
        return np.zeros((array.shape[0], 0), dtype=np.int64)
    _, pivots, _ = rref(array, p)
    return array[:, pivots]


def solve(matrix, rhs, p: int) -> Optional[np.ndarray]:
    """One solution of M x = rhs over F_p, or None"""
    array = as_residues(matrix, p)
    target = as_residues(rhs, p).reshape(-1, 1)
    cols = array.shape[1]
    if cols == 0:
        return np.zeros(0, dtype=np.int64) if not target.any() else None
    reduced, pivots, _ = rref(np.hstack([array, target]), p)
    if pivots and pivots[-1] == cols:
        return None
    solution = np.zeros(cols, dtype=np.int64)
    for row, pivot_col in enumerate(pivots):
        solution[pivot_col] = reduced[row, cols]
    return solution


def stack_columns(vectors: Sequence[np.ndarray], length: int) -> np.ndarray:
    if not len(vectors):
        return np.zeros((length, 0), dtype=np.int64)
    return np.column_stack([np.asarray(v, dtype=np.int64) for v in vectors])


def complement_basis(subspace, space, p: int) -> np.ndarray:
    """Columns of `space` completing a basis of span(subspace) to one of span(space)"""
    sub = as_residues(subspace, p)
    whole = as_residues(space, p)
    combined = np.hstack([sub, whole])
    if combined.size == 0:
        return np.zeros((whole.shape[0], 0), dtype=np.int64)
    _, pivots, _ = rref(combined, p)
    offset = sub.shape[1]
    chosen = [c - offset for c in pivots if c >= offset]
    return whole[:, chosen]


def quotient_coords(vector, generators, coboundaries, p: int) -> np.ndarray:
    """
    Coordinates of the class of `vector` in the basis given by generator columns

    Args:
        vector: Cocycle to express
        generators: Columns representing a basis of the quotient
        coboundaries: Columns spanning the coboundaries (need not be independent)
        p: Prime modulus

    Returns:
        Coordinate vector of length generators.shape[1]
    """
    gens = as_residues(generators, p)
    bounds = column_space_basis(coboundaries, p)
    system = np.hstack([gens, bounds])
    solution = solve(system, vector, p)
    if solution is None:
        raise QuotientError("vector is not a cocycle in the span of the given classes")
    return solution[:gens.shape[1]]


def cohomology_basis(coboundary_maps: Sequence[np.ndarray], sizes: Sequence[int], p: int):
    """
    F_p cohomology of a cochain complex given by its coboundary matrices

    Args:
        coboundary_maps: coboundary_maps[d] maps C^d to C^{d+1}, shape (sizes[d+1], sizes[d])
        sizes: Cochain ranks per degree
        p: Prime modulus

    Returns:
        (representatives, coboundaries) per degree, both as column matrices
    """
    representatives, coboundaries = [], []
    top = len(sizes) - 1
    for d, size in enumerate(sizes):
        if d < top:
            cocycles = kernel_basis(coboundary_maps[d], p)
        else:
            cocycles = np.eye(size, dtype=np.int64)
        if d > 0:
            bounds = column_space_basis(coboundary_maps[d - 1], p)
        else:
            bounds = np.zeros((size, 0), dtype=np.int64)
        representatives.append(complement_basis(bounds, cocycles, p))
        coboundaries.append(bounds)
    return representatives, coboundaries


# --- integers ---

def _least_nonzero(matrix: Matrix, start: int) -> Optional[Tuple[int, int]]:
    best = None
    for i in range(start, matrix.rows):
        for j in range(start, matrix.cols):
            value = abs(matrix[i, j])
            if value and (best is None or value < best[0]):
                best = (value, i, j)
    return None if best is None else (best[1], best[2])


def smith_normal_form(matrix) -> SmithForm:
    """
    Smith normal form with transforms over Z

    Args:
        matrix: Integer matrix (any sympy-convertible input)

    Returns:
        SmithForm with left * matrix * right = diagonal and d_i | d_{i+1}
    """
    work = Matrix(matrix)
    rows, cols = work.shape
    left = eye(rows)
    right = eye(cols)
    if rows == 0 or cols == 0:
        return SmithForm(diagonal=work, left=left, right=right)

    for s in range(min(rows, cols)):
        position = _least_nonzero(work, s)
        if position is None:
            break
        i, j = position
        work.row_swap(s, i)
        left.row_swap(s, i)
        work.col_swap(s, j)
        right.col_swap(s, j)

        while True:
            clean = True
            for i in range(s + 1, rows):
                if work[i, s] != 0:
                    q = work[i, s] // work[s, s]
                    work.zip_row_op(i, s, lambda x, y: x - q * y)
                    left.zip_row_op(i, s, lambda x, y: x - q * y)
                    clean = clean and work[i, s] == 0
            for j in range(s + 1, cols):
                if work[s, j] != 0:
                    q = work[s, j] // work[s, s]
                    work.col_op(j, lambda x, r: x - q * work[r, s])
                    right.col_op(j, lambda x, r: x - q * right[r, s])
                    clean = clean and work[s, j] == 0
            if not clean:
                # bring the smallest remainder of row/column s onto the pivot
                best = (abs(work[s, s]), s, s)
                for i in range(s + 1, rows):
                    if work[i, s] != 0 and abs(work[i, s]) < best[0]:
                        best = (abs(work[i, s]), i, s)
                for j in range(s + 1, cols):
                    if work[s, j] != 0 and abs(work[s, j]) < best[0]:
                        best = (abs(work[s, j]), s, j)
                _, i, j = best
                if i != s:
                    work.row_swap(s, i)
                    left.row_swap(s, i)
                if j != s:
                    work.col_swap(s, j)
                    right.col_swap(s, j)
                continue

            offender = None
            for i in range(s + 1, rows):
                for j in range(s + 1, cols):
                    if work[i, j] % work[s, s] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            work.zip_row_op(s, offender, lambda x, y: x + y)
            left.zip_row_op(s, offender, lambda x, y: x + y)

        if work[s, s] < 0:
            work.row_op(s, lambda x, _: -x)
            left.row_op(s, lambda x, _: -x)

    logging.debug(f"Smith normal form of a {rows}x{cols} matrix computed")
    return SmithForm(diagonal=work, left=left, right=right)
