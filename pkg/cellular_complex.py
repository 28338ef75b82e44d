"""
Cellular chain complex of a Seifert manifold
One 0-cell, 1-cells t_j, q_k, h, 2-cells delta, rho_k, nu_j, mu_k and 3-cells eps, zeta_k
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
from sympy import Matrix

from seifert_invariants import SeifertInvariants, SeifertType
from exact_linalg import formula_vector, cohomology_basis, smith_normal_form


@dataclass
class CellComplex:
    """Labels per dimension and integer boundary matrices boundary[d] : C_d -> C_{d-1}"""
    inv: SeifertInvariants
    labels: List[List[str]]
    boundary: Dict[int, np.ndarray]
    _index: List[Dict[str, int]] = field(default_factory=list, repr=False)

    def __post_init__(self):
        self._index = [{label: i for i, label in enumerate(row)} for row in self.labels]

    def size(self, dim: int) -> int:
        return len(self.labels[dim])

    def index(self, dim: int, label: str) -> int:
        return self._index[dim][label]

    def coboundary(self, dim: int) -> np.ndarray:
        """Matrix of the coboundary C^dim -> C^{dim+1}"""
        return self.boundary[dim + 1].T

    def vector(self, dim: int, formula: Dict[str, Fraction], p: Optional[int] = None) -> np.ndarray:
        """Cochain vector from {label: coefficient}; reduced mod p when p is given"""
        return formula_vector(self._index[dim], formula, p)


@dataclass
class CellCochain:
    degree: int
    values: np.ndarray
    modulus: Optional[int] = None  # None means integer coefficients


@dataclass
class CohomologyGroups:
    """F_p cohomology with explicit representatives (columns) per degree"""
    p: int
    representatives: List[np.ndarray]
    coboundaries: List[np.ndarray]

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(rep.shape[1] for rep in self.representatives)


@dataclass
class HomologyGroup:
    free_rank: int
    torsion: List[int]

    def describe(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def build_cell_complex(inv: SeifertInvariants) -> CellComplex:
    """
    Build the cellular complex and its boundary matrices

    Args:
        inv: Normalized invariants

    Returns:
        CellComplex
    """
    gp, m = inv.gp, inv.m
    eps_signs = inv.eps_signs
    labels = [
        ["sigma"],
        [f"t_{j}" for j in range(1, gp + 1)] + [f"q_{k}" for k in range(m + 1)] + ["h"],
        ["delta"] + [f"rho_{k}" for k in range(m + 1)]
        + [f"nu_{j}" for j in range(1, gp + 1)] + [f"mu_{k}" for k in range(m + 1)],
        ["eps"] + [f"zeta_{k}" for k in range(m + 1)],
    ]
    index = [{label: i for i, label in enumerate(row)} for row in labels]
    boundary = {d: np.zeros((len(labels[d - 1]), len(labels[d])), dtype=np.int64) for d in (1, 2, 3)}

    d2 = boundary[2]
    col = index[2]["delta"]
    for k in range(m + 1):
        d2[index[1][f"q_{k}"], col] += 1
    if not inv.eps_type.orientable_base:
        for j in range(1, gp + 1):
            d2[index[1][f"t_{j}"], col] += 2
    for j, eps in enumerate(eps_signs, start=1):
        if eps == -1:
            d2[index[1]["h"], index[2][f"nu_{j}"]] += 2
    for k, (ak, bk) in enumerate(inv.fibers):
        col = index[2][f"mu_{k}"]
        d2[index[1][f"q_{k}"], col] += ak
        d2[index[1]["h"], col] += bk

    d3 = boundary[3]
    col = index[3]["eps"]
    for k in range(m + 1):
        d3[index[2][f"rho_{k}"], col] += 1
        d3[index[2][f"rho_{k}"], index[3][f"zeta_{k}"]] -= 1
    if inv.eps_type.orientable_base:
        if inv.eps_type is SeifertType.O2:
            for j in range(1, gp + 1):
                d3[index[2][f"nu_{j}"], col] += 2 * (-1) ** j
    else:
        for j, eps in enumerate(eps_signs, start=1):
            if eps == 1:
                d3[index[2][f"nu_{j}"], col] += 2

    logging.debug(f"Cell complex for {inv.to_text()}: sizes {[len(row) for row in labels]}")
    return CellComplex(inv=inv, labels=labels, boundary=boundary)


def cell_coboundary(cx: CellComplex, x: CellCochain) -> CellCochain:
    """Apply the transpose boundary; degree 3 has no coboundary"""
    if x.degree >= 3 or x.degree < 0:
        raise ValueError(f"no coboundary out of degree {x.degree}")
    values = cx.coboundary(x.degree) @ x.values
    if x.modulus is not None:
        values = values % x.modulus
    return CellCochain(degree=x.degree + 1, values=values, modulus=x.modulus)


def coboundary_maps(cx: CellComplex) -> List[np.ndarray]:
    return [cx.coboundary(d) for d in range(3)]


def cellular_cohomology(cx: CellComplex, p: int) -> CohomologyGroups:
    """F_p cohomology of the cellular cochain complex, degrees 0..3"""
    sizes = [cx.size(d) for d in range(4)]
    representatives, coboundaries = cohomology_basis(coboundary_maps(cx), sizes, p)
    groups = CohomologyGroups(p=p, representatives=representatives, coboundaries=coboundaries)
    logging.debug(f"Cellular cohomology mod {p}: dims {groups.dims}")
    return groups


def integral_homology(cx: CellComplex) -> List[HomologyGroup]:
    """H_d(M; Z) for d = 0..3 from Smith normal forms of the boundary matrices"""
    ranks = {0: 0, 4: 0}
    torsion = {0: [], 4: []}
    for d in (1, 2, 3):
        form = smith_normal_form(Matrix(cx.boundary[d].tolist()))
        ranks[d] = form.rank
        torsion[d] = [abs(x) for x in form.invariant_factors if abs(x) > 1]
    groups = []
    for d in range(4):
        free = cx.size(d) - ranks[d] - ranks[d + 1]
        groups.append(HomologyGroup(free_rank=free, torsion=torsion[d + 1]))
    return groups

