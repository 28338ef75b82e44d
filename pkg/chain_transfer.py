"""
Chain map from cellular to simplicial chains, its transpose, and explicit cocycle lifts
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from seifert_invariants import SeifertInvariants, SeifertType, DerivedConstants
from pavement_word import PavementWord
from exact_linalg import LinalgError, QuotientError, quotient_coords, rank, stack_columns
from cellular_complex import CellComplex, CohomologyGroups
from delta_complex import DeltaComplex, S, fiber_label
from closed_form_ring import Generator


class ChainMapError(RuntimeError):
    """Raised when the boundary does not commute with T"""


class LiftError(ValueError):
    """Raised when no formula lift exists for a generator, or it cannot be reduced mod p"""


class RationalCochain(dict):
    """{label: Fraction} with in-place accumulation"""

    def add(self, label: str, coef=1) -> 'RationalCochain':
        value = self.get(label, Fraction(0)) + Fraction(coef)
        if value:
            self[label] = value
        else:
            self.pop(label, None)
        return self

    def merge(self, other: Dict[str, Fraction], coef=1) -> 'RationalCochain':
        for label, value in other.items():
            self.add(label, Fraction(coef) * value)
        return self


@dataclass
class ChainMap:
    """matrices[d] has shape (simplicial d-simplices, cellular d-cells)"""
    matrices: List[np.ndarray]
    cell: CellComplex
    simp: DeltaComplex

    def column(self, d: int, cell_label: str) -> Dict[str, int]:
        """Image T(cell) as {simplex label: coefficient}"""
        col = self.matrices[d][:, self.cell.index(d, cell_label)]
        return {self.simp.labels[d][i]: int(col[i]) for i in np.nonzero(col)[0]}


@dataclass
class CocycleLift:
    label: str
    degree: int
    cellular: np.ndarray
    simplicial: np.ndarray
    p: int
    formula: Dict[str, Fraction] = field(default_factory=dict, repr=False)
    is_cocycle: bool = False
    is_section: bool = False

    @property
    def valid(self) -> bool:
        return self.is_cocycle and self.is_section


@dataclass
class TransferContext:
    """Everything the lift formulas read: invariants, constants, both complexes and T"""
    inv: SeifertInvariants
    derived: DerivedConstants
    cell: CellComplex
    simp: DeltaComplex
    chain_map: ChainMap

    @property
    def p(self) -> int:
        return self.derived.p

    @property
    def star(self) -> int:
        return self.inv.star

    def word(self, k: int) -> PavementWord:
        return self.simp.words[k]


# --- chain map ---

def _t_delta(inv: SeifertInvariants, size: int) -> Dict[str, int]:
    image: Dict[str, int] = {}
    if inv.eps_type.orientable_base:
        for u in range(inv.g):
            for offset, sign in zip(range(4), (1, 1, -1, -1)):
                image[f"delta_{4 * u + offset}"] = sign
        for ell in range(inv.star, size):
            image[f"delta_{ell}"] = 1
    else:
        for ell in range(size):
            image[f"delta_{ell}"] = 1
    return image


def _t_mu(k: int, word: PavementWord) -> Dict[str, int]:
    if word.beta >= 0:
        return {fiber_label("mu", k, ell): 1 for ell in range(1, word.z + 1)}
    image = {fiber_label("mu", k, 1): 1}
    image.update({fiber_label("mu", k, ell): -1 for ell in range(2, word.z + 1)})
    return image


def _t_eps(inv: SeifertInvariants, size: int) -> Dict[str, int]:
    image = RationalCochain()

    def d_prime(ell: int, coef: int) -> None:
        image.add(f"D+_{ell}", coef)
        image.add(f"D-_{ell}", -coef)

    for k in range(inv.m + 1):
        image.add(f"R_{k},1", 1)
        image.add(f"R_{k},2", -1)
    for ell in range(inv.star, size):
        d_prime(ell, 1)

    if inv.eps_type.orientable_base:
        for u in range(inv.g):
            for offset, sign in zip(range(4), (1, 1, -1, -1)):
                d_prime(4 * u + offset, sign)
        for j in range(1, inv.gp + 1):
            if inv.eps_type is SeifertType.O1:
                signs = (1, -1, -1, 1)
            else:
                signs = (-1) ** j, (-1) ** j, (-1) ** j, (-1) ** j
            for name, sign in zip((f"N_{j},1", f"N_{j},2", f"N'_{j},1", f"N'_{j},2"), signs):
                image.add(name, sign)
    else:
        for ell in range(inv.star):
            d_prime(ell, 1)
        for j, eps in enumerate(inv.eps_signs, start=1):
            signs = (1, -1, 1, -1) if eps == 1 else (-1, -1, 1, 1)
            for name, sign in zip((f"N_{j},1", f"N_{j},2", f"N'_{j},1", f"N'_{j},2"), signs):
                image.add(name, sign)
    return {label: int(value) for label, value in image.items()}


def _t_zeta(k: int, word: PavementWord) -> Dict[str, int]:
    image = {fiber_label("R'", k, 1): -1, fiber_label("R'", k, 2): 1}
    for ell in range(1, word.z + 1):
        sign = 1 if word.beta >= 0 or ell == 1 else -1
        image[fiber_label("M+", k, ell)] = sign
        image[fiber_label("M-", k, ell)] = -sign
    return image


def build_T(cell: CellComplex, simp: DeltaComplex) -> ChainMap:
    """
    Build T : C_*(cellular) -> C_*(simplicial) and check that it commutes with the boundaries

    Args:
        cell: Cellular complex
        simp: Delta-complex of the same invariants

    Returns:
        ChainMap

    Raises:
        ChainMapError: when boundary(T(x)) != T(boundary(x)) for some cell
    """
    inv = cell.inv
    size = inv.star + inv.m + 1
    images: List[Dict[str, Dict[str, int]]] = [
        {"sigma": {"sigma": 1}},
        {label: {label: 1} for label in cell.labels[1]},
        {}, {},
    ]

    images[2]["delta"] = _t_delta(inv, size)
    for k in range(inv.m + 1):
        images[2][f"rho_{k}"] = {f"rho_{k},1": 1, f"rho_{k},2": -1}
        images[2][f"mu_{k}"] = _t_mu(k, simp.words[k])
    for j, eps in enumerate(inv.eps_signs, start=1):
        images[2][f"nu_{j}"] = {f"nu_{j},1": 1, f"nu_{j},2": -eps}

    images[3]["eps"] = _t_eps(inv, size)
    for k in range(inv.m + 1):
        images[3][f"zeta_{k}"] = _t_zeta(k, simp.words[k])

    matrices = []
    for d in range(4):
        matrix = np.zeros((simp.size(d), cell.size(d)), dtype=np.int64)
        for col, label in enumerate(cell.labels[d]):
            for simplex, coef in images[d][label].items():
                matrix[simp.index(d, simplex), col] += coef
        matrices.append(matrix)

    for d in (1, 2, 3):
        left = simp.boundary_matrix(d) @ matrices[d]
        right = matrices[d - 1] @ cell.boundary[d]
        if not np.array_equal(left, right):
            bad = [cell.labels[d][c] for c in np.nonzero((left != right).any(axis=0))[0]]
            logging.error(f"Chain map check failed in degree {d} for cells {bad}")
            raise ChainMapError(f"boundary does not commute with T in degree {d}: {bad}")

    logging.debug(f"Chain map built for {inv.to_text()}")
    return ChainMap(matrices=matrices, cell=cell, simp=simp)


def transpose_T(chain_map: ChainMap, degree: int, cochain: np.ndarray, p: Optional[int] = None) -> np.ndarray:
    """T^t: simplicial cochain -> cellular cochain, (T^t f)(x) = f(T(x))"""
    values = chain_map.matrices[degree].T @ np.asarray(cochain, dtype=np.int64)
    return values % p if p is not None else values


def cohomology_isomorphism(chain_map: ChainMap, cell_groups: CohomologyGroups,
                           simp_groups: CohomologyGroups, p: int) -> bool:
    """True when T^t induces an isomorphism H*(simplicial) -> H*(cellular) in every degree"""
    for d in range(4):
        simp_reps = simp_groups.representatives[d]
        cell_reps = cell_groups.representatives[d]
        if simp_reps.shape[1] != cell_reps.shape[1]:
            logging.error(f"Degree {d}: dimensions differ ({simp_reps.shape[1]} vs {cell_reps.shape[1]})")
            return False
        if not simp_reps.shape[1]:
            continue
        columns = []
        try:
            for i in range(simp_reps.shape[1]):
                image = transpose_T(chain_map, d, simp_reps[:, i], p)
                columns.append(quotient_coords(image, cell_reps, cell_groups.coboundaries[d], p))
        except QuotientError as exc:
            logging.error(f"Degree {d}: T^t image is not a cocycle class: {exc}")
            return False
        induced = stack_columns(columns, cell_reps.shape[1])
        if rank(induced, p) != cell_reps.shape[1]:
            logging.error(f"Degree {d}: induced map is singular mod {p}")
            return False
    return True


# --- auxiliary cochains ---

def e_plus_minus(ell: int) -> RationalCochain:
    """e_l + S_l^+ + S_l^-"""
    return RationalCochain({f"e_{ell}": Fraction(1), S("+", ell): Fraction(1), S("-", ell): Fraction(1)})


def aux_U(ell: int) -> RationalCochain:
    return RationalCochain({f"F_{ell}": Fraction(1), f"delta_{ell}": Fraction(1),
                            f"T+_{ell}": Fraction(1), f"T-_{ell}": Fraction(1)})


def aux_Y(k: int, word: PavementWord) -> RationalCochain:
    y = RationalCochain()
    y.add(f"G_{k}").add(fiber_label("X", k, 1)).add(fiber_label("mu", k, 1))
    if word.beta > 0:
        y.add(f"H'_{k}")
        for ell in range(2, word.z - word.w + 3):
            y.add(fiber_label("P+", k, ell), -1)
    else:
        y.add(f"Q_{k}")
    return y


def aux_Z(k: int, word: PavementWord) -> RationalCochain:
    z = RationalCochain({f"q_{k}": Fraction(1), f"g_{k}": Fraction(1)})
    if word.beta > 0:
        z.add(f"C+_{k}", -word.v)
        z.add(fiber_label("S", k, 0))
        for ell in range(2, word.z + 1):
            count = word.count_from(ell, "Q")
            z.add(fiber_label("S", k, ell), -count)
            z.add(fiber_label("p", k, ell), -count)
    return z


def aux_V(k: int, word: PavementWord) -> RationalCochain:
    v = RationalCochain()
    v.add(f"C+_{k}", word.u if word.beta > 0 else 1)
    v.add(fiber_label("S", k, 0))
    for ell in range(2, word.z + 1):
        if word.beta > 0:
            weight = word.count_from(ell, "H")
        else:
            weight = -(word.z - ell + 1)
        v.add(fiber_label("S", k, ell), weight)
        v.add(fiber_label("p", k, ell), weight)
    return v


def _integral(simp: DeltaComplex, dim: int, formula: Dict[str, Fraction]) -> np.ndarray:
    return simp.vector(dim, formula)


def aux_identity_check(simp: DeltaComplex, inv: SeifertInvariants, k: int) -> bool:
    """
    Both auxiliary identities for fiber k, as exact integer cochain identities

        coboundary(Z_k) = U_{*+k} + a_k Y_k
        sum over h-letters of (X_i + mu_i) = b_k Y_k - H'_k - G_k + coboundary(V_k)
    """
    word = simp.words[k]
    a_k, b_k = inv.fibers[k]
    d1 = simp.coboundary(1)
    y = _integral(simp, 2, aux_Y(k, word))

    left = d1 @ _integral(simp, 1, aux_Z(k, word))
    right = _integral(simp, 2, aux_U(inv.star + k)) + a_k * y
    first = np.array_equal(left, right)

    h_sum = RationalCochain()
    for i in range(1, word.z + 1):
        if word.letter(i) == "H":
            h_sum.add(fiber_label("X", k, i)).add(fiber_label("mu", k, i))
    left = _integral(simp, 2, h_sum)
    right = (b_k * y - _integral(simp, 2, {f"H'_{k}": 1, f"G_{k}": 1})
             + d1 @ _integral(simp, 1, aux_V(k, word)))
    second = np.array_equal(left, right)

    if not (first and second):
        logging.error(f"Auxiliary identities fail for fiber {k} ({a_k},{b_k}): first={first} second={second}")
    return first and second


# --- lift formulas ---

def _telescope(ctx: TransferContext, start: int, stop: int) -> RationalCochain:
    """Cochain whose coboundary is U_{*+stop} - U_{*+start}"""
    chain = RationalCochain()
    low, high, sign = (start, stop, 1) if stop >= start else (stop, start, -1)
    for i in range(low + 1, high + 1):
        chain.merge(e_plus_minus(ctx.star + i), sign)
    return chain


def _lift_one(ctx: TransferContext) -> RationalCochain:
    lift = RationalCochain({"sigma": Fraction(1), "a": Fraction(1), "b": Fraction(1)})
    for k in range(ctx.inv.m + 1):
        lift.add(f"c_{k}").add(f"d_{k}")
    return lift


def _handle_pair(j: int) -> RationalCochain:
    return RationalCochain({f"t_{j}": Fraction(1), f"f_{j}": Fraction(1)})


def _lift_theta(ctx: TransferContext, j: int) -> RationalCochain:
    if ctx.inv.eps_type.orientable_base:
        ell = 2 * j if j % 2 else 2 * j - 1
        return _handle_pair(j).merge(e_plus_minus(ell)).merge(e_plus_minus(ell - 1))
    if ctx.p == 2:
        return _handle_pair(j).merge(e_plus_minus(2 * j - 1))
    # lift of t_j - t_1
    lift = _handle_pair(j).merge(_handle_pair(1), -1)
    for u in range(2, 2 * j - 1):
        lift.merge(e_plus_minus(u), -2)
    lift.merge(e_plus_minus(1), -1)
    lift.merge(e_plus_minus(2 * j - 1), -1)
    return lift


def _lift_alpha(ctx: TransferContext) -> RationalCochain:
    inv, derived = ctx.inv, ctx.derived
    a = derived.a
    lift = RationalCochain({"h": Fraction(1), "A+": Fraction(1)})
    for j in range(1, inv.gp + 1):
        lift.add(f"f_{j}")
    for ell in range(inv.star + inv.m + 1):
        lift.add(S("+", ell))
    running = Fraction(0)
    for k, (a_k, b_k) in enumerate(inv.fibers):
        word = ctx.word(k)
        lift.add(f"g_{k}")
        lift.merge(aux_Z(k, word), -Fraction(b_k, a_k))
        lift.merge(aux_V(k, word), -1)
        if k > 0:
            lift.merge(e_plus_minus(inv.star + k), -running / a)
        running += b_k * a // a_k
    if inv.eps_type is SeifertType.N1 and ctx.p > 2:
        correction = _handle_pair(1).merge(e_plus_minus(1), -1).merge(e_plus_minus(0), -2)
        lift.merge(correction, Fraction(derived.c, 2 * a))
    return lift


def _lift_alpha_k(ctx: TransferContext, fiber: int) -> RationalCochain:
    inv = ctx.inv
    lift = aux_Z(fiber, ctx.word(fiber))
    if inv.eps_type.orientable_base or ctx.p == 2:
        base = ctx.derived.fiber(0)
        lift.merge(aux_Z(base, ctx.word(base)), -1)
        lift.merge(_telescope(ctx, base, fiber), -1)
        return lift
    # lift of q_k - t_g / 2
    g = inv.g
    lift.merge(_handle_pair(g), Fraction(-1, 2))
    lift.merge(e_plus_minus(2 * g - 1), Fraction(-1, 2))
    for ell in range(fiber + 1):
        lift.merge(e_plus_minus(2 * g + ell), -1)
    return lift


def _lift_beta(ctx: TransferContext) -> RationalCochain:
    return aux_U(0)


def _lift_beta_k(ctx: TransferContext, fiber: int) -> RationalCochain:
    word = ctx.word(fiber)
    lift = RationalCochain()
    lift.add(fiber_label("mu", fiber, 1)).add(fiber_label("X", fiber, 1)).add(f"G_{fiber}").add(f"Q_{fiber}")
    for ell in range(2, word.z - word.w + 2):
        lift.add(fiber_label("P+", fiber, ell), -1)
    return lift


def _lift_nu(ctx: TransferContext, j: int) -> RationalCochain:
    lift = RationalCochain({f"nu_{j},1": Fraction(1)})
    if ctx.inv.eps_type.orientable_base:
        eps = ctx.inv.eps_signs[j - 1]
        if j % 2:
            lift.add(f"H_{2 * j - 1}", eps).add(f"F_{2 * j - 1}", eps).add(f"H_{2 * j}")
        else:
            lift.add(f"H_{2 * j - 1}", eps).add(f"F_{2 * j - 2}", eps).add(f"H_{2 * j - 2}")
    else:
        lift.add(f"H_{2 * j - 1}").add(f"F_{2 * j - 1}")
    return lift


def lift_formula(generator: Generator, ctx: TransferContext) -> RationalCochain:
    """
    Rational simplicial cochain lifting a generator's cellular representative

    Raises:
        LiftError: when the generator has no formula lift for this Type and prime
    """
    kind, index = generator.kind, generator.index
    if kind == "one":
        return _lift_one(ctx)
    if kind == "theta":
        return _lift_theta(ctx, index)
    if kind == "alpha":
        return _lift_alpha(ctx)
    if kind == "alpha_k":
        return _lift_alpha_k(ctx, generator.fiber)
    if kind == "beta":
        return _lift_beta(ctx)
    if kind == "beta_k":
        return _lift_beta_k(ctx, generator.fiber)
    if kind == "phi":
        if ctx.p > 2 and ctx.inv.eps_type not in (SeifertType.O1, SeifertType.N2):
            raise LiftError(f"no formula lift of {generator.label} for type {ctx.inv.eps_type.value} mod {ctx.p}")
        return _lift_nu(ctx, index)
    raise LiftError(f"no formula lift for {generator.label}")


def verify_lift(lift: CocycleLift, ctx: TransferContext) -> Tuple[bool, bool]:
    """(cocycle mod p, T^t R equals the cellular representative mod p)"""
    p = lift.p
    if lift.degree < 3:
        is_cocycle = not (ctx.simp.coboundary(lift.degree) @ lift.simplicial % p).any()
    else:
        is_cocycle = True
    pulled = transpose_T(ctx.chain_map, lift.degree, lift.simplicial, p)
    is_section = np.array_equal(pulled, lift.cellular % p)
    return bool(is_cocycle), bool(is_section)


def lift_generator(generator: Generator, ctx: TransferContext) -> CocycleLift:
    """
    Build and verify the simplicial lift of a generator

    Args:
        generator: Generator with its cellular formula
        ctx: TransferContext

    Returns:
        CocycleLift with is_cocycle / is_section filled in
    """
    formula = lift_formula(generator, ctx)
    p = ctx.p
    try:
        simplicial = ctx.simp.vector(generator.degree, formula, p)
        cellular = ctx.cell.vector(generator.degree, generator.formula, p)
    except LinalgError as exc:
        raise LiftError(f"{generator.label}: {exc}") from exc

    lift = CocycleLift(label=generator.label, degree=generator.degree, cellular=cellular,
                       simplicial=simplicial, p=p, formula=dict(formula))
    lift.is_cocycle, lift.is_section = verify_lift(lift, ctx)
    if not lift.valid:
        logging.warning(f"Lift of {generator.label} mod {p} for {ctx.inv.to_text()}: "
                        f"cocycle={lift.is_cocycle} section={lift.is_section}")
    else:
        logging.debug(f"Lift of {generator.label} mod {p} verified ({len(formula)} simplices)")
    return lift


def build_context(inv: SeifertInvariants, derived: DerivedConstants,
                  cell: CellComplex, simp: DeltaComplex) -> TransferContext:
    return TransferContext(inv=inv, derived=derived, cell=cell, simp=simp, chain_map=build_T(cell, simp))
