"""
Alexander-Whitney cup products on the Delta-complex and assembly of the structure constants
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Any

import numpy as np

from exact_linalg import LinalgError, QuotientError, quotient_coords, rank, residue, stack_columns
from seifert_invariants import CaseId, SeifertType
from cellular_complex import CohomologyGroups
from delta_complex import DeltaComplex
from chain_transfer import TransferContext, CocycleLift, LiftError, lift_generator, transpose_T
from closed_form_ring import ExpectedGroups, Generator, Key


class CupError(ValueError):
    """Raised for degree overflow, non-cocycle inputs or a non-vanishing rho component"""


class RhoError(CupError):
    """T^t of a product of 1-cocycles has a rho component"""


@dataclass
class StructureConstants:
    """Class-level products [R(x) u R(y)] in the generator basis, keyed in listing order"""
    p: int
    generators: List[List[str]]
    values: Dict[Key, Dict[str, int]] = field(default_factory=dict)

    def get(self, x: str, y: str) -> Dict[str, int]:
        return self.values.get((x, y), {})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "generators": self.generators,
            "products": [{"left": x, "right": y, "value": dict(value)} for (x, y), value in self.values.items()],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'StructureConstants':
        values = {(item["left"], item["right"]): {k: int(v) for k, v in item["value"].items()}
                  for item in data["products"]}
        return cls(p=data["p"], generators=[list(row) for row in data["generators"]], values=values)


@dataclass
class RingAssembly:
    """Computed ring plus everything the harness checks about how it was computed"""
    constants: StructureConstants
    lift_status: Dict[str, str]
    method_mismatches: List[str] = field(default_factory=list)
    non_cocycles: List[str] = field(default_factory=list)
    rho_nonzero: List[str] = field(default_factory=list)
    commutativity_failures: List[str] = field(default_factory=list)
    paranoid_failures: List[str] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)


def aw_cup(simp: DeltaComplex, f: np.ndarray, q1: int, g: np.ndarray, q2: int,
           p: Optional[int] = None) -> np.ndarray:
    """
    (f u g)(s) = f(front q1-face of s) * g(back q2-face of s)

    Args:
        simp: Delta-complex
        f, g: Cochain vectors of degree q1 and q2
        p: Reduce mod p when given

    Returns:
        Cochain vector of degree q1 + q2
    """
    top = q1 + q2
    if top > 3:
        raise CupError(f"cup of degrees {q1} and {q2} exceeds dimension 3")
    f = np.asarray(f, dtype=np.int64)
    g = np.asarray(g, dtype=np.int64)
    if f.shape[0] != simp.size(q1) or g.shape[0] != simp.size(q2):
        raise CupError("cochain length does not match the complex")
    front = simp.front_face_indices(top, q1)
    back = simp.back_face_indices(top, q2)
    values = f[front] * g[back]
    return values % p if p is not None else values


def leibniz_check(simp: DeltaComplex, f: np.ndarray, q1: int, g: np.ndarray, q2: int, p: int) -> bool:
    """d(f u g) = df u g + (-1)^q1 f u dg, for q1 + q2 <= 2"""
    if q1 + q2 > 2:
        raise CupError("Leibniz rule needs q1 + q2 + 1 <= 3")
    left = simp.coboundary(q1 + q2) @ aw_cup(simp, f, q1, g, q2, p) % p
    right = (aw_cup(simp, simp.coboundary(q1) @ f % p, q1 + 1, g, q2, p)
             + (-1) ** q1 * aw_cup(simp, f, q1, simp.coboundary(q2) @ g % p, q2 + 1, p)) % p
    return bool(np.array_equal(left, right))


def _generator_matrix(ctx: TransferContext, generators: List[Generator], degree: int) -> np.ndarray:
    vectors = [ctx.cell.vector(degree, gen.formula, ctx.p) for gen in generators]
    return stack_columns(vectors, ctx.cell.size(degree))


def class_coords(ctx: TransferContext, degree: int, cellular: np.ndarray,
                 generators: List[Generator], cell_groups: CohomologyGroups) -> Dict[str, int]:
    """Coordinates of a cellular cocycle class in the given generator basis"""
    basis = _generator_matrix(ctx, generators, degree)
    coords = quotient_coords(cellular, basis, cell_groups.coboundaries[degree], ctx.p)
    return {gen.label: int(c) for gen, c in zip(generators, coords) if c}


def full_method(ctx: TransferContext, left: CocycleLift, right: CocycleLift,
                generators: List[Generator], cell_groups: CohomologyGroups) -> Dict[str, int]:
    """Evaluate AW on every simplex, pull back by T^t and express in the generator basis"""
    degree = left.degree + right.degree
    product = aw_cup(ctx.simp, left.simplicial, left.degree, right.simplicial, right.degree, ctx.p)
    if degree < 3 and (ctx.simp.coboundary(degree) @ product % ctx.p).any():
        raise CupError(f"{left.label} u {right.label} is not a cocycle")
    pulled = transpose_T(ctx.chain_map, degree, product, ctx.p)
    return class_coords(ctx, degree, pulled, generators, cell_groups)


def _cell_values(ctx: TransferContext, left: CocycleLift, right: CocycleLift) -> Dict[str, int]:
    """phi(T(c)) for every 2-cell c, evaluated only on the simplices in the support of T(c)"""
    simp, p = ctx.simp, ctx.p
    front = simp.front_face_indices(2, 1)
    back = simp.back_face_indices(2, 1)
    matrix = ctx.chain_map.matrices[2]
    values = {}
    for col, label in enumerate(ctx.cell.labels[2]):
        total = 0
        for row in np.nonzero(matrix[:, col])[0]:
            total += int(matrix[row, col]) * int(left.simplicial[front[row]]) * int(right.simplicial[back[row]])
        values[label] = total % p
    return values


def _odd_prime_coords(ctx: TransferContext, x: int, r: List[int], y: Dict[int, int]) -> Dict[Tuple[str, int], Fraction]:
    """
    Class of x delta + sum y_j nu_j + sum r_k mu_k for odd p, keyed by (kind, index)

    Mod p the 1-cell coboundaries give delta ~ -a_k mu_k, 2 sum_{eps_j=-1} nu_j + sum b_k mu_k ~ 0
    and, over a non-orientable base, 2 delta ~ 0. One nu per Type is eliminated through the h
    relation, which moves -y b_k / 2 onto every mu_k.

    Raises:
        CupError: when the nu coefficients violate the cocycle condition on eps
    """
    inv, derived, p = ctx.inv, ctx.derived, ctx.p
    t, gp = inv.eps_type, inv.gp
    a = [a_k for a_k, _ in inv.fibers]
    b = [b_k for _, b_k in inv.fibers]

    if t is SeifertType.O2:
        twisted = sum((-1) ** j * y[j] for j in y)
    elif t.orientable_base:
        twisted = 0
    else:
        twisted = sum(y[j] for j, eps in enumerate(inv.eps_signs, start=1) if eps == 1)
    if twisted % p:
        raise CupError(f"nu coefficients {y} are not a cocycle mod {p}")

    coords: Dict[Tuple[str, int], Fraction] = {}
    pivot = None
    if t is SeifertType.O1:
        for j in range(1, gp + 1):
            coords[("phi", j)] = Fraction(y[j])
    elif t is SeifertType.N1:
        for j in range(2, gp + 1):
            coords[("phi", j)] = Fraction(y[j])
    elif t is SeifertType.N4:
        pivot = 3
        coords[("phi", 3)] = Fraction(y[2])
        for j in range(4, gp + 1):
            coords[("phi", j)] = Fraction(y[j] - y[pivot])
    else:
        # O2: phi_j = nu_j + (-1)^j nu_1 from j = 3; N2 from j = 2; N3 from j = 3
        pivot, first = {SeifertType.O2: (2, 3), SeifertType.N2: (1, 2), SeifertType.N3: (2, 3)}[t]
        for j in range(first, gp + 1):
            coords[("phi", j)] = Fraction(y[j] - y[pivot])

    mu = [Fraction(r_k) for r_k in r]
    if pivot is not None:
        mu = [r_k - Fraction(y[pivot] * b_k, 2) for r_k, b_k in zip(mu, b)]

    if derived.case_id is CaseId.CASE3:
        fibers = [derived.fiber(k) for k in range(derived.n)]
        if t in (SeifertType.O1, SeifertType.N1):
            # sum over p-divisible fibers of b_k mu_k ~ 0 fixes beta_0
            f0 = fibers[0]
            for k in range(1, derived.n):
                coords[("beta_k", k)] = mu[fibers[k]] - mu[f0] * Fraction(b[fibers[k]], b[f0])
        else:
            for k in range(derived.n):
                coords[("beta_k", k)] = mu[fibers[k]]
    elif t.orientable_base and (derived.case_id is CaseId.CASE1 or t is SeifertType.O2):
        coords[("beta", 0)] = x - sum(mu_k / a_k for mu_k, a_k in zip(mu, a))
    return coords


def read_off_class(ctx: TransferContext, x: int, r: List[int], y: Dict[int, int],
                   generators: List[Generator]) -> Dict[str, int]:
    """
    Class of the cellular 2-cocycle x delta + sum r_k mu_k + sum y_j nu_j in the generator basis

    Read off per Case with no linear solve. For p = 2 every nu_j is a generator and mu_k ~ delta;
    beta_0 = -sum beta_k in Case 3.

    Raises:
        CupError: when a generator is outside the basis this reading produces
    """
    p, derived = ctx.p, ctx.derived
    if p == 2:
        coords = {}
        for gen in generators:
            if gen.kind == "phi":
                value = y[gen.index]
            elif gen.kind == "beta":
                value = x + sum(r)
            elif gen.kind == "beta_k":
                value = r[gen.fiber] - r[derived.fiber(0)]
            else:
                raise CupError(f"unexpected degree-2 generator {gen.label} mod 2")
            if value % 2:
                coords[gen.label] = 1
        return coords

    literal = _odd_prime_coords(ctx, x, r, y)
    keys = {(gen.kind, gen.index if gen.kind != "beta" else 0): gen for gen in generators}
    if set(keys) != set(literal):
        raise CupError(f"generators {[gen.label for gen in generators]} are not the basis read off mod {p}")
    coords = {}
    for key, gen in keys.items():
        value = residue(literal[key], p)
        if value:
            coords[gen.label] = value
    return coords


def coefficient_method(ctx: TransferContext, left: CocycleLift, right: CocycleLift,
                       generators: List[Generator]) -> Dict[str, int]:
    """
    Class of the product of two 1-cocycle lifts from the coefficients x, r_k, y_j, z_k

    Only T^t of the product on delta, mu_k, nu_j and rho_k is evaluated.

    Raises:
        RhoError: when some rho coefficient z_k is non-zero
    """
    inv = ctx.inv
    values = _cell_values(ctx, left, right)
    rho = [k for k in range(inv.m + 1) if values[f"rho_{k}"]]
    if rho:
        raise RhoError(f"{left.label} u {right.label}: rho coefficients non-zero for fibers {rho}")

    x = values["delta"]
    r = [values[f"mu_{k}"] for k in range(inv.m + 1)]
    y = {j: values[f"nu_{j}"] for j in range(1, inv.gp + 1)}
    return read_off_class(ctx, x, r, y, generators)


def cup_to_h3(ctx: TransferContext, left: CocycleLift, right: CocycleLift,
              generators: List[Generator], cell_groups: CohomologyGroups) -> Dict[str, int]:
    """Coordinate on gamma of a degree (1,2) or (2,1) product"""
    if left.degree + right.degree != 3:
        raise CupError("cup_to_h3 expects degrees summing to 3")
    if not generators:
        raise CupError("H^3 vanishes for this manifold and prime")
    return full_method(ctx, left, right, generators, cell_groups)


def _is_coboundary(ctx: TransferContext, left: CocycleLift, right: CocycleLift,
                   cell_groups: CohomologyGroups) -> bool:
    product = aw_cup(ctx.simp, left.simplicial, left.degree, right.simplicial, right.degree, ctx.p)
    pulled = transpose_T(ctx.chain_map, 3, product, ctx.p)
    empty = np.zeros((ctx.cell.size(3), 0), dtype=np.int64)
    try:
        quotient_coords(pulled, empty, cell_groups.coboundaries[3], ctx.p)
    except QuotientError:
        return False
    return True


def _negate(value: Dict[str, int], p: int) -> Dict[str, int]:
    return {label: (-c) % p for label, c in value.items() if (-c) % p}


def assemble_ring(ctx: TransferContext, groups: ExpectedGroups, cell_groups: CohomologyGroups,
                  paranoid: bool = False) -> RingAssembly:
    """
    All pairwise products of the generator basis through lift, AW and projection

    Args:
        ctx: TransferContext for the manifold and prime
        groups: Generator basis (the theorem variant)
        cell_groups: Cellular F_p cohomology of the same manifold
        paranoid: Also evaluate the (1,2) products when H^3 = 0 and check they vanish

    Returns:
        RingAssembly
    """
    p = ctx.p
    gens = groups.generators
    labels = [[gen.label for gen in row] for row in gens]
    constants = StructureConstants(p=p, generators=labels)
    result = RingAssembly(constants=constants, lift_status={})

    lifts: Dict[str, CocycleLift] = {}
    for row in gens[:3]:
        for gen in row:
            try:
                lift = lift_generator(gen, ctx)
            except LiftError as exc:
                result.lift_status[gen.label] = "unavailable"
                logging.debug(f"No lift for {gen.label}: {exc}")
                continue
            result.lift_status[gen.label] = "valid" if lift.valid else "invalid"
            if lift.valid:
                lifts[gen.label] = lift

    def product(x: Generator, y: Generator) -> Optional[Dict[str, int]]:
        degree = x.degree + y.degree
        if x.label not in lifts or y.label not in lifts:
            result.skipped.append(f"{x.label}*{y.label}")
            return None
        try:
            if degree == 3:
                return cup_to_h3(ctx, lifts[x.label], lifts[y.label], gens[3], cell_groups)
            return full_method(ctx, lifts[x.label], lifts[y.label], gens[degree], cell_groups)
        except (CupError, QuotientError) as exc:
            logging.error(f"Product {x.label} u {y.label}: {exc}")
            result.non_cocycles.append(f"{x.label}*{y.label}")
            return None

    for da in range(4):
        for db in range(4 - da):
            for x in gens[da]:
                for y in gens[db]:
                    key = (x.label, y.label)
                    degree = da + db
                    if degree == 3 and (da == 0 or db == 0):
                        # the unit times gamma
                        constants.values[key] = {"gamma": 1}
                        continue
                    if degree == 3 and not gens[3]:
                        constants.values[key] = {}
                        if paranoid and x.label in lifts and y.label in lifts:
                            if not _is_coboundary(ctx, lifts[x.label], lifts[y.label], cell_groups):
                                result.paranoid_failures.append(f"{x.label}*{y.label}")
                        continue
                    value = product(x, y)
                    if value is None:
                        continue
                    constants.values[key] = value
                    if da == 1 and db == 1:
                        try:
                            other = coefficient_method(ctx, lifts[x.label], lifts[y.label], gens[2])
                        except RhoError as exc:
                            logging.error(str(exc))
                            result.rho_nonzero.append(f"{x.label}*{y.label}")
                            continue
                        except (CupError, LinalgError) as exc:
                            logging.error(f"Coefficient method for {x.label} u {y.label}: {exc}")
                            result.method_mismatches.append(f"{x.label}*{y.label}")
                            continue
                        if other != value:
                            logging.error(f"Methods disagree on {x.label} u {y.label}: {other} vs {value}")
                            result.method_mismatches.append(f"{x.label}*{y.label}")

    for x in gens[1]:
        for y in gens[1] + gens[2]:
            key, flipped = (x.label, y.label), (y.label, x.label)
            if key not in constants.values or flipped not in constants.values:
                continue
            expected = constants.values[flipped] if y.degree == 2 else _negate(constants.values[flipped], p)
            if constants.values[key] != expected:
                result.commutativity_failures.append(f"{x.label}*{y.label}")

    logging.info(f"Ring assembled mod {p} for {ctx.inv.to_text()}: {len(constants.values)} products, "
                 f"{len(result.skipped)} skipped")
    return result


def poincare_pairing_check(constants: StructureConstants) -> bool:
    """When H^3 != 0, the pairing H^1 x H^2 -> H^3 must be non-degenerate"""
    h1, h2, h3 = constants.generators[1], constants.generators[2], constants.generators[3]
    if not h3:
        return True
    if len(h1) != len(h2):
        return False
    if not h1:
        return True
    matrix = np.array([[constants.get(x, y).get(h3[0], 0) for y in h2] for x in h1], dtype=np.int64)
    return rank(matrix, constants.p) == len(h1)
