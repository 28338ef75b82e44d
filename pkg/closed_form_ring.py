"""
Closed-form cohomology rings H*(M; Z_p): generator inventories and structure constants
evaluated directly from (Type, Case, p, invariants)

Two variants are available. "theorem" uses the generator bases and product rules of the
main statement; "table" uses the literal forms of the answer tables where they differ
(alternative bases for N2 and O2 Case 3, the N1 Case 3 index range, the O2 Case 2 index
pattern and the O1 Case 3 alpha_k x phi_g entry). The verification harness decides which
one matches the brute-force ring.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Any

from seifert_invariants import SeifertInvariants, SeifertType, CaseId, DerivedConstants, derive
from exact_linalg import QuotientError, quotient_coords, rank, residue, stack_columns

VARIANTS = ("theorem", "table")

Key = Tuple[str, str]


@dataclass(frozen=True)
class Generator:
    """
    A cohomology generator and its cellular cocycle representative

    kind is one of one, theta, alpha, alpha_k, beta, beta_k, phi, gamma. index is the
    handle j for theta/phi and the reordered position k for alpha_k/beta_k; fiber is
    the original fiber index behind position k.
    """
    label: str
    degree: int
    kind: str
    formula: Dict[str, Fraction] = field(default_factory=dict, hash=False, compare=False)
    index: Optional[int] = None
    fiber: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"label": self.label, "degree": self.degree, "kind": self.kind,
                "index": self.index, "fiber": self.fiber,
                "formula": {k: str(v) for k, v in self.formula.items()}}


@dataclass
class ExpectedGroups:
    p: int
    case_id: CaseId
    variant: str
    generators: List[List[Generator]]

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(len(row) for row in self.generators)

    def labels(self, degree: int) -> List[str]:
        return [gen.label for gen in self.generators[degree]]

    def by_label(self) -> Dict[str, Generator]:
        return {gen.label: gen for row in self.generators for gen in row}


@dataclass
class ExpectedRing:
    groups: ExpectedGroups
    constants: Dict[Key, Dict[str, int]]
    rules: Dict[Key, str]


def _f(*pairs) -> Dict[str, Fraction]:
    formula: Dict[str, Fraction] = {}
    for label, coef in pairs:
        formula[label] = formula.get(label, Fraction(0)) + Fraction(coef)
    return {label: coef for label, coef in formula.items() if coef}


def table_dims(inv: SeifertInvariants, p: int) -> Tuple[int, int, int, int]:
    """Dimensions of H^0..H^3 from the closed formulas alone"""
    d = derive(inv, p)
    g, n, t = inv.g, d.n, inv.eps_type
    extra1 = {CaseId.CASE1: 1, CaseId.CASE2: 0, CaseId.CASE3: n - 1}[d.case_id]
    if p == 2 or t is SeifertType.O1:
        return 1, inv.gp + extra1, inv.gp + extra1, 1
    if t is SeifertType.O2:
        h2 = 2 * g - 2 + (n if d.case_id is CaseId.CASE3 else 1)
        return 1, 2 * g + (n - 1 if d.case_id is CaseId.CASE3 else 0), h2, 0
    h1 = g - 1 + n
    if t is SeifertType.N1:
        if d.case_id is CaseId.CASE3:
            return 1, h1, g - 1 + n - 1, 0
        return 1, g, g - 1, 0
    if t is SeifertType.N2:
        return 1, h1, g - 1 + n, 1
    return 1, h1, g - 2 + n, 0


def _alpha_formula(inv: SeifertInvariants, d: DerivedConstants) -> Dict[str, Fraction]:
    formula = {"h": Fraction(1)}
    for k, (a_k, b_k) in enumerate(inv.fibers):
        if b_k:
            formula[f"q_{k}"] = Fraction(-b_k, a_k)
    if inv.eps_type is SeifertType.N1 and d.p > 2 and d.c:
        formula["t_1"] = Fraction(d.c, 2 * d.a)
    return formula


def expected_groups(inv: SeifertInvariants, p: int, variant: str = "theorem") -> ExpectedGroups:
    """
    Generator inventory per degree with defining cellular formulas

    Args:
        inv: Normalized invariants
        p: Prime
        variant: "theorem" or "table"

    Returns:
        ExpectedGroups
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown basis variant {variant!r}")
    d = derive(inv, p)
    t, g, gp, n = inv.eps_type, inv.g, inv.gp, d.n
    case3 = d.case_id is CaseId.CASE3
    orientable = t.orientable_base
    h1: List[Generator] = []
    h2: List[Generator] = []

    def theta(j: int, formula) -> None:
        h1.append(Generator(f"theta_{j}", 1, "theta", formula, index=j))

    def phi(j: int, formula) -> None:
        h2.append(Generator(f"phi_{j}", 2, "phi", formula, index=j))

    def alpha_k(k: int, formula) -> None:
        h1.append(Generator(f"alpha_{k}", 1, "alpha_k", formula, index=k, fiber=d.fiber(k)))

    def beta_k(k: int) -> None:
        fiber = d.fiber(k)
        h2.append(Generator(f"beta_{k}", 2, "beta_k", _f((f"mu_{fiber}", 1)), index=k, fiber=fiber))

    def q_diff(k: int) -> Dict[str, Fraction]:
        return _f((f"q_{d.fiber(k)}", 1), (f"q_{d.fiber(0)}", -1))

    if p == 2 or t is SeifertType.O1:
        for j in range(1, gp + 1):
            theta(j, _f((f"t_{j}", 1)))
        if d.case_id is CaseId.CASE1:
            h1.append(Generator("alpha", 1, "alpha", _alpha_formula(inv, d)))
        if case3:
            for k in range(1, n):
                alpha_k(k, q_diff(k))
        for j in range(1, gp + 1):
            phi(j, _f((f"nu_{j}", 1)))
        if d.case_id is CaseId.CASE1:
            h2.append(Generator("beta", 2, "beta", _f(("delta", 1))))
        if case3:
            for k in range(1, n):
                beta_k(k)
    elif t is SeifertType.O2:
        for j in range(1, gp + 1):
            theta(j, _f((f"t_{j}", 1)))
        if case3:
            for k in range(1, n):
                alpha_k(k, q_diff(k))
        caption = variant == "table" and case3
        for j in range(3, gp + 1):
            sign = -(-1) ** j if caption else (-1) ** j
            phi(j, _f((f"nu_{j}", 1), ("nu_1", sign)))
        if case3:
            for k in range(n):
                beta_k(k)
        else:
            h2.append(Generator("beta", 2, "beta", _f(("delta", 1))))
    else:
        swapped = variant == "table" and t is SeifertType.N2
        for j in range(2, g + 1):
            other = g if swapped else 1
            theta(j, _f((f"t_{j}", 1), (f"t_{other}", -1)))
        if t is SeifertType.N1 and not case3:
            h1.append(Generator("alpha", 1, "alpha", _alpha_formula(inv, d)))
        if case3:
            start = 1 if (variant == "table" and t is SeifertType.N1) else 0
            half = 1 if swapped else g
            for k in range(start, n):
                alpha_k(k, _f((f"q_{d.fiber(k)}", 1), (f"t_{half}", Fraction(-1, 2))))
        if t is SeifertType.N1:
            for j in range(2, g + 1):
                phi(j, _f((f"nu_{j}", 1), ("nu_1", -1)))
            if case3:
                for k in range(1, n):
                    beta_k(k)
        else:
            if t is SeifertType.N2:
                first = 2
            elif t is SeifertType.N3:
                first = 3
            else:
                phi(3, _f(("nu_2", 1), ("nu_1", -1)))
                first = 4
            for j in range(first, g + 1):
                phi(j, _f((f"nu_{j}", 1)))
            for k in range(n):
                beta_k(k)

    h3 = [Generator("gamma", 3, "gamma", _f(("eps", 1)))] if d.h3_nonzero else []
    one = [Generator("1", 0, "one", _f(("sigma", 1)))]
    groups = ExpectedGroups(p=p, case_id=d.case_id, variant=variant, generators=[one, h1, h2, h3])
    logging.debug(f"Expected groups ({variant}) mod {p} for {inv.to_text()}: dims {groups.dims}")
    return groups


class _RingTable:
    """Collects structure constants and their rule names"""

    def __init__(self, groups: ExpectedGroups):
        self.groups = groups
        self.p = groups.p
        self.present = set(gen.label for row in groups.generators for gen in row)
        self.constants: Dict[Key, Dict[str, int]] = {}
        self.rules: Dict[Key, str] = {}

    def set(self, x: str, y: str, value: Dict[str, Any], rule: str) -> None:
        if x not in self.present or y not in self.present:
            return
        reduced = {}
        for label, coef in value.items():
            if label not in self.present:
                continue
            r = residue(coef, self.p)
            if r:
                reduced[label] = r
        self.constants[(x, y)] = reduced
        self.rules[(x, y)] = rule

    def complete(self) -> None:
        """Unit products, graded commutativity and zeros for everything else"""
        p = self.p
        gens = self.groups.generators
        for row in gens:
            for gen in row:
                if gen.degree <= 3:
                    self.set("1", gen.label, {gen.label: 1}, "unit")
                    self.set(gen.label, "1", {gen.label: 1}, "unit")
        for x in gens[1]:
            for y in gens[1]:
                key, flipped = (x.label, y.label), (y.label, x.label)
                if key not in self.constants and flipped in self.constants:
                    self.constants[key] = {lab: (-c) % p for lab, c in self.constants[flipped].items() if (-c) % p}
                    self.rules[key] = "graded_commutativity:" + self.rules[flipped]
            for y in gens[2]:
                key, flipped = (x.label, y.label), (y.label, x.label)
                if key in self.constants and flipped not in self.constants:
                    self.constants[flipped] = dict(self.constants[key])
                    self.rules[flipped] = "graded_commutativity:" + self.rules[key]
        h3_zero = not gens[3]
        for da in range(4):
            for db in range(4 - da):
                for x in gens[da]:
                    for y in gens[db]:
                        key = (x.label, y.label)
                        if key not in self.constants:
                            self.constants[key] = {}
                            self.rules[key] = "h3_vanishes" if (h3_zero and da + db == 3) else "zero"


def _theta_phi_pairing(table: _RingTable, inv: SeifertInvariants, signed: bool, rule: str) -> None:
    if inv.eps_type.orientable_base:
        for u in range(1, inv.g + 1):
            table.set(f"theta_{2 * u}", f"phi_{2 * u - 1}", {"gamma": -1 if signed else 1}, rule)
            table.set(f"theta_{2 * u - 1}", f"phi_{2 * u}", {"gamma": 1}, rule)
    else:
        for i in range(1, inv.g + 1):
            table.set(f"theta_{i}", f"phi_{i}", {"gamma": 1}, rule)


def _ring_p2(table: _RingTable, inv: SeifertInvariants, d: DerivedConstants) -> None:
    case = d.case_id
    minus = [j for j, eps in enumerate(inv.eps_signs, start=1) if eps == -1]
    if case is CaseId.CASE1:
        rule = "p2.case1"
        if inv.eps_type.orientable_base:
            for u in range(1, inv.g + 1):
                table.set(f"theta_{2 * u}", f"theta_{2 * u - 1}", {"beta": 1}, rule + ".theta_theta")
                table.set(f"theta_{2 * u - 1}", f"theta_{2 * u}", {"beta": 1}, rule + ".theta_theta")
        else:
            for i in range(1, inv.g + 1):
                table.set(f"theta_{i}", f"theta_{i}", {"beta": 1}, rule + ".theta_theta")
        for i in range(1, inv.gp + 1):
            table.set(f"theta_{i}", "alpha", {f"phi_{i}": 1}, rule + ".theta_alpha")
            table.set("alpha", f"theta_{i}", {f"phi_{i}": 1}, rule + ".theta_alpha")
        square = {"beta": d.c // 2}
        square.update({f"phi_{j}": 1 for j in minus})
        table.set("alpha", "alpha", square, rule + ".alpha_alpha")
        table.set("alpha", "beta", {"gamma": 1}, rule + ".alpha_beta")
        for j in minus:
            table.set("alpha", f"phi_{j}", {"gamma": 1}, rule + ".alpha_phi")
    elif case is CaseId.CASE3:
        rule = "p2.case3"
        a0 = inv.fibers[d.fiber(0)][0]
        for k in range(1, d.n):
            for i in range(1, d.n):
                value = {f"beta_{ell}": a0 // 2 for ell in range(1, d.n)}
                if k == i:
                    value[f"beta_{k}"] = value[f"beta_{k}"] + inv.fibers[d.fiber(k)][0] // 2
                table.set(f"alpha_{k}", f"alpha_{i}", value, rule + ".alpha_alpha")
            table.set(f"alpha_{k}", f"beta_{k}", {"gamma": 1}, rule + ".alpha_beta")
    _theta_phi_pairing(table, inv, False, f"p2.case{case.value}.theta_phi")


def _b_inverse(inv: SeifertInvariants, d: DerivedConstants, k: int) -> Fraction:
    return Fraction(1, inv.fibers[d.fiber(k)][1])


def _ring_odd(table: _RingTable, inv: SeifertInvariants, d: DerivedConstants, variant: str) -> None:
    t, case = inv.eps_type, d.case_id
    prefix = f"podd.{t.value}.case{case.value}"
    if t is SeifertType.O1:
        if case is CaseId.CASE1:
            for u in range(1, inv.g + 1):
                table.set(f"theta_{2 * u - 1}", f"theta_{2 * u}", {"beta": 1}, prefix + ".theta_theta")
            for j in range(1, inv.gp + 1):
                table.set(f"theta_{j}", "alpha", {f"phi_{j}": 1}, prefix + ".theta_alpha")
            table.set("alpha", "beta", {"gamma": 1}, prefix + ".alpha_beta")
        if case is CaseId.CASE3:
            for k in range(1, d.n):
                table.set(f"alpha_{k}", f"beta_{k}", {"gamma": _b_inverse(inv, d, k)}, prefix + ".alpha_beta")
                if variant == "table" and inv.g:
                    table.set(f"alpha_{k}", f"phi_{inv.gp}", {"gamma": Fraction(-1, 2)}, prefix + ".alpha_phi")
        _theta_phi_pairing(table, inv, True, prefix + ".theta_phi")
    elif t is SeifertType.O2:
        if case is not CaseId.CASE3:
            for u in range(1, inv.g + 1):
                partner = 3 * u if (variant == "table" and case is CaseId.CASE2) else 2 * u
                if partner <= inv.gp:
                    table.set(f"theta_{2 * u - 1}", f"theta_{partner}", {"beta": 1}, prefix + ".theta_theta")
    elif t is SeifertType.N1:
        if case is not CaseId.CASE3:
            for j in range(2, inv.g + 1):
                table.set(f"theta_{j}", "alpha", {f"phi_{j}": 1}, prefix + ".theta_alpha")
    elif t is SeifertType.N2:
        for i in range(2, inv.g + 1):
            table.set(f"theta_{i}", f"phi_{i}", {"gamma": 1}, prefix + ".theta_phi")
        if case is CaseId.CASE3:
            first = 1 if variant == "table" else 0
            for k in range(d.n):
                table.set(f"alpha_{k}", f"beta_{k}", {"gamma": _b_inverse(inv, d, k)}, prefix + ".alpha_beta")
                if k >= first and inv.g > 1:
                    table.set(f"alpha_{k}", f"phi_{inv.g}", {"gamma": Fraction(-1, 2)}, prefix + ".alpha_phi")


def expected_ring(inv: SeifertInvariants, p: int, variant: str = "theorem") -> ExpectedRing:
    """
    Every structure constant of the closed-form ring, keyed by ordered generator pairs

    Args:
        inv: Normalized invariants
        p: Prime
        variant: "theorem" or "table"

    Returns:
        ExpectedRing whose constants cover every pair with total degree <= 3
    """
    groups = expected_groups(inv, p, variant)
    d = derive(inv, p)
    table = _RingTable(groups)
    if p == 2:
        _ring_p2(table, inv, d)
    else:
        _ring_odd(table, inv, d, variant)
    table.complete()
    return ExpectedRing(groups=groups, constants=table.constants, rules=table.rules)


_PRODUCTS = {
    "theta_theta": "theta_i u theta_j",
    "theta_alpha": "theta_j u {a}",
    "alpha_alpha": "{a} u {a2}",
    "alpha_beta": "{a} u {b}",
    "alpha_phi": "{a} u phi_j",
    "theta_phi": "theta_i u phi_j (duality pairing)",
}


def cite(rule: str) -> str:
    """
    Readable source of a structure constant from its rule id

    e.g. "podd.o1.case3.alpha_beta" -> "p odd, Type o1, Case 3: alpha_k u beta_k"
    """
    if rule.startswith("graded_commutativity:"):
        return "graded commutativity of " + cite(rule.split(":", 1)[1])
    if rule == "unit":
        return "1 is the unit"
    if rule == "zero":
        return "no product rule applies: zero"
    if rule == "h3_vanishes":
        return "H^3 = 0 for this Type and prime"
    regime, _, product = rule.rpartition(".")
    parts = regime.split(".")
    words = ["p = 2" if parts[0] == "p2" else "p odd"]
    for part in parts[1:]:
        words.append(f"Case {part[4:]}" if part.startswith("case") else f"Type {part}")
    case3 = "case3" in parts
    text = _PRODUCTS.get(product, product).format(a="alpha_k" if case3 else "alpha",
                                                  a2="alpha_i" if case3 else "alpha",
                                                  b="beta_k" if case3 else "beta")
    return ", ".join(words) + ": " + text


def check_generator_basis(cell, groups: ExpectedGroups, cohomology, p: int) -> bool:
    """
    True when every degree's generator formulas are cellular cocycles whose classes form a basis

    Args:
        cell: CellComplex
        groups: ExpectedGroups to test
        cohomology: CohomologyGroups of the same cellular complex
        p: Prime
    """
    for degree, row in enumerate(groups.generators):
        reps = cohomology.representatives[degree]
        if len(row) != reps.shape[1]:
            logging.warning(f"Degree {degree}: {len(row)} generators for a space of dimension {reps.shape[1]}")
            return False
        if not row:
            continue
        coords = []
        for gen in row:
            vector = cell.vector(degree, gen.formula, p)
            if degree < 3 and (cell.coboundary(degree) @ vector % p).any():
                logging.warning(f"{gen.label} is not a cocycle mod {p}")
                return False
            try:
                coords.append(quotient_coords(vector, reps, cohomology.coboundaries[degree], p))
            except QuotientError:
                return False
        if rank(stack_columns(coords, reps.shape[1]), p) != len(row):
            logging.warning(f"Degree {degree}: generator classes are linearly dependent mod {p}")
            return False
    return True


def normalize_constants(constants: Dict[Key, Dict[str, int]], p: int) -> Dict[Key, Dict[str, int]]:
    return {key: {lab: int(c) % p for lab, c in value.items() if int(c) % p} for key, value in constants.items()}


def ring_differences(expected: Dict[Key, Dict[str, int]], computed: Dict[Key, Dict[str, int]],
                     p: int) -> List[Key]:
    """Keys whose structure constants differ mod p"""
    left = normalize_constants(expected, p)
    right = normalize_constants(computed, p)
    return [key for key in sorted(set(left) | set(right)) if left.get(key, {}) != right.get(key, {})]
