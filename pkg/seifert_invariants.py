"""
Seifert invariant lists: parsing, normalization, classification and derived constants
"""

import re
import math
import logging
from enum import Enum
from dataclasses import dataclass, field, asdict
from functools import reduce
from typing import Dict, List, Tuple, Any

from sympy import isprime


class InvariantError(ValueError):
    """Raised for malformed or inadmissible invariant lists"""


class SeifertType(Enum):
    """Orientability class of the base orbifold and of the total space"""
    O1 = "o1"
    O2 = "o2"
    N1 = "n1"
    N2 = "n2"
    N3 = "n3"
    N4 = "n4"

    @property
    def orientable_base(self) -> bool:
        return self in (SeifertType.O1, SeifertType.O2)

    @property
    def min_genus(self) -> int:
        return {"o1": 0, "o2": 1, "n1": 1, "n2": 1, "n3": 2, "n4": 3}[self.value]

    def eps_signs(self, g: int) -> Tuple[int, ...]:
        """Signs epsilon_j for j = 1..g'"""
        gp = 2 * g if self.orientable_base else g
        if self in (SeifertType.O1, SeifertType.N1):
            return tuple([1] * gp)
        if self in (SeifertType.O2, SeifertType.N2):
            return tuple([-1] * gp)
        positive = 1 if self is SeifertType.N3 else 2
        return tuple(1 if j < positive else -1 for j in range(gp))


class CaseId(Enum):
    CASE1 = 1  # n = 0 and p | c
    CASE2 = 2  # n = 0 and p does not divide c
    CASE3 = 3  # n > 0


@dataclass(frozen=True)
class SeifertInvariants:
    """Normalized invariant list; fibers[0] is always the extra fiber (1, e)"""
    e: int
    eps_type: SeifertType
    g: int
    fibers: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if self.g < 0:
            raise InvariantError(f"genus must be non-negative, got {self.g}")
        if self.g < self.eps_type.min_genus:
            raise InvariantError(
                f"type {self.eps_type.value} requires g >= {self.eps_type.min_genus}, got g={self.g}")
        if not self.fibers or self.fibers[0] != (1, self.e):
            raise InvariantError("fibers[0] must be the normalized fiber (1, e)")
        for k, (a, b) in enumerate(self.fibers):
            if a <= 0:
                raise InvariantError(f"fiber {k}: a_k must be positive after normalization, got {a}")
            if math.gcd(a, b) != 1:
                raise InvariantError(f"fiber {k}: gcd({a}, {b}) != 1")
            if b <= 0 and a != 1:
                raise InvariantError(f"fiber {k}: b_k <= 0 is only admissible with a_k = 1, got ({a}, {b})")

    @classmethod
    def create(cls, e: int, eps_type: SeifertType, g: int,
               exceptional: List[Tuple[int, int]] = ()) -> 'SeifertInvariants':
        """Build invariants from the user-facing fiber list, prepending (1, e)"""
        normalized = []
        for a, b in exceptional:
            if a == 0:
                raise InvariantError("a_k = 0 is not admissible")
            if a < 0:
                a, b = -a, -b
            normalized.append((a, b))
        return cls(e=e, eps_type=eps_type, g=g, fibers=tuple([(1, e)] + normalized))

    @property
    def m(self) -> int:
        """Index of the last fiber (fibers run k = 0..m)"""
        return len(self.fibers) - 1

    @property
    def gp(self) -> int:
        return 2 * self.g if self.eps_type.orientable_base else self.g

    @property
    def star(self) -> int:
        return 4 * self.g if self.eps_type.orientable_base else 2 * self.g

    @property
    def eps_signs(self) -> Tuple[int, ...]:
        return self.eps_type.eps_signs(self.g)

    def to_text(self) -> str:
        """Render in the input grammar (exceptional fibers only)"""
        text = f"e={self.e};type={self.eps_type.value};g={self.g}"
        if self.m > 0:
            text += ";fibers=" + ",".join(f"({a},{b})" for a, b in self.fibers[1:])
        return text

    def to_dict(self) -> Dict[str, Any]:
        return {"e": self.e, "type": self.eps_type.value, "g": self.g,
                "fibers": [list(pair) for pair in self.fibers[1:]]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SeifertInvariants':
        return cls.create(data["e"], SeifertType(data["type"]), data["g"],
                          [tuple(pair) for pair in data["fibers"]])


@dataclass(frozen=True)
class DerivedConstants:
    """Constants depending on (invariants, p); fiber_order lists original fiber indices"""
    p: int
    a: int  # lcm of the a_k
    c: int  # sum of b_k * a / a_k, exact
    n: int  # number of a_k divisible by p
    r: int  # number of b_k divisible by p; when n = 0 they lead fiber_order
    gp: int
    star: int
    case_id: CaseId
    eps_signs: Tuple[int, ...]
    fiber_order: Tuple[int, ...] = field(default_factory=tuple)
    h3_nonzero: bool = True  # H^3(M; F_p) != 0

    @property
    def p_divisible_fibers(self) -> Tuple[int, ...]:
        """Original indices of the fibers with p | a_k, by decreasing valuation"""
        return self.fiber_order[:self.n]

    @property
    def p_divisible_b(self) -> Tuple[int, ...]:
        """Original indices of the fibers with p | b_k when n = 0, in input order"""
        return self.fiber_order[:self.r] if self.n == 0 else ()

    def fiber(self, position: int) -> int:
        """Original fiber index sitting at a position of the reordered view"""
        return self.fiber_order[position]

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["case_id"] = self.case_id.value
        return data


def p_valuation(value: int, p: int) -> int:
    """Exponent of p in a non-zero integer"""
    value = abs(value)
    count = 0
    while value and value % p == 0:
        value //= p
        count += 1
    return count


_FIBER_RE = re.compile(r"\((-?\d+),(-?\d+)\)")


def parse(text: str) -> SeifertInvariants:
    """
    Parse the invariant grammar e=<int>;type=<o1..n4>;g=<uint>[;fibers=(a,b),...]

    Args:
        text: Invariant list, whitespace is ignored

    Returns:
        Normalized SeifertInvariants
    """
    compact = re.sub(r"\s+", "", text or "")
    if not compact:
        raise InvariantError("empty invariant list")

    values: Dict[str, str] = {}
    for part in compact.split(";"):
        if not part:
            continue
        if "=" not in part:
            raise InvariantError(f"syntax error near {part!r}")
        key, value = part.split("=", 1)
        key = key.lower()
        if key not in ("e", "type", "g", "fibers"):
            raise InvariantError(f"unknown key {key!r}")
        if key in values:
            raise InvariantError(f"duplicate key {key!r}")
        values[key] = value

    for required in ("e", "type", "g"):
        if required not in values:
            raise InvariantError(f"missing key {required!r}")

    try:
        e = int(values["e"])
        g = int(values["g"])
    except ValueError as exc:
        raise InvariantError(f"syntax error: {exc}") from exc
    try:
        eps_type = SeifertType(values["type"].lower())
    except ValueError as exc:
        raise InvariantError(f"unknown type {values['type']!r}") from exc

    exceptional: List[Tuple[int, int]] = []
    fiber_text = values.get("fibers", "")
    if fiber_text:
        matches = list(_FIBER_RE.finditer(fiber_text))
        rebuilt = ",".join(match.group(0) for match in matches)
        if rebuilt != fiber_text:
            raise InvariantError(f"syntax error in fiber list {fiber_text!r}")
        exceptional = [(int(match.group(1)), int(match.group(2))) for match in matches]

    inv = SeifertInvariants.create(e, eps_type, g, exceptional)
    logging.debug(f"Parsed invariants {inv.to_text()}")
    return inv


def derive(inv: SeifertInvariants, p: int) -> DerivedConstants:
    """
    Compute a, c, n, r, the Case and the p-valuation fiber order

    Args:
        inv: Normalized invariants
        p: Prime modulus

    Returns:
        DerivedConstants; inv itself is never modified
    """
    if not isprime(p):
        raise InvariantError(f"{p} is not prime")

    a = reduce(lambda x, y: x * y // math.gcd(x, y), (ak for ak, _ in inv.fibers), 1)
    c = sum(bk * (a // ak) for ak, bk in inv.fibers)
    n = sum(1 for ak, _ in inv.fibers if ak % p == 0)
    r = sum(1 for _, bk in inv.fibers if bk % p == 0)

    if n > 0:
        case_id = CaseId.CASE3
        # sorted() is stable, so equal valuations keep their original order
        order = tuple(sorted(range(len(inv.fibers)),
                             key=lambda k: -p_valuation(inv.fibers[k][0], p)))
    else:
        case_id = CaseId.CASE1 if c % p == 0 else CaseId.CASE2
        order = tuple(sorted(range(len(inv.fibers)), key=lambda k: inv.fibers[k][1] % p != 0))

    h3_nonzero = p == 2 or inv.eps_type in (SeifertType.O1, SeifertType.N2)
    derived = DerivedConstants(p=p, a=a, c=c, n=n, r=r, gp=inv.gp, star=inv.star,
                               case_id=case_id, eps_signs=inv.eps_signs, fiber_order=order,
                               h3_nonzero=h3_nonzero)
    logging.debug(f"Derived constants for p={p}: a={a}, c={c}, n={n}, case={case_id.value}")
    return derived


def presentation_pi1(inv: SeifertInvariants) -> str:
    """Render the standard presentation of the fundamental group"""
    generators = [f"q_{k}" for k in range(inv.m + 1)]
    generators += [f"v{j}" for j in range(1, inv.gp + 1)]
    generators.append("h")

    if inv.eps_type.orientable_base:
        surface_word = " ".join(f"[v{2 * i - 1},v{2 * i}]" for i in range(1, inv.g + 1))
    else:
        surface_word = " ".join(f"v{j}^2" for j in range(1, inv.g + 1))

    relations = []
    relations.append(" ".join(generators[:inv.m + 1] + ([surface_word] if surface_word else [])))
    for k, (ak, bk) in enumerate(inv.fibers):
        relations.append(f"q_{k}^{ak} h^{bk}")
    for k in range(inv.m + 1):
        relations.append(f"[q_{k},h]")
    for j, eps in enumerate(inv.eps_signs, start=1):
        tail = "h^-1" if eps == 1 else "h"
        relations.append(f"v{j} h v{j}^-1 {tail}")

    lines = ["generators: " + ", ".join(generators), "relations:"]
    lines += [f"  {relation}" for relation in relations]
    return "\n".join(lines)
