"""
Delta-complex decomposition of a Seifert manifold
Simplices are addressed by label; each d-simplex stores its faces s_0..s_d (s_i opposite v_i)
and vertices are only reached through face references.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from seifert_invariants import SeifertInvariants
from pavement_word import PavementWord, fiber_words
from exact_linalg import formula_vector, cohomology_basis
from cellular_complex import CohomologyGroups


@dataclass
class DeltaComplex:
    """Simplex tables per dimension 0..3 with face references"""
    inv: Optional[SeifertInvariants]
    words: Tuple[PavementWord, ...]
    labels: List[List[str]]
    faces: Dict[str, Tuple[str, ...]]
    _index: List[Dict[str, int]] = field(default_factory=list, repr=False)
    _boundary: Dict[int, np.ndarray] = field(default_factory=dict, repr=False)
    _face_cache: Dict[Tuple[str, int, int], np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = [{label: i for i, label in enumerate(row)} for row in self.labels]

    def size(self, dim: int) -> int:
        return len(self.labels[dim])

    def index(self, dim: int, label: str) -> int:
        return self._index[dim][label]

    def dimension_of(self, label: str) -> int:
        for dim, table in enumerate(self._index):
            if label in table:
                return dim
        raise KeyError(label)

    def face(self, label: str, i: int) -> str:
        return self.faces[label][i]

    def vector(self, dim: int, formula: Dict[str, Fraction], p: Optional[int] = None) -> np.ndarray:
        return formula_vector(self._index[dim], formula, p)

    def boundary_matrix(self, d: int) -> np.ndarray:
        """Integer matrix of the boundary C_d -> C_{d-1}, entry (tau, s) = sum of (-1)^i over s_i = tau"""
        if d not in self._boundary:
            matrix = np.zeros((self.size(d - 1), self.size(d)), dtype=np.int64)
            lower = self._index[d - 1]
            for col, label in enumerate(self.labels[d]):
                for i, face_label in enumerate(self.faces[label]):
                    matrix[lower[face_label], col] += (-1) ** i
            self._boundary[d] = matrix
        return self._boundary[d]

    def coboundary(self, d: int) -> np.ndarray:
        return self.boundary_matrix(d + 1).T

    def front_face_indices(self, dim: int, q: int) -> np.ndarray:
        """Index of the front q-face (v_0..v_q) of every dim-simplex"""
        key = ("front", dim, q)
        if key in self._face_cache:
            return self._face_cache[key]
        result = np.zeros(self.size(dim), dtype=np.int64)
        for col, label in enumerate(self.labels[dim]):
            current = label
            for top in range(dim, q, -1):
                current = self.faces[current][top]
            result[col] = self._index[q][current]
        self._face_cache[key] = result
        return result

    def back_face_indices(self, dim: int, q: int) -> np.ndarray:
        """Index of the back q-face (v_{dim-q}..v_dim) of every dim-simplex"""
        key = ("back", dim, q)
        if key in self._face_cache:
            return self._face_cache[key]
        result = np.zeros(self.size(dim), dtype=np.int64)
        for col, label in enumerate(self.labels[dim]):
            current = label
            for _ in range(dim - q):
                current = self.faces[current][0]
            result[col] = self._index[q][current]
        self._face_cache[key] = result
        return result

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * self.size(d) for d in range(4))

    def export_text(self) -> str:
        """Line-oriented dump: SIMPLEX <dim> <label> FACES <label0> ..."""
        lines = []
        for dim, row in enumerate(self.labels):
            for label in row:
                faces = " ".join(self.faces.get(label, ()))
                lines.append(f"SIMPLEX {dim} {label} FACES {faces}".rstrip())
        return "\n".join(lines) + "\n"


class _Catalogue:
    """Ordered simplex registry used while building"""

    def __init__(self):
        self.labels: List[List[str]] = [[], [], [], []]
        self.faces: Dict[str, Tuple[str, ...]] = {}

    def add(self, dim: int, label: str, faces: Tuple[str, ...] = ()) -> None:
        if label in self.faces:
            raise ValueError(f"duplicate simplex {label}")
        if len(faces) != (dim + 1 if dim else 0):
            raise ValueError(f"{label}: a {dim}-simplex needs {dim + 1} faces")
        self.labels[dim].append(label)
        self.faces[label] = tuple(faces)


# --- label helpers ---

def S(sign: str, ell: int) -> str:
    return f"S{sign}_{ell}"


def fiber_label(stem: str, k: int, ell: Optional[int] = None) -> str:
    return f"{stem}_{k}" if ell is None else f"{stem}_{k},{ell}"


class _BaseLayout:
    """Index bookkeeping for the base part (handles, fiber 1-cells and the e/S fan)"""

    def __init__(self, inv: SeifertInvariants):
        self.inv = inv
        self.orientable = inv.eps_type.orientable_base
        self.star = inv.star
        self.m = inv.m
        self.size = inv.star + inv.m + 1  # e_l and S_l^+- run l = 0..*+m
        self.eps = inv.eps_signs

    def wrap(self, ell: int) -> int:
        return ell % self.size

    def eps_of(self, j: int) -> int:
        return self.eps[j - 1]

    def handle_of(self, ell: int) -> int:
        """Handle j whose pavement contains delta_l (l < *)"""
        if self.orientable:
            u, r = divmod(ell, 4)
            return 2 * u + 1 if r in (0, 2) else 2 * u + 2
        return ell // 2 + 1

    def pattern(self, ell: int) -> Tuple[str, str, int, int]:
        """(edge kind, edge index label suffix, x, y) so that delta_l = (edge, e_x, e_y)"""
        if ell < self.star:
            j = self.handle_of(ell)
            if self.orientable:
                u, r = divmod(ell, 4)
                x, y = {0: (4 * u + 1, 4 * u), 1: (4 * u + 2, 4 * u + 1),
                        2: (4 * u + 2, 4 * u + 3), 3: (4 * u + 3, 4 * u + 4)}[r]
            else:
                x, y = (2 * j - 1, 2 * j - 2) if ell % 2 == 0 else (2 * j, 2 * j - 1)
            return "t", str(j), x, y
        k = ell - self.star
        return "q", str(k), self.wrap(ell + 1), ell

    def edge(self, ell: int) -> str:
        kind, suffix, _, _ = self.pattern(ell)
        return f"{kind}_{suffix}"

    def twin_edge(self, ell: int) -> str:
        """f_j for handle edges, g_k for fiber edges"""
        kind, suffix, _, _ = self.pattern(ell)
        return f"{'f' if kind == 't' else 'g'}_{suffix}"

    def f_signs(self, ell: int) -> Tuple[str, str]:
        _, _, x, y = self.pattern(ell)
        if ell < self.star and self.eps_of(self.handle_of(ell)) == -1:
            return ("+" if x % 2 else "-"), ("+" if y % 2 else "-")
        return "+", "-"

    def h_flipped(self, ell: int) -> bool:
        return ell < self.star and ell % 2 == 1 and self.eps_of((ell + 1) // 2) == -1


def _add_base(cat: _Catalogue, lay: _BaseLayout) -> None:
    inv = lay.inv
    for j in range(1, inv.gp + 1):
        cat.add(1, f"t_{j}", ("sigma", "sigma"))
    for j in range(1, inv.gp + 1):
        cat.add(1, f"f_{j}", ("sigma", "sigma"))
    for k in range(lay.m + 1):
        cat.add(1, f"q_{k}", ("sigma", "sigma"))
    for k in range(lay.m + 1):
        cat.add(1, f"g_{k}", ("sigma", "sigma"))
    cat.add(1, "h", ("sigma", "sigma"))
    for ell in range(lay.size):
        cat.add(1, f"e_{ell}", ("sigma", "a"))
    for sign in "+-":
        for ell in range(lay.size):
            cat.add(1, S(sign, ell), ("sigma", "b"))
    cat.add(1, "A+", ("a", "b"))
    cat.add(1, "A-", ("a", "b"))

    # 2-simplices
    for k in range(lay.m + 1):
        cat.add(2, f"rho_{k},1", ("h", f"g_{k}", f"q_{k}"))
        cat.add(2, f"rho_{k},2", (f"q_{k}", f"g_{k}", "h"))
    for j in range(1, inv.gp + 1):
        if lay.eps_of(j) == 1:
            cat.add(2, f"nu_{j},1", ("h", f"f_{j}", f"t_{j}"))
        else:
            cat.add(2, f"nu_{j},1", ("h", f"t_{j}", f"f_{j}"))
        cat.add(2, f"nu_{j},2", (f"t_{j}", f"f_{j}", "h"))
    for ell in range(lay.size):
        _, _, x, y = lay.pattern(ell)
        cat.add(2, f"delta_{ell}", (lay.edge(ell), f"e_{x}", f"e_{y}"))
    for sign in "+-":
        for ell in range(lay.size):
            cat.add(2, f"E{sign}_{ell}", (f"e_{ell}", S(sign, ell), f"A{sign}"))
    for sign in "+-":
        for ell in range(lay.size):
            _, _, x, y = lay.pattern(ell)
            cat.add(2, f"T{sign}_{ell}", (lay.edge(ell), S(sign, x), S(sign, y)))
    for ell in range(lay.size):
        if lay.h_flipped(ell):
            cat.add(2, f"H_{ell}", ("h", S("-", ell), S("+", ell)))
        else:
            cat.add(2, f"H_{ell}", ("h", S("+", ell), S("-", ell)))
    for ell in range(lay.size):
        _, _, x, y = lay.pattern(ell)
        sx, sy = lay.f_signs(ell)
        cat.add(2, f"F_{ell}", (lay.twin_edge(ell), S(sx, x), S(sy, y)))

    # 3-simplices
    for sign in "+-":
        for ell in range(lay.size):
            _, _, x, y = lay.pattern(ell)
            cat.add(3, f"D{sign}_{ell}", (f"delta_{ell}", f"T{sign}_{ell}", f"E{sign}_{x}", f"E{sign}_{y}"))
    for j in range(1, inv.gp + 1):
        for label, faces in _handle_tetrahedra(lay, j):
            cat.add(3, label, faces)
    for k in range(lay.m + 1):
        ell = lay.star + k
        cat.add(3, f"R_{k},1", (f"rho_{k},1", f"H_{lay.wrap(ell + 1)}", f"F_{ell}", f"T-_{ell}"))
        cat.add(3, f"R_{k},2", (f"rho_{k},2", f"T+_{ell}", f"F_{ell}", f"H_{ell}"))


def _handle_tetrahedra(lay: _BaseLayout, j: int) -> List[Tuple[str, Tuple[str, ...]]]:
    """N_{j,1}, N'_{j,1}, N_{j,2}, N'_{j,2} for handle j"""
    n1, n2 = f"nu_{j},1", f"nu_{j},2"
    if lay.orientable:
        twisted = lay.eps_of(j) == -1
        if j % 2 == 1:
            a, b, c, d = 2 * j - 2, 2 * j - 1, 2 * j, 2 * j + 1
            if not twisted:
                faces = [(n1, f"H_{b}", f"F_{a}", f"T-_{a}"), (n1, f"H_{c}", f"F_{c}", f"T-_{c}"),
                         (n2, f"T+_{a}", f"F_{a}", f"H_{a}"), (n2, f"T+_{c}", f"F_{c}", f"H_{d}")]
            else:
                faces = [(n1, f"H_{b}", f"T-_{a}", f"F_{a}"), (n1, f"H_{c}", f"T+_{c}", f"F_{c}"),
                         (n2, f"T+_{a}", f"F_{a}", f"H_{a}"), (n2, f"T-_{c}", f"F_{c}", f"H_{d}")]
        else:
            a, b, c, d = 2 * j - 3, 2 * j - 2, 2 * j - 1, 2 * j
            if not twisted:
                faces = [(n1, f"H_{b}", f"F_{a}", f"T-_{a}"), (n1, f"H_{c}", f"F_{c}", f"T-_{c}"),
                         (n2, f"T+_{a}", f"F_{a}", f"H_{a}"), (n2, f"T+_{c}", f"F_{c}", f"H_{d}")]
            else:
                faces = [(n1, f"H_{b}", f"T+_{a}", f"F_{a}"), (n1, f"H_{c}", f"T-_{c}", f"F_{c}"),
                         (n2, f"T-_{a}", f"F_{a}", f"H_{a}"), (n2, f"T+_{c}", f"F_{c}", f"H_{d}")]
    else:
        a, b = 2 * j - 2, 2 * j - 1
        if lay.eps_of(j) == 1:
            faces = [(n1, f"H_{b}", f"F_{a}", f"T-_{a}"), (n1, f"H_{2 * j}", f"F_{b}", f"T-_{b}"),
                     (n2, f"T+_{a}", f"F_{a}", f"H_{a}"), (n2, f"T+_{b}", f"F_{b}", f"H_{b}")]
        else:
            faces = [(n1, f"H_{b}", f"T-_{a}", f"F_{a}"), (n1, f"H_{2 * j}", f"T+_{b}", f"F_{b}"),
                     (n2, f"T+_{a}", f"F_{a}", f"H_{a}"), (n2, f"T-_{b}", f"F_{b}", f"H_{b}")]
    names = [f"N_{j},1", f"N'_{j},1", f"N_{j},2", f"N'_{j},2"]
    return list(zip(names, [tuple(f) for f in faces]))


def _add_fiber(cat: _Catalogue, k: int, word: PavementWord) -> None:
    """Solid torus pavement of fiber k; the wiring depends on the sign of b_k"""
    z, w = word.z, word.w
    beta = word.beta
    c, d = f"c_{k}", f"d_{k}"
    p = lambda ell: fiber_label("p", k, ell)
    Sk = lambda ell: fiber_label("S", k, ell)
    mu = lambda ell: fiber_label("mu", k, ell)
    X = lambda ell: fiber_label("X", k, ell)
    P = lambda sign, ell: fiber_label(f"P{sign}", k, ell)
    x = lambda ell: f"q_{k}" if word.letter(ell) == "Q" else "h"
    cyc = lambda ell: (ell - 1) % z + 1
    Q, Hp, G = f"Q_{k}", f"H'_{k}", f"G_{k}"

    cat.add(0, c)
    cat.add(0, d)
    for ell in range(1, z + 1):
        cat.add(1, p(ell), ("sigma", c))
    cat.add(1, f"C+_{k}", (c, d))
    cat.add(1, f"C-_{k}", (c, d))
    for ell in range(z + 1):
        cat.add(1, Sk(ell), ("sigma", d))

    if beta > 0:
        def plus_target(ell: int) -> int:
            if ell <= z - w + 1:
                return w + ell - 1
            if ell == z - w + 2:
                return 0
            return ell - (z - w + 1)

        mus = [(x(ell), p(cyc(ell + 1)), p(ell)) for ell in range(1, z + 1)]
        xs = [(x(ell), Sk(cyc(ell + 1)), Sk(ell)) for ell in range(1, z + 1)]
        pluses = [(p(ell), Sk(plus_target(ell)), f"C+_{k}") for ell in range(1, z + 1)]
        q_face, h_face, g_face = (f"q_{k}", Sk(0), Sk(z)), ("h", Sk(2), Sk(0)), (f"g_{k}", Sk(2), Sk(z))
    elif beta < 0:
        nxt = lambda i: i + 1 if i < z else 1
        mus = [(f"q_{k}", p(2), p(1))] + [("h", p(ell), p(nxt(ell))) for ell in range(2, z + 1)]
        xs = [(f"q_{k}", Sk(2), Sk(1))] + [("h", Sk(ell), Sk(nxt(ell))) for ell in range(2, z + 1)]
        pluses = [(p(1), Sk(0), f"C+_{k}")] + [(p(ell), Sk(nxt(ell)), f"C+_{k}") for ell in range(2, z + 1)]
        q_face, h_face, g_face = (f"q_{k}", Sk(nxt(2)), Sk(0)), ("h", Sk(1), Sk(0)), (f"g_{k}", Sk(2), Sk(0))
    else:
        mus = [(f"q_{k}", p(1), p(1))]
        xs = [(f"q_{k}", Sk(1), Sk(1))]
        pluses = [(p(1), Sk(0), f"C+_{k}")]
        q_face, h_face, g_face = (f"q_{k}", Sk(0), Sk(0)), ("h", Sk(1), Sk(0)), (f"g_{k}", Sk(1), Sk(0))

    for ell in range(1, z + 1):
        cat.add(2, mu(ell), mus[ell - 1])
    for ell in range(1, z + 1):
        cat.add(2, P("+", ell), pluses[ell - 1])
    for ell in range(1, z + 1):
        cat.add(2, P("-", ell), (p(ell), Sk(ell), f"C-_{k}"))
    for ell in range(1, z + 1):
        cat.add(2, X(ell), xs[ell - 1])
    cat.add(2, Q, q_face)
    cat.add(2, Hp, h_face)
    cat.add(2, G, g_face)

    rho1, rho2 = f"rho_{k},1", f"rho_{k},2"
    if beta > 0:
        minus = [(mu(ell), X(ell), P("-", cyc(ell + 1)), P("-", ell)) for ell in range(1, z + 1)]
        plus = []
        for ell in range(1, z + 1):
            if ell <= z - w:
                middle = X(w + ell - 1)
            elif ell == z - w + 1:
                middle = Q
            elif ell == z - w + 2:
                middle = Hp
            else:
                middle = X(ell - (z - w + 1))
            plus.append((mu(ell), middle, P("+", cyc(ell + 1)), P("+", ell)))
        closing = [(rho1, Hp, G, Q), (rho2, X(1), G, X(z))]
    elif beta < 0:
        nxt = lambda i: i + 1 if i < z else 1
        minus = [(mu(1), X(1), P("-", 2), P("-", 1))]
        minus += [(mu(ell), X(ell), P("-", ell), P("-", nxt(ell))) for ell in range(2, z + 1)]
        plus = [(mu(1), Q, P("+", 2), P("+", 1))]
        plus += [(mu(ell), X(ell + 1), P("+", ell), P("+", ell + 1)) for ell in range(2, z)]
        plus.append((mu(z), Hp, P("+", z), P("+", 1)))
        closing = [(rho1, X(2), G, Q), (rho2, X(1), G, Hp)]
    else:
        minus = [(mu(1), X(1), P("-", 1), P("-", 1))]
        plus = [(mu(1), Q, P("+", 1), P("+", 1))]
        closing = [(rho1, Hp, G, Q), (rho2, X(1), G, Hp)]

    for ell in range(1, z + 1):
        cat.add(3, fiber_label("M+", k, ell), plus[ell - 1])
    for ell in range(1, z + 1):
        cat.add(3, fiber_label("M-", k, ell), minus[ell - 1])
    cat.add(3, fiber_label("R'", k, 1), closing[0])
    cat.add(3, fiber_label("R'", k, 2), closing[1])


def build_delta_complex(inv: SeifertInvariants) -> DeltaComplex:
    """
    Build the full simplex catalogue

    Args:
        inv: Normalized invariants

    Returns:
        DeltaComplex with faces for every simplex of dimension 1..3
    """
    words = fiber_words(inv)
    cat = _Catalogue()
    cat.add(0, "sigma")
    cat.add(0, "a")
    cat.add(0, "b")
    lay = _BaseLayout(inv)
    _add_base(cat, lay)
    for k, word in enumerate(words):
        _add_fiber(cat, k, word)

    cx = DeltaComplex(inv=inv, words=words, labels=cat.labels, faces=cat.faces)
    logging.info(f"Delta complex for {inv.to_text()}: sizes {[cx.size(d) for d in range(4)]}")
    return cx


def check_face_identities(cx: DeltaComplex) -> List[str]:
    """Violations of (s_j)_i = (s_i)_{j-1} for i < j; empty when the complex is consistent"""
    violations = []
    for dim in (2, 3):
        for label in cx.labels[dim]:
            faces = cx.faces[label]
            for j in range(dim + 1):
                for i in range(j):
                    left = cx.faces[faces[j]][i]
                    right = cx.faces[faces[i]][j - 1]
                    if left != right:
                        violations.append(f"{label}: (s_{j})_{i}={left} but (s_{i})_{j - 1}={right}")
    if violations:
        logging.error(f"{len(violations)} face identity violations, first: {violations[0]}")
    return violations


def simplicial_cohomology(cx: DeltaComplex, p: int) -> CohomologyGroups:
    """F_p cohomology of the simplicial cochain complex, degrees 0..3"""
    sizes = [cx.size(d) for d in range(4)]
    maps = [cx.coboundary(d) for d in range(3)]
    representatives, coboundaries = cohomology_basis(maps, sizes, p)
    groups = CohomologyGroups(p=p, representatives=representatives, coboundaries=coboundaries)
    logging.debug(f"Simplicial cohomology mod {p}: dims {groups.dims}")
    return groups


def load_complex_dump(text: str) -> DeltaComplex:
    """Rebuild a complex from export_text() output; invariants and words are not recovered"""
    cat = _Catalogue()
    for number, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens:
            continue
        if len(tokens) < 4 or tokens[0] != "SIMPLEX" or tokens[3] != "FACES":
            raise ValueError(f"line {number}: expected 'SIMPLEX <dim> <label> FACES ...'")
        cat.add(int(tokens[1]), tokens[2], tuple(tokens[4:]))
    return DeltaComplex(inv=None, words=(), labels=cat.labels, faces=cat.faces)
