"""
Pavement words w_{alpha,beta} over the letters Q and H
Gives, for each fiber, the letter sequence and the (u, v, w, z) data that wire the solid torus pavement
"""

import math
import logging
from dataclasses import dataclass, asdict
from typing import Dict, Any, Tuple

from sympy import gcdex

from seifert_invariants import SeifertInvariants


class WordError(ValueError):
    """Raised for a non-admissible (alpha, beta) pair"""


@dataclass(frozen=True)
class PavementWord:
    """Word data; letters x_1..x_z are stored 0-based in `letters`"""
    alpha: int
    beta: int
    letters: str
    u: int
    v: int
    w: int  # rotation pivot
    z: int  # word length

    def letter(self, i: int) -> str:
        """1-based access x_i"""
        return self.letters[i - 1]

    def count_from(self, start: int, letter: str) -> int:
        """#{i >= start : x_i = letter}"""
        return self.letters[start - 1:].count(letter)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def describe(self) -> str:
        return f"{self.letters} u={self.u} v={self.v} w={self.w} z={self.z}"


def _letters(alpha: int, beta: int) -> str:
    """Unfold the recursive definition for alpha, beta >= 0 coprime"""
    ops = []
    while (alpha, beta) not in ((1, 0), (0, 1)):
        if alpha <= 0 or beta < 0:
            raise WordError(f"({alpha}, {beta}) does not reduce to a base word")
        if alpha > beta:
            # w_{alpha,beta}(a,t) = w_{alpha-beta,beta}(a, at)
            ops.append("H")
            alpha -= beta
        else:
            # w_{alpha,beta}(a,t) = w_{alpha,beta-alpha}(at, t)
            ops.append("Q")
            beta -= alpha
    word = "Q" if alpha == 1 else "H"
    for letter in reversed(ops):
        word = word.replace(letter, "QH")
    return word


def _bezout_window(alpha: int, beta: int) -> Tuple[int, int]:
    """The unique (u, v) with alpha*u - beta*v = 1, 0 < u <= beta, 0 <= v < alpha"""
    x, y, _ = gcdex(alpha, beta)
    u, v = int(x), int(-y)
    shift = (u - 1) // beta
    u -= shift * beta
    v -= shift * alpha
    return u, v


def build_word(alpha: int, beta: int) -> PavementWord:
    """
    Build w_{alpha,beta} with its rotation data

    Args:
        alpha: Positive fiber multiplicity a_k
        beta: Integer b_k coprime to alpha; beta <= 0 needs alpha = 1

    Returns:
        PavementWord
    """
    if alpha <= 0:
        raise WordError(f"alpha must be positive, got {alpha}")
    if math.gcd(alpha, abs(beta)) != 1:
        raise WordError(f"gcd({alpha}, {beta}) != 1")

    if beta <= 0:
        if alpha != 1:
            raise WordError(f"beta <= 0 requires alpha = 1, got ({alpha}, {beta})")
        z = 1 + abs(beta)
        return PavementWord(alpha=alpha, beta=beta, letters="Q" + "H" * abs(beta),
                            u=1, v=0, w=z, z=z)

    letters = _letters(alpha, beta)
    u, v = _bezout_window(alpha, beta)
    z = len(letters)
    return PavementWord(alpha=alpha, beta=beta, letters=letters, u=u, v=v, w=z - u - v + 1, z=z)


def check_rotation_identity(word: PavementWord) -> bool:
    """
    Check the decomposition and rotation identities of a word with beta > 0

    Returns:
        True when the word splits as w_{alpha-v,beta-u} w_{v,u}, equals its rotation
        x_w..x_{z-1} Q H x_2..x_{w-1}, and its suffix from x_w has v letters Q and u letters H
    """
    if word.beta <= 0:
        raise WordError("rotation identity is stated for beta > 0 only")

    z, w = word.z, word.w
    letters = word.letters
    if letters.count("Q") != word.alpha or letters.count("H") != word.beta:
        return False
    if letters[0] != "Q" or letters[-1] != "H":
        return False
    if word.alpha * word.u - word.beta * word.v != 1:
        return False

    split_ok = letters == _letters(word.alpha - word.v, word.beta - word.u) + _letters(word.v, word.u)
    rotated = letters[w - 1:z - 1] + "QH" + letters[1:w - 1]
    suffix = letters[w - 1:]
    suffix_ok = suffix.count("Q") == word.v and suffix.count("H") == word.u

    if not (split_ok and rotated == letters and suffix_ok):
        logging.debug(f"Rotation identity fails for ({word.alpha}, {word.beta}): {letters}")
        return False
    return True


def fiber_words(inv: SeifertInvariants) -> Tuple[PavementWord, ...]:
    """One word per fiber k = 0..m"""
    return tuple(build_word(a, b) for a, b in inv.fibers)
