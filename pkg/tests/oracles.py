"""Frozen reference values and generators shared by the test modules."""

import random
from fractions import Fraction

from windtree.exact import Quadratic
from windtree.renorm import LengthQuadruple

R2 = Quadratic.sqrt(2)
SILVER_SLOPE = R2 - 1
HALF = Fraction(1, 2)

# Z for a = b = 1/2 and slope sqrt(2) - 1
SILVER_Z = LengthQuadruple.of(HALF, HALF, SILVER_SLOPE / 2, SILVER_SLOPE / 2)
SILVER_PAIR = (1, 2)

# level-1 L words for the (1,2) system
SILVER_LEVEL1_L = ("2l,1l,3r", "1l,2l,2r", "3l,3l,1r")
SILVER_LEVEL2_R2_LENGTH = 7

# (X_k, Y_k, x4_k, y4_k) of the endpoint recurrence for the (1,2) system
SILVER_ENDPOINTS = [
    ((0, 0, 1), (0, 0, 1), 1, 1),
    ((1, 0, 1), (0, 0, 1), 1, 1),
    ((1, 0, 1), (1, 1, 3), 1, 1),
    ((5, 1, 3), (1, 1, 3), 1, 1),
    ((5, 1, 3), (5, 6, 13), 1, 1),
    ((24, 6, 13), (5, 6, 13), 6, 1),
]
SILVER_GROWTH = [1, 1, 3, 5, 13, 24, 61, 115, 291, 551, 1393, 2640, 6673]

# word lengths (|L_i|, |R_i|) of the (1,2) system; Pell-type numbers
SILVER_LENGTHS = {0: (1, 1), 1: (3, 1), 2: (3, 7), 3: (17, 7), 12: (19601, 47321)}

# F-variant example: corrected and displayed forms of n differ
VARIANT_Z = LengthQuadruple.of(Fraction(7, 2), Fraction(11, 2), 1, 2)


def random_two_cycle(rng: random.Random) -> LengthQuadruple:
    """A rational quadruple with x1 + x2 > y1 > x2 and y1 + y2 > x1 > y2."""
    while True:
        x2 = Fraction(rng.randint(1, 200), rng.randint(1, 50))
        y2 = Fraction(rng.randint(1, 200), rng.randint(1, 50))
        u = Fraction(rng.randint(1, 200), rng.randint(1, 50))
        v = Fraction(rng.randint(1, 200), rng.randint(1, 50))
        if u < y2 + v and v < x2 + u:
            return LengthQuadruple.of(y2 + v, x2, x2 + u, y2)


def random_quadruple(rng: random.Random) -> LengthQuadruple:
    return LengthQuadruple.of(*(Fraction(rng.randint(1, 500), rng.randint(1, 60)) for _ in range(4)))
