"""Frozen genus-2 polynomials: the seven per-graph values and their sum.

Each block is (X-degree, denominator, L-shift, {L-power: numerator}).
These are data, not derived in-process; the tests compare engine output
against them term by term.
"""

from fractions import Fraction

from kp2.lring import RingElem

GRAPH_VALUES = {
    "G1": [
        (0, 2592, -3, {0: 24, 1: -12, 2: 6, 3: -61, 4: 12, 5: -3, 6: 54, 7: -3, 9: -17}),
        (1, 144, -3, {0: 12, 1: -4, 2: 1, 3: -20, 4: 2, 6: 9}),
        (2, 24, -3, {0: 6, 1: -1, 3: -5}),
        (3, 4, -3, {0: 1}),
    ],
    "G2": [
        (0, 1728, -3, {0: 24, 1: -28, 2: 10, 3: -45, 4: 36, 5: -7, 6: 26, 7: -11, 9: -5}),
        (1, 288, -3, {0: 36, 1: -28, 2: 5, 3: -44, 4: 18, 6: 13}),
        (2, 48, -3, {0: 18, 1: -7, 3: -11}),
        (3, 8, -3, {0: 3}),
    ],
    "G3": [
        (0, 20736, -2, {0: 288, 1: -190, 2: -25, 3: -364, 4: 145, 5: 74, 6: 97, 8: -25}),
        (1, 3456, -2, {0: 288, 1: -95, 2: -24, 3: -194, 5: 25}),
        (2, 8, -2, {0: 1}),
    ],
    "G4": [
        (0, 746496, -1, {0: 2592, 1: -541, 2: -864, 3: -2229, 4: 720, 5: 897, 7: -575}),
        (1, 96, -1, {0: 1}),
    ],
    "G5": [
        (0, 1728, -2, {0: 12, 1: -8, 2: -11, 3: -8, 4: 5, 5: 16, 6: -1, 8: -5}),
        (1, 72, -2, {0: 3, 1: -1, 2: -3, 3: -1, 5: 2}),
        (2, 16, -2, {0: 1, 2: -1}),
    ],
    "G6": [
        (0, 62208, -1, {0: 138, 1: 143, 2: -204, 3: -135, 4: -222, 5: 201, 7: 79}),
        (1, 3456, -1, {0: 23, 1: 24, 2: -22, 4: -25}),
    ],
    "G7": [
        (0, 3732480, 0, {0: 281, 1: 4320, 2: 1785, 3: -2736, 4: -3765, 6: 2059}),
    ],
}

TOTAL_BLOCKS = [
    (0, 17280, -3, {0: 400, 3: -959, 6: 784, 9: -216}),
    (1, 1, 0, {}),
]

# which frozen value belongs to which undecorated graph, keyed by the
# canonical (genera, edges) pair
GOLDEN_NAMES = {
    ((0, 0), ((0, 1), (0, 1), (0, 1))): "G1",
    ((0, 0), ((0, 0), (0, 1), (1, 1))): "G2",
    ((0, 1), ((0, 0), (0, 1))): "G3",
    ((1, 1), ((0, 1),)): "G4",
    ((0,), ((0, 0), (0, 0))): "G5",
    ((1,), ((0, 0),)): "G6",
    ((2,), ()): "G7",
}


def from_blocks(blocks) -> RingElem:
    out = RingElem.zero()
    for x, den, shift, nums in blocks:
        for power, num in nums.items():
            out = out + RingElem.monomial(Fraction(num, den), l=power + shift, x=x)
    return out


def genus2_graph_values() -> dict:
    return {name: from_blocks(blocks) for name, blocks in GRAPH_VALUES.items()}


def genus2_total() -> RingElem:
    out = from_blocks([TOTAL_BLOCKS[0]])
    x = RingElem.X()
    x1 = (RingElem.const(Fraction(-1, 3)) + RingElem.monomial(Fraction(5, 24), l=-3)
          + RingElem.monomial(Fraction(13, 96), l=3))
    x2 = RingElem.const(Fraction(-1, 2)) + RingElem.monomial(Fraction(5, 8), l=-3)
    x3 = RingElem.monomial(Fraction(5, 8), l=-3)
    return out + x1 * x + x2 * x * x + x3 * x * x * x
