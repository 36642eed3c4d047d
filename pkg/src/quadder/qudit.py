"""Quaternary digit algebra.

A qudit is an integer in {0, 1, 2, 3}, read as the 2-bit pair
(high, low) = (value // 2, value % 2).  The binary operators work bitwise
on those pairs.  The unary "special" operators reshape a digit with
respect to bit-exchange symmetry: 0 and 3 are symmetrical (unchanged when
their two bits swap), 1 and 2 are asymmetrical.
"""

from __future__ import annotations

import operator
from collections.abc import Iterable, Sequence

__all__ = [
    "check_qudit",
    "qand",
    "qor",
    "qxor",
    "qnot",
    "qnand",
    "qnor",
    "qxnor",
    "inward",
    "outward",
    "bitswap",
    "saturate3",
    "equality",
    "is_symmetrical",
    "check_word",
    "word_to_int",
    "int_to_word",
]


def check_qudit(a: int) -> int:
    """Validate and return a quaternary digit in 0..3."""
    a = operator.index(a)
    if not 0 <= a <= 3:
        raise ValueError(f"not a qudit: {a}")
    return a


def qand(a: int, b: int, *more: int) -> int:
    """Bitwise AND, variadic over two or more qudits."""
    out = check_qudit(a) & check_qudit(b)
    for x in more:
        out &= check_qudit(x)
    return out


def qor(a: int, b: int, *more: int) -> int:
    """Bitwise OR, variadic over two or more qudits."""
    out = check_qudit(a) | check_qudit(b)
    for x in more:
        out |= check_qudit(x)
    return out


def qxor(a: int, b: int, *more: int) -> int:
    """Bitwise XOR, variadic over two or more qudits."""
    out = check_qudit(a) ^ check_qudit(b)
    for x in more:
        out ^= check_qudit(x)
    return out


def qnot(a: int) -> int:
    """Basic inverter: bitwise complement, 3 - a."""
    return check_qudit(a) ^ 3


def qnand(a: int, b: int, *more: int) -> int:
    return qnot(qand(a, b, *more))


def qnor(a: int, b: int, *more: int) -> int:
    return qnot(qor(a, b, *more))


def qxnor(a: int, b: int, *more: int) -> int:
    return qnot(qxor(a, b, *more))


def inward(a: int) -> int:
    """Inward (half) inverter: invert, then pull symmetrical values to the
    nearest asymmetrical ones.  Maps 0,1 -> 2 and 2,3 -> 1."""
    a = check_qudit(a)
    if a < 2:
        return qand(qnot(a), 2)
    return qor(qnot(a), 1)


def outward(a: int) -> int:
    """Outward (full) inverter: invert, then push asymmetrical values to
    the nearest symmetrical ones.  Maps 0,1 -> 3 and 2,3 -> 0."""
    a = check_qudit(a)
    if a < 2:
        return qor(qnot(a), 3)
    return qand(qnot(a), 0)


def bitswap(a: int) -> int:
    """Exchange the two bits of the pair: 0->0, 1->2, 2->1, 3->3."""
    a = check_qudit(a)
    return ((a << 1) & 2) | (a >> 1)


def saturate3(a: int) -> int:
    """qand(a, bitswap(a)): 3 when a = 3, otherwise 0."""
    return qand(a, bitswap(a))


def equality(a: int, b: int) -> int:
    """3 when a = b, otherwise 0; realized as saturate3 of the XNOR."""
    return saturate3(qxnor(a, b))


def is_symmetrical(a: int) -> bool:
    """True for 0 and 3, whose bit pairs are invariant under bitswap."""
    return check_qudit(a) in (0, 3)


# --- fixed-width digit words (index 0 holds the least significant digit) ---


def check_word(word: Sequence[int], width: int | None = None) -> tuple[int, ...]:
    """Validate a digit word; optionally enforce its width."""
    digits = tuple(check_qudit(d) for d in word)
    if not digits:
        raise ValueError("empty word")
    if width is not None and len(digits) != width:
        raise ValueError(f"expected width {width}, got {len(digits)}")
    return digits


def word_to_int(word: Iterable[int]) -> int:
    value = 0
    for i, d in enumerate(word):
        value += check_qudit(d) << (2 * i)
    return value


def int_to_word(value: int, width: int) -> tuple[int, ...]:
    if value < 0 or value >= 1 << (2 * width):
        raise ValueError(f"{value} does not fit in {width} quaternary digits")
    return tuple((value >> (2 * i)) & 3 for i in range(width))
