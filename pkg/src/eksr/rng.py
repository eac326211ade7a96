"""Deterministic, portable randomness helpers.

Everything random in this package is derived from ``random.Random(seed)``
(the MT19937 generator) through ``getrandbits`` only, with the explicit
rejection sampling and Fisher-Yates routines below.  That pins the exact
output for a given seed, so fixtures stay portable.
"""

from __future__ import annotations

import random
from typing import Sequence, TypeVar

T = TypeVar("T")


def randbelow(rng: random.Random, n: int) -> int:
    """Uniform integer in [0, n) via rejection on getrandbits (unbiased)."""
    if n <= 0:
        raise ValueError(f"randbelow needs a positive bound, got {n}")
    bits = (n - 1).bit_length()
    if bits == 0:
        return 0
    while True:
        v = rng.getrandbits(bits)
        if v < n:
            return v


def shuffled(rng: random.Random, items: Sequence[T]) -> list[T]:
    """Fisher-Yates shuffle (swap index i with randbelow(i+1), i descending)."""
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = randbelow(rng, i + 1)
        out[i], out[j] = out[j], out[i]
    return out
