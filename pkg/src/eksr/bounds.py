"""Closed-form lower bounds for the rounding scheme, and the factor table.

For a width-k clause whose endpoints each make exactly one literal true, the
probability that a routed random sequence satisfies the clause everywhere has
a closed form.  Two cases matter, distinguished by whether the two endpoints
differ; the worst endpoints reduce to these by monotonicity.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import comb

from .errors import EksrError


class EndpointCase(enum.Enum):
    NEQ = "neq"  # the two endpoints differ
    EQ = "eq"  # the two endpoints coincide


def binom_sum(n: int, shift: int) -> Fraction:
    """Sum of C(n, j) / (j + shift) over j = 0..n, for shift in {1, 2}."""
    if n < 0:
        raise EksrError(f"n must be nonnegative, got {n}")
    if shift not in (1, 2):
        raise EksrError(f"shift must be 1 or 2, got {shift}")
    return sum(Fraction(comb(n, j), j + shift) for j in range(n + 1))


def binom_sum_closed(n: int, shift: int) -> Fraction:
    """Closed forms the sums must equal: (2^(n+1)-1)/(n+1) and
    (2^(n+1)*n+1)/((n+1)(n+2))."""
    if shift == 1:
        return Fraction(2 ** (n + 1) - 1, n + 1)
    if shift == 2:
        return Fraction(2 ** (n + 1) * n + 1, (n + 1) * (n + 2))
    raise EksrError(f"shift must be 1 or 2, got {shift}")


def closed_form_bound(k: int, case: EndpointCase) -> Fraction:
    """Exact survival probability for width k in the single-true-literal case."""
    if k < 3:
        raise EksrError(f"k must be at least 3, got {k}")
    if case is EndpointCase.NEQ:
        cap = k - 2
        return sum(
            Fraction(comb(cap, j), 2**cap) * Fraction(1, 4)
            * (Fraction(j, j + 1) ** 2 + 2 * Fraction(j + 1, j + 2) + 1)
            for j in range(cap + 1)
        )
    cap = k - 1
    return sum(
        Fraction(comb(cap, j), 2**cap) * Fraction(1, 2) * (Fraction(j, j + 1) ** 2 + 1)
        for j in range(cap + 1)
    )


def approximation_factor(k: int) -> Fraction:
    """Per-clause survival guarantee: the worse of the two endpoint cases."""
    return min(closed_form_bound(k, EndpointCase.NEQ), closed_form_bound(k, EndpointCase.EQ))


def guarantee_floor(k: int) -> Fraction:
    """The simple lower bound 1 - 1/(k-1) - 1/k on the approximation factor."""
    if k < 3:
        raise EksrError(f"k must be at least 3, got {k}")
    return 1 - Fraction(1, k - 1) - Fraction(1, k)


def truncate_decimals(x: Fraction, places: int = 3) -> str:
    """Render a nonnegative rational truncated (not rounded) to fixed places."""
    scale = 10**places
    whole = (x.numerator * scale) // x.denominator
    return f"{whole // scale}.{whole % scale:0{places}d}"


def factor_table(k_min: int = 3, k_max: int = 10) -> list[dict]:
    """Approximation factors for a range of widths, exact and 3-decimal."""
    rows = []
    for k in range(k_min, k_max + 1):
        neq = closed_form_bound(k, EndpointCase.NEQ)
        eq = closed_form_bound(k, EndpointCase.EQ)
        factor = min(neq, eq)
        rows.append(
            {
                "k": k,
                "neq": f"{neq.numerator}/{neq.denominator}",
                "eq": f"{eq.numerator}/{eq.denominator}",
                "factor": f"{factor.numerator}/{factor.denominator}",
                "decimal": truncate_decimals(factor),
            }
        )
    return rows
