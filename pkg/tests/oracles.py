"""Independent brute-force reference implementations used only by tests.

Nothing here shares code with the library paths under test: survival
probabilities come from explicit enumeration of flip interleavings, optima
from two different graph searches written against the raw definitions.
"""

from __future__ import annotations

import heapq
import itertools
from fractions import Fraction

from eksr.formulas import Assignment, Instance, count_satisfied


def survival_bruteforce(c: int, a: int, b: int) -> Fraction:
    """Fraction of interleavings of a down-steps and b up-steps (uniformly
    random order) along which the running count starting at c never hits 0."""
    if c <= 0:
        return Fraction(0)
    good = 0
    total = 0
    for downs in itertools.combinations(range(a + b), a):
        total += 1
        cur = c
        ok = True
        down_set = set(downs)
        for step in range(a + b):
            cur += -1 if step in down_set else 1
            if cur <= 0:
                ok = False
                break
        if ok:
            good += 1
    if total == 0:
        return Fraction(1)
    return Fraction(good, total)


def routed_survival_bruteforce(s: int, r: int, e: int, k: int) -> Fraction:
    """Joint enumeration over both phases' interleavings for one clause.

    Profiles are k-bit literal-truth masks under start, waypoint and end.
    Counts interleaving pairs (weighted uniformly) along which the
    true-literal count stays positive through phase 1 and phase 2.
    """
    def phase(c0, flips):
        """All (multiplicity-uniform) walk patterns for one phase; yields
        (survived, final_count) with its weight 1/total_patterns."""
        a = sum(1 for f in flips if f < 0)
        b = len(flips) - a
        pats = []
        for downs in itertools.combinations(range(a + b), a):
            cur = c0
            ok = True
            dset = set(downs)
            for step in range(a + b):
                cur += -1 if step in dset else 1
                if cur <= 0:
                    ok = False
                    break
            pats.append(ok)
        return pats

    c1 = bin(s).count("1")
    flips1 = [-1] * bin(s & ~r).count("1") + [1] * bin(r & ~s).count("1")
    c2 = bin(r).count("1")
    flips2 = [-1] * bin(r & ~e).count("1") + [1] * bin(e & ~r).count("1")
    if c1 == 0:
        return Fraction(0)
    p1 = phase(c1, flips1)
    p2 = phase(c2, flips2) if c2 > 0 else [False]
    good = sum(1 for x in p1 if x) * sum(1 for y in p2 if y)
    return Fraction(good, len(p1) * len(p2))


def averaged_survival_bruteforce(s: int, e: int, k: int) -> Fraction:
    """Average routed survival over a uniform waypoint profile."""
    total = sum(routed_survival_bruteforce(s, r, e, k) for r in range(1 << k))
    return total / (1 << k)


def max_sat_value(formula) -> Fraction:
    """Exhaustive max over assignments of the satisfied-clause fraction."""
    best = max(count_satisfied(formula, Assignment(formula.n, bits)) for bits in range(1 << formula.n))
    return Fraction(best, formula.m)


def opt_widest_path(instance: Instance) -> Fraction:
    """Max-min optimum by a widest-path priority search over the hypercube."""
    f = instance.formula
    n, m = f.n, f.m
    scores = [count_satisfied(f, Assignment(n, x)) for x in range(1 << n)]
    start, goal = instance.start.bits, instance.end.bits
    best = [-1] * (1 << n)
    best[start] = scores[start]
    heap = [(-scores[start], start)]
    while heap:
        neg, x = heapq.heappop(heap)
        width = -neg
        if width < best[x]:
            continue
        if x == goal:
            return Fraction(width, m)
        for bit in range(n):
            y = x ^ (1 << bit)
            w = min(width, scores[y])
            if w > best[y]:
                best[y] = w
                heapq.heappush(heap, (-w, y))
    raise AssertionError("hypercube is connected; goal must be reached")


def opt_descending_unionfind(instance: Instance) -> Fraction:
    """Max-min optimum by activating vertices in descending score order with
    union-find until the endpoints meet."""
    f = instance.formula
    n, m = f.n, f.m
    size = 1 << n
    scores = [count_satisfied(f, Assignment(n, x)) for x in range(size)]
    order = sorted(range(size), key=lambda x: -scores[x])
    parent = list(range(size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    active = [False] * size
    start, goal = instance.start.bits, instance.end.bits
    i = 0
    while True:
        threshold = scores[order[i]]
        while i < size and scores[order[i]] == threshold:
            x = order[i]
            active[x] = True
            for bit in range(n):
                y = x ^ (1 << bit)
                if active[y]:
                    parent[find(x)] = find(y)
            i += 1
        if active[start] and active[goal] and find(start) == find(goal):
            return Fraction(threshold, m)
