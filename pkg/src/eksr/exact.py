"""Exact optimum for small instances via widest-path search on the hypercube.

Every assignment is a vertex of the n-cube, weighted by its satisfied-clause
count.  The optimum equals the largest threshold theta such that start and
end stay connected in the subgraph of vertices with count >= theta, so we
score all 2^n vertices (vectorized), binary-search the threshold over the
distinct counts, and extract a witness path with a BFS at the final
threshold.  Scores are integers in 0..m; thresholds are compared with integer
arithmetic only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapExceededError, EksrError
from .formulas import Assignment, CnfLike, Instance, ReconfSequence

DEFAULT_N_CAP = 24

_CHUNK = 1 << 22  # violated-index buffer flushed to bincount at this size


@dataclass
class HypercubeSearch:
    """All 2^n vertex scores (satisfied-clause counts) for a formula."""

    n: int
    scores: np.ndarray

    @classmethod
    def build(cls, formula: CnfLike, n_cap: int = DEFAULT_N_CAP) -> "HypercubeSearch":
        n = formula.n
        if n > n_cap:
            raise CapExceededError(f"n={n} exceeds the hypercube cap {n_cap}")
        size = 1 << n
        violated = np.zeros(size, dtype=np.int32)
        buf: list[np.ndarray] = []
        buffered = 0
        for clause in formula.clauses:
            # The assignments violating a clause form a subcube: every literal
            # pinned to its falsifying value, the other bits free.
            base = 0
            pinned = 0
            for lit in clause:
                bit = 1 << (abs(lit) - 1)
                pinned |= bit
                if lit < 0:
                    base |= bit
            idx = np.array([base], dtype=np.int64)
            for v in range(n):
                bit = 1 << v
                if not pinned & bit:
                    idx = np.concatenate([idx, idx + bit])
            buf.append(idx)
            buffered += idx.size
            if buffered >= _CHUNK:
                violated += np.bincount(np.concatenate(buf), minlength=size).astype(np.int32)
                buf, buffered = [], 0
        if buf:
            violated += np.bincount(np.concatenate(buf), minlength=size).astype(np.int32)
        return cls(n, formula.m - violated)


def _neighbor_view(arr: np.ndarray, bit: int) -> np.ndarray:
    """arr reindexed by flipping one coordinate: result[x] = arr[x ^ (1 << bit)]."""
    return arr.reshape(-1, 2, 1 << bit)[:, ::-1, :].reshape(arr.shape)


def _bfs(active: np.ndarray, n: int, start_idx: int, end_idx: int) -> np.ndarray | None:
    """BFS distances from start inside the active subgraph, or None when the
    end vertex is unreachable.  Stops as soon as the end vertex is labeled."""
    if not (active[start_idx] and active[end_idx]):
        return None
    dist = np.full(active.shape, -1, dtype=np.int32)
    dist[start_idx] = 0
    if end_idx == start_idx:
        return dist
    frontier = np.zeros(active.shape, dtype=bool)
    frontier[start_idx] = True
    level = 0
    while True:
        level += 1
        nxt = np.zeros(active.shape, dtype=bool)
        for bit in range(n):
            nxt |= _neighbor_view(frontier, bit)
        nxt &= active
        nxt &= dist < 0
        if not nxt.any():
            return None
        dist[nxt] = level
        if dist[end_idx] >= 0:
            return dist
        frontier = nxt


def _witness_path(dist: np.ndarray, n: int, start_idx: int, end_idx: int) -> list[int]:
    path = [end_idx]
    cur = end_idx
    for level in range(int(dist[end_idx]) - 1, -1, -1):
        for bit in range(n):
            nb = cur ^ (1 << bit)
            if dist[nb] == level:
                cur = nb
                break
        else:
            raise AssertionError("broken BFS parent chain")
        path.append(cur)
    assert cur == start_idx
    path.reverse()
    return path


@dataclass(frozen=True)
class OptResult:
    opt: Fraction
    witness: ReconfSequence


def opt_exact(instance: Instance, n_cap: int = DEFAULT_N_CAP) -> OptResult:
    """Exact maxmin optimum and a witness sequence attaining it."""
    f = instance.formula
    n = f.n
    cube = HypercubeSearch.build(f, n_cap=n_cap)
    scores = cube.scores
    start_idx = instance.start.bits
    end_idx = instance.end.bits

    # Binary search the best threshold over the distinct scores; both
    # endpoints score m, and threshold 0 is always connected.
    levels = np.unique(scores)
    lo, hi = 0, len(levels) - 1  # invariant: levels[lo] is connected
    best_dist = _bfs(scores >= levels[0], n, start_idx, end_idx)
    assert best_dist is not None
    while lo < hi:
        mid = (lo + hi + 1) // 2
        dist = _bfs(scores >= levels[mid], n, start_idx, end_idx)
        if dist is None:
            hi = mid - 1
        else:
            lo = mid
            best_dist = dist
    theta = int(levels[lo])
    path = _witness_path(best_dist, n, start_idx, end_idx)
    witness = ReconfSequence(tuple(Assignment(n, x) for x in path))
    return OptResult(Fraction(theta, f.m), witness)


def reachable_at_threshold(instance: Instance, theta: Fraction, n_cap: int = DEFAULT_N_CAP) -> bool:
    """Whether start and end are connected among assignments of value >= theta."""
    f = instance.formula
    theta = Fraction(theta)
    cube = HypercubeSearch.build(f, n_cap=n_cap)
    # score/m >= theta  <=>  score >= ceil(theta * m), integers only
    need = -((-theta.numerator * f.m) // theta.denominator) if theta > 0 else 0
    if need > f.m:
        return False
    active = cube.scores >= need
    return _bfs(active, f.n, instance.start.bits, instance.end.bits) is not None
