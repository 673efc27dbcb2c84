"""Extreme rays of a pointed cone in the non-negative orthant by double description.

Starts from the orthant (rays e_1..e_n) and inserts the remaining rows one at a
time in lexicographic order. New rays come from adjacent (positive, negative)
pairs; adjacency is the combinatorial test: no third ray is tight on every
constraint the pair shares. All arithmetic is on exact integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cone import ConeSystem, cone_contains
from .errors import GuardExceeded

DIM_GUARD = 24
RAY_GUARD = 250_000


@dataclass(frozen=True)
class ExtremeRaySet:
    rays: np.ndarray = field(repr=False)   # one primitive integer ray per row
    source: ConeSystem = field(repr=False)

    def __len__(self):
        return self.rays.shape[0]

    def __iter__(self):
        return iter(self.rays)


def exact_rank(M) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    A = [[int(v) for v in row] for row in np.asarray(M)]
    if not A:
        return 0
    m, n = len(A), len(A[0])
    rank, prev = 0, 1
    for col in range(n):
        piv = next((i for i in range(rank, m) if A[i][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        p = A[rank][col]
        for i in range(rank + 1, m):
            f = A[i][col]
            A[i] = [(p * A[i][k] - f * A[rank][k]) // prev for k in range(n)]
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def _orthant_check(sys: ConeSystem):
    n = sys.n
    if sys.rows.shape[0] < n or not np.array_equal(sys.rows[:n], np.eye(n, dtype=sys.rows.dtype)):
        raise ValueError("double description expects the n non-negativity rows first")


def enumerate_extreme_rays(sys: ConeSystem, max_dim: int = DIM_GUARD,
                           max_rays: int = RAY_GUARD) -> ExtremeRaySet:
    n = sys.n
    if n > max_dim:
        raise GuardExceeded("ray-enumeration-dimension", f"n = {n} > {max_dim}")
    _orthant_check(sys)
    extra = np.unique(sys.rows[n:], axis=0) if sys.rows.shape[0] > n else np.zeros((0, n), np.int64)
    # np.unique sorts rows lexicographically, which is the insertion order
    R = np.eye(n, dtype=np.int64)
    Z = ~np.eye(n, dtype=bool)          # Z[ray, constraint]: constraint tight at ray
    for a in extra:
        s = R @ a
        pos, neg, zer = np.flatnonzero(s > 0), np.flatnonzero(s < 0), np.flatnonzero(s == 0)
        new_rays, new_Z = [], []
        if neg.size and pos.size:
            Zf = Z.astype(np.uint8)
            common_cnt = Zf[neg] @ Zf[pos].T
            xs, ys = np.nonzero(common_cnt >= n - 2)
            xs, ys = neg[xs], pos[ys]
            if xs.size:
                NZ = (~Z).astype(np.float32)
                for k in range(0, xs.size, 2048):
                    cx, cy = xs[k:k + 2048], ys[k:k + 2048]
                    common = Z[cx] & Z[cy]
                    # rays tight on all common constraints: zero misses
                    misses = common.astype(np.float32) @ NZ.T
                    ok = (misses == 0).sum(axis=1) == 2
                    for x, y, cm in zip(cx[ok], cy[ok], common[ok]):
                        z = s[y] * R[x] - s[x] * R[y]
                        z //= np.gcd.reduce(z)
                        new_rays.append(z)
                        new_Z.append(cm)
        keep = np.concatenate([pos, zer])
        tight = np.concatenate([np.zeros(pos.size, bool), np.ones(zer.size, bool)])
        R, Z = R[keep], Z[keep]
        if new_rays:
            R = np.vstack([R, np.array(new_rays)])
            Z = np.vstack([Z, np.array(new_Z)])
            tight = np.concatenate([tight, np.ones(len(new_rays), bool)])
        Z = np.hstack([Z, tight[:, None]])
        if R.shape[0] > max_rays:
            raise GuardExceeded("ray-enumeration-size", f"{R.shape[0]} rays > {max_rays}")
        if R.size and np.abs(R).max() > 2 ** 40:
            raise GuardExceeded("ray-enumeration-magnitude", "ray entries too large for int64")
    if R.shape[0]:
        order = np.lexsort(R.T[::-1])
        R = R[order]
    return ExtremeRaySet(R, sys)


def validate_rays(rs: ExtremeRaySet) -> bool:
    """Every ray is a cone member whose tight rows have rank n - 1."""
    sys = rs.source
    for ray in rs.rays:
        if not cone_contains(sys, ray.tolist()):
            return False
        tight = sys.rows[(sys.rows @ ray) == 0]
        if exact_rank(tight) != sys.n - 1:
            return False
    return True
