"""Minimum pseudo-weights over a fundamental cone.

Small systems go through exact extreme-ray enumeration. For larger ones maxfrac,
bec and awgnc have exact routes that avoid listing all rays:

* maxfrac: one exact LP per coordinate (min ||w||_1 with w_i = 1, w <= 1).
* bec: the smallest nonempty stopping set (supports of cone members are
  exactly the stopping sets).
* awgnc: 1 / max{||w||_2^2 : w in cone, sum w = 1}. The maximum of a convex
  function over a polytope sits at a vertex; a spatial branch-and-bound on
  boxes, bounded by an RLT relaxation (see ``rlt``), proves that no vertex
  beats the incumbent. Under cyclic shift symmetry the largest coordinate is
  pinned to one position per block.
* bsc: sandwiched between the maxfrac minimum (a lower bound) and the best
  candidate ray; when the two do not meet a capped enumeration is tried, and
  past the cap the guard error reports the interval.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, gcd, lcm
from typing import Optional, Sequence

import numpy as np

from .codes import ConvCode, truncated_check
from .cone import ConeSystem, build_cone, cone_contains
from .dd import enumerate_extreme_rays
from .errors import GuardExceeded
from .polys import NonnegPolyVec, reduce_mod
from .rlt import RltRelaxation
from .simplex import solve_lp
from .weights import canonical_measure, exact, weight_report

DD_AUTO_LIMIT = 12
STOPPING_SET_GUARD = 3_000_000
NODE_GUARD = 200_000
DD_SOFT_RAYS = 20_000     # auto mode tries enumeration beyond DD_AUTO_LIMIT under this cap


@dataclass
class MinPseudoWeight:
    measure: str
    value: object                    # exact Fraction / int, 0 for a trivial cone
    ray: Optional[np.ndarray] = field(default=None, repr=False)
    method: str = ""
    nodes: int = 0

    def __float__(self):
        return float(self.value)


def primitive(vec: Sequence) -> np.ndarray:
    """Scale a non-negative rational vector to coprime integers."""
    fr = [exact(v) for v in vec]
    den = 1
    for v in fr:
        den = lcm(den, v.denominator)
    ints = [int(v * den) for v in fr]
    g = 0
    for v in ints:
        g = gcd(g, v)
    g = g or 1
    return np.array([v // g for v in ints], dtype=object if max(map(abs, ints), default=0) > 2 ** 62 else np.int64)


def orbit_reps(sys: ConeSystem) -> Optional[list]:
    if sys.symmetry is None:
        return None
    r, L = sys.symmetry
    return [l * r for l in range(L)]


def shift_orbit(vec: np.ndarray, sys: ConeSystem) -> list:
    """All simultaneous cyclic shifts of a vector in circulant layout."""
    if sys.symmetry is None:
        return [np.asarray(vec)]
    r, L = sys.symmetry
    blocks = np.asarray(vec).reshape(L, r)
    return [np.roll(blocks, s, axis=1).reshape(-1) for s in range(r)]


# -- exact linear algebra helpers --------------------------------------------

def _null_vector(rows: list, n: int) -> Optional[list]:
    """A nonzero rational d with row . d = 0 for every row, or None."""
    M = [[Fraction(v) for v in row] for row in rows]
    pivots = []
    r = 0
    for col in range(n):
        p = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][col]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    free = [c for c in range(n) if c not in set(pivots)]
    if not free:
        return None
    f = free[0]
    d = [Fraction(0)] * n
    d[f] = Fraction(1)
    for i, pc in enumerate(pivots):
        d[pc] = -M[i][f]
    return d


def purify(sys: ConeSystem, w: Sequence) -> list:
    """Move a point of {w in cone, sum w = 1} to a vertex without lowering ||w||_2^2.

    Along a line through w the squared norm is convex, so one of the two
    directions never decreases it; walk that way until a new row is tight.
    """
    K = sys.rows
    n = sys.n
    w = [exact(v) for v in w]
    s = sum(w)
    w = [v / s for v in w]
    for _ in range(n + 1):
        vals = [sum(int(k[i]) * w[i] for i in np.flatnonzero(k)) for k in K]
        tight = [K[k].tolist() for k in range(len(K)) if vals[k] == 0]
        d = _null_vector(tight + [[1] * n], n)
        if d is None:
            return w
        if sum(a * b for a, b in zip(w, d)) < 0:
            d = [-v for v in d]
        step = None
        for k in range(len(K)):
            kd = sum(int(K[k][i]) * d[i] for i in np.flatnonzero(K[k]))
            if kd < 0:
                t = vals[k] / (-kd)
                if step is None or t < step:
                    step = t
        if step is None:
            raise AssertionError("unbounded direction inside a bounded section")
        w = [a + step * b for a, b in zip(w, d)]
    raise AssertionError("purification did not reach a vertex")


# -- maxfrac -----------------------------------------------------------------

@dataclass
class MaxFracResult:
    value: Fraction
    witness: Optional[np.ndarray] = field(default=None, repr=False)
    position: Optional[int] = None
    per_position: dict = field(default_factory=dict, repr=False)


def min_maxfrac_lp(sys: ConeSystem, positions: Optional[Sequence[int]] = None) -> MaxFracResult:
    """min_i min{ ||w||_1 : w in cone, w_i = 1, w <= 1 } in exact arithmetic.

    ``positions`` restricts i (e.g. to orbit representatives of a symmetric
    system); by default the system's symmetry is used when present.
    """
    n = sys.n
    if positions is None:
        reps = orbit_reps(sys)
        positions = reps if reps is not None else range(n)
    K = sys.check_rows
    A_ub = [{int(j): -int(v) for j, v in zip(np.flatnonzero(k), k[np.flatnonzero(k)])} for k in K]
    A_ub += [{j: 1} for j in range(n)]
    b_ub = [0] * len(K) + [1] * n
    best = None
    per = {}
    for i in positions:
        res = solve_lp([1] * n, A_ub, b_ub, [{int(i): 1}], [1])
        if not res.ok:
            per[int(i)] = None
            continue
        per[int(i)] = res.value
        if best is None or res.value < best.value:
            best = MaxFracResult(res.value, primitive(res.x), int(i))
    if best is None:
        return MaxFracResult(Fraction(0), None, None, per)
    best.per_position = per
    return best


# -- stopping sets -------------------------------------------------------------

def largest_stopping_set(sys: ConeSystem) -> np.ndarray:
    """Union of all stopping sets by peeling; empty iff the cone is {0}."""
    alive = np.ones(sys.n, dtype=bool)
    changed = True
    while changed:
        changed = False
        for supp in sys.checks:
            hit = [i for i in supp if alive[i]]
            if len(hit) == 1:
                alive[hit[0]] = False
                changed = True
    return alive


def cone_is_trivial(sys: ConeSystem) -> bool:
    return not largest_stopping_set(sys).any()


def min_stopping_sets(sys: ConeSystem, guard: int = STOPPING_SET_GUARD) -> tuple:
    """Smallest nonempty stopping-set size and all stopping sets of that size."""
    alive = np.flatnonzero(largest_stopping_set(sys))
    if alive.size == 0:
        return 0, []
    pos = {int(v): k for k, v in enumerate(alive)}
    masks = []
    for supp in sys.checks:
        bits = [pos[i] for i in supp if i in pos]
        if bits:
            masks.append(sum(1 << b for b in bits))
    masks = np.array(masks, dtype=object)
    m = alive.size
    examined = 0
    for size in range(1, m + 1):
        examined += comb(m, size)
        if examined > guard:
            raise GuardExceeded("stopping-set-enumeration", f"more than {guard} subsets")
        found = []
        idx = np.array(list(combinations(range(m), size)), dtype=np.int64)
        words = (np.int64(1) << idx).sum(axis=1) if m < 63 else None
        if words is None:
            raise GuardExceeded("stopping-set-enumeration", "support wider than 62 positions")
        bad = np.zeros(len(words), dtype=bool)
        for mk in masks:
            bad |= np.bitwise_count(words & np.int64(mk)) == 1
        for row in idx[~bad]:
            ind = np.zeros(sys.n, dtype=np.int64)
            ind[alive[row]] = 1
            found.append(ind)
        if found:
            return size, found
    raise AssertionError("the largest stopping set itself should have been found")


# -- awgnc branch and bound ------------------------------------------------------

def _sq(w) -> Fraction:
    return sum((exact(v) ** 2 for v in w), Fraction(0))


def _section_rows(sys: ConeSystem, i0: Optional[int]) -> np.ndarray:
    """Integer rows g . w >= 0: the cone rows, plus w_i0 >= w_j under shift symmetry."""
    if i0 is None:
        return sys.rows
    n = sys.n
    sym = np.zeros((n - 1, n), dtype=np.int64)
    for k, j in enumerate(j for j in range(n) if j != i0):
        sym[k, i0] = 1
        sym[k, j] = -1
    return np.vstack([sys.rows, sym])


def _exact_node_lp(G: np.ndarray, lo, hi, c) -> tuple:
    """Exact max of c . w over {G w >= 0, sum w = 1, lo <= w <= hi}; (None, None) if empty."""
    n = G.shape[1]
    # w = lo + x with 0 <= x <= hi - lo
    A_ub, b_ub = [], []
    for row in G:
        nz = np.flatnonzero(row)
        A_ub.append({int(j): -int(row[j]) for j in nz})
        b_ub.append(sum(int(row[j]) * lo[j] for j in nz))
    for j in range(n):
        A_ub.append({j: 1})
        b_ub.append(hi[j] - lo[j])
    res = solve_lp(list(c), A_ub, b_ub, [{j: 1 for j in range(n)}], [1 - sum(lo)], maximize=True)
    if not res.ok:
        return None, None
    w = [lo[j] + res.x[j] for j in range(n)]
    return sum(a * b for a, b in zip(c, w)), w


def _dyadic(x: float, lo: Fraction, hi: Fraction) -> Fraction:
    s = Fraction(round(x * 2 ** 24), 2 ** 24)
    if lo < s < hi:
        return s
    return (lo + hi) / 2


def awgnc_branch_and_bound(sys: ConeSystem, incumbent: Sequence, max_nodes: int = NODE_GUARD,
                           seeds: Sequence = ()) -> tuple:
    """Exact maximum of ||w||^2 over the normalized cone section.

    ``incumbent`` and ``seeds`` are nonzero cone members; the best of them
    starts the search. Nodes are boxes on w bounded by an RLT relaxation
    whose value is certified exactly. Returns ``(Q, vertex, nodes)``; the
    minimum AWGNC pseudo-weight is ``1 / Q``.
    """
    n = sys.n
    best_v = purify(sys, incumbent)
    target = _sq(best_v)
    tight = []

    def add_tight(v):
        for img in shift_orbit(np.array(v, dtype=object), sys):
            tight.append([exact(x) for x in img])

    def consider(v):
        nonlocal best_v, target
        q = _sq(v)
        if q > target:
            best_v, target = v, q
            tight.clear()
            add_tight(v)
        elif q == target and v not in tight:
            add_tight(v)

    add_tight(best_v)
    for sd in seeds:
        consider(purify(sys, sd))

    def offer(G, lo, hi, w):
        # a vertex at least as good as the float point w: snap, else an exact LP along w
        cand = [max(Fraction(float(x)).limit_denominator(10 ** 6), Fraction(0)) for x in w]
        if any(cand) and cone_contains(sys, cand):
            consider(purify(sys, cand))
            return
        _, wex = _exact_node_lp(G, lo, hi, [Fraction(float(x)) for x in w])
        if wex is not None:
            consider(purify(sys, wex))

    nodes = 0
    for i0 in orbit_reps(sys) or [None]:
        G = _section_rows(sys, i0)
        relax = RltRelaxation(G)
        stack = [([Fraction(0)] * n, [Fraction(1)] * n)]
        while stack:
            lo, hi = stack.pop()
            nodes += 1
            if nodes > max_nodes:
                raise GuardExceeded("branch-and-bound-nodes", f"{max_nodes} nodes; best awgnc so far {1 / target}")
            sol = relax.solve(lo, hi)
            if sol.status != 0:
                # solver trouble: fall back to the exact secant bound
                c = [lo[j] + hi[j] for j in range(n)]
                val, wex = _exact_node_lp(G, lo, hi, c)
                if val is None or val - sum(a * b for a, b in zip(lo, hi)) <= target:
                    continue
                w = np.array([float(v) for v in wex])
                gap = np.array([float((lo[j] + hi[j]) * wex[j] - lo[j] * hi[j] - wex[j] ** 2) for j in range(n)])
            else:
                if sol.value <= float(target) * (1 + 1e-7) and relax.certify(sol, target) is not None:
                    continue
                w = sol.w
                if float(w @ w) > float(target) * (1 + 1e-9):
                    offer(G, lo, hi, w)
                    if sol.value <= float(target) * (1 + 1e-7) and relax.certify(sol, target) is not None:
                        continue
                gap = sol.diag - w * w
            # split where a known optimum sits strictly inside the box, else at the worst coordinate
            j, split, width = None, None, Fraction(-1)
            for v in tight:
                if all(lo[k] <= v[k] <= hi[k] for k in range(n)):
                    for k in range(n):
                        if lo[k] < v[k] < hi[k] and hi[k] - lo[k] > width:
                            j, split, width = k, v[k], hi[k] - lo[k]
            if j is None:
                gap = np.where([hi[k] > lo[k] for k in range(n)], gap, -np.inf)
                j = int(np.argmax(gap))
                split = _dyadic(float(w[j]), lo[j], hi[j])
            h1 = list(hi)
            h1[j] = split
            l2 = list(lo)
            l2[j] = split
            stack.append((l2, hi))
            stack.append((lo, h1))
    return target, best_v, nodes


# -- public entry point ------------------------------------------------------------

def _ray_minimum(rays: np.ndarray, measure: str) -> tuple:
    best, arg = None, None
    for ray in rays:
        v = weight_report(ray.tolist()).value(measure)
        if best is None or v < best:
            best, arg = v, ray
    return best, arg


def _candidate_rays(sys: ConeSystem) -> list:
    cands = []
    try:
        _, sets = min_stopping_sets(sys)
        cands.extend(sets)
    except GuardExceeded:
        alive = largest_stopping_set(sys)
        if alive.any():
            cands.append(alive.astype(np.int64))
    mf = min_maxfrac_lp(sys)
    if mf.witness is not None:
        cands.append(np.asarray(mf.witness, dtype=np.int64))
    return cands


def min_pseudoweight(sys: ConeSystem, measure: str, method: str = "auto",
                     dd_limit: int = DD_AUTO_LIMIT, max_nodes: int = NODE_GUARD) -> MinPseudoWeight:
    """Minimum of a pseudo-weight over the nonzero vectors of the cone.

    ``method`` is ``"rays"`` (extreme-ray enumeration only) or ``"auto"``
    (enumeration up to ``dd_limit`` coordinates, exact per-measure searches
    beyond).
    """
    measure = canonical_measure(measure)
    if measure == "frac":
        raise ValueError("the fractional weight has no cone description; use the polytope")
    if method not in ("auto", "rays"):
        raise ValueError("method must be 'auto' or 'rays'")
    if cone_is_trivial(sys):
        return MinPseudoWeight(measure, Fraction(0), None, "trivial-cone")
    if method == "rays" or sys.n <= dd_limit:
        rays = enumerate_extreme_rays(sys).rays
        val, ray = _ray_minimum(rays, measure)
        return MinPseudoWeight(measure, val, ray, "rays")
    if measure == "maxfrac":
        mf = min_maxfrac_lp(sys)
        return MinPseudoWeight(measure, mf.value, mf.witness, "lp")
    if measure == "bec":
        size, sets = min_stopping_sets(sys)
        return MinPseudoWeight(measure, size, sets[0], "stopping-sets")
    cands = _candidate_rays(sys)
    lower = min_maxfrac_lp(sys).value
    val, ray = _ray_minimum(cands, measure)
    if val == lower:
        return MinPseudoWeight(measure, val, ray, "sandwich")
    if measure == "bsc":
        try:
            rays = enumerate_extreme_rays(sys, max_rays=DD_SOFT_RAYS).rays
        except GuardExceeded as exc:
            raise GuardExceeded(exc.guard, f"{exc.detail}; bsc minimum lies in [{lower}, {val}]") from exc
        val, ray = _ray_minimum(rays, measure)
        return MinPseudoWeight(measure, val, ray, "rays")
    start = min(cands, key=lambda c: weight_report(c.tolist()).awgnc)
    Q, v, nodes = awgnc_branch_and_bound(sys, start, max_nodes=max_nodes, seeds=cands)
    return MinPseudoWeight(measure, 1 / Q, primitive(v), "branch-and-bound", nodes)


def min_pseudoweights(sys: ConeSystem, measures=("awgnc", "bec", "bsc", "maxfrac"), **kw) -> dict:
    if sys.n <= kw.get("dd_limit", DD_AUTO_LIMIT) and not cone_is_trivial(sys):
        rays = enumerate_extreme_rays(sys).rays
        out = {}
        for m in measures:
            val, ray = _ray_minimum(rays, canonical_measure(m))
            out[canonical_measure(m)] = MinPseudoWeight(canonical_measure(m), val, ray, "rays")
        return out
    return {canonical_measure(m): min_pseudoweight(sys, m, **kw) for m in measures}


# -- bounding sequences for convolutional codes --------------------------------------

@dataclass
class BoundSequences:
    measure: str
    lower: list            # lower[l-1]: min over K(H^(l,l)), None for a trivial cone
    upper: list            # upper[l-1]: min over K(H^(ms+l,l)), None for a trivial cone
    nu_lower: Optional[int]
    nu_upper: Optional[int]
    upper_witness: Optional[np.ndarray] = field(default=None, repr=False)
    upper_witness_l: Optional[int] = None

    @property
    def nu(self) -> Optional[int]:
        return self.nu_lower


def pw_bound_sequences(c: ConvCode, measure: str, l_max: int, **kw) -> BoundSequences:
    measure = canonical_measure(measure)
    lower, upper = [], []
    nu_lo = nu_up = None
    witness, wl = None, None
    for l in range(1, l_max + 1):
        lo_sys = build_cone(truncated_check(c, l, l).realized)
        if cone_is_trivial(lo_sys):
            lower.append(None)
        else:
            lower.append(min_pseudoweight(lo_sys, measure, **kw).value)
            nu_lo = nu_lo or l
        up_sys = build_cone(truncated_check(c, c.ms + l, l).realized)
        if cone_is_trivial(up_sys):
            upper.append(None)
        else:
            res = min_pseudoweight(up_sys, measure, **kw)
            upper.append(res.value)
            if nu_up is None:
                nu_up = l
                witness, wl = res.ray, l
    return BoundSequences(measure, lower, upper, nu_lo, nu_up, witness, wl)


# -- projection theorems --------------------------------------------------------------

def majorizes(mu: Sequence, lam: Sequence) -> bool:
    """True when ``mu`` majorizes ``lam`` (sorted prefix sums dominate, equal totals)."""
    a = sorted((exact(v) for v in mu), reverse=True)
    b = sorted((exact(v) for v in lam), reverse=True)
    size = max(len(a), len(b))
    a += [Fraction(0)] * (size - len(a))
    b += [Fraction(0)] * (size - len(b))
    sa = sb = Fraction(0)
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa < sb:
            return False
    return sa == sb


@dataclass
class ProjectionCheck:
    r: int
    original: dict
    projected: dict
    holds: dict
    frac_preserved: bool
    majorized: bool

    @property
    def ok(self) -> bool:
        return all(self.holds.values()) and self.frac_preserved and self.majorized


def theorem1_check(c: ConvCode, omega: NonnegPolyVec, r: int) -> ProjectionCheck:
    """Compare the weights of a convolutional pseudo-codeword and its wrap modulo X^r - 1."""
    if not cone_contains(c, omega):
        raise ValueError("omega is not in the fundamental cone of the convolutional code")
    proj = reduce_mod(omega, r)
    a = weight_report(omega.coefficients() or [0])
    b = weight_report(proj.coefficients() or [0])
    holds = {m: b.value(m) <= a.value(m) for m in ("awgnc", "bec", "bsc", "maxfrac")}
    return ProjectionCheck(
        r, a.as_dict(), b.as_dict(), holds,
        frac_preserved=a.frac == b.frac,
        majorized=majorizes(proj.coefficients(), omega.coefficients()),
    )
