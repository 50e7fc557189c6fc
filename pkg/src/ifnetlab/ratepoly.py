"""Polyhedral engine for rate regions.

A RatePolytope is an H-representation over named, implicitly nonnegative
rate variables.  The module provides exact Fourier-Motzkin projection,
LP-certified redundancy removal (with an exact rational simplex fallback
when floating-point pivots look untrustworthy), low-dimensional vertex
enumeration, and union-of-polytopes region estimates compared through
support functions on a fixed direction grid.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import (
    DimensionEmpty,
    DimensionTooHigh,
    GridMismatch,
    VariableMismatch,
)

DEDUP_TOL = 1e-9
LP_RESIDUAL_TOL = 1e-7
DIRECTION_GRID_VERSION = "dirgrid-v1"
VERTEX_DIM_MAX = 5


@dataclass(frozen=True)
class RatePolytope:
    """{r >= 0 : A r <= b} over named rate variables."""

    variables: tuple[str, ...]
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.A, dtype=float))
        bb = np.asarray(self.b, dtype=float).ravel()
        if a.size == 0:
            a = a.reshape(0, len(self.variables))
        if a.shape[1] != len(self.variables) or a.shape[0] != bb.shape[0]:
            raise VariableMismatch(
                f"A is {a.shape}, b has {bb.shape[0]} rows, {len(self.variables)} variables"
            )
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(bb))):
            raise VariableMismatch("bounds and coefficients must be finite")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "b", bb)

    @property
    def dim(self) -> int:
        return len(self.variables)

    @property
    def nrows(self) -> int:
        return self.A.shape[0]

    def row_strings(self) -> list[str]:
        out = []
        for coeffs, bound in zip(self.A, self.b):
            terms = [
                (f"{c:g}*" if abs(c - 1.0) > 1e-12 else "") + v
                for c, v in zip(coeffs, self.variables)
                if abs(c) > 1e-12
            ]
            out.append(" + ".join(terms or ["0"]) + f" <= {bound:.9g}")
        return out

    def to_json(self) -> str:
        rows = [
            {"coeffs": [float(c) for c in coeffs], "bound": float(bound)}
            for coeffs, bound in zip(self.A, self.b)
        ]
        return json.dumps(
            {"variables": list(self.variables), "rows": rows}, sort_keys=True
        )

    @staticmethod
    def from_json(text: str) -> "RatePolytope":
        doc = json.loads(text)
        rows = doc["rows"]
        A = np.asarray([r["coeffs"] for r in rows], dtype=float)
        b = np.asarray([r["bound"] for r in rows], dtype=float)
        if not rows:
            A = np.zeros((0, len(doc["variables"])))
            b = np.zeros(0)
        return RatePolytope(tuple(doc["variables"]), A, b)


def make_polytope(variables: Sequence[str], rows: Iterable[tuple]) -> RatePolytope:
    """rows: iterable of (coeff mapping or vector, bound)."""
    variables = tuple(variables)
    A, b = [], []
    for coeffs, bound in rows:
        if isinstance(coeffs, dict):
            vec = [float(coeffs.get(v, 0.0)) for v in variables]
        else:
            vec = [float(c) for c in coeffs]
        A.append(vec)
        b.append(float(bound))
    if not A:
        A = np.zeros((0, len(variables)))
        b = np.zeros(0)
    return RatePolytope(variables, np.asarray(A), np.asarray(b))


def _canon_rows(A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scale-normalize, drop tautologies, dedupe identical rows (keep min bound)."""
    keep: dict[tuple, float] = {}
    infeasible = False
    for coeffs, bound in zip(A, b):
        m = np.max(np.abs(coeffs))
        if m <= 1e-14:
            if bound < -1e-12:
                infeasible = True
            continue
        c = coeffs / m
        bd = bound / m
        key = tuple(np.round(c, 12))
        if key not in keep or bd < keep[key]:
            keep[key] = bd
    if infeasible:
        # canonical empty marker: 0 <= -1
        return np.zeros((1, A.shape[1])), np.asarray([-1.0])
    if not keep:
        return np.zeros((0, A.shape[1])), np.zeros(0)
    items = sorted(keep.items(), key=lambda kv: (kv[0], kv[1]))
    A2 = np.asarray([list(k) for k, _ in items])
    b2 = np.asarray([v for _, v in items])
    return A2, b2


def _dominance_prune(A: np.ndarray, b: np.ndarray, hist: list) -> tuple:
    """Drop rows implied coordinatewise over the nonnegative orthant.

    Row i is implied by row k when A_k >= A_i componentwise and b_k <= b_i:
    then A_i.x <= A_k.x <= b_k <= b_i for every x >= 0.
    """
    m = A.shape[0]
    if m <= 1:
        return A, b, hist
    keep = np.ones(m, dtype=bool)
    for i in range(m):
        if not keep[i]:
            continue
        ge = np.all(A >= A[i] - 1e-12, axis=1) & (b <= b[i] + 1e-12)
        ge[i] = False
        ge &= keep
        if np.any(ge):
            keep[i] = False
    idx = np.where(keep)[0]
    return A[idx], b[idx], [hist[i] for i in idx]


def _lp_prune(A: np.ndarray, b: np.ndarray, hist: list) -> tuple:
    keep = list(range(A.shape[0]))
    for idx in list(keep):
        others = [i for i in keep if i != idx]
        status, val = lp_max(A[idx], A[others], b[others])
        if status == "optimal" and val <= b[idx] + DEDUP_TOL:
            keep.remove(idx)
    return A[keep], b[keep], [hist[i] for i in keep]


def fourier_motzkin_eliminate(
    p: RatePolytope, drop: Iterable[str], lp_prune_above: int = 160
) -> RatePolytope:
    """Exact projection of p onto variables not in `drop`.

    Implicit nonnegativity of each dropped variable is materialized before
    elimination; kept variables stay implicitly nonnegative.  Growth is
    controlled by the Chernikov history rule (a combined row drawing on more
    than k+1 original rows after k eliminations is redundant), coordinatewise
    dominance pruning, and an LP sweep when the row count still exceeds
    `lp_prune_above`.
    """
    drop = list(drop)
    for v in drop:
        if v not in p.variables:
            raise VariableMismatch(f"cannot drop unknown variable {v!r}")
    keep_vars = tuple(v for v in p.variables if v not in drop)
    if not keep_vars:
        raise DimensionEmpty("cannot eliminate every variable")
    A, b = p.A.copy(), p.b.copy()
    variables = list(p.variables)
    hist = [frozenset((i,)) for i in range(A.shape[0])]
    remaining = list(drop)
    step = 0
    nn_id = A.shape[0]
    while remaining:
        # greedy order: smallest pos*neg product first
        def cost(v):
            col = A[:, variables.index(v)]
            return (col > 1e-12).sum() * (col < -1e-12).sum()

        v = min(remaining, key=cost)
        remaining.remove(v)
        step += 1
        j = variables.index(v)
        # materialize this variable's nonnegativity now; adding it earlier
        # would expose it to pruning (it is vacuous over the orthant but
        # essential once the variable is treated as free by the elimination)
        nn = np.zeros((1, A.shape[1]))
        nn[0, j] = -1.0
        A = np.vstack([A, nn])
        b = np.concatenate([b, [0.0]])
        hist = hist + [frozenset((nn_id,))]
        nn_id += 1
        col = A[:, j]
        pos = np.where(col > 1e-12)[0]
        neg = np.where(col < -1e-12)[0]
        zer = np.where(np.abs(col) <= 1e-12)[0]
        rows = [A[zer]]
        bs = [b[zer]]
        new_hist = [hist[i] for i in zer]
        combo_rows, combo_b = [], []
        for ip in pos:
            for ineg in neg:
                h = hist[ip] | hist[ineg]
                if len(h) > step + 1:
                    continue  # Chernikov: provably redundant
                lam = -col[ineg]
                mu = col[ip]
                combo_rows.append(lam * A[ip] + mu * A[ineg])
                combo_b.append(lam * b[ip] + mu * b[ineg])
                new_hist.append(h)
        if combo_rows:
            rows.append(np.asarray(combo_rows))
            bs.append(np.asarray(combo_b))
        A = np.vstack(rows) if rows else np.zeros((0, len(variables)))
        b = np.concatenate(bs) if bs else np.zeros(0)
        A = np.delete(A, j, axis=1)
        variables.pop(j)
        hist = new_hist
        A, b, hist = _scale_dedup(A, b, hist)
        A, b, hist = _dominance_prune(A, b, hist)
        if A.shape[0] > lp_prune_above and remaining:
            A, b, hist = _lp_prune(A, b, hist)
    A, b = _canon_rows(A, b)
    return RatePolytope(keep_vars, A, b)


def _scale_dedup(A: np.ndarray, b: np.ndarray, hist: list) -> tuple:
    """Normalize row scales and collapse duplicates, keeping the tighter
    bound (and its history)."""
    keep: dict = {}
    infeasible = False
    for i in range(A.shape[0]):
        m = np.max(np.abs(A[i]))
        if m <= 1e-14:
            if b[i] < -1e-12:
                infeasible = True
            continue
        key = tuple(np.round(A[i] / m, 12))
        bd = b[i] / m
        if key not in keep or bd < keep[key][0]:
            keep[key] = (bd, hist[i])
    if infeasible:
        n = A.shape[1]
        return np.zeros((1, n)), np.asarray([-1.0]), [frozenset()]
    if not keep:
        return np.zeros((0, A.shape[1])), np.zeros(0), []
    items = sorted(keep.items())
    A2 = np.asarray([list(k) for k, _ in items])
    b2 = np.asarray([v[0] for _, v in items])
    h2 = [v[1] for _, v in items]
    return A2, b2, h2


# ---------------------------------------------------------------------------
# linear programming with exact fallback
# ---------------------------------------------------------------------------


def _exact_simplex_max(c, A, b):
    """Max c.x s.t. A x <= b, x >= 0, in exact Fraction arithmetic.

    Returns (status, value): status in {"optimal", "unbounded", "infeasible"}.
    Two-phase tableau with Bland's rule; sizes here are tiny.
    """
    m, n = len(A), len(c)
    A = [[Fraction(x).limit_denominator(10**12) for x in row] for row in A]
    b = [Fraction(x).limit_denominator(10**12) for x in b]
    c = [Fraction(x).limit_denominator(10**12) for x in c]
    arts = [i for i, bi in enumerate(b) if bi < 0]
    # equation form a.x + s = b; rows with b < 0 are negated and given an
    # artificial basic variable
    for i in arts:
        A[i] = [-x for x in A[i]]
        b[i] = -b[i]
    total = n + m + len(arts)
    T = []
    art_at = {}
    k = 0
    for i in range(m):
        row = A[i] + [Fraction(0)] * (m + len(arts))
        row[n + i] = Fraction(-1) if i in arts else Fraction(1)
        if i in arts:
            art_at[i] = n + m + k
            row[n + m + k] = Fraction(1)
            k += 1
        T.append(row + [b[i]])
    basis = [art_at.get(i, n + i) for i in range(m)]
    art_cols = set(art_at.values())
    if arts:
        # phase 1: maximize -sum(artificials); z-row starts at +1 on
        # artificial columns, then basic columns are reduced to zero
        obj = [Fraction(1) if j in art_cols else Fraction(0) for j in range(total)]
        obj.append(Fraction(0))
        for i in arts:
            for jj in range(total + 1):
                obj[jj] -= T[i][jj]
        status = _pivot_loop(T, obj, basis, total)
        if status != "optimal" or obj[total] != 0:
            return "infeasible", None
        # drive any zero-valued artificial out of the basis
        for i in range(m):
            if basis[i] in art_cols:
                piv_col = next(
                    (j for j in range(total) if j not in art_cols and T[i][j] != 0),
                    None,
                )
                if piv_col is None:
                    continue
                piv = T[i][piv_col]
                T[i] = [x / piv for x in T[i]]
                for r in range(m):
                    if r != i and T[r][piv_col] != 0:
                        coef = T[r][piv_col]
                        T[r] = [x - coef * y for x, y in zip(T[r], T[i])]
                basis[i] = piv_col
    # phase 2
    obj = [(-c[j] if j < n else Fraction(0)) for j in range(total)] + [Fraction(0)]
    for i, bv in enumerate(basis):
        if obj[bv] != 0:
            coef = obj[bv]
            for jj in range(total + 1):
                obj[jj] -= coef * T[i][jj]
    status = _pivot_loop(T, obj, basis, total, banned=art_cols)
    if status == "unbounded":
        return "unbounded", None
    return "optimal", obj[total]


def _pivot_loop(T, obj, basis, total, banned=frozenset()):
    guard = 0
    while True:
        guard += 1
        if guard > 100000:
            return "stalled"
        enter = next(
            (j for j in range(total) if j not in banned and obj[j] < 0), None
        )
        if enter is None:
            return "optimal"
        ratios = [
            (T[i][total] / T[i][enter], i) for i in range(len(T)) if T[i][enter] > 0
        ]
        if not ratios:
            return "unbounded"
        _, leave = min(ratios, key=lambda t: (t[0], basis[t[1]]))
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        for i in range(len(T)):
            if i != leave and T[i][enter] != 0:
                coef = T[i][enter]
                T[i] = [x - coef * y for x, y in zip(T[i], T[leave])]
        if obj[enter] != 0:
            coef = obj[enter]
            for jj in range(total + 1):
                obj[jj] -= coef * T[leave][jj]
        basis[leave] = enter


def lp_max(c: np.ndarray, A: np.ndarray, b: np.ndarray):
    """Max c.x over {x >= 0, Ax <= b}; returns (status, value).

    Primary solver is HiGHS; when its certificate looks numerically dubious
    the exact rational simplex re-derives the answer.
    """
    if A.shape[0] == 0:
        if np.all(np.asarray(c) <= 1e-15):
            return "optimal", 0.0
        return "unbounded", None
    res = linprog(-np.asarray(c), A_ub=A, b_ub=b, bounds=(0, None), method="highs")
    if res.status == 0:
        x = np.asarray(res.x)
        resid = float(np.max(A @ x - b)) if A.size else 0.0
        if resid <= LP_RESIDUAL_TOL and np.min(x) >= -LP_RESIDUAL_TOL:
            return "optimal", float(-res.fun)
    # non-optimal HiGHS statuses conflate infeasible/unbounded after
    # presolve; the exact rational simplex settles it
    status, val = _exact_simplex_max(list(c), A.tolist(), b.tolist())
    if status == "optimal":
        return "optimal", float(val)
    return status, None


def remove_redundant(p: RatePolytope) -> RatePolytope:
    """Minimal H-representation; every removed row is LP-certified implied."""
    A, b = _canon_rows(p.A, p.b)
    keep = list(range(A.shape[0]))
    for idx in list(keep):
        others = [i for i in keep if i != idx]
        status, val = lp_max(A[idx], A[others], b[others])
        if status == "optimal" and val <= b[idx] + DEDUP_TOL:
            keep.remove(idx)
    return RatePolytope(p.variables, A[keep], b[keep])


# ---------------------------------------------------------------------------
# vertices, membership
# ---------------------------------------------------------------------------


def _full_rows(p: RatePolytope) -> tuple[np.ndarray, np.ndarray]:
    n = p.dim
    A = np.vstack([p.A, -np.eye(n)])
    b = np.concatenate([p.b, np.zeros(n)])
    return A, b


def enumerate_vertices(p: RatePolytope, tol: float = DEDUP_TOL) -> np.ndarray:
    """All extreme points, deduplicated at 1e-9 and sorted lexicographically."""
    n = p.dim
    if n > VERTEX_DIM_MAX:
        raise DimensionTooHigh(f"vertex enumeration limited to dim {VERTEX_DIM_MAX}")
    A, b = _full_rows(p)
    m = A.shape[0]
    pts = []
    for combo in itertools.combinations(range(m), n):
        M = A[list(combo)]
        if abs(np.linalg.det(M)) < 1e-10:
            continue
        x = np.linalg.solve(M, b[list(combo)])
        if np.all(A @ x <= b + tol):
            pts.append(np.clip(x, 0.0, None))
    if not pts:
        return np.zeros((0, n))
    pts = np.asarray(pts)
    # global dedupe at tol (adjacent-only comparison misses clusters split
    # by coordinate jitter), then lexicographic order
    out = []
    for q in pts:
        if not any(np.max(np.abs(q - kept)) <= tol for kept in out):
            out.append(q)
    pts = np.asarray(out)
    order = np.lexsort(np.round(pts, 10).T[::-1])
    return pts[order]


def contains(p: RatePolytope, point: Sequence[float], tol: float = DEDUP_TOL) -> bool:
    x = np.asarray(point, dtype=float)
    if x.shape != (p.dim,):
        raise VariableMismatch(f"point has dim {x.shape}, polytope {p.dim}")
    if np.min(x) < -tol:
        return False
    return bool(np.all(p.A @ x <= p.b + tol))


def is_subset(a: RatePolytope, b: RatePolytope, tol: float = DEDUP_TOL) -> bool:
    """Every vertex of a lies in b (same variable order required)."""
    if a.variables != b.variables:
        raise VariableMismatch("polytopes must share variables", a=a.variables, b=b.variables)
    return all(contains(b, v, tol) for v in enumerate_vertices(a))


def vertex_sets_equal(a: RatePolytope, b: RatePolytope, tol: float = DEDUP_TOL) -> bool:
    """Same extreme points up to tol, order-insensitively matched."""
    va, vb = enumerate_vertices(a), enumerate_vertices(b)
    return points_match(va, vb, tol)


def points_match(va: np.ndarray, vb: np.ndarray, tol: float = DEDUP_TOL) -> bool:
    if va.shape != vb.shape:
        return False
    if va.size == 0:
        return True
    used = np.zeros(len(vb), dtype=bool)
    for x in va:
        d = np.max(np.abs(vb - x), axis=1)
        d[used] = np.inf
        k = int(np.argmin(d))
        if d[k] > tol:
            return False
        used[k] = True
    return True


# ---------------------------------------------------------------------------
# support engine
# ---------------------------------------------------------------------------


def direction_grid(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Fixed versioned grid: primitive integer directions with coords in 0..3.

    Returns (integer directions, unit-normalized directions); axis directions
    are included.  The set is deterministic so estimates are comparable.
    """
    dirs = []
    for combo in itertools.product(range(4), repeat=dim):
        if not any(combo):
            continue
        g = np.gcd.reduce([c for c in combo if c] or [1])
        prim = tuple(c // g for c in combo)
        if prim not in dirs:
            dirs.append(prim)
    ints = np.asarray(sorted(dirs))
    units = ints / np.linalg.norm(ints, axis=1, keepdims=True)
    return ints, units


class SupportEngine:
    """Support values for many polytopes sharing one constraint pattern.

    All candidate vertex bases of [A; -I] are factored once; for each bounds
    vector the vertices are linear images of b, so batches reduce to matrix
    products.  Requires the polytope family to be bounded (checked once).
    """

    def __init__(self, A: np.ndarray, dim: int):
        self.A = np.atleast_2d(np.asarray(A, dtype=float))
        self.dim = dim
        m = self.A.shape[0]
        full = np.vstack([self.A, -np.eye(dim)])
        maps = []
        for combo in itertools.combinations(range(m + dim), dim):
            M = full[list(combo)]
            if abs(np.linalg.det(M)) < 1e-10:
                continue
            inv = np.linalg.inv(M)
            # selector of b entries: nonnegativity rows contribute 0
            P = np.zeros((dim, m))
            for r, row_idx in enumerate(combo):
                if row_idx < m:
                    P[r, row_idx] = 1.0
            maps.append(inv @ P)
        self.T = np.asarray(maps)  # (nbasis, dim, m)
        self._bounded_checked = False

    def check_bounded(self, b: np.ndarray):
        status, _ = lp_max(np.ones(self.dim), self.A, b)
        if status == "unbounded":
            raise VariableMismatch("support sweep requires a bounded polytope family")
        self._bounded_checked = True

    def supports(self, B: np.ndarray, units: np.ndarray, tol: float = DEDUP_TOL):
        """B: (N, m) bounds batch; units: (K, dim). Returns (N, K) supports
        and the batch vertex tensor mask used (for sample collection)."""
        if not self._bounded_checked and len(B):
            self.check_bounded(B[0])
        N = B.shape[0]
        out = np.zeros((N, units.shape[0]))
        best_pts = np.zeros((N, units.shape[0], self.dim))
        chunk = max(1, int(4e6 // max(1, self.T.shape[0] * self.dim)))
        for s in range(0, N, chunk):
            Bc = B[s : s + chunk]
            X = np.einsum("tdm,nm->ntd", self.T, Bc)
            AX = np.einsum("rd,ntd->ntr", self.A, X)
            feas = np.all(AX <= Bc[:, None, :] + tol, axis=2)
            feas &= np.all(X >= -tol, axis=2)
            Xc = np.where(feas[:, :, None], X, 0.0)  # infeasible -> origin
            vals = np.einsum("ntd,kd->ntk", Xc, units)
            idx = np.argmax(vals, axis=1)  # (n, K)
            out[s : s + chunk] = np.take_along_axis(
                vals, idx[:, None, :], axis=1
            )[:, 0, :]
            for k in range(units.shape[0]):
                best_pts[s : s + chunk, k] = Xc[np.arange(Xc.shape[0]), idx[:, k]]
        return out, best_pts


@dataclass
class RegionEstimate:
    """Union-of-polytopes region summarized by its support function.

    Convexification over the union (time-sharing) is implicit: the support
    of the convex hull of a union is the pointwise max of the supports.
    """

    variables: tuple[str, ...]
    directions_int: np.ndarray
    directions: np.ndarray
    support: np.ndarray
    samples: np.ndarray
    grid_meta: dict = field(default_factory=dict)

    def support_csv(self) -> str:
        hdr = ",".join([f"d_{v}" for v in self.variables] + ["support"])
        lines = [hdr]
        for d, s in zip(self.directions_int, self.support):
            lines.append(",".join(str(int(x)) for x in d) + f",{s:.12g}")
        return "\n".join(lines) + "\n"

    def samples_csv(self) -> str:
        hdr = ",".join(self.variables)
        lines = [hdr]
        for p in self.samples:
            lines.append(",".join(f"{x:.12g}" for x in p))
        return "\n".join(lines) + "\n"


def sweep_union(
    builder: Callable[[object], RatePolytope],
    pmfs: Iterable[object],
    grid_meta: dict | None = None,
) -> RegionEstimate:
    """Support of the convex hull of the union of builder(pmf) polytopes.

    Per direction, the support is the max over swept polytopes; the
    maximizing extreme points are collected as samples.
    """
    ints = units = None
    support = None
    samples = None
    variables = None
    engine = None
    engine_key = None
    for pmf in pmfs:
        try:
            poly = builder(pmf)
        except Exception as e:
            e.args = (f"{e.args[0] if e.args else e} (at pmf {pmf!r})",) + e.args[1:]
            raise
        if variables is None:
            variables = poly.variables
            ints, units = direction_grid(len(variables))
            support = np.full(len(units), -np.inf)
            samples = np.zeros((len(units), len(variables)))
        elif poly.variables != variables:
            raise VariableMismatch("builder changed variables mid-sweep")
        key = poly.A.tobytes()
        if engine is None or key != engine_key:
            engine = SupportEngine(poly.A, poly.dim)
            engine_key = key
        sup, pts = engine.supports(poly.b[None, :], units)
        better = sup[0] > support
        support = np.where(better, sup[0], support)
        samples = np.where(better[:, None], pts[0], samples)
    if variables is None:
        raise VariableMismatch("sweep received no pmfs")
    meta = {"direction_grid": DIRECTION_GRID_VERSION}
    meta.update(grid_meta or {})
    # dedupe collected extreme points
    uniq = []
    for p in samples:
        if not any(np.max(np.abs(p - q)) <= DEDUP_TOL for q in uniq):
            uniq.append(p)
    return RegionEstimate(variables, ints, units, support, np.asarray(uniq), meta)


@dataclass(frozen=True)
class RegionCompareReport:
    verdict: str
    max_gap: float
    gap_a_minus_b: float
    gap_b_minus_a: float


def region_compare(a: RegionEstimate, b: RegionEstimate, tol: float) -> RegionCompareReport:
    """EQUAL / A_SUBSET / B_SUBSET / INCOMPARABLE at additive tolerance tol."""
    if a.variables != b.variables:
        raise GridMismatch("region estimates must share variables")
    if a.directions_int.shape != b.directions_int.shape or np.any(
        a.directions_int != b.directions_int
    ):
        raise GridMismatch("region estimates must share the direction grid")
    diff = a.support - b.support
    gap_ab = float(np.max(diff))
    gap_ba = float(np.max(-diff))
    max_gap = float(np.max(np.abs(diff)))
    if gap_ab <= tol and gap_ba <= tol:
        verdict = "EQUAL"
    elif gap_ab <= tol:
        verdict = "A_SUBSET"
    elif gap_ba <= tol:
        verdict = "B_SUBSET"
    else:
        verdict = "INCOMPARABLE"
    return RegionCompareReport(verdict, max_gap, gap_ab, gap_ba)
