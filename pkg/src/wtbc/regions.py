"""Polyhedral algebra over named rate variables.

Regions are intersections of linear inequalities over nonnegative rates,
optionally grouped into finite unions (min-terms and per-distribution pieces).
Fourier-Motzkin elimination is carried out in exact rational arithmetic;
containment and redundancy questions are answered by small LPs.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

LP_TOL = 1e-7
MEMBER_TOL = 1e-9
RATE_BOX = 1e6  # bound used in redundancy / containment LPs only, never in membership
COEF_PRUNE = 1e-12


class RegionError(ValueError):
    pass


@dataclass(frozen=True)
class LinearInequality:
    """sum_i coeffs[v_i] * v_i  <=  rhs   (sense '>=' is normalized away on request)."""

    coeffs: dict
    rhs: float
    sense: str = "<="

    def normalized(self) -> "LinearInequality":
        """Return an equivalent '<=' inequality with near-zero coefficients pruned."""
        sign = 1.0 if self.sense == "<=" else -1.0
        if self.sense not in ("<=", ">="):
            raise RegionError(f"bad sense {self.sense!r}")
        coeffs = {v: sign * c for v, c in self.coeffs.items() if abs(c) > COEF_PRUNE}
        return LinearInequality(coeffs, sign * self.rhs, "<=")

    def is_tautology(self) -> bool:
        ineq = self.normalized()
        return not ineq.coeffs and ineq.rhs >= -COEF_PRUNE

    def is_contradiction(self) -> bool:
        ineq = self.normalized()
        return not ineq.coeffs and ineq.rhs < -COEF_PRUNE

    def evaluate(self, point: dict) -> float:
        """LHS - RHS at a point; <= 0 means satisfied."""
        ineq = self.normalized()
        return sum(c * point.get(v, 0.0) for v, c in ineq.coeffs.items()) - ineq.rhs

    def format(self) -> str:
        ineq = self.normalized()
        if not ineq.coeffs:
            return f"0 <= {ineq.rhs:.12g}"
        parts = []
        for v, c in sorted(ineq.coeffs.items()):
            parts.append(f"{c:.12g}*{v}")
        return " + ".join(parts) + f" <= {ineq.rhs:.12g}"


@dataclass(frozen=True)
class RatePolytope:
    """Inequality system over named nonnegative rate variables.

    Every variable carries an implicit >= 0 constraint in addition to the
    explicit inequalities.
    """

    vars: tuple[str, ...]
    inequalities: tuple[LinearInequality, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        norm = []
        for ineq in self.inequalities:
            n = ineq.normalized()
            unknown = set(n.coeffs) - set(self.vars)
            if unknown:
                raise RegionError(f"inequality references undeclared vars {sorted(unknown)}")
            norm.append(n)
        object.__setattr__(self, "inequalities", tuple(norm))

    def as_arrays(self, box: float | None = None) -> tuple[np.ndarray, np.ndarray]:
        """(A, b) with A x <= b including nonnegativity (and an upper box if given)."""
        rows, rhs = [], []
        for ineq in self.inequalities:
            rows.append([ineq.coeffs.get(v, 0.0) for v in self.vars])
            rhs.append(ineq.rhs)
        for i in range(len(self.vars)):
            row = [0.0] * len(self.vars)
            row[i] = -1.0
            rows.append(row)
            rhs.append(0.0)
            if box is not None:
                row2 = [0.0] * len(self.vars)
                row2[i] = 1.0
                rows.append(row2)
                rhs.append(box)
        return np.asarray(rows, float), np.asarray(rhs, float)

    def contains(self, point, tol: float = MEMBER_TOL) -> bool:
        pt = _as_point(self.vars, point)
        if any(pt[v] < -tol for v in self.vars):
            return False
        return all(ineq.evaluate(pt) <= tol for ineq in self.inequalities)


@dataclass(frozen=True)
class UnionRegion:
    pieces: tuple[RatePolytope, ...]

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if not self.pieces:
            raise RegionError("a union region needs at least one piece")
        vs = {p.vars for p in self.pieces}
        if len(vs) != 1:
            raise RegionError(f"pieces disagree on variables: {vs}")

    @property
    def vars(self) -> tuple[str, ...]:
        return self.pieces[0].vars


def _as_point(vars: tuple[str, ...], point) -> dict:
    if isinstance(point, dict):
        return {v: float(point.get(v, 0.0)) for v in vars}
    point = list(point)
    if len(point) != len(vars):
        raise RegionError(f"point has {len(point)} coordinates, expected {len(vars)}")
    return dict(zip(vars, map(float, point)))


def membership(region: UnionRegion | RatePolytope, point, tol: float = MEMBER_TOL) -> bool:
    """True iff some piece satisfies every inequality within tol."""
    if isinstance(region, RatePolytope):
        region = UnionRegion((region,))
    return any(p.contains(point, tol) for p in region.pieces)


# ---------------------------------------------------------------------------
# Fourier-Motzkin elimination (exact rational arithmetic)
# ---------------------------------------------------------------------------

def _to_fraction_rows(p: RatePolytope, include_nonneg_for) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    nv = len(p.vars)
    rows = []
    for ineq in p.inequalities:
        coeffs = tuple(Fraction(ineq.coeffs.get(v, 0.0)) for v in p.vars)
        rows.append((coeffs, Fraction(ineq.rhs)))
    for v in include_nonneg_for:
        i = p.vars.index(v)
        coeffs = tuple(Fraction(-1) if k == i else Fraction(0) for k in range(nv))
        rows.append((coeffs, Fraction(0)))
    return rows


def _normalize_row(coeffs, rhs):
    nz = [abs(c) for c in coeffs if c != 0]
    if not nz:
        return coeffs, rhs
    scale = max(nz)
    return tuple(c / scale for c in coeffs), rhs / scale


def fme_eliminate(p: RatePolytope, vars_to_remove) -> RatePolytope:
    """Exact projection of p onto the variables not listed in vars_to_remove.

    Nonnegativity of the eliminated variables is added as explicit constraints
    before elimination, so the projection is of the nonnegative-orthant
    restriction of the system.
    """
    if isinstance(vars_to_remove, str):
        vars_to_remove = [vars_to_remove]
    vars_to_remove = list(vars_to_remove)
    missing = set(vars_to_remove) - set(p.vars)
    if missing:
        raise RegionError(f"cannot eliminate unknown vars {sorted(missing)}")
    rows = _to_fraction_rows(p, include_nonneg_for=vars_to_remove)
    order = [p.vars.index(v) for v in vars_to_remove]
    active = list(range(len(p.vars)))
    for idx in order:
        col = active.index(idx)
        zero, pos, neg = [], [], []
        for coeffs, rhs in rows:
            c = coeffs[col]
            if c == 0:
                zero.append((coeffs, rhs))
            elif c > 0:
                pos.append((coeffs, rhs))
            else:
                neg.append((coeffs, rhs))
        new_rows = [(_drop(coeffs, col), rhs) for coeffs, rhs in zero]
        for (cp, rp), (cn, rn) in itertools.product(pos, neg):
            a, b = cp[col], -cn[col]
            coeffs = tuple(b * x + a * y for x, y in zip(cp, cn))
            rhs = b * rp + a * rn
            new_rows.append((_drop(coeffs, col), rhs))
        active.pop(col)
        rows = _dedup(new_rows)
    keep = [p.vars[i] for i in active]
    ineqs = []
    for coeffs, rhs in rows:
        cdict = {v: float(c) for v, c in zip(keep, coeffs) if c != 0}
        if not cdict and float(rhs) >= 0:
            continue  # tautology
        ineqs.append(LinearInequality(cdict, float(rhs)))
    return RatePolytope(tuple(keep), tuple(ineqs))


def _drop(coeffs, col):
    return coeffs[:col] + coeffs[col + 1:]


def _dedup(rows):
    seen = set()
    out = []
    for coeffs, rhs in rows:
        if all(c == 0 for c in coeffs) and rhs >= 0:
            continue
        key = _normalize_row(coeffs, rhs)
        if key in seen:
            continue
        seen.add(key)
        out.append(key)
    return out


# ---------------------------------------------------------------------------
# LP-backed comparisons
# ---------------------------------------------------------------------------

def _maximize(p: RatePolytope, objective: dict, box: float = RATE_BOX):
    """Maximize sum objective[v]*v over p intersected with [0, box]^d.

    Returns (value, point dict) or (None, None) when p is empty.
    """
    a, b = p.as_arrays(box=box)
    c = -np.asarray([objective.get(v, 0.0) for v in p.vars])
    res = linprog(c, A_ub=a, b_ub=b, bounds=[(None, None)] * len(p.vars), method="highs")
    if res.status == 2:  # infeasible
        return None, None
    if not res.success:
        raise RuntimeError(f"LP failed: {res.message}")
    return -float(res.fun), dict(zip(p.vars, map(float, res.x)))


def is_empty(p: RatePolytope) -> bool:
    val, _ = _maximize(p, {})
    return val is None


def remove_redundant(p: RatePolytope) -> RatePolytope:
    """Drop inequalities whose removal does not change the point set.

    Decided by one LP per inequality against the remaining system, with all
    rates boxed into [0, 1e6] during the checks only.
    """
    kept = list(p.inequalities)
    # drop exact duplicates first
    uniq = []
    seen = set()
    for ineq in kept:
        key = _normalize_row(tuple(Fraction(ineq.coeffs.get(v, 0.0)) for v in p.vars),
                             Fraction(ineq.rhs))
        if key in seen:
            continue
        seen.add(key)
        uniq.append(ineq)
    kept = uniq
    i = 0
    while i < len(kept):
        candidate = kept[i]
        rest = RatePolytope(p.vars, tuple(kept[:i] + kept[i + 1:]))
        val, _ = _maximize(rest, candidate.coeffs)
        if val is not None and val <= candidate.rhs + LP_TOL:
            kept.pop(i)
        else:
            i += 1
    return RatePolytope(p.vars, tuple(kept))


def polytope_equal(a: RatePolytope, b: RatePolytope, trials: int = 0, seed: int = 0):
    """Mutual containment via LP; returns (equal, witness point or None)."""
    if tuple(a.vars) != tuple(b.vars):
        raise RegionError(f"variable mismatch: {a.vars} vs {b.vars}")
    for outer, inner in ((a, b), (b, a)):
        ok, witness = _polytope_subset(inner, outer)
        if not ok:
            return False, witness
    return True, None


def _polytope_subset(inner: RatePolytope, outer: RatePolytope):
    inner_empty = is_empty(inner)
    if inner_empty:
        return True, None
    for ineq in outer.inequalities:
        val, point = _maximize(inner, ineq.coeffs)
        if val is not None and val > ineq.rhs + LP_TOL:
            return False, point
    return True, None


def region_subset(a: UnionRegion | RatePolytope, b: UnionRegion | RatePolytope,
                  samples: int = 200, seed: int = 0):
    """Decide a included in b; exact per-piece LPs when b is a single polytope,
    seeded Monte-Carlo sampling of a otherwise.  Returns (bool, witness)."""
    if isinstance(a, RatePolytope):
        a = UnionRegion((a,))
    if isinstance(b, RatePolytope):
        b = UnionRegion((b,))
    if tuple(a.vars) != tuple(b.vars):
        raise RegionError(f"variable mismatch: {a.vars} vs {b.vars}")
    if len(b.pieces) == 1:
        for piece in a.pieces:
            ok, witness = _polytope_subset(piece, b.pieces[0])
            if not ok:
                return False, witness
        return True, None
    rng = np.random.default_rng([seed, 0])
    for piece in a.pieces:
        pts = _sample_points(piece, samples, rng)
        if len(piece.vars) <= 4:
            pts.extend(enumerate_vertices(piece))
        for pt in pts:
            if not membership(b, pt, tol=LP_TOL):
                return False, pt
    return True, None


def _sample_points(p: RatePolytope, samples: int, rng: np.random.Generator):
    """Rejection-sample points of p inside its bounding box."""
    lo = np.zeros(len(p.vars))
    hi = np.empty(len(p.vars))
    for i, v in enumerate(p.vars):
        val, _ = _maximize(p, {v: 1.0})
        if val is None:
            return []
        hi[i] = max(val, 0.0)
    pts = []
    attempts = 0
    while len(pts) < samples and attempts < 50 * samples:
        x = rng.uniform(lo, np.maximum(hi, 1e-12))
        attempts += 1
        pt = dict(zip(p.vars, x))
        if p.contains(pt, tol=LP_TOL):
            pts.append(pt)
    return pts


def enumerate_vertices(p: RatePolytope, box: float = RATE_BOX) -> list[dict]:
    """Vertices of p intersected with [0, box]^d, for d <= 4."""
    d = len(p.vars)
    if d > 4:
        raise RegionError(f"vertex enumeration supported up to dimension 4, got {d}")
    a, b = p.as_arrays(box=box)
    verts = []
    seen = set()
    for rows in itertools.combinations(range(len(a)), d):
        sub = a[list(rows)]
        if abs(np.linalg.det(sub)) < 1e-10:
            continue
        x = np.linalg.solve(sub, b[list(rows)])
        if np.all(a @ x <= b + LP_TOL):
            key = tuple(np.round(x, 9))
            if key not in seen:
                seen.add(key)
                verts.append(dict(zip(p.vars, map(float, x))))
    return verts


def convex_hull_union(r: UnionRegion | RatePolytope, box: float = RATE_BOX) -> RatePolytope:
    """Inequality description of the convex hull of a union of polytopes (dim <= 4)."""
    if isinstance(r, RatePolytope):
        r = UnionRegion((r,))
    vars = r.vars
    d = len(vars)
    if d > 4:
        raise RegionError(f"convex hull limited to dimension <= 4, got {d}")
    if len(r.pieces) == 1:
        return remove_redundant(r.pieces[0])
    pts = []
    for piece in r.pieces:
        for v in enumerate_vertices(piece, box=box):
            pts.append([v[name] for name in vars])
    if not pts:
        raise RegionError("all pieces are empty; no hull")
    pts = np.unique(np.round(np.asarray(pts, float), 12), axis=0)
    ineqs = _hull_inequalities(pts, vars)
    return remove_redundant(RatePolytope(vars, tuple(ineqs)))


def _hull_inequalities(pts: np.ndarray, vars) -> list[LinearInequality]:
    d = pts.shape[1]
    center = pts.mean(axis=0)
    shifted = pts - center
    # affine rank via SVD; hull in the spanned subspace, equalities across it
    u, s, vt = np.linalg.svd(shifted, full_matrices=True)
    scale = max(float(s[0]) if len(s) else 0.0, 1.0)
    rank = int(np.sum(s > 1e-9 * scale))
    ineqs: list[LinearInequality] = []
    for k in range(rank, d):
        normal = vt[k]
        rhs = float(normal @ center)
        cdict = {v: float(c) for v, c in zip(vars, normal)}
        ineqs.append(LinearInequality(cdict, rhs))
        ineqs.append(LinearInequality({v: -c for v, c in cdict.items()}, -rhs))
    if rank == 0:
        return ineqs
    basis = vt[:rank]
    coords = shifted @ basis.T
    if rank == 1:
        lo, hi = float(coords.min()), float(coords.max())
        cdict = {v: float(c) for v, c in zip(vars, basis[0])}
        off = float(basis[0] @ center)
        ineqs.append(LinearInequality(cdict, hi + off))
        ineqs.append(LinearInequality({v: -c for v, c in cdict.items()}, -(lo + off)))
        return ineqs
    hull = ConvexHull(coords)
    for eq in hull.equations:  # a . y + b <= 0 in reduced coords
        normal_red, offset = eq[:-1], eq[-1]
        normal = normal_red @ basis
        rhs = float(-offset + normal @ center)
        cdict = {v: float(c) for v, c in zip(vars, normal)}
        ineqs.append(LinearInequality(cdict, rhs))
    return ineqs


# ---------------------------------------------------------------------------
# Region templates
# ---------------------------------------------------------------------------

def _le(coeffs, *rhs_terms, const=0.0):
    """Template row: coeffs . R <= sum(sign * symbol) + const."""
    return (coeffs, tuple(rhs_terms), const)


# Each template: (vars, [case 0 rows, case 1 rows, ...]) where each case is a
# list of rows produced by _le; rhs_terms are (sign, symbol-name) pairs.
def _joint_achievable_raw():
    vars = ("Rc", "R0", "R1", "R2", "Rr", "Rr1", "Rr2", "Rt1", "Rt2")
    rows = [
        _le({"Rc": 1}, (1, "I(U;Z)")),
        # Marton bin rates must cover the pairwise dependence
        _le({"Rt1": -1, "Rt2": -1}, (-1, "I(V1;V2|V0)")),
        _le({"R0": 1, "R1": 1, "Rr": 1, "Rr1": 1, "Rt1": 1}, (1, "I(V0V1;Y1|U)")),
        _le({"R0": 1, "R2": 1, "Rr": 1, "Rr2": 1, "Rt2": 1}, (1, "I(V0V2;Y2|U)")),
        _le({"Rc": 1, "R0": 1, "R1": 1, "Rr": 1, "Rr1": 1, "Rt1": 1}, (1, "I(V0V1;Y1)")),
        _le({"Rc": 1, "R0": 1, "R2": 1, "Rr": 1, "Rr2": 1, "Rt2": 1}, (1, "I(V0V2;Y2)")),
        # randomization lower bounds that exhaust the eavesdropper
        _le({"Rr": -1}, (-1, "I(V0;Z|U)")),
        _le({"Rr": -1, "Rr1": -1, "Rt1": -1}, (-1, "I(V0V1;Z|U)")),
        _le({"Rr": -1, "Rr2": -1, "Rt2": -1}, (-1, "I(V0V2;Z|U)")),
        _le({"Rr": -1, "Rr1": -1, "Rr2": -1}, (-1, "I(V0V1V2;Z|U)")),
    ]
    return vars, [rows]


def _joint_achievable_region():
    vars = ("Rc", "R0", "R1", "R2")
    rows = [
        _le({"Rc": 1}, (1, "I(U;Z)")),
        _le({"R0": 1, "R1": 1}, (1, "I(V0V1;Y1|U)"), (-1, "I(V0V1;Z|U)")),
        _le({"R0": 1, "R2": 1}, (1, "I(V0V2;Y2|U)"), (-1, "I(V0V2;Z|U)")),
        _le({"Rc": 1, "R0": 1, "R1": 1}, (1, "I(V0V1;Y1)"), (-1, "I(V0V1;Z|U)")),
        _le({"Rc": 1, "R0": 1, "R2": 1}, (1, "I(V0V2;Y2)"), (-1, "I(V0V2;Z|U)")),
        _le({"R0": 2, "R1": 1, "R2": 1},
            (1, "I(V0V1;Y1|U)"), (1, "I(V0V2;Y2|U)"), (-1, "I(V1;V2|V0)"),
            (-1, "I(V0V1V2;Z|U)"), (-1, "I(V0;Z|U)")),
    ]
    return vars, [rows]


def _individual_achievable_raw():
    vars = ("Rc", "R0", "R1", "R2", "Rx", "R11", "R22",
            "Rr", "Rr1", "Rr2", "Rt1", "Rt2")
    rows = [
        _le({"Rc": 1}, (1, "I(U;Z)")),
        _le({"Rc": 1}, (1, "I(U;Y1)")),
        _le({"Rc": 1}, (1, "I(U;Y2)")),
        _le({"Rx": 1}, (1, "I(Vx;Y1|U)")),
        _le({"Rx": 1}, (1, "I(Vx;Y2|U)")),
        _le({"Rt1": -1, "Rt2": -1}, (-1, "I(V1;V2|V0)")),
        _le({"R0": 1, "R11": 1, "Rr": 1, "Rr1": 1, "Rt1": 1}, (1, "I(V0V1;Y1|Vx)")),
        _le({"R0": 1, "R22": 1, "Rr": 1, "Rr2": 1, "Rt2": 1}, (1, "I(V0V2;Y2|Vx)")),
        _le({"Rr": -1}, (-1, "I(V0;Z|Vx)")),
        _le({"Rr": -1, "Rr1": -1, "Rt1": -1}, (-1, "I(V0V1;Z|Vx)")),
        _le({"Rr": -1, "Rr2": -1, "Rt2": -1}, (-1, "I(V0V2;Z|Vx)")),
        _le({"Rr": -1, "Rr1": -1, "Rr2": -1}, (-1, "I(V0V1V2;Z|Vx)")),
        # message split coupling: R1 = R11 + Rx, R2 = R22 + Rx
        _le({"R1": 1, "R11": -1, "Rx": -1}),
        _le({"R1": -1, "R11": 1, "Rx": 1}),
        _le({"R2": 1, "R22": -1, "Rx": -1}),
        _le({"R2": -1, "R22": 1, "Rx": 1}),
    ]
    return vars, [rows]


def _individual_achievable_region():
    # lifted: keeps the one-time-pad rate Rx as an explicit coordinate
    vars = ("Rc", "R0", "R1", "R2", "Rx")
    rows = [
        _le({"Rc": 1}, (1, "I(U;Z)")),
        _le({"Rc": 1}, (1, "I(U;Y1)")),
        _le({"Rc": 1}, (1, "I(U;Y2)")),
        _le({"Rx": 1}, (1, "I(Vx;Y1|U)")),
        _le({"Rx": 1}, (1, "I(Vx;Y2|U)")),
        _le({"Rx": 1, "R1": -1}),
        _le({"Rx": 1, "R2": -1}),
        _le({"R0": 1, "R1": 1, "Rx": -1}, (1, "I(V0V1;Y1|Vx)"), (-1, "I(V0V1;Z|Vx)")),
        _le({"R0": 1, "R2": 1, "Rx": -1}, (1, "I(V0V2;Y2|Vx)"), (-1, "I(V0V2;Z|Vx)")),
        _le({"R0": 2, "R1": 1, "R2": 1, "Rx": -2},
            (1, "I(V0V1;Y1|Vx)"), (1, "I(V0V2;Y2|Vx)"), (-1, "I(V1;V2|V0)"),
            (-1, "I(V0V1V2;Z|Vx)"), (-1, "I(V0;Z|Vx)")),
    ]
    return vars, [rows]


def _indirect_decoding_capacity():
    vars = ("Rc", "R0", "R1", "R2")
    rows = [
        _le({"Rc": 1}, (1, "I(U;Z)")),
        _le({"R0": 1, "R1": 1}, (1, "I(X;Y1|U)"), (-1, "I(X;Z|U)")),
        _le({"R0": 1, "R2": 1}, (1, "I(V;Y2|U)"), (-1, "I(V;Z|U)")),
        _le({"Rc": 1, "R0": 1, "R1": 1}, (1, "I(X;Y1)"), (-1, "I(X;Z|U)")),
        _le({"Rc": 1, "R0": 1, "R2": 1}, (1, "I(V;Y2)"), (-1, "I(V;Z|U)")),
    ]
    return vars, [rows]


def _min_rx_cases(base_rows_fn):
    """Case-split R_x = min(R1, R2, I(X;Z|U)) into a union of three polytopes."""
    cases = []
    for which in ("R1", "R2", "IZ"):
        rows = base_rows_fn(which)
        if which == "R1":
            rows.append(_le({"R1": 1, "R2": -1}))
            rows.append(_le({"R1": 1}, (1, "I(X;Z|U)")))
        elif which == "R2":
            rows.append(_le({"R2": 1, "R1": -1}))
            rows.append(_le({"R2": 1}, (1, "I(X;Z|U)")))
        else:
            rows.append(_le({"R1": -1}, (-1, "I(X;Z|U)")))
            rows.append(_le({"R2": -1}, (-1, "I(X;Z|U)")))
        cases.append(rows)
    return cases


def _individual_capacity():
    vars = ("Rc", "R0", "R1", "R2")

    def base(which):
        def pad(coeffs, *terms):
            # R_x appears with +1 on the right-hand side: fold it into the row
            coeffs = dict(coeffs)
            terms = list(terms)
            if which == "R1":
                coeffs["R1"] = coeffs.get("R1", 0) - 1
            elif which == "R2":
                coeffs["R2"] = coeffs.get("R2", 0) - 1
            else:
                terms.append((1, "I(X;Z|U)"))
            return _le(coeffs, *terms)

        return [
            _le({"Rc": 1}, (1, "I(U;Z)")),
            pad({"R0": 1, "R1": 1}, (1, "I(X;Y1|U)"), (-1, "I(X;Z|U)")),
            pad({"R0": 1, "R2": 1}, (1, "I(X;Y2|U)"), (-1, "I(X;Z|U)")),
            pad({"Rc": 1, "R0": 1, "R1": 1}, (1, "I(X;Y1)"), (-1, "I(X;Z|U)")),
            pad({"Rc": 1, "R0": 1, "R2": 1}, (1, "I(X;Y2)"), (-1, "I(X;Z|U)")),
        ]

    return vars, _min_rx_cases(base)


def _individual_capacity_less_noisy():
    vars = ("Rc", "R0", "R1", "R2")

    def base(which):
        def pad(coeffs, *terms):
            coeffs = dict(coeffs)
            terms = list(terms)
            if which == "R1":
                coeffs["R1"] = coeffs.get("R1", 0) - 1
            elif which == "R2":
                coeffs["R2"] = coeffs.get("R2", 0) - 1
            else:
                terms.append((1, "I(X;Z|U)"))
            return _le(coeffs, *terms)

        return [
            _le({"Rc": 1}, (1, "I(U;Z)")),
            pad({"R0": 1, "R1": 1}, (1, "I(X;Y1|U)"), (-1, "I(X;Z|U)")),
            pad({"R0": 1, "R2": 1}, (1, "I(X;Y2|U)"), (-1, "I(X;Z|U)")),
        ]

    return vars, _min_rx_cases(base)


_TEMPLATES = {
    "thm1": lambda: (("Rc", "R0", "R1", "R2"), [[
        _le({"Rc": 1}, (1, "I(U;Z)")),
        _le({"R0": 1, "R1": 1}, (1, "I(X;Y1|U)")),
        _le({"R0": 1, "R2": 1}, (1, "I(X;Y2|U)")),
        _le({"Rc": 1, "R0": 1, "R1": 1}, (1, "I(X;Y1)")),
        _le({"Rc": 1, "R0": 1, "R2": 1}, (1, "I(X;Y2)")),
    ]]),
    "thm2_individual": lambda: (("R1", "R2"), [[
        _le({"R1": 1, "R2": -1}),
        _le({"R2": 1, "R1": -1}),
        _le({"R1": 1}, (1, "I(X;Y1)")),
        _le({"R1": 1}, (1, "I(X;Y2)")),
    ]]),
    "thm3_joint": lambda: (("R1", "R2"), [[
        _le({"R1": 1}, (1, "I(X;Y1)"), (-1, "I(X;Z)")),
        _le({"R2": 1}, (1, "I(X;Y2)"), (-1, "I(X;Z)")),
    ]]),
    "thm3_individual": lambda: (("R1", "R2"), [[
        _le({"R1": 1, "R2": -1}, (1, "I(X;Y1)"), (-1, "I(X;Z)")),
        _le({"R1": 1}, (1, "I(X;Y1)")),
        _le({"R2": 1, "R1": -1}, (1, "I(X;Y2)"), (-1, "I(X;Z)")),
        _le({"R2": 1}, (1, "I(X;Y2)")),
    ]]),
    "thm4": lambda: (("Rc", "R0"), [[
        _le({"Rc": 1}, (1, "I(U;Y2)")),
        _le({"Rc": 1}, (1, "I(U;Z)")),
        _le({"R0": 1}, (1, "I(V;Y2|U)"), (-1, "I(V;Z|U)")),
    ]]),
    "prop1_raw": _joint_achievable_raw,
    "prop1_region": _joint_achievable_region,
    "thm5": _indirect_decoding_capacity,
    "cor1": lambda: (("Rc", "R0", "R1", "R2"), [[
        _le({"Rc": 1}, (1, "I(U;Z)")),
        _le({"R0": 1, "R1": 1}, (1, "I(X;Y1|U)"), (-1, "I(X;Z|U)")),
        _le({"R0": 1, "R2": 1}, (1, "I(X;Y2|U)"), (-1, "I(X;Z|U)")),
    ]]),
    "cor2": lambda: (("R1", "R2"), [[
        _le({"R1": 1}, (1, "I(X;Y1)"), (-1, "I(X;Z)")),
        _le({"R2": 1}, (1, "I(X;Y2)"), (-1, "I(X;Z)")),
    ]]),
    "prop2_raw": _individual_achievable_raw,
    "prop2_region": _individual_achievable_region,
    "thm6": _individual_capacity,
    "cor3": _individual_capacity_less_noisy,
}

# variables eliminated when reducing the raw systems to the printed regions
RAW_ELIMINATIONS = {
    "prop1_raw": ("Rr", "Rr1", "Rr2", "Rt1", "Rt2"),
    "prop2_raw": ("Rr", "Rr1", "Rr2", "Rt1", "Rt2", "R11", "R22"),
}


def template_names() -> list[str]:
    return sorted(_TEMPLATES)


def template_symbols(name: str) -> set[str]:
    if name not in _TEMPLATES:
        raise RegionError(f"unknown template {name!r}; known: {template_names()}")
    _, cases = _TEMPLATES[name]()
    syms = set()
    for rows in cases:
        for _, terms, _ in rows:
            syms.update(sym for _, sym in terms)
    return syms


def instantiate_template(name: str, values: dict, extra: dict | None = None) -> UnionRegion:
    """Build the named region with mutual-information symbols replaced by values.

    Min-terms are expanded into a union of case polytopes whose union is
    exactly the defined set.  `extra` adds per-variable upper caps.
    """
    if name not in _TEMPLATES:
        raise RegionError(f"unknown template {name!r}; known: {template_names()}")
    need = template_symbols(name)
    missing = sorted(need - set(values))
    if missing:
        raise RegionError(f"template {name!r} is missing symbols: {missing}")
    bad = {s: values[s] for s in need if values[s] < 0}
    if bad:
        raise RegionError(f"info values must be nonnegative, got {bad}")
    vars, cases = _TEMPLATES[name]()
    pieces = []
    for rows in cases:
        ineqs = []
        for coeffs, terms, const in rows:
            rhs = const + sum(sign * values[sym] for sign, sym in terms)
            ineqs.append(LinearInequality(dict(coeffs), rhs))
        if extra:
            for v, cap in extra.items():
                if v not in vars:
                    raise RegionError(f"extra cap on unknown var {v!r}")
                ineqs.append(LinearInequality({v: 1.0}, float(cap)))
        pieces.append(RatePolytope(vars, tuple(ineqs)))
    return UnionRegion(tuple(pieces))


# ---------------------------------------------------------------------------
# Region file I/O
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(r"^\s*([+-]?\d*\.?\d+(?:[eE][+-]?\d+)?)\s*\*\s*([A-Za-z]\w*)\s*$")


def format_region(p: RatePolytope) -> str:
    lines = ["vars: " + " ".join(p.vars)]
    for ineq in p.inequalities:
        lines.append(ineq.format())
    return "\n".join(lines) + "\n"


def parse_region(text: str) -> RatePolytope:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("vars:"):
        raise RegionError("region file must start with a 'vars:' line")
    vars = tuple(lines[0][len("vars:"):].split())
    ineqs = []
    for ln in lines[1:]:
        if "<=" in ln:
            lhs, rhs = ln.split("<=")
            sense = "<="
        elif ">=" in ln:
            lhs, rhs = ln.split(">=")
            sense = ">="
        else:
            raise RegionError(f"no <= or >= in inequality line: {ln!r}")
        coeffs = {}
        for term in lhs.replace("-", "+-").split("+"):
            if not term.strip():
                continue
            m = _TERM_RE.match(term)
            if not m:
                raise RegionError(f"cannot parse term {term!r} in line {ln!r}")
            coeffs[m.group(2)] = coeffs.get(m.group(2), 0.0) + float(m.group(1))
        ineqs.append(LinearInequality(coeffs, float(rhs), sense))
    return RatePolytope(vars, tuple(ineqs))
