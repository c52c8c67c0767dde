"""Grid and restart search over auxiliary-variable factorizations.

Templates quantify over joint laws of auxiliary chains such as U - X,
U - V - X and U - V0 - (V1,V2) - X.  This module enumerates those laws on
simplex grids (plus random restarts), evaluates the mutual-information
symbols each template needs, and maximizes weighted rate sums over the
instantiated regions to trace inner approximations of the boundaries.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ordering import _simplex_grid
from .probability import (Alphabet, BroadcastChannel, CapacityError,
                          JointDistribution, ValidationError, compose,
                          conditional_mutual_information, mutual_information)
from .regions import (RegionError, UnionRegion, _maximize,
                      instantiate_template, template_symbols)

DEFAULT_BUDGET = 10 ** 6
VALUE_TIE_TOL = 1e-12

# auxiliary chain used by each template, in generation order; each stage is
# (new labels, parent labels) and the trailing X stage is implicit
_CHAINS = {
    "thm1": ("U",),
    "cor1": ("U",),
    "thm6": ("U",),
    "cor3": ("U",),
    "thm4": ("U", "V"),
    "thm5": ("U", "V"),
    "thm2_individual": (),
    "thm3_joint": (),
    "thm3_individual": (),
    "cor2": (),
    "prop1_raw": ("U", "V0", "V1", "V2"),
    "prop1_region": ("U", "V0", "V1", "V2"),
    "prop2_raw": ("U", "Vx", "V0", "V1", "V2"),
    "prop2_region": ("U", "Vx", "V0", "V1", "V2"),
}


def chain_labels(template: str) -> tuple[str, ...]:
    if template not in _CHAINS:
        raise RegionError(f"no auxiliary chain known for template {template!r}")
    return _CHAINS[template]


def _stages(labels: tuple[str, ...]):
    """Factorization stages (new_labels, parent_labels) ending in X.

    V1 and V2 are generated jointly given V0 so that their conditional
    dependence (the Marton term) is searchable.
    """
    stages = []
    prev: tuple[str, ...] = ()
    pending = list(labels)
    while pending:
        lbl = pending.pop(0)
        if lbl == "V1" and pending[:1] == ["V2"]:
            pending.pop(0)
            stages.append((("V1", "V2"), prev))
            prev = ("V1", "V2")
        else:
            stages.append(((lbl,), prev))
            prev = (lbl,)
    stages.append((("X",), prev))
    return stages


def cardinality_cap(label: str, x_size: int, bound_rule: str = "default") -> int:
    if label == "U":
        return x_size + 2 if bound_rule == "thm1" else x_size + 3
    return x_size * x_size + 4 * x_size + 3


@dataclass(frozen=True)
class ChainSpec:
    """Alphabet sizes for the auxiliaries of a template's chain, in chain order."""

    labels: tuple[str, ...]
    layers: tuple[int, ...]
    bound_rule: str = "default"

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "layers", tuple(int(s) for s in self.layers))
        if len(self.labels) != len(self.layers):
            raise ValidationError(
                f"{len(self.labels)} chain labels but {len(self.layers)} sizes")
        if any(s < 1 for s in self.layers):
            raise ValidationError(f"auxiliary sizes must be >= 1, got {self.layers}")

    def validate_caps(self, x_size: int) -> None:
        for lbl, size in zip(self.labels, self.layers):
            cap = cardinality_cap(lbl, x_size, self.bound_rule)
            if size > cap:
                raise ValidationError(
                    f"|{lbl}| = {size} exceeds its cardinality cap {cap} for |X| = {x_size}")

    @staticmethod
    def for_template(template: str, layers, bound_rule: str = "default") -> "ChainSpec":
        return ChainSpec(chain_labels(template), tuple(layers), bound_rule)


@dataclass(frozen=True)
class BoundaryPoint:
    rates: dict
    weights: dict
    distribution: JointDistribution
    template: str
    value: float
    region: UnionRegion = field(repr=False, default=None)


# ---------------------------------------------------------------------------
# Factorization enumeration
# ---------------------------------------------------------------------------

def _build_joint(stages, sizes, conditionals) -> JointDistribution:
    """Assemble the chain joint from per-stage conditional arrays.

    conditionals[i] has shape (prod(parent sizes), prod(new sizes)); rows on
    the simplex.
    """
    all_labels = []
    for new, _ in stages:
        all_labels.extend(new)
    letters = {lbl: chr(97 + i) for i, lbl in enumerate(all_labels)}
    joint = np.array(1.0)
    cur: list[str] = []
    for (new, parents), cond in zip(stages, conditionals):
        pshape = tuple(sizes[l] for l in parents)
        nshape = tuple(sizes[l] for l in new)
        cond_nd = np.asarray(cond, float).reshape(pshape + nshape)
        sub_j = "".join(letters[l] for l in cur)
        sub_c = "".join(letters[l] for l in parents) + "".join(letters[l] for l in new)
        out = sub_j + "".join(letters[l] for l in new)
        joint = np.einsum(f"{sub_j},{sub_c}->{out}", joint, cond_nd)
        cur.extend(new)
    axes = tuple(Alphabet(sizes[l], l) for l in cur)
    return JointDistribution(axes, joint)


def count_factorizations(spec: ChainSpec, x_size: int, grid_step: float) -> int:
    """Grid size of the factorization stream (random restarts not included)."""
    steps = _steps_from(grid_step)
    sizes = dict(zip(spec.labels, spec.layers))
    sizes["X"] = x_size
    total = 1
    for new, parents in _stages(spec.labels):
        rows = int(np.prod([sizes[l] for l in parents])) if parents else 1
        k = int(np.prod([sizes[l] for l in new]))
        per_row = math.comb(steps + k - 1, k - 1)
        total *= per_row ** rows
    return total


def _steps_from(grid_step: float) -> int:
    steps = int(round(1.0 / float(grid_step)))
    if steps < 1 or abs(1.0 / steps - float(grid_step)) > 1e-9:
        raise ValidationError(f"grid_step must be 1/k for integer k, got {grid_step}")
    return steps


def enumerate_factorizations(spec: ChainSpec, x_size: int, grid_step: float,
                             restarts: int = 0, seed: int = 0,
                             budget: int = DEFAULT_BUDGET):
    """Yield chain joints Q(aux..., X) from a simplex grid plus random restarts."""
    spec.validate_caps(x_size)
    steps = _steps_from(grid_step)
    total = count_factorizations(spec, x_size, grid_step) + restarts
    if total > budget:
        raise CapacityError(
            f"factorization stream has about {total} members, over the budget {budget}; "
            f"coarsen the grid or shrink the chain")
    sizes = dict(zip(spec.labels, spec.layers))
    sizes["X"] = x_size
    stages = _stages(spec.labels)
    row_specs = []  # (stage index, number of rows, simplex dimension)
    for new, parents in stages:
        rows = int(np.prod([sizes[l] for l in parents])) if parents else 1
        k = int(np.prod([sizes[l] for l in new]))
        row_specs.append((rows, k, _simplex_grid(k, steps)))
    all_rows = []
    for rows, k, grid in row_specs:
        all_rows.extend([grid] * rows)
    for combo in itertools.product(*all_rows):
        conditionals = []
        pos = 0
        for rows, k, _ in row_specs:
            conditionals.append(np.asarray(combo[pos:pos + rows], float))
            pos += rows
        yield _build_joint(stages, sizes, conditionals)
    rng = np.random.default_rng([seed, 0])
    for _ in range(restarts):
        conditionals = []
        for rows, k, _ in row_specs:
            conditionals.append(rng.dirichlet(np.ones(k), size=rows))
        yield _build_joint(stages, sizes, conditionals)


# ---------------------------------------------------------------------------
# Mutual-information symbol evaluation
# ---------------------------------------------------------------------------

def _tokenize_group(group: str, labels) -> list[str]:
    """Split e.g. 'V0V1' into axis labels, longest label first."""
    known = sorted(labels, key=len, reverse=True)
    out = []
    rest = group.strip()
    while rest:
        for lbl in known:
            if rest.startswith(lbl):
                out.append(lbl)
                rest = rest[len(lbl):]
                break
        else:
            raise ValidationError(f"cannot parse variable group {group!r} with axes {labels}")
    return out


def evaluate_symbol(joint: JointDistribution, symbol: str) -> float:
    """Value of a symbol such as 'I(V0V1;Y1|U)' on the given joint law."""
    s = symbol.strip()
    if not (s.startswith("I(") and s.endswith(")")):
        raise ValidationError(f"bad information symbol {symbol!r}")
    body = s[2:-1]
    cond = []
    if "|" in body:
        body, cpart = body.split("|", 1)
        cond = _tokenize_group(cpart, joint.labels)
    a_part, b_part = body.split(";")
    a = _tokenize_group(a_part, joint.labels)
    b = _tokenize_group(b_part, joint.labels)
    if cond:
        return conditional_mutual_information(joint, a, b, cond)
    return mutual_information(joint, a, b)


def evaluate_symbols(joint: JointDistribution, symbols) -> dict:
    return {s: evaluate_symbol(joint, s) for s in symbols}


# ---------------------------------------------------------------------------
# Boundary search
# ---------------------------------------------------------------------------

def _weights_dict(weights, vars) -> dict:
    if isinstance(weights, dict):
        unknown = set(weights) - set(vars)
        if unknown:
            raise RegionError(f"weights name unknown rates {sorted(unknown)}")
        return {v: float(weights.get(v, 0.0)) for v in vars}
    weights = list(weights)
    if len(weights) != len(vars):
        raise RegionError(f"{len(weights)} weights for {len(vars)} rate variables {vars}")
    return dict(zip(vars, map(float, weights)))


def _encoding(joint: JointDistribution) -> tuple:
    return tuple(np.round(joint.probs.ravel(), 12).tolist())


def _score_one(ch, template, wd, joint):
    full = compose(joint, ch)
    vals = evaluate_symbols(full, template_symbols(template))
    region = instantiate_template(template, vals)
    best_val, best_pt = None, None
    for piece in region.pieces:
        val, pt = _maximize(piece, wd)
        if val is not None and (best_val is None or val > best_val):
            best_val, best_pt = val, pt
    return best_val, best_pt, region


def boundary_point(ch: BroadcastChannel, template: str, weights, spec: ChainSpec,
                   grid_step: float = 1 / 8, restarts: int = 0,
                   budget: int = DEFAULT_BUDGET, seed: int = 0,
                   threads: int = 1) -> BoundaryPoint:
    """Maximize weightsᵀ·R over the template region, searching the chain grid.

    Ties between factorizations are broken by the lexicographically smallest
    joint-probability encoding, so the result is deterministic for a given
    seed and grid.
    """
    if tuple(spec.labels) != chain_labels(template):
        raise RegionError(
            f"spec chain {spec.labels} does not match template {template!r} "
            f"chain {chain_labels(template)}")
    vars, _ = _template_vars(template)
    wd = _weights_dict(weights, vars)
    joints = list(enumerate_factorizations(spec, ch.input.size, grid_step,
                                           restarts=restarts, seed=seed, budget=budget))

    def score(j):
        val, pt, region = _score_one(ch, template, wd, j)
        return (val, pt, region, j)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(score, joints))
    else:
        results = [score(j) for j in joints]
    best = None
    for val, pt, region, j in results:
        if val is None:
            continue
        if best is None or val > best[0] + VALUE_TIE_TOL or (
                abs(val - best[0]) <= VALUE_TIE_TOL and _encoding(j) < _encoding(best[3])):
            best = (val, pt, region, j)
    if best is None:
        raise CapacityError("every searched factorization gave an empty region")
    val, pt, region, j = best
    return BoundaryPoint(rates=pt, weights=wd, distribution=j,
                         template=template, value=val, region=region)


def _template_vars(template: str):
    from .regions import _TEMPLATES
    if template not in _TEMPLATES:
        raise RegionError(f"unknown template {template!r}")
    return _TEMPLATES[template]()


def weight_fan(dim: int, count: int, seed: int = 0) -> list[np.ndarray]:
    """Coordinate directions first, then seeded uniform directions on the
    positive-orthant unit sphere."""
    dirs = [np.eye(dim)[i] for i in range(min(count, dim))]
    rng = np.random.default_rng([seed, 1])
    while len(dirs) < count:
        v = np.abs(rng.normal(size=dim))
        n = np.linalg.norm(v)
        if n > 1e-12:
            dirs.append(v / n)
    return dirs


def inner_region(ch: BroadcastChannel, template: str, spec: ChainSpec,
                 weight_count: int = 8, grid_step: float = 1 / 8,
                 restarts: int = 0, budget: int = DEFAULT_BUDGET,
                 seed: int = 0, threads: int = 1):
    """Sweep boundary_point over a weight fan; return (hull region, points).

    The hull is the convex closure of every achieved region piece, so each
    returned BoundaryPoint is a member of it.
    """
    vars, _ = _template_vars(template)
    if len(vars) > 4:
        raise RegionError(f"inner_region limited to dimension <= 4, got {len(vars)}")
    from .regions import convex_hull_union
    points = []
    pieces = []
    for w in weight_fan(len(vars), weight_count, seed=seed):
        bp = boundary_point(ch, template, w, spec, grid_step=grid_step,
                            restarts=restarts, budget=budget, seed=seed,
                            threads=threads)
        points.append(bp)
        pieces.extend(bp.region.pieces)
    hull = convex_hull_union(UnionRegion(tuple(pieces)))
    return UnionRegion((hull,)), points
