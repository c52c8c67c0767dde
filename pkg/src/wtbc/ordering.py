"""Decision procedures for degraded / less-noisy / more-capable channel orderings.

Less noisy is decided through concavity of the mutual-information difference
F(p) = I(p; Q_strong) - I(p; Q_weak) over the input simplex: Y is less noisy
than Z iff F is concave.  Degradedness is a linear feasibility problem; more
capable is a sign condition on min F over the simplex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .probability import (Alphabet, BroadcastChannel, JointDistribution,
                          ValidationError, conditional_mutual_information,
                          n_fold, xlog2x)

FEAS_TOL = 1e-7
INCONCLUSIVE_MARGIN = 1e-4
MAX_INPUT_SIZE = 6
DEFAULT_GRID_STEP = 64


class PreconditionError(RuntimeError):
    """A verification oracle was called on a channel pair lacking the required ordering."""


@dataclass(frozen=True)
class OrderingReport:
    relation: str                    # degraded | less_noisy | more_capable | none
    holds: bool
    direction: tuple[str, str]       # (stronger output label, weaker output label)
    margin: float
    witness: np.ndarray | None = None
    conclusive: bool = True

    def __str__(self):
        status = "holds" if self.holds else "fails"
        extra = "" if self.conclusive else " (margin near zero; inconclusive)"
        return (f"{self.relation}: {self.direction[0]} >= {self.direction[1]} {status} "
                f"(margin {self.margin:.6g}){extra}")


@dataclass(frozen=True)
class TrialReport:
    passed: bool
    trials: int
    worst_margin: float
    worst_trial: int

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        return (f"{status}: {self.trials} trials, worst margin {self.worst_margin:.6g} "
                f"at trial {self.worst_trial}")


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Per-trial generator keyed on (seed, index) so trials are schedule-independent."""
    return np.random.default_rng([seed, index])


def _mi_batch(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """I(X;Y) in bits for a batch of input rows p (N x |X|) and channel q (|X| x |Y|)."""
    out = p @ q
    h_out = -xlog2x(out).sum(axis=1)
    h_cond = p @ (-xlog2x(q).sum(axis=1))
    return h_out - h_cond


def _simplex_grid(dim: int, steps: int) -> np.ndarray:
    """All points of the dim-simplex with coordinates multiples of 1/steps."""
    pts = []
    for combo in itertools.combinations(range(steps + dim - 1), dim - 1):
        prev = -1
        parts = []
        for c in combo:
            parts.append(c - prev - 1)
            prev = c
        parts.append(steps + dim - 2 - prev)
        pts.append(parts)
    return np.asarray(pts, dtype=float) / steps


def _check_labels(ch: BroadcastChannel, strong: str, weak: str) -> tuple[np.ndarray, np.ndarray]:
    qs = ch.output_marginal(strong)
    qw = ch.output_marginal(weak)
    return qs, qw


def check_degraded(ch: BroadcastChannel, strong: str, weak: str) -> OrderingReport:
    """Decide whether a stochastic matrix D exists with Q_weak = Q_strong @ D.

    Solved as an LP minimizing the max entrywise residual; feasible when the
    optimum is at most 1e-7.  The witness is the degrading matrix D.
    """
    qs, qw = _check_labels(ch, strong, weak)
    ns, nw = qs.shape[1], qw.shape[1]
    nx = qs.shape[0]
    # variables: D (ns*nw, row-major) then t
    nvar = ns * nw + 1
    c = np.zeros(nvar)
    c[-1] = 1.0
    a_ub = []
    b_ub = []
    # |(Qs D - Qw)[x, w]| <= t
    for x in range(nx):
        for w in range(nw):
            row = np.zeros(nvar)
            for s in range(ns):
                row[s * nw + w] = qs[x, s]
            row[-1] = -1.0
            a_ub.append(row.copy())
            b_ub.append(qw[x, w])
            row2 = -row
            row2[-1] = -1.0
            a_ub.append(row2)
            b_ub.append(-qw[x, w])
    a_eq = []
    b_eq = []
    for s in range(ns):
        row = np.zeros(nvar)
        row[s * nw:(s + 1) * nw] = 1.0
        a_eq.append(row)
        b_eq.append(1.0)
    bounds = [(0, None)] * (ns * nw) + [(0, None)]
    res = linprog(c, A_ub=np.asarray(a_ub), b_ub=np.asarray(b_ub),
                  A_eq=np.asarray(a_eq), b_eq=np.asarray(b_eq),
                  bounds=bounds, method="highs")
    if not res.success:
        raise RuntimeError(f"degradedness LP failed: {res.message}")
    resid = float(res.x[-1])
    holds = resid <= FEAS_TOL
    witness = res.x[:-1].reshape(ns, nw) if holds else None
    return OrderingReport("degraded", holds, (strong, weak), margin=-resid, witness=witness)


def _grid_for(ch: BroadcastChannel, grid_step: int | None) -> np.ndarray:
    nx = ch.input.size
    if nx > MAX_INPUT_SIZE:
        raise ValidationError(
            f"ordering checks refuse inputs with |X| > {MAX_INPUT_SIZE} (got {nx}): "
            "the simplex grid blows up")
    if grid_step is None:
        grid_step = DEFAULT_GRID_STEP if nx <= 3 else 8
    return _simplex_grid(nx, grid_step)


def _refine_minimum(f, p0: np.ndarray, iters: int = 20, shrink: float = 0.5) -> tuple[np.ndarray, float]:
    """Coordinate-descent refinement of a simplex-constrained minimizer."""
    p = p0.copy()
    best = f(p)
    step = 0.5 / DEFAULT_GRID_STEP * 2
    dim = len(p)
    for _ in range(iters):
        improved = False
        for i in range(dim):
            for j in range(dim):
                if i == j:
                    continue
                delta = min(step, p[j])
                if delta <= 0:
                    continue
                cand = p.copy()
                cand[i] += delta
                cand[j] -= delta
                val = f(cand)
                if val < best - 1e-15:
                    best, p, improved = val, cand, True
        if not improved:
            step *= shrink
    return p, best


def check_more_capable(ch: BroadcastChannel, strong: str, weak: str,
                       grid_step: int | None = None) -> OrderingReport:
    """Decide min over the input simplex of I(X;Y_strong) - I(X;Y_weak) >= -1e-7."""
    qs, qw = _check_labels(ch, strong, weak)
    grid = _grid_for(ch, grid_step)
    diffs = _mi_batch(grid, qs) - _mi_batch(grid, qw)
    k = int(np.argmin(diffs))

    def f(p):
        return float(_mi_batch(p[None, :], qs)[0] - _mi_batch(p[None, :], qw)[0])

    witness, margin = _refine_minimum(f, grid[k])
    holds = margin >= -FEAS_TOL
    conclusive = abs(margin) >= INCONCLUSIVE_MARGIN or margin == 0.0 or not holds
    return OrderingReport("more_capable", holds, (strong, weak), margin=margin,
                          witness=witness, conclusive=conclusive)


def check_less_noisy(ch: BroadcastChannel, strong: str, weak: str,
                     grid_step: int | None = None) -> OrderingReport:
    """Decide less-noisy via midpoint concavity of F(p) = I(p;Q_strong) - I(p;Q_weak).

    Tests F((p+q)/2) >= (F(p)+F(q))/2 - 1e-7 on all pairs of simplex grid
    points; a failing pair is returned as the witness.
    """
    qs, qw = _check_labels(ch, strong, weak)
    grid = _grid_for(ch, grid_step)
    fvals = _mi_batch(grid, qs) - _mi_batch(grid, qw)
    n = len(grid)
    idx_a, idx_b = np.triu_indices(n, k=1)
    worst = np.inf
    worst_pair = None
    chunk = 200_000
    for lo in range(0, len(idx_a), chunk):
        ia = idx_a[lo:lo + chunk]
        ib = idx_b[lo:lo + chunk]
        mids = 0.5 * (grid[ia] + grid[ib])
        fm = _mi_batch(mids, qs) - _mi_batch(mids, qw)
        slack = fm - 0.5 * (fvals[ia] + fvals[ib])
        k = int(np.argmin(slack))
        if slack[k] < worst:
            worst = float(slack[k])
            worst_pair = np.stack([grid[ia[k]], grid[ib[k]]])
    if worst_pair is None:  # |X| = 1: F is constant
        worst, worst_pair = 0.0, np.stack([grid[0], grid[0]])
    holds = worst >= -FEAS_TOL
    conclusive = abs(worst) >= INCONCLUSIVE_MARGIN or worst == 0.0 or not holds
    witness = None if holds else worst_pair
    return OrderingReport("less_noisy", holds, (strong, weak), margin=worst,
                          witness=witness, conclusive=conclusive)


def check_ordering(ch: BroadcastChannel, strong: str, weak: str, relation: str,
                   grid_step: int | None = None) -> OrderingReport:
    if relation == "degraded":
        return check_degraded(ch, strong, weak)
    if relation in ("less_noisy", "less-noisy"):
        return check_less_noisy(ch, strong, weak, grid_step)
    if relation in ("more_capable", "more-capable"):
        return check_more_capable(ch, strong, weak, grid_step)
    raise ValidationError(f"unknown relation {relation!r}")


def _random_conditional(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    m = rng.dirichlet(np.ones(cols), size=rows)
    return m


def _pair_channel(ch: BroadcastChannel, strong: str, weak: str, n: int) -> BroadcastChannel:
    """Two-output product channel (Y^n, Z^n) packaged as a BroadcastChannel.

    The unused third output is collapsed to a singleton so n_fold stays cheap.
    """
    qs = ch.output_marginal(strong)
    qw = ch.output_marginal(weak)
    t = np.einsum("xa,xb->xab", qs, qw)[:, :, :, None]
    pair = BroadcastChannel(
        Alphabet(ch.input.size, "X"),
        (Alphabet(qs.shape[1], "Ys"), Alphabet(qw.shape[1], "Yw"), Alphabet(1, "_")),
        t)
    return n_fold(pair, n) if n > 1 else pair


def verify_lemma1_instance(ch: BroadcastChannel, strong: str, weak: str,
                           n: int = 2, trial_count: int = 500, seed: int = 0) -> TrialReport:
    """Check I(M;Y^n|W) >= I(M;Z^n|W) on random joints when strong is less noisy than weak.

    Random joints Q(m,w) Q(x^n|m,w) with |M|,|W| <= 3 are composed with the
    n-fold product of the (strong, weak) marginal pair.
    """
    if n > 3:
        raise ValidationError("lemma-1 oracle limited to n <= 3")
    pre = check_less_noisy(ch, strong, weak)
    if not pre.holds:
        raise PreconditionError(f"precondition failed: {pre}")
    pair = _pair_channel(ch, strong, weak, n)
    nx = pair.input.size
    worst = np.inf
    worst_trial = -1
    for t in range(trial_count):
        rng = trial_rng(seed, t)
        m_size = int(rng.integers(1, 4))
        w_size = int(rng.integers(1, 4))
        q_mw = rng.dirichlet(np.ones(m_size * w_size)).reshape(m_size, w_size)
        q_x = _random_conditional(rng, m_size * w_size, nx).reshape(m_size, w_size, nx)
        joint = q_mw[:, :, None] * q_x
        jd = JointDistribution(
            (Alphabet(m_size, "M"), Alphabet(w_size, "W"), Alphabet(nx, "X")), joint)
        full = _compose_pair(jd, pair)
        lhs = conditional_mutual_information(full, ["M"], ["Ys"], ["W"])
        rhs = conditional_mutual_information(full, ["M"], ["Yw"], ["W"])
        margin = lhs - rhs
        if margin < worst:
            worst, worst_trial = margin, t
    return TrialReport(worst >= -FEAS_TOL, trial_count, worst, worst_trial)


def _compose_pair(jd: JointDistribution, pair: BroadcastChannel) -> JointDistribution:
    t = pair.transitions[:, :, :, 0]  # drop singleton output
    probs = jd.probs[..., None, None] * t
    axes = jd.axes + (pair.outputs[0], pair.outputs[1])
    return JointDistribution(axes, probs)


def verify_lemma3_instance(ch: BroadcastChannel, strong: str, weak: str,
                           trial_count: int = 500, seed: int = 0) -> TrialReport:
    """Check the more-capable conditioning bound on random auxiliary joints.

    Samples Q(u1,u2,k,v) Q(x|v) with auxiliary alphabets <= 3 and asserts
    I(V;Y|U1,K) - I(V;Z|U2,K) <= I(X;Y|U1) - I(X;Z|U2) + 1e-7 per trial.
    """
    pre = check_more_capable(ch, strong, weak)
    if not pre.holds:
        raise PreconditionError(f"precondition failed: {pre}")
    pair = _pair_channel(ch, strong, weak, 1)
    nx = pair.input.size
    worst = np.inf
    worst_trial = -1
    for t in range(trial_count):
        rng = trial_rng(seed, t)
        sizes = [int(rng.integers(1, 4)) for _ in range(4)]  # U1, U2, K, V
        u1, u2, k, v = sizes
        q_aux = rng.dirichlet(np.ones(u1 * u2 * k * v)).reshape(u1, u2, k, v)
        q_x = _random_conditional(rng, v, nx)
        joint = q_aux[..., None] * q_x[None, None, None, :, :]
        jd = JointDistribution(
            (Alphabet(u1, "U1"), Alphabet(u2, "U2"), Alphabet(k, "K"),
             Alphabet(v, "V"), Alphabet(nx, "X")), joint)
        full = _compose_pair(jd, pair)
        lhs = (conditional_mutual_information(full, ["V"], ["Ys"], ["U1", "K"])
               - conditional_mutual_information(full, ["V"], ["Yw"], ["U2", "K"]))
        rhs = (conditional_mutual_information(full, ["X"], ["Ys"], ["U1"])
               - conditional_mutual_information(full, ["X"], ["Yw"], ["U2"]))
        margin = rhs - lhs
        if margin < worst:
            worst, worst_trial = margin, t
    return TrialReport(worst >= -FEAS_TOL, trial_count, worst, worst_trial)
