"""Toy-blocklength encoders, decoders and exact leakage accounting.

Codebooks are drawn layer by layer from user-supplied chain distributions,
transmission averages over the input synthesis Q(x|v1,v2), decoding is exact
maximum likelihood, and secrecy leakage is computed from the exact joint law
of the messages and the eavesdropper's output sequence.  Everything here is
enumeration at small n; Monte Carlo is offered for the error probability
only.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .probability import (Alphabet, BroadcastChannel, CapacityError,
                          JointDistribution, STOCH_TOL, ValidationError,
                          mutual_information, conditional_mutual_information)

CELL_BUDGET = 2 ** 24


def one_time_pad(m1: int, m2: int, modulus: int) -> int:
    """Pad m1 with m2 over Z_modulus; uniform in either argument => uniform output."""
    m1, m2, modulus = int(m1), int(m2), int(modulus)
    if modulus < 1:
        raise ValidationError(f"modulus must be >= 1, got {modulus}")
    if not (0 <= m1 < modulus and 0 <= m2 < modulus):
        raise ValidationError(f"messages ({m1}, {m2}) out of range for modulus {modulus}")
    return (m1 + m2) % modulus


@dataclass(frozen=True)
class MessageLayout:
    """Message, randomization and bin index set sizes.

    For the individual scheme the private messages split as
    M1 = M11 x M12 and M2 = M21 x M22 with |M12| = |M21| (the padded halves).
    """

    mc: int = 1
    m0: int = 1
    m1: int = 1
    m2: int = 1
    m11: int = 1
    m12: int = 1
    m21: int = 1
    m22: int = 1
    mr: int = 1
    mr1: int = 1
    mr2: int = 1
    mt1: int = 1
    mt2: int = 1

    def __post_init__(self):
        for name in ("mc", "m0", "m1", "m2", "m11", "m12", "m21", "m22",
                     "mr", "mr1", "mr2", "mt1", "mt2"):
            if getattr(self, name) < 1:
                raise ValidationError(f"layout size {name} must be >= 1")
        if self.m12 != self.m21:
            raise ValidationError(
                f"padded halves must match: |M12| = {self.m12} but |M21| = {self.m21}")

    def check_individual_split(self) -> None:
        if self.m1 != self.m11 * self.m12 or self.m2 != self.m21 * self.m22:
            raise ValidationError(
                f"individual split inconsistent: m1={self.m1} vs m11*m12="
                f"{self.m11 * self.m12}, m2={self.m2} vs m21*m22={self.m21 * self.m22}")

    @property
    def message_count(self) -> int:
        return self.mc * self.m0 * self.m1 * self.m2

    @property
    def randomization_count(self) -> int:
        return self.mr * self.mr1 * self.mr2


@dataclass(frozen=True)
class LeakageReport:
    criterion: str
    quantities: dict
    method: str


@dataclass(frozen=True)
class ErrorReport:
    value: float
    method: str
    half_width: float = 0.0


@dataclass(frozen=True)
class Codebook:
    """Realized random codebook plus everything needed to rebuild the encoder map."""

    scheme: str  # xor | joint | individual
    n: int
    layout: MessageLayout
    seed: int
    arrays: dict = field(repr=False)
    chains: dict = field(repr=False)

    # -- encoder enumeration ------------------------------------------------
    def symbol_count(self) -> int:
        if self.scheme == "xor":
            return self.chains["X"].shape[0]
        q12 = self.chains["V1V2|V0"]
        return q12.shape[1] * q12.shape[2]

    def effective_channel(self, ch: BroadcastChannel) -> np.ndarray:
        """W(y1,y2,z|s) where s indexes X (xor) or the pair (v1,v2) (layered)."""
        if self.scheme == "xor":
            return ch.transitions
        qx = self.chains["X|V1V2"]  # (nv1, nv2, nx)
        w = np.einsum("abx,xijk->abijk", qx, ch.transitions)
        nv1, nv2 = qx.shape[0], qx.shape[1]
        return w.reshape(nv1 * nv2, *ch.transitions.shape[1:])

    def configs(self) -> tuple[np.ndarray, np.ndarray]:
        """(msgs, seqs): one row per (message, randomization) tuple, uniform law.

        msgs columns: mc, m0, m1, m2.  seqs: symbol-index sequence in the
        effective-channel alphabet.
        """
        lay = self.layout
        if self.scheme == "xor":
            x = self.arrays["x"]  # (k, n)
            k = lay.m1
            msgs, seqs = [], []
            for m1, m2 in itertools.product(range(k), range(k)):
                msgs.append((0, 0, m1, m2))
                seqs.append(x[one_time_pad(m1, m2, k)])
            return np.asarray(msgs), np.asarray(seqs)
        v1, v2 = self.arrays["v1"], self.arrays["v2"]
        sel = self.arrays["sel"]
        nv2 = self.chains["V1V2|V0"].shape[2]
        msgs, seqs = [], []
        for mc, m0, m1, m2 in itertools.product(range(lay.mc), range(lay.m0),
                                                range(lay.m1), range(lay.m2)):
            m = self._inner_message(m0, m1, m2)
            for mr, mr1, mr2 in itertools.product(range(lay.mr), range(lay.mr1),
                                                  range(lay.mr2)):
                t1, t2 = sel[mc, m, mr, mr1, mr2]
                s1 = v1[mc, m, mr, mr1, t1]
                s2 = v2[mc, m, mr, mr2, t2]
                msgs.append((mc, m0, m1, m2))
                seqs.append(s1 * nv2 + s2)
        return np.asarray(msgs), np.asarray(seqs)

    def _inner_message(self, m0: int, m1: int, m2: int) -> int:
        """Index of the codebook's inner message coordinate for (m0, m1, m2)."""
        lay = self.layout
        if self.scheme == "joint":
            return (m0 * lay.m1 + m1) * lay.m2 + m2
        # individual: the codeword depends on (m0, m11, m22, m_xor) only
        m11, m12 = divmod(m1, lay.m12)
        m21, m22 = divmod(m2, lay.m22)
        mx = one_time_pad(m12, m21, lay.m12)
        return ((m0 * lay.m11 + m11) * lay.m22 + m22) * lay.m12 + mx


def _check_conditional(name: str, arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, float)
    if np.any(arr < -STOCH_TOL):
        raise ValidationError(f"chain law {name!r} has negative entries")
    sums = arr.reshape(-1, arr.shape[-1]).sum(axis=1) if arr.ndim > 1 else np.array([arr.sum()])
    if name == "V1V2|V0":  # joint child pair: last two axes form the child
        sums = arr.reshape(arr.shape[0], -1).sum(axis=1)
    if np.any(np.abs(sums - 1.0) > STOCH_TOL):
        raise ValidationError(f"chain law {name!r} rows do not sum to 1")
    return arr


def _draw_iid(rng: np.random.Generator, law: np.ndarray, shape: tuple) -> np.ndarray:
    """shape-many iid draws from a 1-D law."""
    cdf = np.cumsum(law)
    u = rng.random(shape)
    return (u[..., None] > cdf[:-1]).sum(axis=-1).astype(np.int64)


def _draw_conditional(rng: np.random.Generator, cond: np.ndarray,
                      parents: np.ndarray) -> np.ndarray:
    """One draw per parent entry from cond[parent] (cond rows on the simplex)."""
    cdf = np.cumsum(cond, axis=-1)
    u = rng.random(parents.shape)
    return (u[..., None] > cdf[parents][..., :-1]).sum(axis=-1).astype(np.int64)


def build_xor_multicast_code(ch: BroadcastChannel, n: int, size: int,
                             input_dist=None, seed: int = 0) -> Codebook:
    """Flat random code xⁿ(m⊗) carrying the padded combination of two
    equal-size private messages; receivers unwrap with their side message."""
    if size < 1 or n < 1:
        raise ValidationError("need size >= 1 and n >= 1")
    nx = ch.input.size
    if size * nx ** n > CELL_BUDGET:
        raise CapacityError(f"codebook of {size} words over |X|^n = {nx ** n} exceeds budget")
    if input_dist is None:
        input_dist = np.full(nx, 1.0 / nx)
    input_dist = _check_conditional("X", np.asarray(input_dist, float))
    rng = np.random.default_rng([seed, 0])
    x = _draw_iid(rng, input_dist, (size, n))
    layout = MessageLayout(m1=size, m2=size, m12=size, m21=size)
    return Codebook("xor", n, layout, seed, {"x": x}, {"X": input_dist})


def build_layered_wiretap_code(ch: BroadcastChannel, n: int, layout: MessageLayout,
                               chains: dict, scheme: str = "joint",
                               seed: int = 0) -> Codebook:
    """Superposition/Marton codebook u -> (v⊗ ->) v0 -> (v1, v2).

    chains: 'U' (nu,), 'V0|U' (nu,nv0) for the joint scheme or
    'Vx|U' (nu,nvx) plus 'V0|Vx' (nvx,nv0) for the individual one,
    'V1V2|V0' (nv0,nv1,nv2) and 'X|V1V2' (nv1,nv2,nx).  The Marton pair
    (mt1, mt2) is the maximum-likelihood pair under Q(v1,v2|v0), scanned
    lexicographically so ties pick the smallest indices.
    """
    if scheme not in ("joint", "individual"):
        raise ValidationError(f"scheme must be joint or individual, got {scheme!r}")
    lay = layout
    pu = _check_conditional("U", chains["U"])
    q12 = _check_conditional("V1V2|V0", chains["V1V2|V0"])
    qx = _check_conditional("X|V1V2", chains["X|V1V2"])
    nv0, nv1, nv2 = q12.shape
    if qx.shape[:2] != (nv1, nv2) or qx.shape[2] != ch.input.size:
        raise ValidationError(
            f"X|V1V2 shape {qx.shape} inconsistent with V1V2|V0 {q12.shape} "
            f"and |X| = {ch.input.size}")
    if scheme == "individual":
        lay.check_individual_split()
        qvx = _check_conditional("Vx|U", chains["Vx|U"])
        qv0 = _check_conditional("V0|Vx", chains["V0|Vx"])
        if qvx.shape[0] != pu.shape[0] or qv0.shape != (qvx.shape[1], nv0):
            raise ValidationError("Vx/V0 chain shapes inconsistent")
        inner = lay.m0 * lay.m11 * lay.m22 * lay.m12
    else:
        qv0 = _check_conditional("V0|U", chains["V0|U"])
        if qv0.shape != (pu.shape[0], nv0):
            raise ValidationError(f"V0|U shape {qv0.shape} vs |U| = {pu.shape[0]}")
        inner = lay.m0 * lay.m1 * lay.m2
    words = lay.mc * inner * lay.mr * (lay.mr1 * lay.mt1 + lay.mr2 * lay.mt2 + 1)
    if words * n > CELL_BUDGET:
        raise CapacityError(f"codebook needs {words * n} cells, over the budget")

    u = _draw_iid(np.random.default_rng([seed, 1]), pu, (lay.mc, n))
    if scheme == "individual":
        vx = _draw_conditional(np.random.default_rng([seed, 2]), qvx,
                               np.broadcast_to(u[:, None, :], (lay.mc, lay.m12, n)))
        # v0 rides on v⊗; its inner index encodes (m0, m11, m22, m_xor)
        par = np.empty((lay.mc, inner, lay.mr, n), dtype=np.int64)
        for m in range(inner):
            mx = m % lay.m12
            par[:, m, :, :] = vx[:, mx, None, :]
        v0 = _draw_conditional(np.random.default_rng([seed, 3]), qv0, par)
    else:
        vx = None
        par = np.broadcast_to(u[:, None, None, :], (lay.mc, inner, lay.mr, n))
        v0 = _draw_conditional(np.random.default_rng([seed, 3]), qv0, par)
    qv1 = q12.sum(axis=2)
    qv2 = q12.sum(axis=1)
    shape1 = (lay.mc, inner, lay.mr, lay.mr1, lay.mt1, n)
    shape2 = (lay.mc, inner, lay.mr, lay.mr2, lay.mt2, n)
    v1 = _draw_conditional(np.random.default_rng([seed, 4]), qv1,
                           np.broadcast_to(v0[:, :, :, None, None, :], shape1))
    v2 = _draw_conditional(np.random.default_rng([seed, 5]), qv2,
                           np.broadcast_to(v0[:, :, :, None, None, :], shape2))
    # Marton pair choice: argmax of prod_i Q(v1_i, v2_i | v0_i), first maximum
    sel = np.zeros((lay.mc, inner, lay.mr, lay.mr1, lay.mr2, 2), dtype=np.int64)
    logq = np.log(np.maximum(q12, 1e-300))
    for mc, m, mr, mr1, mr2 in itertools.product(range(lay.mc), range(inner),
                                                 range(lay.mr), range(lay.mr1),
                                                 range(lay.mr2)):
        base = v0[mc, m, mr]
        best, best_pair = -np.inf, (0, 0)
        for t1 in range(lay.mt1):
            a = v1[mc, m, mr, mr1, t1]
            for t2 in range(lay.mt2):
                b = v2[mc, m, mr, mr2, t2]
                score = float(logq[base, a, b].sum())
                if score > best + 1e-12:
                    best, best_pair = score, (t1, t2)
        sel[mc, m, mr, mr1, mr2] = best_pair
    arrays = {"u": u, "v0": v0, "v1": v1, "v2": v2, "sel": sel}
    if vx is not None:
        arrays["vx"] = vx
    return Codebook(scheme, n, lay, seed, arrays, dict(chains))


# ---------------------------------------------------------------------------
# Exact enumeration
# ---------------------------------------------------------------------------

def _sequence_likelihoods(seq: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Joint law of the three output sequences given a symbol sequence.

    Returns a tensor of shape (|Y1|^n, |Y2|^n, |Z|^n); symbol 0 is the most
    significant digit of each sequence index.
    """
    ny1, ny2, nz = w.shape[1:]
    t = np.ones((1, 1, 1))
    for s in seq:
        block = w[s]
        t = (t[:, None, :, None, :, None] * block[None, :, None, :, None, :])
        t = t.reshape(t.shape[0] * ny1, t.shape[2] * ny2, t.shape[4] * nz)
    return t


def _marginal_seq_likelihood(seq: np.ndarray, wm: np.ndarray) -> np.ndarray:
    """Law of one output sequence given a symbol sequence; wm is (S, |Y|)."""
    ny = wm.shape[1]
    v = np.ones(1)
    for s in seq:
        v = (v[:, None] * wm[s][None, :]).reshape(-1)
    return v


def _error_budget_ok(cb: Codebook, ch: BroadcastChannel) -> tuple[int, int]:
    msgs_count = cb.layout.message_count
    n_cfg = msgs_count * cb.layout.randomization_count
    if cb.scheme == "xor":
        n_cfg = cb.layout.m1 * cb.layout.m2
    prod_out = int(np.prod([a.size ** cb.n for a in ch.outputs]))
    return n_cfg, n_cfg * prod_out


def exact_error_probability(cb: Codebook, ch: BroadcastChannel) -> ErrorReport:
    """Exact average probability that any legitimate decoder errs.

    Decoder 1 sees y1ⁿ and m2, decoder 2 sees y2ⁿ and m1, decoder 3 sees zⁿ
    and wants mc only.  Each is maximum likelihood with the randomization
    indices averaged out; ties resolve to the smallest candidate index.
    """
    n_cfg, cells = _error_budget_ok(cb, ch)
    if cells > CELL_BUDGET:
        raise CapacityError(
            f"exact error needs {cells} cells (budget {CELL_BUDGET}); "
            f"use mc_error_probability")
    w = cb.effective_channel(ch)
    w1 = w.sum(axis=(2, 3))
    w2 = w.sum(axis=(1, 3))
    wz = w.sum(axis=(1, 2))
    msgs, seqs = cb.configs()
    lay = cb.layout
    dims = (lay.mc, lay.m0, lay.m1, lay.m2)
    n_msgs = int(np.prod(dims))
    py1 = np.zeros((n_msgs, w1.shape[1] ** cb.n))
    py2 = np.zeros((n_msgs, w2.shape[1] ** cb.n))
    pz = np.zeros((n_msgs, wz.shape[1] ** cb.n))
    counts = np.zeros(n_msgs)
    midx = np.ravel_multi_index(msgs.T, dims)
    for k in range(len(seqs)):
        py1[midx[k]] += _marginal_seq_likelihood(seqs[k], w1)
        py2[midx[k]] += _marginal_seq_likelihood(seqs[k], w2)
        pz[midx[k]] += _marginal_seq_likelihood(seqs[k], wz)
        counts[midx[k]] += 1
    py1 /= counts[:, None]
    py2 /= counts[:, None]
    pz /= counts[:, None]
    P = py1.reshape(dims + (-1,))  # (mc, m0, m1, m2, y1seq)

    # decoder tables: argmax over candidate axes, first max wins
    dec1 = _argmax_first(py1.reshape(dims + (-1,)), axes=(0, 1, 2))  # given m2
    dec2 = _argmax_first(py2.reshape(dims + (-1,)), axes=(0, 1, 3))  # given m1
    pzc = pz.reshape(dims + (-1,)).mean(axis=(1, 2, 3))  # (mc, zseq)
    dec3 = np.argmax(pzc, axis=0)  # first max by argmax convention

    total_correct = 0.0
    for k in range(len(seqs)):
        mc, m0, m1, m2 = msgs[k]
        t = _sequence_likelihoods(seqs[k], w)
        c1 = dec1[m2] == np.ravel_multi_index((mc, m0, m1), dims[:3])
        c2 = dec2[m1] == np.ravel_multi_index((mc, m0, m2), (dims[0], dims[1], dims[3]))
        c3 = dec3 == mc
        total_correct += float(np.einsum("abc,a,b,c->", t, c1.astype(float),
                                         c2.astype(float), c3.astype(float)))
    return ErrorReport(value=min(max(1.0 - total_correct / len(seqs), 0.0), 1.0),
                       method="exact")


def _argmax_first(p: np.ndarray, axes: tuple) -> np.ndarray:
    """Argmax over the named message axes, indexed by the remaining message axis.

    p has axes (mc, m0, m1, m2, outseq).  Returns an array indexed by the
    known message and the output sequence, holding the flat index of the
    decoded tuple (first maximum in lexicographic candidate order).
    """
    known = [a for a in range(4) if a not in axes]
    perm = known + list(axes) + [4]
    q = np.transpose(p, perm)
    ksz = q.shape[0]
    cand = int(np.prod(q.shape[1:4]))
    q = q.reshape(ksz, cand, -1)
    return np.argmax(q, axis=1)  # np.argmax returns the first maximum


def mc_error_probability(cb: Codebook, ch: BroadcastChannel, samples: int,
                         seed: int = 0) -> ErrorReport:
    """Seeded Monte-Carlo estimate of the decoding error with a 95% half-width."""
    if samples < 1:
        raise ValidationError("samples must be >= 1")
    w = cb.effective_channel(ch)
    w1 = w.sum(axis=(2, 3))
    w2 = w.sum(axis=(1, 3))
    wz = w.sum(axis=(1, 2))
    msgs, seqs = cb.configs()
    lay = cb.layout
    dims = (lay.mc, lay.m0, lay.m1, lay.m2)
    midx = np.ravel_multi_index(msgs.T, dims)
    rng = np.random.default_rng([seed, 7])
    ny1, ny2, nz = w.shape[1:]
    flat = w.reshape(w.shape[0], -1)
    errors = 0
    for _ in range(samples):
        k = int(rng.integers(len(seqs)))
        mc, m0, m1, m2 = msgs[k]
        outs = np.array([_sample_index(rng, flat[s]) for s in seqs[k]])
        y1 = np.array([o // (ny2 * nz) for o in outs])
        y2 = np.array([(o // nz) % ny2 for o in outs])
        z = np.array([o % nz for o in outs])
        if (_ml_decode(y1, w1, msgs, seqs, midx, dims, known=("m2", m2))
                != (mc, m0, m1)):
            errors += 1
            continue
        if (_ml_decode(y2, w2, msgs, seqs, midx, dims, known=("m1", m1))
                != (mc, m0, m2)):
            errors += 1
            continue
        if _ml_decode_common(z, wz, msgs, seqs, midx, dims) != mc:
            errors += 1
    p = errors / samples
    hw = 1.96 * math.sqrt(max(p * (1 - p), 0.0) / samples)
    return ErrorReport(value=p, method=f"monte_carlo({samples},{seed})", half_width=hw)


def _sample_index(rng, law):
    return int((rng.random() > np.cumsum(law)[:-1]).sum())


def _seq_loglike(y: np.ndarray, wm: np.ndarray, seq: np.ndarray) -> float:
    return float(np.prod(wm[seq, y]))


def _ml_decode(y, wm, msgs, seqs, midx, dims, known):
    which, val = known
    scores = {}
    for k in range(len(seqs)):
        mc, m0, m1, m2 = msgs[k]
        if which == "m2" and m2 != val:
            continue
        if which == "m1" and m1 != val:
            continue
        key = (mc, m0, m1) if which == "m2" else (mc, m0, m2)
        scores.setdefault(key, []).append(_seq_loglike(y, wm, seqs[k]))
    best_key, best = None, -1.0
    for key in sorted(scores):
        s = float(np.mean(scores[key]))
        if s > best + 1e-15:
            best, best_key = s, key
    return best_key


def _ml_decode_common(z, wz, msgs, seqs, midx, dims):
    scores = {}
    for k in range(len(seqs)):
        mc = msgs[k][0]
        scores.setdefault(mc, []).append(_seq_loglike(z, wz, seqs[k]))
    best_key, best = None, -1.0
    for mc in sorted(scores):
        s = float(np.mean(scores[mc]))
        if s > best + 1e-15:
            best, best_key = s, mc
    return best_key


# ---------------------------------------------------------------------------
# Leakage
# ---------------------------------------------------------------------------

JOINT_NAMES = ("I(M0M1;Z^n|M2)", "I(M0M2;Z^n|M1)", "I(M0M1M2;Z^n)")
INDIVIDUAL_NAMES = ("I(M0M1;Z^n)", "I(M0M2;Z^n)",
                    "I(M0;Z^n)+I(M1;Z^n)+I(M2;Z^n)")


def message_eavesdropper_law(cb: Codebook, ch: BroadcastChannel) -> JointDistribution:
    """Exact joint law of (Mc, M0, M1, M2, Zⁿ), randomization averaged out."""
    lay = cb.layout
    nz = ch.outputs[2].size
    cells = nz ** cb.n * lay.mc * lay.m0 * lay.m1 * lay.m2
    if cb.scheme == "xor":
        cells = nz ** cb.n * lay.m1 * lay.m2
    if cells > CELL_BUDGET:
        raise CapacityError(
            f"exact leakage needs {cells} cells (budget {CELL_BUDGET}); refusing")
    w = cb.effective_channel(ch)
    wz = w.sum(axis=(1, 2))
    msgs, seqs = cb.configs()
    dims = (lay.mc, lay.m0, lay.m1, lay.m2)
    law = np.zeros(dims + (wz.shape[1] ** cb.n,))
    for k in range(len(seqs)):
        mc, m0, m1, m2 = msgs[k]
        law[mc, m0, m1, m2] += _marginal_seq_likelihood(seqs[k], wz)
    law /= law.sum()
    axes = (Alphabet(dims[0], "Mc"), Alphabet(dims[1], "M0"),
            Alphabet(dims[2], "M1"), Alphabet(dims[3], "M2"),
            Alphabet(law.shape[-1], "Zn"))
    return JointDistribution(axes, law)


def exact_leakage(cb: Codebook, ch: BroadcastChannel,
                  criterion: str = "joint") -> LeakageReport:
    """All leakage quantities of the chosen criterion, with the cross-criterion
    totals reported alongside for comparison."""
    if criterion not in ("joint", "individual"):
        raise ValidationError(f"criterion must be joint or individual, got {criterion!r}")
    j = message_eavesdropper_law(cb, ch)
    q = {
        "I(M0M1;Z^n|M2)": conditional_mutual_information(j, ["M0", "M1"], ["Zn"], ["M2"]),
        "I(M0M2;Z^n|M1)": conditional_mutual_information(j, ["M0", "M2"], ["Zn"], ["M1"]),
        "I(M0M1M2;Z^n)": mutual_information(j, ["M0", "M1", "M2"], ["Zn"]),
        "I(M0M1;Z^n)": mutual_information(j, ["M0", "M1"], ["Zn"]),
        "I(M0M2;Z^n)": mutual_information(j, ["M0", "M2"], ["Zn"]),
        "I(M0;Z^n)": mutual_information(j, ["M0"], ["Zn"]),
        "I(M1;Z^n)": mutual_information(j, ["M1"], ["Zn"]),
        "I(M2;Z^n)": mutual_information(j, ["M2"], ["Zn"]),
    }
    q["I(M0;Z^n)+I(M1;Z^n)+I(M2;Z^n)"] = (
        q["I(M0;Z^n)"] + q["I(M1;Z^n)"] + q["I(M2;Z^n)"])
    if cb.scheme == "xor":
        q["I(Mxor;Z^n)"] = _xor_leakage(cb, j)
    return LeakageReport(criterion=criterion, quantities=q, method="exact")


def _xor_leakage(cb: Codebook, j: JointDistribution) -> float:
    """I(M⊗;Zⁿ) for the padded multicast code."""
    k = cb.layout.m1
    p = j.probs.reshape(k, k, -1)  # (m1, m2, zseq); mc, m0 are singletons
    law = np.zeros((k, p.shape[-1]))
    for m1 in range(k):
        for m2 in range(k):
            law[one_time_pad(m1, m2, k)] += p[m1, m2]
    jj = JointDistribution((Alphabet(k, "Mx"), Alphabet(p.shape[-1], "Zn")), law)
    return mutual_information(jj, ["Mx"], ["Zn"])


def verify_secrecy_criterion(report: LeakageReport, tau: float) -> dict:
    """Per-quantity pass/fail of the report's criterion against threshold tau."""
    names = JOINT_NAMES if report.criterion == "joint" else INDIVIDUAL_NAMES
    return {name: report.quantities[name] <= tau + 1e-12 for name in names}
