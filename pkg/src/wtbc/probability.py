"""Finite-alphabet probability objects and entropy / mutual-information computations.

All logarithms are base 2; rates are in bits per channel use.  Tensors are
stored dense, row-major in axis order.  n-fold sequences are indexed
lexicographically with symbol 0 most significant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import yaml

STOCH_TOL = 1e-9

# refuse n-fold products and compositions beyond this many tensor cells
DEFAULT_CELL_BUDGET = 2 ** 26


class ValidationError(ValueError):
    """A probability object violates nonnegativity or normalization."""


class CapacityError(RuntimeError):
    """An enumeration would exceed the configured memory budget."""


@dataclass(frozen=True)
class Alphabet:
    size: int
    label: str

    def __post_init__(self):
        if self.size < 1:
            raise ValidationError(f"alphabet {self.label!r} must have size >= 1, got {self.size}")


def _check_probs(arr: np.ndarray, what: str) -> None:
    if np.any(arr < -STOCH_TOL):
        raise ValidationError(f"{what} has negative entries (min {arr.min():.3g})")
    total = float(arr.sum())
    if abs(total - 1.0) > STOCH_TOL:
        raise ValidationError(f"{what} sums to {total!r}, expected 1 within {STOCH_TOL}")


@dataclass(frozen=True)
class Distribution:
    alphabet: Alphabet
    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float, copy=True)
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)
        if p.shape != (self.alphabet.size,):
            raise ValidationError(
                f"distribution over {self.alphabet.label!r} has shape {p.shape}, "
                f"expected ({self.alphabet.size},)")
        _check_probs(p, f"distribution over {self.alphabet.label!r}")

    @staticmethod
    def uniform(alphabet: Alphabet) -> "Distribution":
        return Distribution(alphabet, np.full(alphabet.size, 1.0 / alphabet.size))


@dataclass(frozen=True)
class JointDistribution:
    axes: tuple[Alphabet, ...]
    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        p = np.array(self.probs, dtype=float, copy=True)
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)
        labels = [a.label for a in self.axes]
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate axis labels in joint: {labels}")
        expected = tuple(a.size for a in self.axes)
        if p.shape != expected:
            raise ValidationError(f"joint tensor shape {p.shape} does not match axes {expected}")
        _check_probs(p, f"joint over {labels}")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.axes)

    def axis_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValidationError(f"unknown axis label {label!r}; have {self.labels}") from None


@dataclass(frozen=True)
class BroadcastChannel:
    """Discrete memoryless channel Q(y1, y2, z | x) over finite alphabets."""

    input: Alphabet
    outputs: tuple[Alphabet, Alphabet, Alphabet]
    transitions: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "outputs", tuple(self.outputs))
        t = np.array(self.transitions, dtype=float, copy=True)
        t.flags.writeable = False
        object.__setattr__(self, "transitions", t)
        expected = (self.input.size,) + tuple(a.size for a in self.outputs)
        if t.shape != expected:
            raise ValidationError(f"transition tensor shape {t.shape}, expected {expected}")
        if np.any(t < -STOCH_TOL):
            raise ValidationError("transition tensor has negative entries")
        sums = t.reshape(self.input.size, -1).sum(axis=1)
        bad = np.abs(sums - 1.0) > STOCH_TOL
        if np.any(bad):
            x = int(np.argmax(bad))
            raise ValidationError(
                f"transition row for x={x} sums to {sums[x]!r}, expected 1 within {STOCH_TOL}")

    @property
    def output_labels(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.outputs)

    def output_marginal(self, label: str) -> np.ndarray:
        """Marginal transition matrix Q(y|x) for one named output, shape (|X|, |Y|)."""
        labels = self.output_labels
        if label not in labels:
            raise ValidationError(f"unknown output label {label!r}; have {labels}")
        k = labels.index(label)
        sum_axes = tuple(1 + i for i in range(3) if i != k)
        return self.transitions.sum(axis=sum_axes)


def xlog2x(p: np.ndarray) -> np.ndarray:
    """p * log2(p) with the 0 * log 0 = 0 convention."""
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    mask = p > 0
    out[mask] = p[mask] * np.log2(p[mask])
    return out


def entropy(d) -> float:
    """Shannon entropy in bits of a Distribution, JointDistribution or raw array."""
    if isinstance(d, Distribution):
        p = d.probs
    elif isinstance(d, JointDistribution):
        p = d.probs
    else:
        p = np.asarray(d, dtype=float)
        _check_probs(p, "distribution")
    return float(-xlog2x(p).sum())


def _group_axes(j: JointDistribution, labels) -> tuple[int, ...]:
    if isinstance(labels, str):
        labels = [labels]
    return tuple(j.axis_index(lbl) for lbl in labels)


def marginalize(j: JointDistribution, keep_axes) -> JointDistribution:
    """Sum out every axis not named in keep_axes, preserving the requested order."""
    if isinstance(keep_axes, str):
        keep_axes = [keep_axes]
    keep_idx = [j.axis_index(lbl) for lbl in keep_axes]
    drop = tuple(i for i in range(len(j.axes)) if i not in keep_idx)
    p = j.probs.sum(axis=drop) if drop else j.probs
    # reorder to match the requested keep order
    remaining = [i for i in range(len(j.axes)) if i not in drop]
    perm = [remaining.index(i) for i in keep_idx]
    p = np.transpose(p, perm) if perm else p.reshape(())
    return JointDistribution(tuple(j.axes[i] for i in keep_idx), p)


def _grouped_entropy(j: JointDistribution, labels) -> float:
    if not labels:
        return 0.0
    idx = _group_axes(j, labels)
    drop = tuple(i for i in range(len(j.axes)) if i not in idx)
    p = j.probs.sum(axis=drop) if drop else j.probs
    return float(-xlog2x(p).sum())


def mutual_information(j: JointDistribution, axes_a, axes_b) -> float:
    """I(A;B) in bits, A and B disjoint groups of named axes of j."""
    if isinstance(axes_a, str):
        axes_a = [axes_a]
    if isinstance(axes_b, str):
        axes_b = [axes_b]
    if set(axes_a) & set(axes_b):
        raise ValidationError(f"axis groups overlap: {axes_a} vs {axes_b}")
    ha = _grouped_entropy(j, axes_a)
    hb = _grouped_entropy(j, axes_b)
    hab = _grouped_entropy(j, list(axes_a) + list(axes_b))
    return max(ha + hb - hab, 0.0)


def conditional_mutual_information(j: JointDistribution, axes_a, axes_b, axes_c) -> float:
    """I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C), in bits."""
    if isinstance(axes_a, str):
        axes_a = [axes_a]
    if isinstance(axes_b, str):
        axes_b = [axes_b]
    if isinstance(axes_c, str):
        axes_c = [axes_c]
    groups = [set(axes_a), set(axes_b), set(axes_c)]
    for i in range(3):
        for k in range(i + 1, 3):
            if groups[i] & groups[k]:
                raise ValidationError("axis groups must be pairwise disjoint")
    if not axes_c:
        return mutual_information(j, axes_a, axes_b)
    hac = _grouped_entropy(j, list(axes_a) + list(axes_c))
    hbc = _grouped_entropy(j, list(axes_b) + list(axes_c))
    habc = _grouped_entropy(j, list(axes_a) + list(axes_b) + list(axes_c))
    hc = _grouped_entropy(j, axes_c)
    return max(hac + hbc - habc - hc, 0.0)


def compose(inp, ch: BroadcastChannel) -> JointDistribution:
    """Attach the channel outputs to an input law whose trailing axis is the channel input.

    A bare Distribution over X or a JointDistribution ending in the X axis both
    work; the result carries axes (..., X, Y1, Y2, Z).
    """
    if isinstance(inp, Distribution):
        inp = JointDistribution((inp.alphabet,), inp.probs)
    last = inp.axes[-1]
    if last.size != ch.input.size or last.label != ch.input.label:
        raise ValidationError(
            f"trailing axis {last.label!r} (size {last.size}) does not match channel input "
            f"{ch.input.label!r} (size {ch.input.size})")
    cells = inp.probs.size * int(np.prod([a.size for a in ch.outputs]))
    if cells > DEFAULT_CELL_BUDGET:
        raise CapacityError(f"composition would need {cells} cells (budget {DEFAULT_CELL_BUDGET})")
    probs = inp.probs[..., None, None, None] * ch.transitions
    return JointDistribution(inp.axes + ch.outputs, probs)


def n_fold(ch: BroadcastChannel, n: int, budget: int = DEFAULT_CELL_BUDGET) -> BroadcastChannel:
    """Memoryless n-fold product channel over length-n sequences.

    Sequences are indexed lexicographically with symbol 0 of position 0 most
    significant.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    sizes = [ch.input.size] + [a.size for a in ch.outputs]
    cells = 1
    for s in sizes:
        cells *= s ** n
    if cells > budget:
        raise CapacityError(
            f"n_fold(n={n}) needs a {'x'.join(str(s ** n) for s in sizes)} tensor "
            f"({cells} cells), exceeding budget {budget}")
    t = ch.transitions
    out = t
    for _ in range(n - 1):
        # out[(x..),(y1..),(y2..),(z..)] x t[x,y1,y2,z], then interleave axes
        out = np.einsum("abcd,efgh->aebfcgdh", out, t)
        shp = out.shape
        out = out.reshape(shp[0] * shp[1], shp[2] * shp[3], shp[4] * shp[5], shp[6] * shp[7])
    inp = Alphabet(ch.input.size ** n, ch.input.label)
    outs = tuple(Alphabet(a.size ** n, a.label) for a in ch.outputs)
    return BroadcastChannel(inp, outs, out)


def load_channel(path) -> BroadcastChannel:
    """Parse a channel spec file.

    Expected fields: ``alphabets: {X: n, Y1: n, Y2: n, Z: n}`` and
    ``transitions: nested array [x][y1][y2][z]``.
    """
    with open(path) as fh:
        doc = yaml.safe_load(fh)
    if not isinstance(doc, dict):
        raise ValidationError(f"channel file {path}: expected a mapping at top level")
    for key in ("alphabets", "transitions"):
        if key not in doc:
            raise ValidationError(f"channel file {path}: missing field {key!r}")
    sizes = doc["alphabets"]
    for lbl in ("X", "Y1", "Y2", "Z"):
        if lbl not in sizes:
            raise ValidationError(f"channel file {path}: alphabets missing {lbl!r}")
    ch = BroadcastChannel(
        Alphabet(int(sizes["X"]), "X"),
        (Alphabet(int(sizes["Y1"]), "Y1"),
         Alphabet(int(sizes["Y2"]), "Y2"),
         Alphabet(int(sizes["Z"]), "Z")),
        np.asarray(doc["transitions"], dtype=float),
    )
    return ch


def save_channel(ch: BroadcastChannel, path) -> None:
    doc = {
        "alphabets": {"X": ch.input.size, "Y1": ch.outputs[0].size,
                      "Y2": ch.outputs[1].size, "Z": ch.outputs[2].size},
        "transitions": ch.transitions.tolist(),
    }
    with open(path, "w") as fh:
        yaml.safe_dump(doc, fh, default_flow_style=None)


def channel_from_marginals(q_y1, q_y2, q_z) -> BroadcastChannel:
    """Build a channel whose outputs are conditionally independent given the input.

    Each argument is a (|X|, |Y|) stochastic matrix; all must share |X|.
    """
    q_y1 = np.asarray(q_y1, float)
    q_y2 = np.asarray(q_y2, float)
    q_z = np.asarray(q_z, float)
    nx = q_y1.shape[0]
    if q_y2.shape[0] != nx or q_z.shape[0] != nx:
        raise ValidationError("marginal matrices disagree on the input alphabet size")
    t = np.einsum("xa,xb,xc->xabc", q_y1, q_y2, q_z)
    return BroadcastChannel(
        Alphabet(nx, "X"),
        (Alphabet(q_y1.shape[1], "Y1"), Alphabet(q_y2.shape[1], "Y2"), Alphabet(q_z.shape[1], "Z")),
        t,
    )


def bsc_matrix(p: float) -> np.ndarray:
    """Binary symmetric channel transition matrix with crossover probability p."""
    return np.array([[1 - p, p], [p, 1 - p]])


def bsc_triple(p1: float, p2: float, pz: float) -> BroadcastChannel:
    """Broadcast channel whose three output marginals are BSCs."""
    return channel_from_marginals(bsc_matrix(p1), bsc_matrix(p2), bsc_matrix(pz))
