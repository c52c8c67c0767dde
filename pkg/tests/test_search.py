import math

import numpy as np
import pytest

from wtbc.ordering import _mi_batch
from wtbc.probability import (Alphabet, BroadcastChannel, CapacityError,
                              Distribution, ValidationError, bsc_matrix,
                              bsc_triple, channel_from_marginals, compose)
from wtbc.regions import membership
from wtbc.search import (BoundaryPoint, ChainSpec, boundary_point,
                         cardinality_cap, chain_labels, count_factorizations,
                         enumerate_factorizations, evaluate_symbol,
                         evaluate_symbols, inner_region, weight_fan)

TRIPLE = bsc_triple(0.1, 0.2, 0.3)


def h2(p):
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def test_chain_labels_per_template():
    assert chain_labels("thm1") == ("U",)
    assert chain_labels("thm5") == ("U", "V")
    assert chain_labels("thm3_joint") == ()
    assert chain_labels("prop1_region") == ("U", "V0", "V1", "V2")
    assert chain_labels("prop2_raw") == ("U", "Vx", "V0", "V1", "V2")


def test_cardinality_caps():
    assert cardinality_cap("U", 2, "thm1") == 4
    assert cardinality_cap("U", 2) == 5
    assert cardinality_cap("V", 2) == 15
    spec = ChainSpec(("U",), (5,), bound_rule="thm1")
    with pytest.raises(ValidationError):
        spec.validate_caps(2)


def test_trivial_chain_reduces_to_input_grid():
    spec = ChainSpec.for_template("thm1", (1,), bound_rule="thm1")
    js = list(enumerate_factorizations(spec, 2, 1 / 4))
    assert len(js) == 5  # the five points of the binary simplex at step 1/4
    assert js[0].labels == ("U", "X")


def test_grid_step_one_gives_deterministic_factorizations():
    spec = ChainSpec.for_template("thm1", (2,), bound_rule="thm1")
    js = list(enumerate_factorizations(spec, 2, 1.0))
    # vertices only: 2 choices for Q(u) x 2^2 deterministic rows of Q(x|u)
    assert len(js) == 8
    for j in js:
        assert np.all(np.isin(j.probs, [0.0, 1.0]))


def test_all_factorizations_are_valid_joints():
    spec = ChainSpec.for_template("thm1", (2,), bound_rule="thm1")
    for j in enumerate_factorizations(spec, 2, 1 / 8):
        p = j.probs
        assert p.min() >= -1e-9
        assert abs(p.sum() - 1.0) <= 1e-9


def test_budget_refusal_names_count():
    spec = ChainSpec.for_template("prop1_region", (2, 2, 2, 2))
    with pytest.raises(CapacityError) as e:
        list(enumerate_factorizations(spec, 2, 1 / 16))
    assert "budget" in str(e.value)
    assert count_factorizations(spec, 2, 1 / 16) > 10 ** 6


def test_symbol_evaluation_against_direct_computation():
    d = Distribution(Alphabet(2, "X"), np.array([0.5, 0.5]))
    j = compose(d, TRIPLE)
    assert evaluate_symbol(j, "I(X;Y1)") == pytest.approx(1 - h2(0.1), abs=1e-12)
    assert evaluate_symbol(j, "I(X;Y1|Z)") >= 0
    vals = evaluate_symbols(j, ["I(X;Y1)", "I(X;Z)"])
    assert set(vals) == {"I(X;Y1)", "I(X;Z)"}
    with pytest.raises(ValidationError):
        evaluate_symbol(j, "I(Q;Y1)")
    with pytest.raises(ValidationError):
        evaluate_symbol(j, "H(X)")


def test_two_character_labels_tokenize_before_single():
    spec = ChainSpec.for_template("prop1_region", (1, 1, 2, 2))
    j = next(iter(enumerate_factorizations(spec, 2, 1.0)))
    full = compose(j, TRIPLE)
    # V0V1 must parse as [V0, V1], not fail on single-character V
    assert evaluate_symbol(full, "I(V0V1;Y1|U)") >= 0
    assert evaluate_symbol(full, "I(V1;V2|V0)") >= 0


def test_boundary_point_thm5_r1_direction():
    spec = ChainSpec.for_template("thm5", (1, 1))
    bp = boundary_point(TRIPLE, "thm5", {"R1": 1.0}, spec, grid_step=1 / 64)
    # independent 1-D oracle over the input bias grid
    grid = np.linspace(0, 1, 65)
    P = np.stack([grid, 1 - grid], axis=1)
    oracle = (_mi_batch(P, bsc_matrix(0.1)) - _mi_batch(P, bsc_matrix(0.3))).max()
    assert bp.value == pytest.approx(oracle, abs=1e-9)
    assert bp.value == pytest.approx(h2(0.3) - h2(0.1), abs=1e-3)


def test_boundary_point_self_membership():
    spec = ChainSpec.for_template("thm1", (2,), bound_rule="thm1")
    bp = boundary_point(TRIPLE, "thm1", {"Rc": 1.0, "R0": 0.5, "R1": 0.2, "R2": 0.2},
                        spec, grid_step=1 / 4)
    assert membership(bp.region, bp.rates, tol=1e-7)
    vals = evaluate_symbols(compose(bp.distribution, TRIPLE),
                            ["I(U;Z)", "I(X;Y1|U)"])
    assert all(v >= 0 for v in vals.values())


def test_boundary_point_monotone_in_grid():
    spec = ChainSpec.for_template("thm1", (2,), bound_rule="thm1")
    coarse = boundary_point(TRIPLE, "thm1", {"Rc": 1.0}, spec, grid_step=1 / 2)
    fine = boundary_point(TRIPLE, "thm1", {"Rc": 1.0}, spec, grid_step=1 / 4)
    assert fine.value >= coarse.value - 1e-9


def test_boundary_point_rc_capped_by_eavesdropper_capacity():
    spec = ChainSpec.for_template("thm1", (2,), bound_rule="thm1")
    bp = boundary_point(TRIPLE, "thm1", {"Rc": 1.0}, spec, grid_step=1 / 4)
    grid = np.linspace(0, 1, 257)
    P = np.stack([grid, 1 - grid], axis=1)
    assert bp.value <= _mi_batch(P, bsc_matrix(0.3)).max() + 1e-9


def test_boundary_point_zero_for_constant_eavesdropper():
    w1 = bsc_matrix(0.1)
    wz = np.array([[1.0, 0.0], [1.0, 0.0]])  # Z constant, carries nothing
    ch = channel_from_marginals(w1, w1, wz)
    spec = ChainSpec.for_template("thm1", (2,), bound_rule="thm1")
    bp = boundary_point(ch, "thm1", {"Rc": 1.0}, spec, grid_step=1 / 4)
    assert bp.value == pytest.approx(0.0, abs=1e-9)


def test_threads_do_not_change_result():
    spec = ChainSpec.for_template("thm1", (2,), bound_rule="thm1")
    a = boundary_point(TRIPLE, "thm1", {"Rc": 1.0, "R1": 1.0}, spec, grid_step=1 / 4)
    b = boundary_point(TRIPLE, "thm1", {"Rc": 1.0, "R1": 1.0}, spec, grid_step=1 / 4,
                       threads=4)
    assert a.value == b.value
    assert np.array_equal(a.distribution.probs, b.distribution.probs)


def test_weight_fan_structure():
    fan = weight_fan(4, 7, seed=0)
    assert len(fan) == 7
    assert np.allclose(fan[0], [1, 0, 0, 0])
    for w in fan:
        assert np.all(w >= 0)
    again = weight_fan(4, 7, seed=0)
    assert all(np.array_equal(a, b) for a, b in zip(fan, again))


def test_inner_region_degenerate_channel_is_origin():
    t = np.zeros((2, 2, 2, 2))
    t[:, 0, 0, 0] = 1.0
    ch = BroadcastChannel(Alphabet(2, "X"),
                          (Alphabet(2, "Y1"), Alphabet(2, "Y2"), Alphabet(2, "Z")), t)
    spec = ChainSpec.for_template("thm1", (1,), bound_rule="thm1")
    hull, points = inner_region(ch, "thm1", spec, weight_count=4, grid_step=1 / 2)
    assert membership(hull, {"Rc": 0, "R0": 0, "R1": 0, "R2": 0})
    assert not membership(hull, {"Rc": 0.01, "R0": 0, "R1": 0, "R2": 0})


def test_inner_region_contains_its_boundary_points():
    spec = ChainSpec.for_template("thm5", (1, 1))
    hull, points = inner_region(TRIPLE, "thm5", spec, weight_count=5, grid_step=1 / 8)
    assert len(points) == 5
    for bp in points:
        assert membership(hull, bp.rates, tol=1e-6)
    assert membership(hull, {"Rc": 0, "R0": 0, "R1": h2(0.3) - h2(0.1) - 1e-3, "R2": 0},
                      tol=1e-6)


def test_joint_region_inside_individual_at_matched_factorizations():
    rng = np.random.default_rng(11)
    from wtbc.regions import instantiate_template, region_subset, template_symbols
    t = rng.dirichlet(np.ones(8), size=2).reshape(2, 2, 2, 2)
    ch = BroadcastChannel(Alphabet(2, "X"),
                          (Alphabet(2, "Y1"), Alphabet(2, "Y2"), Alphabet(2, "Z")), t)
    spec = ChainSpec.for_template("thm6", (2,))
    count = 0
    for j in enumerate_factorizations(spec, 2, 1 / 2, restarts=10, seed=1):
        full = compose(j, ch)
        vals = evaluate_symbols(full, template_symbols("thm6"))
        vals5 = dict(vals)
        vals5["I(V;Y2|U)"] = vals["I(X;Y2|U)"]
        vals5["I(V;Z|U)"] = vals["I(X;Z|U)"]
        vals5["I(V;Y2)"] = vals["I(X;Y2)"]
        r5 = instantiate_template("thm5", vals5)
        r6 = instantiate_template("thm6", vals)
        ok, witness = region_subset(r5, r6, samples=50, seed=count)
        assert ok, witness
        count += 1
        if count >= 20:
            break
    assert count == 20
