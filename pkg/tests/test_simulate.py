import itertools

import numpy as np
import pytest

from wtbc.probability import (Alphabet, BroadcastChannel, CapacityError,
                              ValidationError, bsc_matrix,
                              channel_from_marginals)
from wtbc.simulate import (Codebook, MessageLayout, build_layered_wiretap_code,
                           build_xor_multicast_code, exact_error_probability,
                           exact_leakage, mc_error_probability, one_time_pad,
                           verify_secrecy_criterion, LeakageReport)

EYE = np.eye(2)
NOISELESS = channel_from_marginals(EYE, EYE, EYE)


def _distinct_xor_code(size=2, n=1, ch=NOISELESS):
    seed = 0
    while True:
        cb = build_xor_multicast_code(ch, n=n, size=size, seed=seed)
        if len({tuple(w) for w in cb.arrays["x"]}) == size:
            return cb
        seed += 1


SUPERPOSITION_CHAINS = {
    # v0 = v1 = v2 = x: a plain binary wiretap codebook
    "U": np.array([1.0]),
    "V0|U": np.array([[0.5, 0.5]]),
    "V1V2|V0": np.array([[[1.0, 0.0], [0.0, 0.0]],
                         [[0.0, 0.0], [0.0, 1.0]]]),
    "X|V1V2": np.array([[[1.0, 0.0], [0.5, 0.5]],
                        [[0.5, 0.5], [0.0, 1.0]]]),
}

WIRETAP_CH = channel_from_marginals(bsc_matrix(0.05), bsc_matrix(0.1), bsc_matrix(0.4))


def test_one_time_pad_identity_and_range():
    for m in range(5):
        assert one_time_pad(0, m, 5) == m
        assert one_time_pad(m, 0, 5) == m
    with pytest.raises(ValidationError):
        one_time_pad(5, 0, 5)
    with pytest.raises(ValidationError):
        one_time_pad(-1, 0, 5)


def test_one_time_pad_output_independent_of_each_input():
    # exhaustive over modulus 4 with both inputs uniform
    k = 4
    counts = np.zeros((k, k))
    for m1, m2 in itertools.product(range(k), range(k)):
        counts[one_time_pad(m1, m2, k), m1] += 1
    # every (output, m1) cell hit exactly once => I(Mx;M1) = 0
    assert np.all(counts == 1)


def test_layout_validation():
    with pytest.raises(ValidationError):
        MessageLayout(m0=0)
    with pytest.raises(ValidationError):
        MessageLayout(m12=2, m21=3)
    lay = MessageLayout(m1=4, m2=4, m11=2, m12=2, m21=2, m22=2)
    lay.check_individual_split()
    with pytest.raises(ValidationError):
        MessageLayout(m1=3, m11=2, m12=2, m21=2, m22=1, m2=2).check_individual_split()


def test_xor_code_noiseless_error_and_leakage():
    cb = _distinct_xor_code()
    assert exact_error_probability(cb, NOISELESS).value == 0.0
    rep = exact_leakage(cb, NOISELESS, "individual")
    q = rep.quantities
    assert q["I(M1;Z^n)"] == 0.0
    assert q["I(M2;Z^n)"] == 0.0
    assert q["I(M0M1M2;Z^n)"] == pytest.approx(1.0, abs=1e-12)
    assert q["I(Mxor;Z^n)"] == pytest.approx(1.0, abs=1e-12)
    assert q["I(M0;Z^n)+I(M1;Z^n)+I(M2;Z^n)"] == 0.0


def test_xor_code_individual_pass_joint_fail():
    cb = _distinct_xor_code()
    indiv = exact_leakage(cb, NOISELESS, "individual")
    assert all(verify_secrecy_criterion(indiv, 0.0).values())
    joint = exact_leakage(cb, NOISELESS, "joint")
    verdict = verify_secrecy_criterion(joint, 0.5)
    assert not verdict["I(M0M1M2;Z^n)"]


def test_useless_channel_error_is_three_quarters():
    t = np.full((2, 2, 2, 2), 1 / 8)
    ch = BroadcastChannel(Alphabet(2, "X"),
                          (Alphabet(2, "Y1"), Alphabet(2, "Y2"), Alphabet(2, "Z")), t)
    cb = build_xor_multicast_code(ch, n=1, size=2, seed=1)
    assert exact_error_probability(cb, ch).value == pytest.approx(0.75, abs=1e-12)
    # and its leakage vanishes: the output carries nothing
    rep = exact_leakage(cb, ch, "joint")
    assert max(rep.quantities.values()) <= 1e-12


def test_layered_chain_rule_identity():
    lay = MessageLayout(m0=2, mr=2)
    cb = build_layered_wiretap_code(WIRETAP_CH, 2, lay, SUPERPOSITION_CHAINS,
                                    scheme="joint", seed=4)
    q = exact_leakage(cb, WIRETAP_CH, "joint").quantities
    lhs = q["I(M0M1M2;Z^n)"]
    assert lhs == pytest.approx(q["I(M0M1;Z^n|M2)"] + q["I(M2;Z^n)"], abs=1e-9)
    assert lhs == pytest.approx(q["I(M0M2;Z^n|M1)"] + q["I(M1;Z^n)"], abs=1e-9)


def test_joint_quantity_below_sum_of_conditionals():
    for seed in range(4):
        lay = MessageLayout(m0=2, m1=2, mr=2)
        cb = build_layered_wiretap_code(WIRETAP_CH, 2, lay, SUPERPOSITION_CHAINS,
                                        scheme="joint", seed=seed)
        q = exact_leakage(cb, WIRETAP_CH, "joint").quantities
        assert q["I(M0M1M2;Z^n)"] <= (q["I(M0M1;Z^n|M2)"] + q["I(M0M2;Z^n|M1)"] + 1e-9)


def test_genie_property_independent_messages():
    lay = MessageLayout(m1=2, m2=2, m12=1, m21=1, m11=2, m22=2, mr=2)
    cb = build_layered_wiretap_code(WIRETAP_CH, 2, lay, SUPERPOSITION_CHAINS,
                                    scheme="joint", seed=5)
    from wtbc.simulate import message_eavesdropper_law
    from wtbc.probability import mutual_information, conditional_mutual_information
    j = message_eavesdropper_law(cb, WIRETAP_CH)
    # M1 independent of M2 by construction: I(M1;Zn,M2) = I(M1;Zn|M2)
    lhs = mutual_information(j, ["M1"], ["Zn", "M2"])
    rhs = conditional_mutual_information(j, ["M1"], ["Zn"], ["M2"])
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_leakage_capped_by_message_entropy():
    lay = MessageLayout(m0=2, m1=2, mr=2)
    cb = build_layered_wiretap_code(WIRETAP_CH, 2, lay, SUPERPOSITION_CHAINS,
                                    scheme="joint", seed=6)
    q = exact_leakage(cb, WIRETAP_CH, "joint").quantities
    assert -1e-9 <= q["I(M0;Z^n)"] <= 1.0 + 1e-9
    assert -1e-9 <= q["I(M0M1M2;Z^n)"] <= 2.0 + 1e-9


def test_randomization_reduces_leakage_median():
    diffs = []
    for seed in range(10):
        low = build_layered_wiretap_code(WIRETAP_CH, 3, MessageLayout(m0=2, mr=1),
                                         SUPERPOSITION_CHAINS, "joint", seed)
        high = build_layered_wiretap_code(WIRETAP_CH, 3, MessageLayout(m0=2, mr=4),
                                          SUPERPOSITION_CHAINS, "joint", seed)
        ql = exact_leakage(low, WIRETAP_CH, "joint").quantities["I(M0M1M2;Z^n)"]
        qh = exact_leakage(high, WIRETAP_CH, "joint").quantities["I(M0M1M2;Z^n)"]
        diffs.append(ql - qh)
    assert np.median(diffs) > 0


def test_individual_scheme_pad_layer():
    lay = MessageLayout(m1=2, m2=2, m11=1, m12=2, m21=2, m22=1, mr=1)
    chains = dict(SUPERPOSITION_CHAINS)
    del chains["V0|U"]
    chains["Vx|U"] = np.array([[0.5, 0.5]])
    chains["V0|Vx"] = np.eye(2)
    cb = build_layered_wiretap_code(WIRETAP_CH, 2, lay, chains,
                                    scheme="individual", seed=7)
    q = exact_leakage(cb, WIRETAP_CH, "individual").quantities
    # padded halves leak nothing individually even though the pad is decodable
    assert q["I(M1;Z^n)"] <= 1e-9
    assert q["I(M2;Z^n)"] <= 1e-9


def test_marton_single_candidate_pair():
    lay = MessageLayout(m0=2, mt1=1, mt2=1)
    cb = build_layered_wiretap_code(WIRETAP_CH, 2, lay, SUPERPOSITION_CHAINS,
                                    scheme="joint", seed=8)
    assert np.all(cb.arrays["sel"] == 0)


def test_mc_error_agrees_with_exact():
    rng = np.random.default_rng(12)
    disagreements = 0
    for k in range(8):
        t = rng.dirichlet(np.ones(8), size=2).reshape(2, 2, 2, 2)
        ch = BroadcastChannel(Alphabet(2, "X"),
                              (Alphabet(2, "Y1"), Alphabet(2, "Y2"), Alphabet(2, "Z")), t)
        cb = build_xor_multicast_code(ch, n=2, size=2, seed=k)
        exact = exact_error_probability(cb, ch).value
        mc = mc_error_probability(cb, ch, samples=300, seed=k)
        if abs(mc.value - exact) > 3 * max(mc.half_width, 0.03):
            disagreements += 1
    assert disagreements == 0


def test_mc_single_sample_is_binary():
    cb = _distinct_xor_code()
    r = mc_error_probability(cb, NOISELESS, samples=1, seed=0)
    assert r.value in (0.0, 1.0)


def test_mc_deterministic_given_seed():
    cb = _distinct_xor_code(ch=WIRETAP_CH, n=2)
    a = mc_error_probability(cb, WIRETAP_CH, samples=100, seed=3)
    b = mc_error_probability(cb, WIRETAP_CH, samples=100, seed=3)
    assert a.value == b.value


def test_leakage_budget_refusal():
    cb = _distinct_xor_code()
    big = build_xor_multicast_code(NOISELESS, n=1, size=2, seed=0)
    huge = Codebook("xor", 30, MessageLayout(m1=2, m2=2, m12=2, m21=2), 0,
                    big.arrays, big.chains)
    with pytest.raises(CapacityError):
        exact_leakage(huge, NOISELESS, "joint")


def test_verify_secrecy_all_zero_report():
    rep = LeakageReport("joint", {name: 0.0 for name in
                                  ("I(M0M1;Z^n|M2)", "I(M0M2;Z^n|M1)",
                                   "I(M0M1M2;Z^n)")}, "exact")
    assert all(verify_secrecy_criterion(rep, 0.01).values())
