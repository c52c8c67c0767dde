"""Secrecy rate regions of the three-receiver wiretap broadcast channel
with degraded message sets and message cognition.

Submodules: probability (distributions and channels), ordering (degraded /
less-noisy / more-capable decision procedures), regions (rate polytopes,
Fourier-Motzkin projection, region templates), search (auxiliary-chain grid
search), simulate (toy-blocklength codes with exact leakage), cli.
"""

from .probability import (Alphabet, BroadcastChannel, Distribution,
                          JointDistribution, ValidationError, CapacityError,
                          entropy, mutual_information,
                          conditional_mutual_information, load_channel,
                          save_channel, bsc_triple)
from .ordering import OrderingReport, check_degraded, check_less_noisy, \
    check_more_capable, check_ordering
from .regions import (LinearInequality, RatePolytope, UnionRegion,
                      fme_eliminate, instantiate_template, membership,
                      polytope_equal, region_subset, template_names)
from .search import BoundaryPoint, ChainSpec, boundary_point, inner_region
from .simulate import (Codebook, ErrorReport, LeakageReport, MessageLayout,
                       build_layered_wiretap_code, build_xor_multicast_code,
                       exact_error_probability, exact_leakage,
                       mc_error_probability, one_time_pad,
                       verify_secrecy_criterion)

__version__ = "0.1.0"
