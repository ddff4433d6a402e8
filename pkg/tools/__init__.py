"""Pfaffians, identity checks, measures, the ε operator and the samplers."""

from tools.pfaffian import pf, pf_oracle, pf_minor_expansion
from tools.identities import check_det_commutation, check_rains, inverse_transpose
from tools.measures import build_measure, get_measure
from tools.epsilon import epsilon, skew_form, skew_gram
from tools.sampler import SeededStream, sample_goe, sample_ginibre_real, expected_real_count

__all__ = [
    "pf",
    "pf_oracle",
    "pf_minor_expansion",
    "check_det_commutation",
    "check_rains",
    "inverse_transpose",
    "build_measure",
    "get_measure",
    "epsilon",
    "skew_form",
    "skew_gram",
    "SeededStream",
    "sample_goe",
    "sample_ginibre_real",
    "expected_real_count",
]
