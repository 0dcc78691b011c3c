"""Strength certificates, exact oracles and constructive bounds."""

from .brute import BruteForceResult, brute_force_strength
from .certificate import (
    CertTerm,
    StrengthCertificate,
    check_term,
    map_certificate,
    require_verified,
    verify_certificate,
)
from .constructions import (
    LeibnizResult,
    chop,
    leibniz_reduce,
    smallest_slot,
    trivial_bound,
    trivial_certificate,
)
from .quadratic import DegreeTwoReport, degree_two_strength, gram_matrix

__all__ = [
    "BruteForceResult", "brute_force_strength", "CertTerm", "StrengthCertificate", "check_term",
    "map_certificate", "require_verified", "verify_certificate", "LeibnizResult", "chop",
    "leibniz_reduce", "smallest_slot", "trivial_bound", "trivial_certificate", "DegreeTwoReport",
    "degree_two_strength", "gram_matrix",
]
