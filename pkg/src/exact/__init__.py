"""Exact arithmetic foundation: rationals, matrices, Hermite form and LP."""

from .linalg import HermiteForm, QMatrix, Rational, format_rational, hnf, to_rational
from .simplex import (
    CertificateKind,
    FarkasCertificate,
    LPInstance,
    LPSolution,
    LPStatus,
    MalformedInstanceError,
    Relation,
    check_certificate,
    solve_lp,
)

__all__ = [
    "CertificateKind",
    "FarkasCertificate",
    "HermiteForm",
    "LPInstance",
    "LPSolution",
    "LPStatus",
    "MalformedInstanceError",
    "QMatrix",
    "Rational",
    "Relation",
    "check_certificate",
    "format_rational",
    "hnf",
    "solve_lp",
    "to_rational",
]
