"""Exact verification of the WZ-certificate proof of Jacobi's four-square theorem."""
from .fps import NotInvertibleError, TruncatedSeries, TruncationError
from .symrat import LaurentPoly, RationalFn
from .certlang import CertificateSet, bundled_certificates, load_certificates, parse
from .report import VerificationReport

__all__ = [
    "CertificateSet",
    "LaurentPoly",
    "NotInvertibleError",
    "RationalFn",
    "TruncatedSeries",
    "TruncationError",
    "VerificationReport",
    "bundled_certificates",
    "load_certificates",
    "parse",
]
