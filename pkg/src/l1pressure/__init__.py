"""Finite-dimensional computations around diametral l1-pressure.

The package evaluates signed and unsigned pressure functionals on finite point
sets, certifies lower bounds with dual functionals and Gram spectra, and
studies orbits of nonexpansive affine maps.
"""

from .certificates import (
    DualCertificate,
    certificate_pipeline,
    coherence_phi_lower,
    coherence_report,
    mutual_coherence,
    solve_certificate,
    spectral_phi_lower,
    verify_certificate,
)
from .dynamics import MapSpec, fixed_point_affine, minimal_displacement, orbit, sample_hull
from .errors import PressureError
from .pressure import (
    PressureQuery,
    inner_signed_min,
    inner_unsigned_min,
    phi_k,
    phi_k_separated,
    pressure_P,
    psi_k,
)
from .replication import run_all, run_case
from .vectorspace import L1, L2, LINF, NormSpec, PointSet

__all__ = [
    "DualCertificate", "MapSpec", "NormSpec", "PointSet", "PressureError", "PressureQuery",
    "L1", "L2", "LINF",
    "certificate_pipeline", "coherence_phi_lower", "coherence_report", "fixed_point_affine",
    "inner_signed_min", "inner_unsigned_min", "minimal_displacement", "mutual_coherence",
    "orbit", "phi_k", "phi_k_separated", "pressure_P", "psi_k", "run_all", "run_case",
    "sample_hull", "solve_certificate", "spectral_phi_lower", "verify_certificate",
]
