"""Central tolerance policy.

All structural and reconstruction tolerances used across the library live
here so they can be tuned in one place (or swapped wholesale via a profile).
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # absolute tolerance for structural invariants (trace one, hermiticity, ...)
    structural_abs: float = 1e-10
    # relative tolerance for reconstructions (V L V^† vs input, ...)
    reconstruction_rel: float = 1e-9
    # eigenvalues in [-psd_slack, 0] are treated as zero; below is an error
    psd_slack: float = 1e-10
    # minimum eigenvalue for a state to count as faithful / invertible
    faithful_min_eig: float = 1e-12
    # eigenvalue cut used when projecting onto the support of a state
    support_cut: float = 1e-12
    # singular values below this are dropped when orthonormalizing spans
    rank_cut: float = 1e-10


STRICT = Tolerances()

# lattice profile: quadrature / discretization noise is larger than pure
# linear-algebra round-off, so structural checks get more slack
LATTICE = replace(STRICT, structural_abs=1e-8, psd_slack=1e-8)

PROFILES = {"strict": STRICT, "lattice": LATTICE}

DEFAULT = STRICT
