"""Exact diagonalization of the spin-1/2 J1-J2 Heisenberg ring with two-site discord and frustration measures."""
from .basis import ChainSpec, SzSectorBasis, enumerate_sector, popcount, translate
from .config import ConfigError, RunConfig
from .eigensolver import LowSpectrum, SpectrumLevel, assemble_low_spectrum, dense_eigh, lanczos_lowest
from .errors import ArgumentError, CapacityError, DomainError, NumericalError, StructureError
from .frustration import (
    FrustrationReport,
    exe_closed,
    exe_direct,
    frustration_lower_bound,
    frustration_measure,
    frustration_report,
    gmqd_from_frustration,
    total_frustration,
)
from .hamiltonian import SectorOperator, apply_h, build_dense, full_space_hamiltonian, sector_operator
from .measures import (
    DiscordResult,
    MeasurementBasis,
    classical_correlation,
    gmqd_general,
    gmqd_symmetric,
    gmqd_xstate,
    linear_entropy,
    mutual_information,
    quantum_discord,
    von_neumann_entropy,
)
from .reduced_state import BlochForm, CorrelatorSet, TwoSiteRDM, bloch_form, correlators, two_site_rdm
from .sweep import (
    CrossingReport,
    SweepRow,
    SweepTable,
    analytic_reference,
    detect_crossings,
    feynman_hellmann_correlators,
    run_sweep,
)

__version__ = "0.1.0"
