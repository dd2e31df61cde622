"""Communication-free, self-interested allocation of coalition value
calculations via binary necklaces, plus a DCVC baseline, brute-force
verification and a timing harness."""
from .allocation import (
    AgentAllocation,
    Coalition,
    Designation,
    allocation_counts,
    gen_coalition,
    kappa,
    ndca_allocate,
    vbfr_allocate,
)
from .dcvc import IndexOverflowError, coalition_at_index, dcvc_allocate, predecessor
from .increment_array import PeriodInfo, gen_inc_array, ia_to_necklace, period
from .necklace import count_fixed_density_necklaces, count_necklaces, fkm
from .verify import VerificationReport, check_allocation_properties

__all__ = [
    "AgentAllocation",
    "Coalition",
    "Designation",
    "IndexOverflowError",
    "PeriodInfo",
    "VerificationReport",
    "allocation_counts",
    "check_allocation_properties",
    "coalition_at_index",
    "count_fixed_density_necklaces",
    "count_necklaces",
    "dcvc_allocate",
    "fkm",
    "gen_coalition",
    "gen_inc_array",
    "ia_to_necklace",
    "kappa",
    "ndca_allocate",
    "period",
    "predecessor",
    "vbfr_allocate",
]
