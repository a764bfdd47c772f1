"""Exact computation in one-sided topological Markov shifts.

The library represents shift spaces by validated 0/1 transition matrices,
continuous integer functions as finite-depth step functions, full-group
elements as prefix-exchange tables, and orbit-equivalence homeomorphisms as
coder/table chains.  All arithmetic is exact; decision procedures return
explicit certificates.
"""

from .errors import ShiftGroupsError
from .sft_core import (
    EpPoint,
    FlowInvariants,
    SftSpec,
    Word,
    enumerate_words,
    flow_invariants,
    make_point,
    parse_point,
    shift_point,
    validate_matrix,
)
from .step_functions import (
    CoboundaryCertificate,
    Outcome,
    StepFunction,
    compose_shift,
    constant,
    evaluate,
    is_sigma_coboundary,
    make_step_function,
    orbit_sum,
)
from .full_group import (
    KldData,
    TableHomeo,
    apply,
    cocycle_data,
    compose,
    compose_cocycle_data,
    gen_swap,
    generator_family,
    identity,
    invert,
    sample_element,
    validate_table,
)
from .cocycle_lab import (
    MembershipResult,
    RhoTable,
    ZeroProbeResult,
    delta,
    one_b,
    psi_tau,
    rho,
    subgroup_membership,
    zero_probe,
)
from .orbit_equiv import (
    CocycleTables,
    CoderStage,
    CoeWitness,
    GammaScoeResult,
    ScoeCertificate,
    TableStage,
    apply_witness,
    construct_eventual_conjugacy,
    derive_cocycles,
    gamma_scoe_verify,
    identity_witness,
    noncommuting_witness,
    phi_h_rho,
    psi_h,
    scoe_solve,
    self_witness,
    transport,
    validate_witness,
    verify_eventual_conjugacy,
    xi_h,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
