"""Maxmin E-k-SAT reconfiguration toolkit.

Transform one satisfying assignment of an E-k CNF formula into another, one
variable flip at a time, keeping the fraction of satisfied clauses as high as
possible along the way.  The package provides exact optima on small
instances, a derandomized rounding algorithm with a per-width guarantee,
gap-preserving gadget reductions with machine-checked witnesses, and a finite
model of randomized verifiers with exact acceptance probabilities.
"""

from .approx import (
    RoundingPlan,
    derandomize,
    expected_sequence_value,
    plan_sequence,
    randomized_round,
    sample_plan,
)
from .bounds import (
    EndpointCase,
    approximation_factor,
    binom_sum,
    binom_sum_closed,
    closed_form_bound,
    factor_table,
    guarantee_floor,
)
from .errors import CapExceededError, EksrError, ParseError
from .exact import HypercubeSearch, OptResult, opt_exact, reachable_at_threshold
from .formulas import (
    Assignment,
    Clause,
    Formula,
    Instance,
    MixedFormula,
    Rational,
    ReconfSequence,
    SequenceReport,
    check_sequence,
    clause_satisfied,
    count_satisfied,
    diff_vars,
    irredundant_sequences,
    seq_value,
    value,
)
from .generate import PlantedGenerator, gen_random_instance
from .io import load_instance, parse_instance, save_instance, serialize_instance
from .reductions import (
    ReductionOutput,
    build_witness,
    reduce_horn_emulation,
    reduce_np_gadget,
    reduce_pad,
    reduce_width,
)
from .survival import PhaseState, clause_survival_given_rho, phase_states, phase_survival
from .verifiers import (
    VerifierAtom,
    VerifierParams,
    VerifierSpec,
    acceptance_probability,
    cnf_from_or_verifier,
    horn_rejection_curve,
    lambda_zero,
    make_all_one,
    make_clause_verifier,
    make_combined,
    make_horn,
    make_or_emulator,
    make_overview_horn,
    query_probability,
    rejecting_mass,
    spec_from_json,
    spec_to_json,
)

__version__ = "0.1.0"
