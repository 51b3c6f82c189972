from sweepdecoder.sweep.automaton import FIRST, REGULAR, VARIANTS, SweepState, sweep_step
from sweepdecoder.sweep.causal import (
    DIRECTION_ORDER, OMEGA, AuditReport, CausalPoint, SweepContext, SweepDirection,
    allowed_directions, causal_diamond, causal_region, condition_audit, future, infimum,
    is_trailing, longest_chain, past, precedes, removal_potential, restrict, supremum,
    support_vertices, sweep_context, syndrome_distance, trailing_condition,
)
from sweepdecoder.sweep.rules import (
    RuleTable, build_rule_table, corrupt_rule_table, rule_table, verify_rule_table,
)
from sweepdecoder.sweep.checks import (
    SyndromeTrace, bulk_trace_failures, local_error, one_sided, trace_syndrome, witness_directions,
    witness_failures,
)
