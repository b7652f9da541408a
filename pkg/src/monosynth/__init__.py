"""monosynth: shallow monotone circuits for the addition threshold.

Build bounded-depth monotone majority circuits, depth-3 AND/OR/NOT
circuits, and reachability-based monotone circuits that decide whether k
row-encoded binary numbers sum to at least 2^N; sample the hard input
families the problem is measured against; and verify everything against
exact arithmetic oracles at enumerable sizes.
"""

from .addition import (
    EnumerationLimitError,
    EquivalenceReport,
    exhaustive_check,
    format_matrix,
    matrix_sum,
    overflow,
    parse_matrix,
)
from .ac0 import (
    LocalityError,
    reduce_to_two,
    restrict_rows,
    synth_depth3,
    three_to_two,
)
from .circuits import (
    Circuit,
    CircuitBuilder,
    Gate,
    Restriction,
    depth,
    evaluate,
    restrict,
    size,
    validate,
)
from .connectivity import build_graph, reaches, synth_connectivity
from .distributions import (
    AdvantageEstimate,
    DistParams,
    advantage_exact_level1,
    advantage_mc,
    expected_sum,
    sample_batch,
    strip_plain_frame,
    strip_primed_frame,
)
from .kernels import active_backend, eval_batch
from .majority import (
    Decomposition,
    SynthParams,
    carry_gate,
    combine_gate,
    direct_circuit,
    refine,
    size_report,
    synth_majority,
    theoretical_size_bound,
)
from .netlist import from_json, read_netlist, to_json, write_netlist

__version__ = "0.1.0"

__all__ = [
    "AdvantageEstimate",
    "Circuit",
    "CircuitBuilder",
    "Decomposition",
    "DistParams",
    "EnumerationLimitError",
    "EquivalenceReport",
    "Gate",
    "LocalityError",
    "Restriction",
    "SynthParams",
    "active_backend",
    "advantage_exact_level1",
    "advantage_mc",
    "build_graph",
    "carry_gate",
    "combine_gate",
    "depth",
    "direct_circuit",
    "eval_batch",
    "evaluate",
    "exhaustive_check",
    "expected_sum",
    "format_matrix",
    "from_json",
    "matrix_sum",
    "overflow",
    "parse_matrix",
    "reaches",
    "read_netlist",
    "reduce_to_two",
    "refine",
    "restrict",
    "restrict_rows",
    "sample_batch",
    "size",
    "size_report",
    "strip_plain_frame",
    "strip_primed_frame",
    "synth_connectivity",
    "synth_depth3",
    "synth_majority",
    "theoretical_size_bound",
    "three_to_two",
    "to_json",
    "validate",
    "write_netlist",
]
