"""Optimization of quantum error-correcting encodings and recoveries
for repeated uses of a noisy qubit channel."""

from .channels import (Channel, ChoiMatrix, amplitude_damping, apply,
                       channel_fidelity, compose, from_choi, identity_channel,
                       max_entangled_vector, tensor_power, to_choi)
from .codes import (Isometry, leung_encoder, partial_trace_recovery,
                    random_isometry, reversal_recovery, trivial_embedding)
from .optimizer import (FidelityOperator, HalfResult, SeesawResult,
                        SolveOptions, fidelity_operator_encoding,
                        fidelity_operator_recovery, optimize_encoding_isometric,
                        optimize_half, optimize_recovery_multistart,
                        oracle_optimize, quadratic_fidelity, random_cptp,
                        seesaw)
from .cli import (SweepConfig, SweepRecord, read_csv, run_sweep, write_csv,
                  write_svg_plot)

__all__ = [
    "Channel", "ChoiMatrix", "amplitude_damping", "apply", "channel_fidelity",
    "compose", "from_choi", "identity_channel", "max_entangled_vector",
    "tensor_power", "to_choi",
    "Isometry", "leung_encoder", "partial_trace_recovery", "random_isometry",
    "reversal_recovery", "trivial_embedding",
    "FidelityOperator", "HalfResult", "SeesawResult", "SolveOptions",
    "fidelity_operator_encoding", "fidelity_operator_recovery",
    "optimize_encoding_isometric", "optimize_half",
    "optimize_recovery_multistart", "oracle_optimize", "quadratic_fidelity",
    "random_cptp", "seesaw",
    "SweepConfig", "SweepRecord", "read_csv", "run_sweep", "write_csv",
    "write_svg_plot",
]

__version__ = "0.1.0"
