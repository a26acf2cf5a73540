"""Decay integrals of the majorant and the supersolution barrier."""

from .integrals import (
    Classification,
    IntegrabilityVerdict,
    check_integrability,
    compute_K,
    decay_profile,
    nested_decay_integral,
)

from .supersolution import (
    BarrierData,
    SupersolutionReport,
    barrier_height,
    compute_barrier,
    restrict_barrier,
    truncation_slack,
    verify_supersolution,
)
