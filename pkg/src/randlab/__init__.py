"""randlab: exact-rational randomness tests on finite binary prefixes.

Everything is computed with arbitrary-precision rationals; every inequality
the package asserts is decided exactly, never within a tolerance.
"""

from .exact import INF, fmt, parse_rational
from .measures import (
    Bernoulli,
    DyadicMeasure,
    MeasureError,
    Mixture,
    Table,
    bernoulli_mass,
    block_frequency,
    count_upcrossings,
    point_mass,
    realize,
    shipped_measure_specs,
)
from .machines import (
    MachineError,
    MonotoneMachine,
    PrefixMachine,
    canonical_machine,
    canonical_monotone_machine,
    discrete_semimeasure,
    kp_of,
    monotone_output_prob,
    semimeasure_total,
    tiny_machine,
)
from .randtests import (
    CONVERT_AVG_BOUND,
    ExtendedTest,
    conditional_average,
    deficiency_profile,
    from_weights,
    martingale_check,
    min_extension,
    prob_bound_check,
    prob_to_avg_convert,
    validate_extended_test,
)
from .bernoulli import (
    CombinatorialTest,
    bernoulli_poly,
    certify_bernoulli_test,
    class_average,
    extend_by_monotonicity,
    hypergeom_prefix_prob,
    replacement_domination_check,
    validate_combinatorial_test,
)
from .poly import UnivariatePoly
from .coupling import (
    CapabilityError,
    CouplingWitness,
    enumerate_upper_sets,
    is_coupled_below,
    monotone_criterion_check,
    monotonize,
    pushdown_measure,
    sparsity_value,
)
from .separator import (
    SEPARATOR_NORMALIZER,
    chebyshev_tail_check,
    class_plus_separator,
    separator_value,
)
from .neutral import NeutralInvariantError, SpernerCell, mixture_deficiency, sperner_search

__version__ = "0.1.0"
