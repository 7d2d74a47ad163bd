"""Riemann-Lebesgue, Gould and Birkhoff-simple integration against non-additive set functions."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .ground import EpSet, GroundSpace, NatFunction, ep_cardinality, ep_combine, ep_extrema_of  # noqa: F401
from .interval import Interval, hausdorff, iv_seq_limits  # noqa: F401
from .partition import Partition, TaggedPartition, common_refinement, is_finer, refine_stream  # noqa: F401
from .setfunc import (  # noqa: F401
    AdditiveWeights,
    CardinalityRule,
    Distortion,
    Scaled,
    SumOf,
    Table,
    classify,
    find_atoms,
    semivariation,
    variation,
    variation_distance,
)
from .rl_integral import (  # noqa: F401
    birkhoff_simple_integrate,
    compare_integrals,
    gould_integrate,
    indefinite_integral,
    rl_integrate,
)
from .iv_integral import IvFunction, IvSetFunction, iv_atom_integral, iv_indefinite, iv_monotonicity_suite, iv_rl_integrate  # noqa: F401
from .analysis import SequenceSpec, check_inequality, is_rl_integrable_setfunction, run_convergence, seminorm_p  # noqa: F401
