"""Mod-p Steenrod operation calculus over fields of characteristic p."""

from .fp_core import FpScalar, Prime, binom_mod_p, vp
from .char_classes import (
    RostNumber,
    TruncSeries,
    VirtualBundleSpec,
    degree_formula_check,
    rost_number,
    w_class,
)
from .dual_algebra import (
    BmuElement,
    CoactionElement,
    DualMonomial,
    bmu_coaction,
    bockstein_from_coaction,
    steenrod_from_coaction,
)
from .graded_modules import (
    ChowClass,
    ProjSpaceRing,
    QuadricClass,
    QuadricRing,
    act,
    degree,
    p_on_projspace,
    sq_on_quadric,
    total_power,
    total_sq,
    wu_oracle_sq_l,
)
from .qform_bounds import (
    WittChain,
    chain_sweep,
    hoffmann_feasible_i1,
    inq_allowed_dims,
    v2_chain_ok,
)
from .steenrod_ops import (
    Mode,
    ModeError,
    OpMonomial,
    ParseError,
    SteenrodElement,
    adem_reduce,
    adem_step,
    bidegree,
    cartan_expand,
    compose,
)

__version__ = "0.1.0"
