"""Exact apolarity calculus, power-sum certificates and Waring ranks."""
from .apolarity import (
    BiForm,
    CatalecticantMap,
    apolar_component,
    apolar_pair,
    biform,
    catalecticant,
    conjugacy,
    is_nondegenerate,
    polar_quadric,
    polarize,
)
from .decompose import (
    BinaryDecomposition,
    NumericWaring,
    SylvesterDecomposer,
    SylvesterObstruction,
    numeric_waring,
    sylvester_binary,
)
from .duality import (
    DualPair,
    PowerSumCertificate,
    conjugate_tuple_check,
    dual_form,
    power_sum_synthesize,
    verify_dual_pair,
    vsp_certify,
)
from .exactla import RationalMatrix
from .forms import Form, Variance, add, evaluate, format_form, multiply, parse, power, scale
from .lattice import SurfaceClass, surface_invariants
from .secants import ah_table, expected_dim_vsp, expected_rank, terracini_dim

__version__ = "0.1.0"
