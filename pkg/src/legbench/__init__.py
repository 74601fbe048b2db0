"""legbench: a numerical workbench for Legendre-type oscillatory distributions.

Subpackages cover contact linear algebra, polynomial phase parametrizations,
blow-up charts, a Schwartz amplitude algebra closed under the Fourier
transform, dual-path oscillatory evaluation, the cutoff/Schwartz structure
decomposition, and a corner Taylor-coefficient classifier, tied together by a
scenario-running CLI.
"""

__version__ = "0.1.0"

from .amplitudes import (
    CutoffPrime,
    CutoffTransformAmplitude,
    HermiteGaussianSum,
    HermiteTerm,
    alpha,
    alpha_prime,
    schwartz_decay_report,
)
from .blowup import (
    Chart,
    ChartError,
    ChartPoint,
    XPoint,
    boundary_defining_functions,
    from_chart,
    smoothness_probe,
    to_chart,
    transition,
)
from .classify import (
    AsymptoticTable,
    ClassifyError,
    ClassifyGrid,
    check_membership,
    extract_coefficients,
    properness_witness,
)
from .contact import (
    ContactError,
    ContactPoint,
    SplittingData,
    TangentSubspace,
    TangentVector,
    annihilator_in_ker,
    contact_eval,
    dchi_pairing,
    intersect,
    is_legendre_subspace,
    transversal_coordinate_index,
    unit_vector,
)
from .decompose import (
    DecomposeError,
    Decomposition,
    decompose_converse,
    decompose_forward,
    reduce_ybar_dependence,
    type2_roundtrip,
)
from .evaluate import (
    EvalError,
    EvalReport,
    Fibred,
    GeneralIntersecting,
    Intersecting,
    Type1,
    Type2,
    eval_fibred,
    eval_general_direct,
    eval_general_reduced,
    eval_intersecting_direct,
    eval_intersecting_reduced,
    eval_type1,
    eval_type2,
    eval_type2_synthesis,
)
from .phases import (
    IntersectingPhase,
    ModelPhaseData,
    PhaseError,
    PhaseFunction,
    build_model_intersecting_phase,
    build_model_phase,
    induced_legendrian_sample,
    intersecting_nondeg_check,
    nondegeneracy_check,
    newton_critical_point,
    random_model_pair,
)
from .poly import Poly
