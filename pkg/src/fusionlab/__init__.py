"""Fusion algebras of compact quantum groups and their asymptotic invariants:
Følner constants, exponential growth rates and Kazhdan constants."""
from __future__ import annotations

__version__ = "0.1.0"

from .qarith import LaurentPoly, QContext, laurent_eval, qint_exact, qnum
from .fusion import (
    AxiomReport,
    CustomModelError,
    CyclicGroupModel,
    FormalSum,
    FragmentBoundaryError,
    FusionModel,
    ProductModel,
    load_custom,
    product,
    product_algebra,
    validate_axioms,
)
from .models import (
    SOModel,
    SUModel,
    UFModel,
    UFWord,
    o_plus_q,
    q_from_F,
    q_from_trace,
    so_param_from_N,
    so_product,
    su_product,
    uf_dim,
    uf_product,
)
from .metric import (
    BallTable,
    FolnerScan,
    GeneratingSet,
    boundary,
    build_balls,
    c_x_constant,
    folner_scan,
    generating_set,
    inner_boundary,
)
from .growth import (
    CubicSpec,
    GrowthEstimate,
    gamma_lower_bound,
    growth_from_balls,
    product_growth_check,
    uf_rate,
    uf_sphere_sizes,
)
from .lie import (
    DominantWeight,
    RootSystem,
    build_root_system,
    dim_sandwich_check,
    gamma,
    growth_for_set,
    quantum_dim,
    uniform_growth,
)
from .spectral import (
    KazhdanResult,
    chebyshev_p,
    kazhdan_closed_form,
    kazhdan_generator_bound,
    truncated_kazhdan_estimate,
)
