"""Two-component bivariate normal mixtures: pair geometry and modality.

The package classifies a pair of bivariate normal densities by the geometry
of the singular set of x -> (f1(x), f2(x)) (hyperbola with one cusp, two
intersecting lines, or a line of folds), computes the ridgeline and the root
structure of the associated q function, bounds the number of modes of every
mixture c f1 + (1 - c) f2, and counts modes directly with two independent
certified searches.
"""

from .classify import (
    DEFAULT_REL_TOL,
    CanonicalForm,
    ClassificationReport,
    ConicKind,
    CuspResult,
    PairType,
    SingularConic,
    canonical_pair,
    canonicalize,
    classify_pair,
    codirectionality_residual,
    conic_lambda,
    is_codirectional,
    is_proportional,
    locate_cusp,
    locate_cusp_detailed,
    pair_type,
    proportionality_residual,
    sample_singular_set,
    singular_conic,
    singular_set_branches,
    swap_canonical_axes,
)
from .config import PairConfig, config_to_mixture, load_config, parse_config, serialize_config
from .errors import (
    AlphaOutOfRange,
    BinormixError,
    EqualMeans,
    NewtonDivergence,
    NotPositiveDefinite,
    NotType1,
    NotType2Canonical,
    ParseError,
    ProportionalCovariances,
    SingularAffine,
    ValidationError,
)
from .gaussian import (
    Gaussian2D,
    GaussianPair,
    Mixture,
    density,
    jacobian_det_F,
    log_density,
    log_density_grad,
    log_gradient_cross,
    mixture_grad,
    mixture_hessian,
    mixture_value,
)
from .linalg2 import (
    Affine2,
    affine_apply,
    affine_compose,
    affine_inverse,
    cross2,
    identity_affine,
    is_spd,
    rotation,
    spd_inv_sqrt,
    spd_inverse,
    sym2,
    sym_eigen,
    vec2,
)
from .modes import (
    BoundReport,
    BoundViolationRecord,
    Mode,
    ModeReport,
    SearchConfig,
    SearchMethod,
    bounding_box,
    find_modes,
    grid_oracle_modes,
    random_spd,
    sample_pair,
    verify_bounds,
)
from .plotdata import PlotBundle, build_plot_bundle, write_plot_bundle
from .ridgeline import (
    ModalityBound,
    QPolynomial,
    QRoot,
    RidgeSample,
    det_s_alpha,
    modality_bound,
    p_of_alpha,
    q_numerator,
    q_of_alpha,
    q_roots_in_unit,
    real_roots_in_unit_interval,
    ridge_point,
    ridge_points,
    ridge_samples,
    s_alpha,
    type2_cubic,
)

__version__ = "0.1.0"
