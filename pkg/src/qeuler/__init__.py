"""q-deformed Euler distribution toolkit.

q-calculus primitives, basic hypergeometric series, Wall polynomials, the
generalized Euler photon-counting distribution (PMF, generating function,
moments, sampling) and the Mandel-parameter regime classifier.
"""

from .errors import (
    DivergenceError,
    DomainError,
    NonConvergenceError,
    PoleError,
    RootNotInIntervalError,
    ZeroDenominatorError,
)
from .gen_euler import (
    GenEulerParams,
    PmfTable,
    SampleStream,
    cdf,
    coefficient,
    mandel_q,
    mean,
    moments_bruteforce,
    normalization,
    pgf,
    pgf_bruteforce,
    pgf_classical_limit,
    pgf_head_cancellation,
    pmf,
    pmf_classical_limit,
    pmf_table,
    quantile,
    sample,
    variance,
)
from .hypergeom import (
    QPower,
    SeriesSpec,
    f_rs,
    heine_transform_residual,
    laguerre_poly,
    phi_rs,
    q_hermite_2d,
    wall_poly,
    wall_poly_scaled,
    wall_reflection_residual,
)
from .qcalc import (
    DEFAULT_POLICY,
    E_q,
    TruncationPolicy,
    e_q,
    q_binomial,
    q_binomial_general,
    q_factorial,
    q_number,
    q_pochhammer,
    q_pochhammer_infinite,
    q_pochhammer_real_order,
)
from .regime import (
    CubicCoeffs,
    Q_CRITICAL,
    Regime,
    RegimeInterval,
    RegimeReport,
    cardano_discriminant,
    classify,
    classify_from_moments,
    cubic_delta,
    lambda_roots,
    m_threshold,
    report,
    sign_poly,
    sign_poly_discriminant,
    threshold_root,
)

__version__ = "0.1.0"
