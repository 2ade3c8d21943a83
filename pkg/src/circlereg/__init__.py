"""Variational regularization of circle-valued signals and images.

Circle-valued data (phases, hues, orientations) are represented by their
lifted angles in [0, 2*pi).  Reconstruction minimizes a geodesic fidelity
term plus a mollified metric double-integral regularizer, a derivative-free
smoothness penalty whose scaling limits recover classical Sobolev
seminorms.
"""

from .energy import (
    FunctionalParams,
    KernelTable,
    build_kernel,
    fidelity,
    fractional_seminorm,
    functional_eval,
    param_change_inequality_check,
    regularizer,
)
from .field import TWO_PI, AngleField, GridSpec, Mask, canonicalize_angle, pair_distance
from .geometry import (
    CHORD,
    GEODESIC,
    Metric,
    chord_dist,
    geodesic_dist,
    lift_apply,
    signed_wrap,
)
from .images import (
    extract_hue,
    load_angle_image,
    load_mask,
    load_signal_csv,
    render_hsv,
    save_angle_image,
    save_signal_csv,
)
from .mollifier import MollifierSpec, cutoff_radius, mollifier_eval, tail_mass, total_mass
from .pipeline import (
    ForwardOp,
    NoiseSpec,
    RunReport,
    add_noise,
    denoise,
    inpaint,
    make_rainbow,
    tv_denoise,
    tv_inpaint,
    wrapped_rmse,
)
from .solver import DescentConfig, NumericalError, default_step_size, descend, gradient
from .study import (
    alpha_rule_admissible,
    bbm_constant,
    bbm_limit_study,
    conjecture_study,
    convergence_study,
    poincare_ratio,
    poincare_ratio_study,
    roughness_test_signal,
)

__version__ = "0.1.0"
