"""Sharp gradient and distortion bounds for harmonic maps of the ball, verified numerically.

Möbius geometry of the ball, Poisson-kernel representations, sharp gradient
inequalities with their extremals, and Clifford/octonion Dirac operators.
"""

from ._kernels import backend
from .clifford import MultiVector, SingularElementError, mv_conj, mv_inverse, mv_mul, mv_norm
from .harmonic import (
    AtomicHarmonic,
    BoundaryData,
    ExtremalFunction,
    PoissonIntegral,
    SphereQuadrature,
    extremal_function,
    hemisphere_gradient_at_zero,
    hua_transform,
    poisson_grad,
    poisson_integral,
    poisson_kernel,
)
from .inequalities import (
    DimensionError,
    ball_volume,
    check_kalaj_vuorinen,
    check_liu_hyperbolic,
    check_liu_scalar,
    check_liu_vector,
    check_main_ball,
    check_main_sharp,
    gradient_constant,
    liu_constant,
    operator_norm,
    random_rotation,
)
from .mobius import bracket, geodesic, hyperbolic_metric, mobius_map, pseudo_metric
from .octonion import Octonion, oct_conj, oct_mul, oct_norm
from .report import CheckReport, PreconditionError

__version__ = "0.1.0"
