"""Pick functions on the upper half-plane: representing measures, Moebius transforms, inversion and certificates."""

from .cayley import DiskMeasure, boundary_param, disk_to_halfplane, halfplane_to_disk, transfer_disk_measure
from .errors import (
    CriticalPointFailure,
    DegenerateImage,
    HerglotzError,
    NoConvergence,
    NonConvergentQuadrature,
    NotEndomatrix,
    NotRealAutomatrix,
    NotUnboundedCase,
    PoleInUpperHalfPlane,
    RootFindingFailure,
    ViolationDetected,
)
from .evaluation import eval_atomic, eval_composed, evaluate, normalisation_defect
from .inversion import (
    BoundarySupportEstimate,
    StoltzSector,
    atom_mass_at,
    density_at,
    mass_at_infinity,
    stoltz_verify,
    support_estimate,
)
from .moebius import (
    ContactCircle,
    ContactDecomposition,
    ContactLine,
    Endomatrix,
    Matrix2C,
    NonContact,
    RealOrbit,
    apply,
    classify,
    contact_decompose,
    contact_degree,
    is_endomatrix,
    is_unbounded,
    left_translate,
)
from .positivity import affine_check, linear_fractional_check, localized_positivity_check, quadratic_form_check
from .rational import (
    EndofunctionCertificate,
    PartialFractionForm,
    RationalFunction,
    check_nonreal_rational,
    check_rational,
    check_real_rational,
    partial_fractions,
)
from .representation import (
    INF,
    BoundaryMeasure,
    GridDensity,
    HerglotzFunction,
    MixtureDensity,
    RationalDensity,
    extend,
    integrate,
)
from .transform import KernelFamily, markov_apply, mu_family, pushforward_real, semigroup_check, transform_measure

__version__ = "0.1.0"
