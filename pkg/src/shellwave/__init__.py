"""Pulsed-beam wavelets of a complex point source and their realizable shell sources.

Closed-form scalar and electromagnetic fields, smooth volume sources on
oblate spheroidal shells, extended Huygens sources, and a finite-difference
oracle that checks every closed-form density.
"""

from .errors import (
    ProfileRegularityError,
    QuadratureError,
    ShellwaveError,
    SingularEvaluationError,
    SingularLocusError,
    TimelikeConditionError,
    ValidationError,
)
from .geometry import (
    STANDARD,
    ComplexDistance,
    GeneralMembrane,
    LowerHemispheroid,
    Region,
    SourceConfig,
    SpheroidalPoint,
    StandardDisk,
    UpperHemispheroid,
    branch_distance,
    cartesian,
    classify_region,
    complex_distance,
    focal_distance,
    normal_field,
    spheroidal_coords,
)
from .hertz import (
    BoundSources,
    EMFieldSample,
    HertzPotential,
    bound_sources,
    em_fields,
    four_potential,
    polarization,
    real_fields,
)
from .huygens import (
    InterpolatedField,
    InterpolatedHertz,
    PlanarZone,
    PrescribedField,
    SpheroidalZone,
    TransitionalSources,
    ZoneFunction,
    ZoneTransition,
    hertz_interpolation,
    interpolate,
    magnetic_diagnostics,
    surface_limit,
    total_sources,
    transitional_sources,
)
from .oracle import ConvergenceReport, UniformGrid, convergence_order, fd_wave_operator, fd_wave_operator_grid
from .profiles import ArctanProfile, SmoothstepProfile, make_profile, quintic, septic
from .scenario import Scenario
from .shell import (
    RegularizedField,
    ShellSpec,
    regularized_field,
    regularized_jet,
    shell_source_density,
    shell_source_derivatives,
)
from .signals import (
    CauchySignal,
    DrivingSignal,
    FunctionSignal,
    TabulatedSignal,
    analytic_signal,
    analytic_signal_deriv,
    complex_time,
    smoothed_parts,
)
from .wavelets import (
    BranchWavelet,
    ExternalField,
    InternalField,
    Jet,
    JumpField,
    WaveletParams,
    external_field,
    internal_field,
    jump_field,
    wavelet,
)

__version__ = "0.1.0"
