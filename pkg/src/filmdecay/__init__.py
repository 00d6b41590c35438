"""Magnetic spin-flip and electric dipole-flip rates of an atom near a thin film."""
from .core import (
    CONSTANTS,
    OrientationWeights,
    PhysicalConstants,
    RateResult,
    ThermalEnvironment,
    TransitionKind,
    TransitionSpec,
    gamma0_electric,
    gamma0_magnetic,
    planck_occupation,
)
from .medium import (
    Drude,
    FixedEpsilon,
    PerfectConductor,
    TwoFluid,
    TwoFluidState,
    fresnel,
    permittivity,
    slab_coefficients,
    two_fluid_at_temperature,
)
from .quad import QuadratureConfig, QuadratureOutcome
from .rates import SlabGeometry, electric_integrals, magnetic_integrals, total_rate
from .limits import f_parallel, f_perpendicular, pc_rate_electric, pc_rate_magnetic

__version__ = "0.1.0"
