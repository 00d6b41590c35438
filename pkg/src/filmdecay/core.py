"""
Physical constants, transition/orientation types, thermal occupation and
free-space flip rates.

Everything at this level is in SI units. Integrand-level code elsewhere only
sees the dimensionless groups kz, kH, k*lambda_L, k*delta and q.

Orientation inputs are *squared* matrix-element magnitudes. The scattering
Green tensor of a planar slab at coincident points is diagonal, so the
off-diagonal products S_j S_k* (j != k) never contribute to the rate.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import scipy.constants as sc

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "TransitionKind",
    "TransitionSpec",
    "OrientationWeights",
    "ThermalEnvironment",
    "planck_occupation",
    "gamma_bar_magnetic",
    "gamma_bar_electric",
    "gamma_bar",
    "gamma0_magnetic",
    "gamma0_electric",
    "RateResult",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA constants (via ``scipy.constants``).

    ``gS`` defaults to exactly 2; pass the CODATA electron g-factor
    magnitude if you want the anomalous-moment correction.
    """

    mu0: float = sc.mu_0
    hbar: float = sc.hbar
    kB: float = sc.k
    c: float = sc.c
    muB: float = sc.physical_constants["Bohr magneton"][0]
    gS: float = 2.0
    e: float = sc.e
    m_e: float = sc.m_e

    def __post_init__(self):
        for name in ("mu0", "hbar", "kB", "c", "muB", "gS", "e", "m_e"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"constant {name} must be finite and > 0, got {value!r}")


CONSTANTS = PhysicalConstants()


class TransitionKind(enum.Enum):
    MAGNETIC = "magnetic"
    ELECTRIC = "electric"


@dataclass(frozen=True)
class TransitionSpec:
    """A two-level transition at angular frequency ``omega`` (rad/s)."""

    omega: float
    kind: TransitionKind = TransitionKind.MAGNETIC
    constants: PhysicalConstants = CONSTANTS

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValueError(f"omega must be finite and > 0, got {self.omega!r}")
        if not isinstance(self.kind, TransitionKind):
            object.__setattr__(self, "kind", TransitionKind(self.kind))

    @classmethod
    def from_frequency(cls, freq, kind=TransitionKind.MAGNETIC, constants=CONSTANTS):
        """Build from an ordinary frequency in Hz."""
        return cls(2.0 * math.pi * freq, kind, constants)

    @property
    def k(self) -> float:
        """Vacuum wavenumber omega/c (1/m)."""
        return self.omega / self.constants.c

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi / self.k

    @property
    def frequency(self) -> float:
        return self.omega / (2.0 * math.pi)


@dataclass(frozen=True)
class OrientationWeights:
    """Squared matrix elements |S_j|^2 (magnetic) or |d_j|^2 in C^2 m^2 (electric)."""

    w_x: float
    w_y: float
    w_z: float

    def __post_init__(self):
        for name in ("w_x", "w_y", "w_z"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
        if not self.total > 0:
            raise ValueError("orientation weights must not all vanish")

    @property
    def parallel(self) -> float:
        """Weight of the two in-plane components, w_x + w_y."""
        return self.w_x + self.w_y

    @property
    def perpendicular(self) -> float:
        return self.w_z

    @property
    def total(self) -> float:
        return self.w_x + self.w_y + self.w_z


@dataclass(frozen=True)
class ThermalEnvironment:
    """Temperature (K) of the body, assumed in equilibrium with its surroundings."""

    T: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.T) and self.T >= 0):
            raise ValueError(f"temperature must be finite and >= 0, got {self.T!r}")


def planck_occupation(spec: TransitionSpec, env: ThermalEnvironment) -> float:
    """Mean thermal photon number 1/(exp(hbar*omega/kB*T) - 1).

    Exactly 0 at T = 0. ``expm1`` keeps the result accurate when
    hbar*omega << kB*T, which is the usual situation for RF spin flips.
    """
    if env.T == 0:
        return 0.0
    const = spec.constants
    x = const.hbar * spec.omega / (const.kB * env.T)
    if x > 700.0:
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def gamma_bar_magnetic(spec: TransitionSpec) -> float:
    """Orientation-stripped free-space spin-flip rate mu0 (muB gS)^2 k^3 / (3 pi hbar)."""
    const = spec.constants
    return const.mu0 * (const.muB * const.gS) ** 2 / (3.0 * math.pi * const.hbar) * spec.k**3


def gamma_bar_electric(spec: TransitionSpec) -> float:
    """Orientation-stripped free-space dipole-flip rate mu0 c^2 k^3 / (3 pi hbar), per C^2 m^2."""
    const = spec.constants
    return const.mu0 * const.c**2 / (3.0 * math.pi * const.hbar) * spec.k**3


def gamma_bar(spec: TransitionSpec) -> float:
    if spec.kind is TransitionKind.MAGNETIC:
        return gamma_bar_magnetic(spec)
    return gamma_bar_electric(spec)


def _require_kind(spec, kind):
    if spec.kind is not kind:
        raise ValueError(f"expected a {kind.value} transition, got {spec.kind.value}")


def gamma0_magnetic(spec: TransitionSpec, ori: OrientationWeights) -> float:
    """Free-space spin-flip rate (1/s). Its inverse is the free-space lifetime."""
    _require_kind(spec, TransitionKind.MAGNETIC)
    return gamma_bar_magnetic(spec) * ori.total


def gamma0_electric(spec: TransitionSpec, ori: OrientationWeights) -> float:
    """Free-space electric dipole-flip rate (1/s); ``ori`` weights in C^2 m^2."""
    _require_kind(spec, TransitionKind.ELECTRIC)
    return gamma_bar_electric(spec) * ori.total


@dataclass(frozen=True)
class RateResult:
    """A flip rate near the film.

    ``integral_par`` / ``integral_perp`` are the dimensionless orientation
    integrals (I for magnetic, J for electric transitions). ``quad_error``
    bounds the quadrature error of :attr:`ratio` (zero for closed forms).
    ``flags`` carries regime and convergence notes.
    """

    kind: TransitionKind
    gamma0: float
    slab_correction: float
    n_th: float
    total: float
    integral_par: float
    integral_perp: float
    quad_error: float = 0.0
    converged: bool = True
    flags: tuple = ()

    @property
    def ratio(self) -> float:
        """total / (gamma0 (n_th + 1)): the enhancement over free space."""
        return self.total / (self.gamma0 * (self.n_th + 1.0))

    @property
    def total_error(self) -> float:
        """Quadrature error bound on ``total`` in 1/s."""
        return self.quad_error * self.gamma0 * (self.n_th + 1.0)
