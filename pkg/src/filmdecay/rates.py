"""
Orientation integrals I (magnetic) and J (electric) for an atom at height z
above a film of thickness H, and the total flip rates built from them:

    Gamma = (Gamma0 + Gamma_slab) (n_th + 1)
    Gamma_slab = 2 Gamma_bar ((w_x + w_y) X_par + w_z X_perp),  X = I or J

with Gamma_bar the orientation-stripped free-space prefactor.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from . import limits, medium
from .core import (
    OrientationWeights,
    RateResult,
    ThermalEnvironment,
    TransitionKind,
    TransitionSpec,
    gamma_bar,
    planck_occupation,
)
from .quad import CoefficientKind, QuadratureConfig, Weight, integrate_slab_kernel

__all__ = [
    "SlabGeometry",
    "SlabIntegrals",
    "magnetic_integrals",
    "electric_integrals",
    "total_rate",
]


@dataclass(frozen=True)
class SlabGeometry:
    """Atom height ``z`` > 0 and film thickness ``H`` >= 0 (``math.inf`` allowed), in m."""

    z: float
    H: float = math.inf

    def __post_init__(self):
        if not (math.isfinite(self.z) and self.z > 0):
            raise ValueError(f"atom height z must be finite and > 0, got {self.z!r}")
        if not self.H >= 0:
            raise ValueError(f"thickness H must be >= 0 or inf, got {self.H!r}")

    @classmethod
    def from_dimensionless(cls, kz, kH, k):
        return cls(kz / k, kH / k if math.isfinite(kH) else math.inf)

    def scaled(self, k):
        """(kz, kH) for vacuum wavenumber ``k``."""
        return k * self.z, (k * self.H if math.isfinite(self.H) else math.inf)


@dataclass(frozen=True)
class SlabIntegrals:
    par: float
    perp: float
    par_error: float = 0.0
    perp_error: float = 0.0
    converged: bool = True

    def __iter__(self):
        yield self.par
        yield self.perp


def _integrals(par_kind, perp_kind, eps, kz, kH, cfg, swap):
    par = integrate_slab_kernel(par_kind, eps, kH, kz, Weight.Q1, cfg, swap=swap).scaled(3.0 / 8.0)
    perp = integrate_slab_kernel(perp_kind, eps, kH, kz, Weight.Q3, cfg, swap=swap).scaled(3.0 / 4.0)
    return SlabIntegrals(par.value, perp.value, par.error_estimate, perp.error_estimate,
                         par.converged and perp.converged)


def magnetic_integrals(eps, kz, kH=math.inf, cfg=QuadratureConfig(), *, swap=False) -> SlabIntegrals:
    """(I_par, I_perp) for permittivity ``eps`` at dimensionless height and thickness.

    I_par  = 3/8 Re int dq (q/eta0)   exp(2i eta0 kz) [C_N - eta0^2 C_M]
    I_perp = 3/4 Re int dq (q^3/eta0) exp(2i eta0 kz) C_M

    ``swap=True`` exchanges C_N and C_M everywhere.
    """
    return _integrals(CoefficientKind.N_MINUS_M, CoefficientKind.M, eps, kz, kH, cfg, swap)


def electric_integrals(eps, kz, kH=math.inf, cfg=QuadratureConfig()) -> SlabIntegrals:
    """(J_par, J_perp): the magnetic integrals with C_N and C_M in each other's place."""
    return _integrals(CoefficientKind.M_MINUS_N, CoefficientKind.N, eps, kz, kH, cfg, False)


def _free_result(spec, ori, env, flags=()):
    bar = gamma_bar(spec)
    n_th = planck_occupation(spec, env)
    g0 = bar * ori.total
    return RateResult(spec.kind, g0, 0.0, n_th, g0 * (n_th + 1.0), 0.0, 0.0, flags=tuple(flags))


def total_rate(
    spec: TransitionSpec,
    ori: OrientationWeights,
    model: medium.MediumModel,
    geo: SlabGeometry,
    env: ThermalEnvironment = ThermalEnvironment(),
    cfg: QuadratureConfig = QuadratureConfig(),
) -> RateResult:
    """Total spin-flip (magnetic) or dipole-flip (electric) rate.

    A :class:`~filmdecay.medium.PerfectConductor` film goes straight to the
    closed form; every other model is integrated numerically.
    """
    kz, kH = geo.scaled(spec.k)
    if kH == 0:
        return _free_result(spec, ori, env, ["no-film"])
    if isinstance(model, medium.PerfectConductor):
        pc = limits.pc_rate_magnetic if spec.kind is TransitionKind.MAGNETIC else limits.pc_rate_electric
        return pc(spec, ori, kz, env)

    eps = medium.permittivity(model, spec)
    if spec.kind is TransitionKind.MAGNETIC:
        ints = magnetic_integrals(eps, kz, kH, cfg)
    else:
        ints = electric_integrals(eps, kz, kH, cfg)

    bar = gamma_bar(spec)
    n_th = planck_occupation(spec, env)
    g0 = bar * ori.total
    slab = 2.0 * bar * (ori.parallel * ints.par + ori.perpendicular * ints.perp)
    quad_error = 2.0 * (ori.parallel * ints.par_error + ori.perpendicular * ints.perp_error) / ori.total
    flags = [] if ints.converged else ["quadrature-not-converged"]
    total = (g0 + slab) * (n_th + 1.0)
    if total < -quad_error * g0 * (n_th + 1.0):
        warnings.warn(f"negative total rate {total!r} beyond quadrature error", RuntimeWarning, stacklevel=2)
    return RateResult(
        kind=spec.kind,
        gamma0=g0,
        slab_correction=slab,
        n_th=n_th,
        total=total,
        integral_par=ints.par,
        integral_perp=ints.perp,
        quad_error=quad_error,
        converged=ints.converged,
        flags=tuple(flags),
    )
