"""
Closed-form limits of the film rates.

The perfect-conductor forms hold when either lambda_L << delta, H, lambda
(superconductor) or delta << lambda_L, H, lambda, z (good normal metal);
in both cases C_N -> 1 and C_M -> -1 and the q-integrals close. They are
exact for lambda_L -> 0 or delta -> 0 at any kz, and serve as fast paths and
as oracles for the quadrature.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    OrientationWeights,
    RateResult,
    ThermalEnvironment,
    TransitionKind,
    TransitionSpec,
    gamma_bar,
    planck_occupation,
)

__all__ = [
    "SERIES_SWITCH",
    "LimitRegime",
    "Validity",
    "RegimeWarning",
    "f_parallel",
    "f_perpendicular",
    "pc_factors",
    "pc_rate_magnetic",
    "pc_rate_electric",
    "near_field_ratio",
    "small_thickness_corrections",
    "small_thickness_rate_magnetic",
    "perfect_conductor_validity",
    "skin_depth_validity",
    "small_thickness_validity",
]

# below x = 2kz = SERIES_SWITCH the f-functions use their Taylor series; the
# direct formulas lose ~3e-16/x^2 relative precision to cancellation
SERIES_SWITCH = 0.1
_NTERMS = 9
# f_perp(x) = sum_n c_n x^(2n), c_n = (-1)^(n+1) (2n+2)/(2n+3)!
_C_PERP = np.array([(-1) ** (n + 1) * (2 * n + 2) / math.factorial(2 * n + 3) for n in range(_NTERMS)])
# f_par(x) = sum_m c_m x^(2m), c_m = (-1)^m [1/(2m+1)! - (2m+2)/(2m+3)!]
_C_PAR = np.array(
    [(-1) ** m * (1 / math.factorial(2 * m + 1) - (2 * m + 2) / math.factorial(2 * m + 3)) for m in range(_NTERMS)]
)


class RegimeWarning(UserWarning):
    pass


def _series(coef, x, start=0):
    # sum_{n >= start} coef[n] x^(2n), Horner in x^2
    x2 = x * x
    out = np.zeros_like(x2)
    for c in coef[start:][::-1]:
        out = out * x2 + c
    return out * x2**start


def _evaluate(kz, direct, coef, start=0, offset=0.0):
    kz = np.asarray(kz, dtype=float)
    if np.any(kz < 0):
        raise ValueError("kz must be >= 0")
    x = 2.0 * kz
    small = x < SERIES_SWITCH
    xs = np.where(small, x, SERIES_SWITCH)
    xd = np.where(small, 1.0, x)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(small, _series(coef, xs, start), direct(xd) + offset)
    return float(out) if out.ndim == 0 else out


def _fperp_direct(x):
    return (x * np.cos(x) - np.sin(x)) / x**3


def _fpar_direct(x):
    return np.sin(x) / x + _fperp_direct(x)


def f_perpendicular(kz):
    """(2kz cos 2kz - sin 2kz)/(2kz)^3; -1/3 at kz = 0."""
    return _evaluate(kz, _fperp_direct, _C_PERP)


def f_parallel(kz):
    """sin(2kz)/(2kz) + f_perpendicular(kz); 2/3 at kz = 0."""
    return _evaluate(kz, _fpar_direct, _C_PAR)


def pc_factors(kind, kz):
    """Rate ratios (parallel, perpendicular) for a perfectly reflecting film.

    Magnetic: 1 + (3/2) f_par and 1 + 3 f_perp. Electric: 1 - (3/2) f_par
    and 1 - 3 f_perp. The two combinations that vanish at kz = 0 are summed
    from their series without the cancelling constant.
    """
    kind = TransitionKind(kind)
    if kind is TransitionKind.MAGNETIC:
        par = 1.0 + 1.5 * np.asarray(f_parallel(kz))
        perp = _evaluate(kz, lambda x: 1.0 + 3.0 * _fperp_direct(x), 3.0 * _C_PERP, start=1)
    else:
        par = _evaluate(kz, lambda x: 1.0 - 1.5 * _fpar_direct(x), -1.5 * _C_PAR, start=1)
        perp = 1.0 - 3.0 * np.asarray(f_perpendicular(kz))
    return _as_scalar(par), _as_scalar(perp)


def _as_scalar(a):
    a = np.asarray(a, dtype=float)
    return float(a) if a.ndim == 0 else a


def _pc_rate(kind, spec, ori, kz, env):
    if spec.kind is not kind:
        raise ValueError(f"expected a {kind.value} transition, got {spec.kind.value}")
    if not kz >= 0:
        raise ValueError(f"kz must be >= 0, got {kz!r}")
    bar = gamma_bar(spec)
    n_th = planck_occupation(spec, env)
    par, perp = pc_factors(kind, kz)
    bracket = ori.parallel * par + ori.perpendicular * perp
    slab = bar * (ori.parallel * (par - 1.0) + ori.perpendicular * (perp - 1.0))
    return RateResult(
        kind=kind,
        gamma0=bar * ori.total,
        slab_correction=slab,
        n_th=n_th,
        total=bar * (n_th + 1.0) * bracket,
        integral_par=0.5 * (par - 1.0),
        integral_perp=0.5 * (perp - 1.0),
        flags=("closed-form:perfect-conductor",),
    )


def pc_rate_magnetic(spec: TransitionSpec, ori: OrientationWeights, kz, env=ThermalEnvironment()) -> RateResult:
    """Spin-flip rate above a perfectly reflecting film at height kz.

    Vanishes at kz = 0 for a spin perpendicular to the film.
    """
    return _pc_rate(TransitionKind.MAGNETIC, spec, ori, kz, env)


def pc_rate_electric(spec: TransitionSpec, ori: OrientationWeights, kz, env=ThermalEnvironment()) -> RateResult:
    """Electric dipole-flip rate above a perfectly reflecting film.

    The film correction has the opposite sign to the magnetic case; a dipole
    parallel to the film is fully suppressed at kz = 0.
    """
    return _pc_rate(TransitionKind.ELECTRIC, spec, ori, kz, env)


def near_field_ratio(kind, orientation_class, kz):
    """Leading near-field (kz << 1) rate ratio above a perfect conductor.

    ======== ============ ===============
    kind     orientation  ratio
    ======== ============ ===============
    magnetic parallel     2
    magnetic perpendicular (2kz)^2 / 10
    electric parallel     (2kz)^2 / 5
    electric perpendicular 2
    ======== ============ ===============
    """
    kind = TransitionKind(kind)
    if orientation_class not in ("parallel", "perpendicular"):
        raise ValueError(f"orientation_class must be 'parallel' or 'perpendicular', got {orientation_class!r}")
    if not kz >= 0:
        raise ValueError(f"kz must be >= 0, got {kz!r}")
    if kz >= 0.05:
        warnings.warn(f"near-field ratio used at kz = {kz:g}, outside kz << 1", RegimeWarning, stacklevel=2)
    x2 = (2.0 * kz) ** 2
    suppressed = (kind is TransitionKind.MAGNETIC) == (orientation_class == "perpendicular")
    if not suppressed:
        return 2.0
    return x2 / 10.0 if kind is TransitionKind.MAGNETIC else x2 / 5.0


class LimitRegime(enum.Enum):
    PERFECT_CONDUCTOR = "lambda_L << delta, H, lambda"
    SKIN_DEPTH = "delta << lambda_L, H, lambda, z"
    SMALL_THICKNESS = "H << delta^2/lambda_L, z, lambda_L"
    NEAR_FIELD = "kz << 1"


@dataclass(frozen=True)
class Validity:
    """Numerical check of the inequality chain behind a closed form.

    ``checks`` holds ``(description, small, large, satisfied)`` with
    ``satisfied = margin * small <= large``.
    """

    regime: LimitRegime
    margin: float
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c[3] for c in self.checks)

    @property
    def violations(self) -> tuple:
        return tuple(c[0] for c in self.checks if not c[3])


def _validity(regime, margin, pairs):
    return Validity(regime, margin, tuple((d, s, l, margin * s <= l) for d, s, l in pairs))


def perfect_conductor_validity(k_lambda_L, k_delta, kH, margin=10.0) -> Validity:
    return _validity(LimitRegime.PERFECT_CONDUCTOR, margin, [
        ("lambda_L << delta", k_lambda_L, k_delta),
        ("lambda_L << H", k_lambda_L, kH),
        ("lambda_L << lambda", k_lambda_L, 2.0 * math.pi),
    ])


def skin_depth_validity(k_delta, k_lambda_L, kH, kz, margin=10.0) -> Validity:
    return _validity(LimitRegime.SKIN_DEPTH, margin, [
        ("delta << lambda_L", k_delta, k_lambda_L),
        ("delta << H", k_delta, kH),
        ("delta << lambda", k_delta, 2.0 * math.pi),
        ("delta << z", k_delta, kz),
    ])


def small_thickness_validity(kH, k_delta, k_lambda_L, kz, margin=10.0) -> Validity:
    return _validity(LimitRegime.SMALL_THICKNESS, margin, [
        ("H << delta^2/lambda_L", kH, k_delta**2 / k_lambda_L),
        ("H << z", kH, kz),
        ("H << lambda_L", kH, k_lambda_L),
    ])


def small_thickness_corrections(k_delta, k_lambda_L, kH, kz):
    """Thin-film corrections to the rate ratio, (parallel, perpendicular).

    parallel      = 3/64 / (k delta)^2 / (k lambda_L) * (H/z)^2
    perpendicular = 3/64 * k lambda_L / (k delta)^2 * kH / (kz)^3
    """
    par = 3.0 / 64.0 / k_delta**2 / k_lambda_L * (kH / kz) ** 2
    perp = 3.0 / 64.0 * k_lambda_L / k_delta**2 * kH / kz**3
    return par, perp


def small_thickness_rate_magnetic(spec, ori, k_delta, k_lambdaL, kH, kz, env=ThermalEnvironment(), margin=10.0):
    """Spin-flip rate for a film much thinner than delta^2/lambda_L, z and lambda_L.

    A violated validity inequality is reported in ``flags`` (and warned
    about); the value is returned regardless.
    """
    if spec.kind is not TransitionKind.MAGNETIC:
        raise ValueError(f"expected a magnetic transition, got {spec.kind.value}")
    for name, val in (("k_delta", k_delta), ("k_lambdaL", k_lambdaL), ("kH", kH), ("kz", kz)):
        if not val > 0:
            raise ValueError(f"{name} must be > 0, got {val!r}")
    validity = small_thickness_validity(kH, k_delta, k_lambdaL, kz, margin)
    flags = ["closed-form:small-thickness"]
    if not validity.ok:
        flags += [f"regime-violated:{v}" for v in validity.violations]
        warnings.warn(
            "small-thickness expansion outside its validity: " + ", ".join(validity.violations),
            RegimeWarning,
            stacklevel=2,
        )
    bar = gamma_bar(spec)
    n_th = planck_occupation(spec, env)
    c_par, c_perp = small_thickness_corrections(k_delta, k_lambdaL, kH, kz)
    slab = bar * (ori.parallel * c_par + ori.perpendicular * c_perp)
    return RateResult(
        kind=TransitionKind.MAGNETIC,
        gamma0=bar * ori.total,
        slab_correction=slab,
        n_th=n_th,
        total=(bar * ori.total + slab) * (n_th + 1.0),
        integral_par=0.5 * c_par,
        integral_perp=0.5 * c_perp,
        flags=tuple(flags),
    )
