"""
Dielectric models for the film and its single/double-interface scattering
coefficients.

Square roots follow one convention throughout: the branch with Im >= 0
(and Re >= 0 on the real axis). Evanescent vacuum waves then decay away from
the film and waves inside a lossy film decay into it.

Variables, all dimensionless:

    q      in-plane wavenumber in units of k
    eta0   sqrt(1 - q^2), normal wavenumber in vacuum
    eta    sqrt(eps - q^2), normal wavenumber inside the film
    kH     film thickness times k, ``math.inf`` for a half-space
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.optimize import brentq

from .core import TransitionSpec

__all__ = [
    "TwoFluid",
    "Drude",
    "PerfectConductor",
    "FixedEpsilon",
    "MediumModel",
    "TwoFluidState",
    "PerfectConductorError",
    "GuidedModeError",
    "SingularSlabError",
    "GapFrequencyWarning",
    "csqrt",
    "two_fluid_epsilon",
    "permittivity",
    "two_fluid_at_temperature",
    "fresnel",
    "slab_coefficients",
    "check_quadrature_permittivity",
    "SlabPole",
    "real_axis_poles",
]


class PerfectConductorError(ValueError):
    """A perfect conductor has no finite permittivity; use the closed forms in ``limits``."""


class GuidedModeError(ValueError):
    """Lossless eps > 1 puts guided-mode poles on the integration path."""


class SingularSlabError(ArithmeticError):
    """Slab denominator 1 - r^2 exp(2i eta kH) vanished."""


class GapFrequencyWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TwoFluid:
    """Two-fluid superconductor: London length and normal-electron skin depth (m).

    ``delta = inf`` means no normal electrons (T = 0).
    """

    lambda_L: float
    delta: float = math.inf
    gap_frequency: Optional[float] = None

    def __post_init__(self):
        if not self.lambda_L > 0:
            raise ValueError(f"lambda_L must be > 0, got {self.lambda_L!r}")
        if not self.delta > 0:
            raise ValueError(f"delta must be > 0, got {self.delta!r}")


@dataclass(frozen=True)
class Drude:
    """Normal metal described by its skin depth (m)."""

    delta: float
    gap_frequency: Optional[float] = None

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be > 0, got {self.delta!r}")


@dataclass(frozen=True)
class PerfectConductor:
    pass


@dataclass(frozen=True)
class FixedEpsilon:
    eps: complex
    gap_frequency: Optional[float] = None

    def __post_init__(self):
        eps = complex(self.eps)
        object.__setattr__(self, "eps", eps)
        if not (math.isfinite(eps.real) and math.isfinite(eps.imag)):
            raise ValueError(f"eps must be finite, got {eps!r}")
        if eps.imag < 0:
            raise ValueError(f"eps must be passive (Im eps >= 0), got {eps!r}")


MediumModel = Union[TwoFluid, Drude, PerfectConductor, FixedEpsilon]


@dataclass(frozen=True)
class TwoFluidState:
    """Inputs of the Gorter-Casimir two-fluid temperature dependence.

    ``delta_c`` is the skin depth with every electron normal, at the
    working frequency.
    """

    T: float
    Tc: float
    lambda_L0: float
    delta_c: float

    def __post_init__(self):
        if not self.T >= 0:
            raise ValueError(f"T must be >= 0, got {self.T!r}")
        for name in ("Tc", "lambda_L0", "delta_c"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)!r}")


def csqrt(z):
    """Complex square root on the branch Im >= 0 (Re >= 0 when real).

    Works on scalars and arrays. The sign of a zero imaginary part in the
    argument does not matter.
    """
    r = np.sqrt(np.asarray(z, dtype=complex))
    r = np.where(r.imag < 0, -r, r)
    if r.ndim == 0:
        return complex(r)
    return r


def two_fluid_epsilon(k_lambda_L, k_delta=math.inf):
    """eps = 1 - 1/(k lambda_L)^2 + 2i/(k delta)^2 from dimensionless lengths."""
    return complex(1.0 - 1.0 / k_lambda_L**2, 2.0 / k_delta**2)


def _check_gap(model, spec):
    omega_g = getattr(model, "gap_frequency", None)
    if omega_g is not None and spec.omega >= 0.1 * omega_g:
        warnings.warn(
            f"omega = {spec.omega:.4g} rad/s is not << gap frequency {omega_g:.4g} rad/s; "
            "the two-fluid permittivity may be inaccurate",
            GapFrequencyWarning,
            stacklevel=3,
        )


def permittivity(model: MediumModel, spec: TransitionSpec) -> complex:
    """Complex relative permittivity of ``model`` at the transition frequency."""
    if isinstance(model, PerfectConductor):
        raise PerfectConductorError(
            "a perfect conductor has no finite permittivity; use the closed form "
            "(filmdecay.limits.pc_rate_magnetic / pc_rate_electric)"
        )
    _check_gap(model, spec)
    k = spec.k
    if isinstance(model, TwoFluid):
        return two_fluid_epsilon(k * model.lambda_L, k * model.delta)
    if isinstance(model, Drude):
        return complex(1.0, 2.0 / (k * model.delta) ** 2)
    if isinstance(model, FixedEpsilon):
        return model.eps
    raise TypeError(f"unknown medium model {model!r}")


def two_fluid_at_temperature(state: TwoFluidState) -> MediumModel:
    """Gorter-Casimir two-fluid medium at temperature ``state.T``.

    Below Tc the superfluid fraction is 1 - (T/Tc)^4, so
    lambda_L = lambda_L0 / sqrt(1 - (T/Tc)^4) and delta = delta_c (Tc/T)^2.
    At and above Tc all electrons are normal and the film is a Drude metal
    with delta = delta_c.
    """
    t = state.T / state.Tc
    if t >= 1.0:
        return Drude(state.delta_c)
    if state.T == 0:
        return TwoFluid(state.lambda_L0, math.inf)
    lam = state.lambda_L0 / math.sqrt(1.0 - t**4)
    return TwoFluid(lam, state.delta_c / t**2)


def _etas(q, eps, eta0):
    if eta0 is None:
        q = np.asarray(q, dtype=float)
        eta0 = csqrt(1.0 - q * q)
        eta = csqrt(eps - q * q)
    else:
        eta0 = np.asarray(eta0, dtype=complex)
        # eps - q^2 written through eta0 avoids cancellation in 1 - q^2
        eta = csqrt(eps - 1.0 + eta0 * eta0)
    return eta0, eta


def fresnel(q, eps, eta0=None):
    """Single-interface reflection coefficients ``(r_s, r_p)``.

    ``eta0`` may be supplied instead of being recomputed from ``q``; the
    quadrature does this so that q near 1 keeps full relative precision.
    """
    eta0, eta = _etas(q, eps, eta0)
    if eps == 1:
        # no interface; also avoids 0/0 at grazing incidence q = 1
        zero = np.zeros_like(eta0)
        return (complex(zero), complex(zero)) if zero.ndim == 0 else (zero, zero.copy())
    r_s = (eta0 - eta) / (eta0 + eta)
    r_p = (eps * eta0 - eta) / (eps * eta0 + eta)
    return r_s, r_p


def slab_coefficients(q, eps, kH, eta0=None):
    """Film scattering coefficients ``(C_N, C_M)`` for p and s polarization.

    C = r (1 - e) / (1 - r^2 e) with e = exp(2i eta kH). ``kH = inf`` gives
    the half-space values (r_p, r_s) exactly and ``kH = 0`` gives zeros.
    With r = A/B the film value is evaluated as A B (1 - e)/(B^2 - A^2 e),
    which stays finite where the half-space coefficient has its pole.
    """
    if not kH >= 0:
        raise ValueError(f"kH must be >= 0 or inf, got {kH!r}")
    if math.isinf(kH) or kH == 0 or eps == 1:
        r_s, r_p = fresnel(q, eps, eta0)
        if math.isinf(kH):
            return r_p, r_s
        zero = np.zeros_like(r_p)
        return (complex(zero), complex(zero)) if zero.ndim == 0 else (zero, zero.copy())
    eta0, eta = _etas(q, eps, eta0)
    e = np.exp(2j * eta * kH)
    out = []
    for a, b in ((eps * eta0 - eta, eps * eta0 + eta), (eta0 - eta, eta0 + eta)):
        den = b * b - a * a * e
        if np.any(np.abs(den) <= 1e-300 * (np.abs(a) ** 2 + np.abs(b) ** 2)):
            raise SingularSlabError(
                f"slab denominator vanished for eps={eps!r}, kH={kH!r}; "
                "this needs a lossless film with |r| = 1"
            )
        out.append(a * b * (1.0 - e) / den)
    c_n, c_m = out
    if np.ndim(c_n) == 0:
        return complex(c_n), complex(c_m)
    return c_n, c_m


def check_quadrature_permittivity(eps) -> complex:
    """Validate ``eps`` for the q-integrals; returns it as complex."""
    eps = complex(eps)
    if not (math.isfinite(eps.real) and math.isfinite(eps.imag)):
        raise ValueError(f"eps must be finite, got {eps!r}")
    if eps.imag < 0:
        raise ValueError(f"active medium (Im eps < 0) is not supported: {eps!r}")
    if eps.imag == 0 and eps.real > 1:
        raise GuidedModeError(
            f"lossless eps = {eps.real!r} > 1 supports guided modes whose poles lie on "
            "the real q axis; give eps a positive imaginary part"
        )
    return eps


@dataclass(frozen=True)
class SlabPole:
    """Simple pole of C_N (``"p"``) or C_M (``"s"``) on the evanescent axis.

    ``v`` is sqrt(q^2 - 1) at the pole and ``residue`` the residue in v of
    one partial-fraction branch of C (a half-space pole appears once per
    branch, each carrying half the residue). ``sign`` is +1 when an infinitesimal loss eps -> eps + i0 moves the
    pole into the upper half v-plane.
    """

    v: float
    residue: float
    sign: int
    polarization: str


def _pole_parts(v, eps, kH, pol):
    # with eta0 = iv and eta = iw both C_N and C_M are real; a and b are the
    # Fresnel numerator/denominator divided by i
    w = np.sqrt(1.0 + v * v - eps)
    if pol == "p":
        a, b = eps * v - w, eps * v + w
    else:
        a, b = v - w, v + w
    s = 0.0 * w if math.isinf(kH) else np.exp(-w * kH)
    return a, b, s


def _branch(v, eps, kH, pol, sgn):
    a, b, s = _pole_parts(v, eps, kH, pol)
    return b - sgn * a * s


def real_axis_poles(eps, kH, v_lo=1e-12, v_hi=1e12, per_decade=64):
    """Poles of C_N and C_M on the evanescent axis for a lossless film.

    Only real eps < 1 can produce them (surface plasmons and their coupled
    film modes for eps < 0). Uses the partial-fraction split

        C = a (1 - s^2)/2 * [1/(b - a s) + 1/(b + a s)],   s = exp(-w kH),

    scans each bracket for sign changes on a log grid and refines with
    Brent's method. Lossy media return an empty tuple.
    """
    eps = complex(eps)
    if eps.imag != 0 or eps.real >= 1 or kH == 0:
        return ()
    e = eps.real
    grid = np.logspace(math.log10(v_lo), math.log10(v_hi), int(per_decade * math.log10(v_hi / v_lo)) + 1)
    poles = []
    for pol in ("p", "s"):
        for sgn in (1.0, -1.0):
            g = _branch(grid, e, kH, pol, sgn)
            idx = np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]
            for i in idx:
                v0 = brentq(_branch, grid[i], grid[i + 1], args=(e, kH, pol, sgn), xtol=1e-300, rtol=1e-15, maxiter=200)
                hv = 1e-6 * v0
                dg_dv = (_branch(v0 + hv, e, kH, pol, sgn) - _branch(v0 - hv, e, kH, pol, sgn)) / (2 * hv)
                he = 1e-7 * max(1.0, abs(e))
                dg_de = (_branch(v0, e + he, kH, pol, sgn) - _branch(v0, e - he, kH, pol, sgn)) / (2 * he)
                a, _, s = _pole_parts(v0, e, kH, pol)
                residue = float(a * (1.0 - s * s) / (2.0 * dg_dv))
                sign = 1 if -dg_de / dg_dv > 0 else -1
                poles.append(SlabPole(float(v0), residue, sign, pol))
    return tuple(sorted(poles, key=lambda p: (p.polarization, p.v)))
