"""
Adaptive quadrature for the semi-infinite q-integrals

    Re  int_0^inf dq (q/eta0) exp(2i eta0 kz) K(q, eta0)

The range is split at the branch point q = 1 and each piece is mapped so
that the 1/eta0 factor cancels exactly:

    0 <= q <= 1:  u = eta0          ->  int_0^1   exp(2i u kz) K du
    q > 1:        v = sqrt(q^2 - 1) ->  -i int_0^inf exp(-2 v kz) K dv

The evanescent piece is cut where the discarded share of the envelope
int (1 + v^2) exp(-2 kz v) dv drops to ``tail_cut_epsilon`` (at least
-ln(tail_cut_epsilon)/(2 kz)) and an analytic bound on the remainder is
added to the error estimate. Integration itself is a globally adaptive
Gauss-Kronrod 7/15 rule, vectorized over panels; |K15 - G7| is the
per-panel error estimate.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import medium

__all__ = [
    "QuadratureConfig",
    "QuadratureOutcome",
    "QuadratureWarning",
    "CoefficientKind",
    "Weight",
    "adaptive_gk",
    "integrate_propagating",
    "integrate_evanescent",
    "integrate_slab_kernel",
    "evanescent_cutoff",
]

# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[[13, 11, 9]] = _WG[:3]


class QuadratureWarning(UserWarning):
    pass


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-13
    max_subdivisions: int = 2000
    tail_cut_epsilon: float = 1e-16

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol!r}")
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be > 0, got {self.abs_tol!r}")
        if not self.max_subdivisions >= 16:
            raise ValueError(f"max_subdivisions must be >= 16, got {self.max_subdivisions!r}")
        if not 0 < self.tail_cut_epsilon < 1:
            raise ValueError(f"tail_cut_epsilon must lie in (0, 1), got {self.tail_cut_epsilon!r}")

    def tolerance(self, value):
        return max(self.rel_tol * abs(value), self.abs_tol)


@dataclass(frozen=True)
class QuadratureOutcome:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool

    def __add__(self, other):
        return QuadratureOutcome(
            self.value + other.value,
            self.error_estimate + other.error_estimate,
            self.evaluations + other.evaluations,
            self.converged and other.converged,
        )

    def scaled(self, factor):
        return QuadratureOutcome(self.value * factor, self.error_estimate * abs(factor), self.evaluations, self.converged)


def _gk_panels(f, a, b):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = c[:, None] + h[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise FloatingPointError(f"integrand is not finite at x = {bad!r}")
    k = h * (fx @ KRONROD_WEIGHTS)
    g = h * (fx @ GAUSS_WEIGHTS)
    return k, np.abs(k - g)


def adaptive_gk(f, breakpoints, rel_tol, abs_tol, max_subdivisions):
    """Globally adaptive GK15 quadrature of a vectorized real ``f``.

    ``breakpoints`` is an increasing sequence covering the whole interval;
    each gap becomes an initial panel. Panels carrying the largest error are
    bisected until the summed estimate meets max(rel_tol*|I|, abs_tol) or the
    bisection budget is spent. Returns a :class:`QuadratureOutcome`.
    """
    pts = np.unique(np.asarray(breakpoints, dtype=float))
    a, b = pts[:-1], pts[1:]
    val, err = _gk_panels(f, a, b)
    evals = 15 * a.size
    splits = 0
    while True:
        total = float(np.sum(val))
        tol = max(rel_tol * abs(total), abs_tol)
        err_sum = float(np.sum(err))
        if err_sum <= tol or splits >= max_subdivisions:
            break
        # panels too narrow to bisect in floating point keep their error
        mid = 0.5 * (a + b)
        splittable = (mid > a) & (mid < b)
        order = np.argsort(-np.where(splittable, err, -1.0))
        need = err_sum - 0.5 * tol
        csum = np.cumsum(err[order])
        n = int(np.searchsorted(csum, need) + 1)
        n = min(n, int(np.count_nonzero(splittable)), max_subdivisions - splits)
        if n <= 0:
            break
        pick = order[:n]
        keep = np.ones(a.size, dtype=bool)
        keep[pick] = False
        pa, pb, pm = a[pick], b[pick], mid[pick]
        na = np.concatenate([pa, pm])
        nb = np.concatenate([pm, pb])
        nval, nerr = _gk_panels(f, na, nb)
        evals += 15 * na.size
        splits += n
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        val = np.concatenate([val[keep], nval])
        err = np.concatenate([err[keep], nerr])
    # fixed summation order keeps results independent of refinement history
    order = np.argsort(a, kind="stable")
    total = float(np.sum(val[order]))
    err_sum = float(np.sum(err))
    converged = err_sum <= max(rel_tol * abs(total), abs_tol)
    return QuadratureOutcome(total, err_sum, evals, converged)


Kernel = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _propagating_breaks(kz, extra=()):
    # panels no wider than pi/(2kz), half the period of exp(2iukz)
    n = max(1, int(math.ceil(1.0 / (math.pi / (2.0 * kz)))))
    pts = list(np.linspace(0.0, 1.0, n + 1))
    pts += [p for p in extra if 0.0 < p < 1.0]
    return sorted(set(pts))


def integrate_propagating(kernel: Kernel, kz, cfg=QuadratureConfig(), breakpoints=()):
    """Re int_0^1 dq (q/eta0) exp(2i eta0 kz) K(q, eta0), integrated in u = eta0.

    ``kernel(q, eta0)`` must accept arrays. ``breakpoints`` are extra
    u-values where the kernel changes rapidly.
    """
    if not kz > 0:
        raise ValueError(f"kz must be > 0, got {kz!r}")

    def f(u):
        q = np.sqrt(1.0 - u * u)
        eta0 = u.astype(complex)
        return (np.exp(2j * kz * u) * kernel(q, eta0)).real

    return adaptive_gk(f, _propagating_breaks(kz, breakpoints), cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions)


def _envelope_tail(v, alpha):
    # int_v^inf (1 + t^2) exp(-alpha t) dt
    return math.exp(-alpha * v) * ((1.0 + v * v) / alpha + 2.0 * v / alpha**2 + 2.0 / alpha**3)


def evanescent_cutoff(kz, tail_cut_epsilon):
    """Cut point v_max where the discarded share of the envelope mass
    int (1 + v^2) exp(-2 kz v) dv equals ``tail_cut_epsilon``.

    Starts from -ln(eps)/(2kz) and moves out to absorb the polynomial factor.
    """
    alpha = 2.0 * kz
    mass = _envelope_tail(0.0, alpha)
    v = -math.log(tail_cut_epsilon) / alpha
    for _ in range(50):
        poly = _envelope_tail(0.0, alpha) if v == 0 else _envelope_tail(v, alpha) * math.exp(alpha * v)
        nv = (math.log(poly / mass) - math.log(tail_cut_epsilon)) / alpha
        if abs(nv - v) <= 1e-12 * v:
            return nv
        v = max(nv, v)
    return v


def _tail_bound(kernel, v_max, kz):
    # envelope |Im K(v)| <= M (1 + v^2) beyond v_max, M sampled past the cut;
    # only Im K reaches the real part of the evanescent integral
    vs = v_max * np.array([1.0, 1.25, 1.5, 2.0, 3.0, 4.0])
    q = np.sqrt(1.0 + vs * vs)
    kv = np.abs(np.asarray(kernel(q, 1j * vs)).imag)
    m = 2.0 * float(np.max(kv / (1.0 + vs * vs)))
    return m * _envelope_tail(v_max, 2.0 * kz)


def _evanescent_breaks(v_max, extra, singular=()):
    lo = math.floor(math.log10(v_max)) - 8
    pts = [0.0, v_max]
    pts += [10.0**j for j in range(lo, int(math.floor(math.log10(v_max))) + 1) if 10.0**j < v_max]
    pts += [p for p in extra if 0.0 < p < v_max]
    # a point a few ulps from a singularity makes a panel whose nodes land on it
    pts = [p for p in pts if all(abs(p - s) > 1e-6 * s for s in singular)]
    pts += [s for s in singular if 0.0 < s < v_max]
    return sorted(set(pts))


def integrate_evanescent(kernel: Kernel, kz, cfg=QuadratureConfig(), breakpoints=(), singular=()):
    """Re int_1^inf dq (q/eta0) exp(2i eta0 kz) K(q, eta0), integrated in v = sqrt(q^2-1).

    With eta0 = iv the measure becomes -i dv, so only Im K contributes.
    The discarded tail beyond v_max is bounded assuming |K| <= M (1 + v^2).
    ``singular`` v-values become panel edges with no other edge close by.
    """
    if not kz > 0:
        raise ValueError(f"kz must be > 0, got {kz!r}")
    v_max = evanescent_cutoff(kz, cfg.tail_cut_epsilon)

    def f(v):
        q = np.sqrt(1.0 + v * v)
        return (np.exp(-2.0 * kz * v) * kernel(q, 1j * v)).imag

    breaks = _evanescent_breaks(v_max, breakpoints, singular)
    out = adaptive_gk(f, breaks, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions)
    tail = _tail_bound(kernel, v_max, kz)
    return QuadratureOutcome(out.value, out.error_estimate + tail, out.evaluations + 4, out.converged)


class CoefficientKind(enum.Enum):
    """Slab-coefficient combination inside the integral.

    ``N`` and ``M`` are C_N and C_M alone; ``N_MINUS_M`` is C_N - eta0^2 C_M
    and ``M_MINUS_N`` is C_M - eta0^2 C_N.
    """

    N = "N"
    M = "M"
    N_MINUS_M = "N-M"
    M_MINUS_N = "M-N"


class Weight(enum.Enum):
    """Power of q in front of q/eta0: ``Q1`` is q/eta0, ``Q3`` is q^3/eta0."""

    Q1 = 1
    Q3 = 3


_TERMS = {
    CoefficientKind.N: (("N", False),),
    CoefficientKind.M: (("M", False),),
    CoefficientKind.N_MINUS_M: (("N", False), ("M", True)),
    CoefficientKind.M_MINUS_N: (("M", False), ("N", True)),
}


def _terms(kind, swap):
    swap_name = {"N": "M", "M": "N"}
    return tuple((swap_name[n] if swap else n, times_eta0sq) for n, times_eta0sq in _TERMS[kind])


def _make_kernel(terms, eps, kH, weight):
    def kernel(q, eta0):
        c_n, c_m = medium.slab_coefficients(q, eps, kH, eta0=eta0)
        coeff = {"N": c_n, "M": c_m}
        out = 0.0
        for name, times_eta0sq in terms:
            out = out - eta0 * eta0 * coeff[name] if times_eta0sq else out + coeff[name]
        if weight is Weight.Q3:
            out = out * (1.0 - eta0 * eta0)
        return out

    return kernel


def _term_weight(v, times_eta0sq, weight):
    # real weight multiplying C at eta0 = iv
    w = v * v if times_eta0sq else 1.0
    if weight is Weight.Q3:
        w *= 1.0 + v * v
    return w


def _pole_sum(terms, poles, kz, weight, v_max):
    pol_of = {"N": "p", "M": "s"}
    total = 0.0
    for name, times_eta0sq in terms:
        for pole in poles:
            if pole.polarization != pol_of[name] or pole.v >= v_max:
                continue
            total += (
                pole.sign * math.pi * pole.residue
                * _term_weight(pole.v, times_eta0sq, weight)
                * math.exp(-2.0 * kz * pole.v)
            )
    return total


def _scales(eps, kH, kz):
    """Characteristic u- and v-scales of the slab kernel, used as breakpoints."""
    mag = abs(eps)
    u_pts, v_pts = [], []
    if mag > 1:
        u_pts.append(1.0 / math.sqrt(mag))
        v_pts += [1.0 / math.sqrt(mag), math.sqrt(mag)]
    if math.isfinite(kH) and kH > 0:
        v_pts.append(1.0 / kH)
    v_pts.append(1.0 / (2.0 * kz))
    return u_pts, v_pts


def integrate_slab_kernel(coeff_kind, eps, kH, kz, power=Weight.Q1, cfg=QuadratureConfig(), *, swap=False):
    """Re int_0^inf dq (q^p/eta0) exp(2i eta0 kz) [combination of C_N, C_M].

    ``power`` selects the q or q^3 weight. With ``swap=True`` every C_N is
    replaced by C_M and vice versa (used to check the magnetic/electric
    duality). For lossless films the principal-value integral is completed
    with the residues of real-axis poles taken with the eps -> eps + i0
    prescription. If the combined estimate misses the tolerance relative to
    the summed value, both segments are redone at the tighter target.
    """
    coeff_kind = CoefficientKind(coeff_kind)
    power = Weight(power)
    eps = medium.check_quadrature_permittivity(eps)
    if not kz > 0:
        raise ValueError(f"kz must be > 0, got {kz!r}")
    if eps == 1 or kH == 0:
        return QuadratureOutcome(0.0, 0.0, 0, True)
    terms = _terms(coeff_kind, swap)
    kernel = _make_kernel(terms, eps, kH, power)
    u_pts, v_pts = _scales(eps, kH, kz)

    v_max = evanescent_cutoff(kz, cfg.tail_cut_epsilon)
    poles = ()
    if eps.imag == 0:
        poles = medium.real_axis_poles(eps, kH)
    elif eps.real < -1 and eps.imag < 1e-3 * abs(eps.real):
        # nearly lossless: sharp resonances sit close to the lossless poles
        for p in medium.real_axis_poles(complex(eps.real), kH):
            v_pts += [p.v * (1 + d) for d in (0.0, -1e-3, 1e-3, -1e-1, 1e-1)]

    pole_vs = tuple(p.v for p in poles)
    prop = integrate_propagating(kernel, kz, cfg, u_pts)
    evan = integrate_evanescent(kernel, kz, cfg, v_pts, pole_vs)
    total = prop + evan
    if not total.converged or total.error_estimate > cfg.tolerance(total.value):
        # the segments can cancel, so their own relative targets are too loose
        target = max(0.5 * cfg.rel_tol * abs(total.value), cfg.abs_tol)
        scale = abs(prop.value) + abs(evan.value)
        tight = QuadratureConfig(
            rel_tol=min(cfg.rel_tol, max(1e-15, 0.5 * target / scale if scale > 0 else cfg.rel_tol)),
            abs_tol=0.5 * target,
            max_subdivisions=cfg.max_subdivisions, tail_cut_epsilon=cfg.tail_cut_epsilon,
        )
        prop = integrate_propagating(kernel, kz, tight, u_pts)
        evan = integrate_evanescent(kernel, kz, tight, v_pts, pole_vs)
        total = prop + evan

    pole_part = _pole_sum(terms, poles, kz, power, v_max)
    converged = total.converged and total.error_estimate <= cfg.tolerance(total.value + pole_part)
    out = QuadratureOutcome(total.value + pole_part, total.error_estimate, total.evaluations, converged)
    if not out.converged:
        warnings.warn(
            f"slab integral did not converge (kind={coeff_kind.value}, eps={eps!r}, kH={kH!r}, kz={kz!r}): "
            f"value={out.value!r}, error estimate={out.error_estimate!r}",
            QuadratureWarning,
            stacklevel=2,
        )
    return out
