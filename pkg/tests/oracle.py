"""Brute-force reference integrals, written directly in q with scipy.

Nothing here imports the package: the slab coefficients, branches and
substitutions are re-derived so that agreement is a genuine cross-check.
Only lossy media are supported (no real-axis poles).
"""
import cmath
import math
import warnings

from scipy.integrate import IntegrationWarning, quad


def sqrt_up(z):
    r = cmath.sqrt(z)
    if r.imag < 0 or (r.imag == 0 and r.real < 0):
        r = -r
    return r


def coefficients(q, eps, kH):
    """(C_N, C_M) for a film of permittivity eps and thickness kH."""
    e0 = sqrt_up(1 - q * q)
    e1 = sqrt_up(eps - q * q)
    rs = (e0 - e1) / (e0 + e1)
    rp = (eps * e0 - e1) / (eps * e0 + e1)
    if kH == math.inf:
        return rp, rs
    ph = cmath.exp(2j * e1 * kH)
    return rp * (1 - ph) / (1 - rp * rp * ph), rs * (1 - ph) / (1 - rs * rs * ph)


def _bracket(kind, q, eps, kH, electric):
    cn, cm = coefficients(q, eps, kH)
    if electric:
        cn, cm = cm, cn
    e0sq = 1 - q * q
    if kind == "par":
        return q * (cn - e0sq * cm), 3 / 8
    return q**3 * cm, 3 / 4


def integral(kind, eps, kz, kH=math.inf, electric=False, q_max=None):
    """Reference I (or J with electric=True), kind 'par' or 'perp'."""
    with warnings.catch_warnings():
        # QUADPACK's roundoff notices fire near 1e-12 relative; the tests
        # compare at looser tolerances
        warnings.simplefilter("ignore", IntegrationWarning)
        return _integral(kind, eps, kz, kH, electric, q_max)


def _integral(kind, eps, kz, kH, electric, q_max):
    opts = dict(epsabs=1e-15, epsrel=1e-12, limit=2000)

    def prop(q):
        # q/eta0 = q / sqrt(1+q) * (1-q)^(-1/2); the last factor is the quad weight
        b, _ = _bracket(kind, q, eps, kH, electric)
        return (cmath.exp(2j * sqrt_up(1 - q * q) * kz) * b / math.sqrt(1 + q)).real

    def evan(q):
        # q/eta0 = -i q / sqrt(q+1) * (q-1)^(-1/2)
        b, _ = _bracket(kind, q, eps, kH, electric)
        return (-1j * math.exp(-2 * math.sqrt(q * q - 1) * kz) * b / math.sqrt(q + 1)).real

    def evan_plain(q):
        return evan(q) / math.sqrt(q - 1)

    pref = _bracket(kind, 0.5, eps, kH, electric)[1]
    a = quad(prop, 0, 1, weight="alg", wvar=(0, -0.5), **opts)[0]
    b = quad(evan, 1, 2, weight="alg", wvar=(-0.5, 0), **opts)[0]
    if q_max is None:
        q_max = 2 + 45 / kz
    edges = [2.0]
    while edges[-1] < q_max:
        edges.append(min(q_max, edges[-1] * 4))
    c = sum(quad(evan_plain, lo, hi, **opts)[0] for lo, hi in zip(edges[:-1], edges[1:]))
    return pref * (a + b + c)
