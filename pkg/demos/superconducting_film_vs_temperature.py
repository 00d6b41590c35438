"""Spin flips above a niobium-like film as it is warmed through Tc.

Below Tc the normal fluid shrinks as (T/Tc)^4, which lengthens the
effective skin depth and suppresses the thermal magnetic noise. Above Tc
the film is an ordinary metal. The atom sits 50 um above a 1 um film and
flips at 560 kHz.
"""

import warnings

from filmdecay.core import OrientationWeights, ThermalEnvironment, TransitionSpec
from filmdecay.medium import TwoFluidState, permittivity, two_fluid_at_temperature
from filmdecay.quad import QuadratureWarning
from filmdecay.rates import SlabGeometry, total_rate

spec = TransitionSpec.from_frequency(560e3)
spin = OrientationWeights(0.0, 0.5, 0.5)
geometry = SlabGeometry(z=50e-6, H=1e-6)
Tc, lambda0, delta_c = 9.2, 35e-9, 85e-6  # delta_c: normal-state skin depth at 560 kHz

print("   T [K]   k*lambda_L    Im eps       rate [1/s]   ratio to free space")
for T in (1.0, 2.0, 4.2, 6.0, 8.0, 9.0, 9.19, 9.5, 12.0):
    model = two_fluid_at_temperature(TwoFluidState(T, Tc, lambda0, delta_c))
    eps = permittivity(model, spec)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", QuadratureWarning)
        r = total_rate(spec, spin, model, geometry, ThermalEnvironment(T))
    # above Tc the film is a plain Drude metal with no London length
    kl = f"{spec.k * model.lambda_L:11.3e}" if hasattr(model, "lambda_L") else f"{'-':>11}"
    print(f"{T:8.2f}  {kl}  {eps.imag:10.3e}  {r.total:12.4e}   {r.ratio:12.4e}")
