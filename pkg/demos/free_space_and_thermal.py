"""Free-space spin-flip rate of a trapped atom and its thermal enhancement.

A 560 kHz Zeeman transition is far below any optical line, so its
spontaneous rate is tiny and the room-temperature photon bath multiplies
it by roughly ten million.
"""

from filmdecay.core import (
    OrientationWeights,
    ThermalEnvironment,
    TransitionSpec,
    gamma0_magnetic,
    planck_occupation,
)

spec = TransitionSpec.from_frequency(560e3)
spin = OrientationWeights(0.0, 0.5, 0.5)

g0 = gamma0_magnetic(spec, spin)
print(f"wavelength           : {spec.wavelength:.1f} m")
print(f"free-space rate      : {g0:.3e} 1/s  (lifetime {1 / g0 / 3.15e7:.2e} years)")

print("\n   T [K]      n_th        rate [1/s]")
for T in (0.0, 4.2, 77.0, 300.0):
    n = planck_occupation(spec, ThermalEnvironment(T))
    print(f"{T:8.1f}  {n:10.4g}  {g0 * (n + 1):14.4e}")
