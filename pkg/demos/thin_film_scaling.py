"""Thermal spin flips near a thin, lossy film.

For a film much thinner than the skin depth and the atom distance the
noise comes from a thin conducting sheet: the rate grows linearly with
the thickness and falls as 1/z^2. The in-plane spin sees half the
enhancement of the normal one. The closed-form thin-film expression
shipped in ``limits`` is printed next to the quadrature for comparison.
"""

import numpy as np

from filmdecay.limits import small_thickness_corrections
from filmdecay.medium import two_fluid_epsilon
from filmdecay.rates import magnetic_integrals

k_delta, k_lambda, kz = 1e-2, 1e-3, 1e-3
eps = two_fluid_epsilon(k_lambda, k_delta)
print(f"eps = {eps:.4g}")
print("     kH     par corr    perp corr   par/perp   sheet law   closed-form perp")
hs = np.array([1e-7, 1e-6, 4e-6, 1e-5])
perp = []
for kH in hs:
    m = magnetic_integrals(eps, kz, kH)
    sheet = 3 / 8 / k_delta**2 * kH / kz**2
    _, closed_perp = small_thickness_corrections(k_delta, k_lambda, kH, kz)
    perp.append(2 * m.perp)
    print(f"{kH:8.1e}  {2 * m.par:10.4g}  {2 * m.perp:10.4g}  {m.par / m.perp:8.4f}  {sheet:10.4g}  {closed_perp:10.4g}")

slope = np.polyfit(np.log(hs), np.log(perp), 1)[0]
print(f"\nfitted thickness exponent of the normal-spin correction: {slope:.3f}")

print("\ndistance dependence at kH = 1e-6:")
for z in (5e-4, 1e-3, 2e-3, 4e-3):
    m = magnetic_integrals(eps, z, 1e-6)
    print(f"  kz = {z:.0e}: perp corr * kz^2 = {2 * m.perp * z * z:.4g}")
