"""How close does a good superconductor come to a perfect mirror?

The full wavenumber integral is evaluated for a lossless film with a small
London length and compared with the perfect-conductor closed form. The
gap shrinks with k*lambda_L; in the near field the normal-spin channel,
whose leading term is itself small, feels it first.
"""

from filmdecay.core import OrientationWeights, TransitionSpec
from filmdecay.limits import pc_rate_magnetic
from filmdecay.medium import FixedEpsilon, two_fluid_epsilon
from filmdecay.rates import SlabGeometry, total_rate

spec = TransitionSpec.from_frequency(560e3)
normal = OrientationWeights(0, 0, 1)
planar = OrientationWeights(1, 0, 0)

for k_lambda in (1e-3, 1e-4, 1e-5):
    film = FixedEpsilon(two_fluid_epsilon(k_lambda))
    print(f"\nk*lambda_L = {k_lambda:g}")
    print("     kz    normal: quad / closed     planar: quad / closed   quad error")
    for kz in (1e-3, 1e-2, 0.1, 1.0, 5.0):
        g = SlabGeometry.from_dimensionless(kz, 10.0, spec.k)
        qn = total_rate(spec, normal, film, g)
        qp = total_rate(spec, planar, film, g)
        cn = pc_rate_magnetic(spec, normal, kz)
        cp = pc_rate_magnetic(spec, planar, kz)
        print(f"{kz:7.3g}  {qn.ratio:11.5g} / {cn.ratio:<11.5g}  {qp.ratio:9.6f} / {cp.ratio:<9.6f}  {qn.quad_error:.1e}")
