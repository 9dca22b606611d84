"""The constants engine: closed forms, exact identities, quadrature checks.

Every constant is an exact rational multiple of a power of pi, so the
assembly identity between the volume chain and the headline counting
constant is verified symbolically, not numerically.
"""

import json

from heisquat.constants import (ArithmeticData, assembly_identity,
                                constants_report, cusp_volume,
                                equidist_constants, measure_masses,
                                mertens_constant, orbifold_volume,
                                perpendicular_prefactor, zeta_and_integrals)

for da, u in ((2, 24), (3, 12)):
    d = ArithmeticData(da, u, h_A=1)
    print(f"D_A = {da}:")
    print("  orbifold volume :", orbifold_volume(d))
    print("  cusp volume     :", cusp_volume(d))
    print("  counting constant:", mertens_constant(d))
    chain, closed = assembly_identity(d)
    print("  assembly identity:", chain, "==", closed, "->", chain == closed)
    eq = equidist_constants(d)
    print("  equidistribution candidates:", str(eq["section8"]),
          "vs", str(eq["introduction"]))

# Measure masses for a quotient of volume V (here V = 1), n = 2.
mm = measure_masses(2, 1.0)
print("Bowen-Margulis mass / V:", mm["bowen_margulis"]["prefactor"])
print("horoball skinning / V  :", mm["horoball_skinning"]["prefactor"])
print("critical exponent      :", mm["critical_exponent"]["value"])

# Common-perpendicular growth constants (prefactors of e^{10 s} for n=2).
for case in ("horoball-horoball", "horoball-geodesic", "horoball-qline"):
    print(f"c(D-,D+) prefactor, {case}:", perpendicular_prefactor(2, case, 1))

# Quadrature verification of the special integrals.
out = zeta_and_integrals(2)
for name in ("patterson_mass", "residue_integral", "beta_integral",
             "c_prime", "I_11", "zeta_product"):
    rec = out[name]
    print(f"{name:18s} {rec['symbolic']:>18s} = {rec['value']:.8g}"
          f"   (residual {rec['residual']:.1e})")

# The full machine-readable report.
rep = constants_report(ArithmeticData(2, 24, h_A=1), with_quadrature=False)
print("report keys:", ", ".join(sorted(rep)[:8]), "...")
