"""Exact arithmetic in maximal quaternion orders.

Walks through the two builtin orders: validation, discriminants,
covolumes, unit groups, and the ideal-inverse identity
(O u + O v)^-1 = u^-1 O  cap  v^-1 O.
"""

import random
from fractions import Fraction

from heisquat.orders import (Algebra, OrderError, builtin_order, covolume,
                             enumerate_by_norm, ideal_inverse, make_order,
                             units)

# The Hurwitz order Z<(1+i+j+k)/2, i, j, k> in the (-1,-1) algebra.
hur = builtin_order("hurwitz")
print("Hurwitz order:", hur)
print("  reduced discriminant:", hur.reduced_discriminant)
print("  covolume:", covolume(hur)[1], "(= D_A/4)")
print("  |O^x| =", len(units(hur)))

# The Lipschitz order {1,i,j,k} is a ring but NOT maximal: its reduced
# discriminant is 4, while the algebra ramifies only at 2.
try:
    make_order(Algebra(-1, -1), [[1, 0, 0, 0], [0, 1, 0, 0],
                                 [0, 0, 1, 0], [0, 0, 0, 1]])
except OrderError as exc:
    print("Lipschitz rejected:", exc)

# A maximal order of discriminant 3 in the (-1,-3) algebra ships as an
# order-spec file and passes the same validation.
d3 = builtin_order("d3")
print("d3 order:", d3, "covolume", covolume(d3)[1], "units", len(units(d3)))

# Short vectors: all 24 units have norm 1, and there are 24 elements of
# norm exactly 2.
by_norm = enumerate_by_norm(hur, 2)
print("elements with 0 < n <= 2:", len(by_norm))

# The ideal-inverse identity, checked on a few random pairs.
rng = random.Random(1)
for _ in range(3):
    u = hur.element(*[rng.randint(-3, 3) for _ in range(4)])
    v = hur.element(*[rng.randint(-3, 3) for _ in range(4)])
    if not any(u.coords) or not any(v.coords):
        continue
    lhs = ideal_inverse(hur, [u, v])
    rhs = hur.inv_principal_lattice(hur.to_quaternion(u)).intersect(
        hur.inv_principal_lattice(hur.to_quaternion(v)))
    print("ideal inverse identity:", lhs == rhs, "for", u.coords, v.coords)
