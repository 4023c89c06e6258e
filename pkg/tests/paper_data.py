"""Published polynomials and values used as frozen test fixtures."""

from kplump.poly import SparsePoly

Z_VARS = ("Z1", "Z2", "Z3", "Z4")
XYT = ("x", "y", "t")

# Degree-7 theta of the monomial <4,5,6> curve.
MONO_THETA_TEXT = "Z1^7 + 21*Z1^4*Z3 - 84*Z1^3*Z2^2 + 252*Z1*Z3^2 + 252*Z2^2*Z3 - 252*Z4"

# Degree-6 theta of the two-<2,5>-cusp curve (24 terms).
POLYTHETA_TEXT = """
Z1^3*Z3^3 + 24*Z1^3*Z3^2 - 24*Z1^2*Z3^3 + 192*Z1^3*Z3 + 16*Z1^3*Z4
 - 540*Z1^2*Z3^2 + 192*Z1*Z3^3 + 16*Z2*Z3^3 + 336*Z1^3 - 4032*Z1^2*Z3
 - 384*Z1^2*Z4 + 4032*Z1*Z3^2 + 384*Z2*Z3^2 - 336*Z3^3 - 5904*Z1^2
 + 27936*Z1*Z3 + 3072*Z1*Z4 + 3072*Z2*Z3 + 256*Z2*Z4 - 5904*Z3^2
 + 32256*Z1 + 5376*Z2 - 32256*Z3 - 5376*Z4
"""

# The same polynomial as a product-plus-product rearrangement.
REARRANGED_TEXT = """
(Z1^3 - 24*Z1^2 + 192*Z1 + 16*Z2 - 336)*(Z3^3 + 24*Z3^2 + 192*Z3 + 16*Z4 + 336)
 + 36*(Z1*Z3 + 10*Z1 - 6*Z3 - 56)*(Z1*Z3 + 6*Z1 - 10*Z3 - 56)
"""

# The real tau polynomial of the three-lump solution (50 terms).
LUMPTAU_TEXT = """
198*x + 3033/2*x^2*t + 6615/2*x^2*t^2 + 8883/2*x*t^2 + 1494*x*t
 + 2592*y^2*x*t^2 + x^6 + 6561*x*t^3 + 306*x^2*y^2 + 576*y^4*t
 + 2970*y^2*t^2 + 3240*x^2*t^3 + 180*x^4*t + 96*x^3*y^2 + 1080*x^3*t^2
 + 741*x^3*t + 2592*y^2*t^3 + 1710*t*y^2 + 4860*t^4*x + 522*x*y^2
 + 192*x*y^4 + 1458*x*t^5 + 432*y^4*t^2 + 972*y^2*t^4 + 135*x^4*t^2
 + 540*x^3*t^3 + 18*x^5*t + 1215*x^2*t^4 + 48*x^2*y^4 + 12*x^4*y^2
 + 864*x^2*y^2*t + 144*x^3*t*y^2 + 648*x^2*t^2*y^2 + 1908*x*y^2*t
 + 1296*x*y^2*t^3 + 288*x*y^4*t + 729*t^6 + 64*y^6 + 405*y^2
 + 2916*t^5 + 228*y^4 + 12*x^5 + 261*x^2 + 2142*t^2 + 513/8
 + 8667/2*t^3 + 345/2*x^3 + 1125/2*t + 249/4*x^4 + 19521/4*t^4
"""

# Residual product from the regularity proof.
RESIDUAL_PRODUCT_TEXT = """
36*((4*x + 12*t + 10)^2 + 64*y^2 + 4)*((4*x + 12*t + 6)^2 + 64*y^2 + 4)
"""

# Series rows of the published differential basis at u = 0.
FRAME_ROWS = [[4, 8, 12], [0, 0, -12], [4, -8, 12], [0, 0, -12]]

# The paper's u-chart basis with its particular scalings (4 and -12).
DUALIZING_DIFFS = [
    ("4", "(u - 1)^2"),
    ("-12*u^2", "(u - 1)^4"),
    ("4", "(u + 1)^2"),
    ("-12*u^2", "(u + 1)^4"),
]

# The same differentials written in the z chart.
DUALIZING_DIFFS_Z = [
    ("-4", "(z - 1)^2"),
    ("12", "(z - 1)^4"),
    ("-4", "(z + 1)^2"),
    ("12", "(z + 1)^4"),
]


def mono_theta():
    return SparsePoly.parse(MONO_THETA_TEXT, vars=Z_VARS)


def polytheta():
    return SparsePoly.parse(POLYTHETA_TEXT, vars=Z_VARS)


def rearranged():
    return SparsePoly.parse(REARRANGED_TEXT, vars=Z_VARS)


def lumptau():
    return SparsePoly.parse(LUMPTAU_TEXT, vars=XYT)


def residual_product():
    return SparsePoly.parse(RESIDUAL_PRODUCT_TEXT, vars=XYT)
