"""Test-function energy asymptotics: extracting expansion coefficients.

Concentrated bubbles make the dual functional approach its sphere value;
the rate carries geometric information.  This demo fits the model term for
each dimension regime and compares with the closed forms.
"""

from qcurv.asymptotics import TestFunctionModel, evaluate_model, fit_expansion
from qcurv.parametrix import random_jet
from qcurv.sphereforms import sharp_constants

# flat case: the lam^{n-4} coefficient is proportional to the constant
# term of the Green's expansion (here normalized to 1)
for n in (5, 6, 7):
    fit = fit_expansion(TestFunctionModel(case="flat", n=n, A0=1.0))
    print(f"flat  n={n}: coeff {fit.coefficient:.6g}  expected {fit.expected:.6g}"
          f"  rel err {fit.rel_error:.3%}")

# curved regimes: the lam^4 (or lam^4 log) coefficient carries |W(p)|^2
jet10 = random_jet(10, seed=7, normalize=True)
fit = fit_expansion(TestFunctionModel(case="high", n=10, jet=jet10))
print(f"high  n=10: coeff {fit.coefficient:.6g}  expected {fit.expected:.6g}"
      f"  rel err {fit.rel_error:.3%}")

jet9 = random_jet(9, seed=7, normalize=True)
fit = fit_expansion(TestFunctionModel(case="n9", n=9, jet=jet9))
print(f"      n=9:  coeff {fit.coefficient:.6g}  expected {fit.expected:.6g}"
      f"  rel err {fit.rel_error:.3%}")

jet8 = random_jet(8, seed=7, normalize=True)
fit = fit_expansion(TestFunctionModel(case="n8", n=8, jet=jet8))
print(f"      n=8:  log coeff {fit.coefficient:.6g}  expected {fit.expected:.6g}"
      f"  rel err {fit.rel_error:.3%}")

# what the raw numbers look like along the lam grid
print("\nratio approach to the sphere value, high case n=10:")
theta4 = sharp_constants(10).Theta4_sphere
m = TestFunctionModel(case="high", n=10, jet=jet10)
for lam in m.lambdas:
    e = evaluate_model(m, lam)
    print(f"  lam={lam:<7g} ratio/Theta4 - 1 = {e['ratio'] / theta4 - 1:.6e}")
