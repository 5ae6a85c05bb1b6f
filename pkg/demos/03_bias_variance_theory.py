"""Deterministic verification of the bias/variance expansions.

``exact_estimator_moments`` integrates the kernel against a known density,
so the estimator's exact mean and variance are available without Monte
Carlo noise.  Dividing the exact bias by b (mode-parameterised kernel) or
b**2 (mean-parameterised kernel) and shrinking b shows the expansions'
leading constants emerging, and 4*b*n*variance converges to f(x).
"""

from gekde import (
    EULER_GAMMA,
    GammaDensity,
    INTERIOR,
    Kernel,
    asymptotic_bias,
    asymptotic_variance,
    boundary_regime,
    exact_estimator_moments,
)

truth = GammaDensity(3.0, 1.0)
x = 1.0  # away from the mode, so the first-order term is visible
fx, f1, f2 = truth.pdf(x), truth.pdf_d1(x), truth.pdf_d2(x)
print(f"true density at x={x}: f={fx:.6f}, f'={f1:.6f}, f''={f2:.6f}")

print("\nmode-parameterised kernel: bias/b -> gamma * f'(x)")
print(f"{'b':>8}{'exact bias/b':>16}{'leading term':>16}")
for b in (0.08, 0.04, 0.02, 0.01):
    m = exact_estimator_moments(Kernel.GE, x, b, truth, n=1)
    print(f"{b:>8.3f}{(m.mean - fx) / b:>16.6f}{EULER_GAMMA * f1:>16.6f}")

print("\nmean-parameterised kernel: bias/b^2 -> (pi^2/12) * f''(x)")
print(f"{'b':>8}{'exact bias/b^2':>16}{'leading term':>16}")
for b in (0.08, 0.04, 0.02, 0.01):
    m = exact_estimator_moments(Kernel.GE2, x, b, truth, n=1)
    lead = asymptotic_bias(Kernel.GE2, INTERIOR, b, f1, f2) / b ** 2
    print(f"{b:>8.3f}{(m.mean - fx) / b ** 2:>16.6f}{lead:>16.6f}")

print("\nboth kernels: 4*b*n*variance -> f(x)")
print(f"{'b':>8}{'ge':>12}{'ge2':>12}{'f(x)':>12}")
for b in (0.04, 0.02, 0.01, 0.005):
    v1 = exact_estimator_moments(Kernel.GE, x, b, truth, n=1).variance
    v2 = exact_estimator_moments(Kernel.GE2, x, b, truth, n=1).variance
    print(f"{b:>8.3f}{4 * b * v1:>12.6f}{4 * b * v2:>12.6f}{fx:>12.6f}")

print("\nboundary regime (x/b -> c): the variance inflates by e^c/(e^c - 1/2)")
base = asymptotic_variance(INTERIOR, 0.01, 100, 1.0)
for c in (0.0, 1.0, 3.0, 10.0):
    v = asymptotic_variance(boundary_regime(c), 0.01, 100, 1.0)
    print(f"  c={c:>5.1f}: factor {v / base:.4f}")
