"""Spectrum of the Lax operator: bound states are the soliton parameters.

Discretizes L_u f = -i f' - P(uf) on the Hardy modes, then verifies the Wu
coupling identity, its boundary-value companion, the span condition, and
the polynomial decay of eigenfunctions.
"""

import numpy as np

import bolab

grid = bolab.default_grid()

# Each soliton contributes exactly one negative eigenvalue, located at its
# spectral parameter.
pair = bolab.SolitonConfig(np.array([-1.0, -0.5]), np.array([-10.0, 10.0]))
u = bolab.profile(pair, grid)
sys = bolab.assemble(u, 1024)
data = bolab.eigensolve(sys)
neg = data.eigenvalues[data.eigenvalues < -0.05]
print(f"negative eigenvalues: {neg}  (parameters: {pair.lambdas})")

# Wu relation: |<u, f>|^2 = 2 pi |lambda| for unit eigenfunctions.
wu = bolab.wu_check(data, sys)
print("\nlambda      |<u,f>|^2    2 pi |lambda|   ratio        2nd-relation residual")
for i in range(len(wu.eigenvalues)):
    print(f"{wu.eigenvalues[i]:+.6f}  {wu.couplings_sq[i]:.6f}     "
          f"{wu.wu_rhs[i]:.6f}       {wu.ratios[i]:.8f}   {wu.second_residuals[i]:.2e}")

# The relation holds for any real field, soliton or not.
scaled = 1.2 * bolab.single_soliton(-0.5, 0.0, grid)
sys_s = bolab.assemble(scaled, 1024)
wu_s = bolab.wu_check(bolab.eigensolve(sys_s), sys_s)
print(f"\n1.2 x soliton: eigenvalue {wu_s.eigenvalues[0]:+.6f}, "
      f"Wu ratio {wu_s.ratios[0]:.8f}")

# Span condition: for a multisoliton the Hardy part of u lies in the span of
# the bound-state eigenfunctions; perturbations leave the span.
span_q = bolab.span_residual(data, sys)
noisy = u + bolab.band_limited_noise(grid, 8.0, seed=7,
                                     spec=bolab.NormSpec(0.0), delta=0.3)
sys_n = bolab.assemble(noisy, 1024)
span_n = bolab.span_residual(bolab.eigensolve(sys_n), sys_n)
print(f"\nspan residual: multisoliton {span_q:.2e}, perturbed {span_n:.3f}")

# Bound-state eigenfunctions decay like 1/<x>, not exponentially: cleanest
# for the single soliton, whose eigenfunction is (i/pi)/(x+i) up to phase.
single = bolab.single_soliton(-0.5, 0.0, grid)
sys_1 = bolab.assemble(single, 1024)
probe = bolab.eigenfunction_decay_probe(sys_1, bolab.eigensolve(sys_1), -0.5)
sel = np.abs(probe.x - probe.x_peak) <= 50
rel = np.abs(probe.abs_f[sel] - probe.envelope[sel]) / probe.envelope[sel]
print(f"single-soliton |f| vs C/<x>: max relative deviation {rel.max():.3f} "
      f"over |x| <= 50 (true |f| = (1/pi)/sqrt(1+x^2) up to normalization)")
