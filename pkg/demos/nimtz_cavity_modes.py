"""Microwave cavity between two Perspex lattices.

With the Perspex layers treated as n = 1.61 slabs the transmission peaks of
the whole structure are cavity modes.  Their spacing near the 9.15 GHz
carrier is compared with the naive c / (2 d) estimates using the cavity
alone and the full length.  The square-barrier model of the same setups
shows the superluminal speed ratios at the transmission minima.
"""
import numpy as np
from scipy.signal import argrelmin

from monodromy import presets, resonances, sweep
from monodromy.spectra import mode_spacing

for name in ("NimtzSetupA", "NimtzSetupB_TwoBarrier", "NimtzSetupB_EightBarrier"):
    p = presets.build(name)
    s = sweep(p.stack, p.grid, p.dispersion, cell=p.cell)
    peaks = resonances(s)
    kc = p.annotations["k_c_per_mm"]
    spacing = p.dispersion.frequency_ghz(mode_spacing(peaks, kc))
    naive = p.naive_resonances_ghz()
    print(f"{name}: d = {p.d} mm, {len(peaks)} peaks in window, spacing near carrier "
          f"{spacing:.4f} GHz; c/2d_cav {naive['d_cav']:.4f}, c/2d {naive['d_total']:.4f}")

print()
for name in ("NimtzSetupB_TwoBarrier", "NimtzSetupB_EightBarrier"):
    p = presets.build(name, layer_model="barrier")
    s = sweep(p.stack, p.grid, p.dispersion, cell=p.cell)
    idx = argrelmin(s.transmittance)[0]
    print(f"{name} (kappa0 = {p.stack.layers[0].kappa0}/mm) speed ratio at |T| minima:")
    for i in idx:
        print(f"   k = {s.k[i]:.4f}  f = {s.frequency_ghz[i]:6.3f} GHz  ratio {s.speed_ratio[i]:6.2f}"
              f"  band {s.band[i]}")
