"""A three-level absorption fridge at its steady state.

Builds the generator for T_w=170, T_h=80, T_c=30 with Ohmic-cubed baths,
solves for the steady state, and reads off which way heat flows. A
quick sweep across the cooling window shows the chiller turning into a
heater at the window edge.
"""
import numpy as np

from qfridge import FridgeSpec, diagram_currents, report, solve_fridge
from qfridge.lindblad import current_scale
from qfridge.optimize import make_baths
from qfridge.thermo import cooling_window_max

baths = make_baths(170.0, 80.0, 30.0, 3, 1e-3)
temps = {"work": 170.0, "hot": 80.0, "cold": 30.0}
spec = FridgeSpec("three_level", 6.0, 50.0)
sol = solve_fridge(spec, baths)
rep = report(sol.currents, temps, scale=current_scale(sol.liouvillian))

print("steady-state populations:", np.round(np.diag(sol.rho).real, 6))
print(f"mode {rep.mode}: Q_c={rep.q_c:.6g} Q_h={rep.q_h:.6g} Q_w={rep.q_w:.6g}")
print(f"efficiency {rep.efficiency:.6f} = omega_c/omega_w = {spec.omega_c / spec.omega_w:.6f}")
print(f"entropy production {rep.entropy_production:.3e}, first-law residual {rep.first_law_residual:.1e}")

wc_max = cooling_window_max(170.0, 80.0, 30.0, omega_h=50.0)
print(f"\ncooling window ends at omega_c = {wc_max:.6f}")
print("omega_c/window   Q_c (cycle-flux route)   mode")
for frac in (0.1, 0.5, 0.9, 0.999, 1.001, 1.2):
    wc = frac * wc_max
    q = diagram_currents("three_level", wc, 50.0, baths).currents
    mode = report(q, temps, strict=False).mode
    print(f"{frac:14.3f}   {q['cold']:22.6e}   {mode}")
