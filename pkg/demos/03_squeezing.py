"""Squeezing the work bath raises the efficiency at maximum power.

A squeezed work bath acts as a hotter effective source at the work
frequency. The characteristic Q_c(epsilon) loops grow with r and their
efficiency at peak power rises, in step with the effective Carnot value.
"""
from qfridge.optimize import make_baths, performance_characteristic
from qfridge.thermo import carnot_efficiency

baths = make_baths(170.0, 80.0, 30.0, 3, 1e-3)
curves = performance_characteristic("three_level", baths, 50.0, (0.0, 0.5, 1.0, 1.5, 2.0), n_points=400)
print("   r   eps at max Q_c   max Q_c       eps_Carnot(r)")
for c in curves:
    eps_star, q_star = c.peak
    i = c.cooling_power.argmax()
    eps_c = carnot_efficiency(170.0, 80.0, 30.0, c.squeezing, 50.0 - c.omega_c[i])
    print(f"{c.squeezing:4.1f}   {eps_star:14.5f}   {q_star:11.5e}   {eps_c:.5f}")
print("\nunsqueezed Carnot value:", round(carnot_efficiency(170.0, 80.0, 30.0), 5))
