"""Trade-off between coupling strength and heralded success probability.

Sweeps gamma2 for the qubit protocol under the teleportation constraint and
locates the maximum with a golden-section search.  The sweep rows use the
same CSV columns the command-line `sweep` subcommand emits.
"""

import numpy as np

from fockherald import optimize_teleport_success, sweep

grid = np.linspace(0.01, 0.24, 24)
rows = sweep("teleport-qubit", grid)

print("gamma2    gamma1    probability  fidelity")
for row in rows:
    print(f"{row['gamma2']:.4f}    {row['gamma1']:.4f}    "
          f"{row['probability']:.6f}     {row['fidelity']:.9f}")

g2_star, p_star = optimize_teleport_success(
    "teleport-qubit", (0.001, 0.3), tolerance=1e-6
)
print()
print(f"golden-section optimum: gamma2* = {g2_star:.6f}, p* = {p_star:.6f}")
print("beyond gamma2 = 0.25 the constraint would need gamma1 >= 1, so the")
print("feasible window ends there and the optimizer treats it as zero gain.")
