"""
Entropic and geometric discord on isotropic two-qubit states
============================================================

Every reduced pair state of an SU(2)-symmetric eigen-mixture is a Werner-like
state fixed by one correlator c. We scan c and compare the two discord
measures. The classical correlation is checked against its Bell-diagonal
closed form.
"""

import numpy as np

from j1j2discord import classical_correlation, gmqd_symmetric, quantum_discord
from j1j2discord.reduced_state import PAULI

eye = np.eye(4)
ss = sum(np.kron(s, s) for s in PAULI)

print("   c      QD       GMQD     C(num)    C(closed)")
for c in np.linspace(-1, 1 / 3, 9):
    rho = (eye + c * ss) / 4
    qd = quantum_discord(rho).discord
    cc, _ = classical_correlation(rho)
    a = abs(c)
    closed = (1 - a) / 2 * np.log2(1 - a) + (1 + a) / 2 * np.log2(1 + a) if a < 1 else 1.0
    print(f"{c:+.3f}  {qd:.5f}  {gmqd_symmetric(c):.5f}  {cc:.6f}  {closed:.6f}")
