"""Cheating Bob: guess every bit with the best projective measurement.

Run with ``python demos/03_cheating_bob.py``.
"""
import math

from wrot import adversaries as adv
from wrot.protocol import build_signal_states, make_params, simulate_rounds

a = 0.5
rep = adv.optimal_bob(a)
print(rep.to_record())

# The basis is tilted so both signal states sit pi/4 - alpha/2 from their partner vector.
print("theta* =", rep.theta, "= pi/12:", math.pi / 12)

# A scan over every real rotation lands on the same angle and never beats the
# Helstrom bound.
sig = build_signal_states(make_params(a))
print("theta scan:", adv.scan_bob_theta(a))
print("full rotation scan:", adv.scan_bob_rotations(a))
print("Helstrom bound:", adv.helstrom_bound(sig.psi0, sig.psi1))

# Compare a naive guess in the computational basis.
print("theta = 0 success:", adv.bob_success_rate(a, adv.bob_guess_basis(a, 0.0)))

stats = simulate_rounds(a, adv.bob_guess_table(a, rep.strategy), 1_000_000, seed=3)
print("simulated success:", stats.empirical_correct_rate)
