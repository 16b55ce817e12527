"""Honest parties: Bob either learns Alice's bit for sure or knows he failed.

Run with ``python demos/01_honest_round.py``.
"""
import numpy as np

from wrot import bob_distribution, build_povm, build_signal_states, make_params, run_monte_carlo

a = 0.5
params = make_params(a)
states = build_signal_states(params)
povm = build_povm(params)

# The two signal states overlap by exactly a.
print("overlap <psi0|psi1> =", states.psi0.inner(states.psi1))

# Bob's outcome distribution in the order (bit 1, bit 0, BOT).
# The wrong bit never appears, and BOT fires with probability a.
for x in (0, 1):
    print(f"x={x}:", bob_distribution(povm, states[x]))

# POVM elements as plain matrices.
for name, e in zip(("E1", "E2", "E3"), povm.elements):
    print(name, np.round(e.matrix().real, 6).tolist())

# A million rounds. Trial i always uses the same random stream, so the counts
# are identical no matter how many threads do the work.
stats = run_monte_carlo(params, trials=1_000_000, seed=42, threads=4)
print(stats.to_record())
print("decoded correctly:", stats.empirical_correct_rate, "(expected p = 1 - a =", params.p, ")")
