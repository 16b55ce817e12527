"""Cheating Alice: how far can a single prepared qubit move Bob's failure rate?

Run with ``python demos/02_cheating_alice.py``.
"""
import numpy as np

from wrot import adversaries as adv
from wrot.protocol import simulate_rounds

a = 0.5

# Every pure preparation is sqrt(1 - d1^2 - d2^2)|0> + (d1 + i d2)|1>.
# The closed-form shift of Bob's BOT probability agrees with measuring E3 directly.
d = adv.PureCheatState(0.3, -0.4)
print("formula:", adv.alice_advantage_analytic(a, d))
print("measured:", adv.alice_advantage_numeric(a, d))

# The two extremes, and an independent brute-force search over the unit disk.
hi, lo = adv.max_alice_advantage(a), adv.min_alice_advantage(a)
print("max:", hi.to_record(), "search:", adv.search_alice_extreme(a, "max"))
print("min:", lo.to_record(), "search:", adv.search_alice_extreme(a, "min"))

# Entangling the qubit with a private register does not widen that range:
# Bob's statistics only depend on his reduced state.
rng = np.random.default_rng(0)
worst = max(adv.entangled_alice_no_advantage(a, adv.random_joint_state(rng)).max_diff for _ in range(1000))
print("joint vs reduced, worst difference over 1000 random states:", worst)

# Simulated check: Bob's BOT rate under the maximizing preparation.
stats = simulate_rounds(a, adv.alice_cheat_table(a, hi.state), 1_000_000, seed=1)
print("simulated BOT rate:", stats.empirical_bot_rate, "predicted:", hi.p_bot_observed)
