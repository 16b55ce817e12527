"""Advantage of each cheater as a function of the overlap a.

Writes ``tradeoff.csv`` and ``tradeoff.svg`` into the working directory.
Run with ``python demos/04_tradeoff_curves.py``.
"""
import math

from wrot import harness

rows = harness.sweep(harness.SweepConfig(0.0, 1.0, 101))
harness.emit_csv(rows, "tradeoff.csv")
harness.emit_svg(rows, "tradeoff.svg")

peak_v = max(rows, key=lambda r: r.v_max)
peak_u = max(rows, key=lambda r: r.u)
print(f"v_max peaks at a={peak_v.a} ({peak_v.v_max:.6f}); exact 3-2*sqrt(2)={3 - 2 * math.sqrt(2):.6f}")
print(f"u peaks at a={peak_u.a} ({peak_u.u:.6f}); exact (sqrt(2)-1)/2={(math.sqrt(2) - 1) / 2:.6f}")

# Both advantages shrink as a goes to 0, but so does Alice's uncertainty about
# whether Bob failed, which is a in the honest protocol.
for r in rows[::10]:
    print(f"a={r.a:.2f}  v_max={r.v_max:.4f}  v_min={r.v_min:.4f}  u={r.u:.4f}")

# Closed forms against simulation at a few points.
for a in (0.1, 0.5, 0.9):
    checks = harness.validate_sweep_by_simulation(harness.sweep_row(a), 200_000, seed=11)
    print(a, [(c.name, c.ok) for c in checks])
