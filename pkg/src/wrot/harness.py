"""Trade-off sweeps over the overlap ``a``, simulation cross-checks, and CSV/SVG output."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, TextIO, Union

import numpy as np

from . import adversaries as adv
from .protocol import (
    build_povm,
    build_signal_states,
    honest_table,
    make_params,
    simulate_rounds,
)
from .qalg import eigs2, expectation

Destination = Union[str, "os.PathLike[str]", TextIO]

CSV_HEADER = "a,p,v_max,v_min,q,u"
ROW_TOL = 1e-12


class EmptySweep(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    a_min: float = 0.0
    a_max: float = 1.0
    steps: int = 101

    def __post_init__(self):
        if not 0.0 <= self.a_min < self.a_max <= 1.0:
            raise ValueError(f"need 0 <= a_min < a_max <= 1, got [{self.a_min}, {self.a_max}]")
        if self.steps < 2:
            raise ValueError("steps must be at least 2")

    def grid(self) -> list[float]:
        n = self.steps - 1
        return [(self.a_min * (n - i) + self.a_max * i) / n for i in range(self.steps)]


@dataclass(frozen=True)
class SweepRow:
    a: float
    p: float
    v_max: float
    v_min: float
    q: float
    u: float

    def as_tuple(self) -> tuple[float, ...]:
        return (self.a, self.p, self.v_max, self.v_min, self.q, self.u)


def sweep_row(a: float) -> SweepRow:
    # closed forms are finite at a = 0 and a = 1, where they equal their limits
    a = float(a)
    q = float(adv.q_closed(a))
    p = 1.0 - a
    return SweepRow(
        a=a,
        p=p,
        v_max=float(adv.v_max_closed(a)),
        v_min=float(adv.v_min_closed(a)),
        q=q,
        u=q - p - (1.0 - p) / 2,
    )


def sweep(config: SweepConfig = SweepConfig(), threads: int = 1) -> list[SweepRow]:
    grid = config.grid()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(sweep_row, grid))
    return [sweep_row(a) for a in grid]


def row_violations(row: SweepRow, tol: float = ROW_TOL) -> list[str]:
    """Names of the row fields that drift from their closed forms by more than ``tol``."""
    a = row.a
    expected = {
        "p": 1.0 - a,
        "v_max": a * (1 - a) / (1 + a),
        "v_min": -a,
        "q": (1 + math.sqrt(max(0.0, 1 - a * a))) / 2,
        "u": (a - 1 + math.sqrt(max(0.0, 1 - a * a))) / 2,
    }
    return [k for k, v in expected.items() if abs(getattr(row, k) - v) > tol]


def rises_then_falls(values: Sequence[float]) -> bool:
    """True when the sequence is non-decreasing up to its peak and non-increasing after."""
    k = int(np.argmax(values))
    d = np.diff(np.asarray(values, dtype=float))
    return bool(np.all(d[:k] >= 0) and np.all(d[k:] <= 0) and 0 < k < len(values) - 1)


# ---------------------------------------------------------------- simulation checks


@dataclass(frozen=True)
class CheckReport:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}" + (f" {self.detail}" if self.detail else "")


@dataclass(frozen=True)
class RateCheck:
    name: str
    predicted: float
    observed: float
    stderr: float
    ok: bool


def _rate_check(name: str, predicted: float, observed: float, trials: int, sigmas: float) -> RateCheck:
    stderr = math.sqrt(max(0.0, predicted * (1 - predicted)) / trials)
    ok = abs(observed - predicted) <= sigmas * stderr + 1e-12
    return RateCheck(name, predicted, observed, stderr, ok)


def validate_sweep_by_simulation(
    row: SweepRow, trials: int, seed: int, threads: int = 1, sigmas: float = 4.0
) -> list[RateCheck]:
    """Monte Carlo each party model at ``row.a`` and compare with the row's closed forms.

    Runs honest parties, the BOT-raising and BOT-suppressing Alice, and the
    optimal guessing Bob, each on its own seed offset.
    """
    a = row.a
    params = make_params(a)
    hi = adv.max_alice_advantage(a)
    lo = adv.min_alice_advantage(a)
    bob = adv.optimal_bob(a)

    def seed_k(k):
        return (seed + k) % 2**64

    runs = [
        ("honest_bot_rate", honest_table(params), a + 0.0, "bot"),
        ("alice_max_bot_rate", adv.alice_cheat_table(a, hi.state), a + row.v_max, "bot"),
        ("alice_min_bot_rate", adv.alice_cheat_table(a, lo.state), a + row.v_min, "bot"),
        ("bob_opt_correct_rate", adv.bob_guess_table(a, bob.strategy), row.q, "correct"),
    ]
    checks = []
    for k, (name, table, predicted, which) in enumerate(runs):
        stats = simulate_rounds(a, table, trials, seed_k(k), "random", threads)
        observed = stats.empirical_bot_rate if which == "bot" else stats.empirical_correct_rate
        checks.append(_rate_check(name, predicted, observed, trials, sigmas))
    return checks


# ---------------------------------------------------------------- emission


def _open(destination: Destination):
    if hasattr(destination, "write"):
        return destination, False
    return open(destination, "w", encoding="utf-8", newline="\n"), True


def csv_text(rows: Sequence[SweepRow]) -> str:
    if not rows:
        raise EmptySweep("no rows to write")
    lines = [CSV_HEADER]
    lines += [",".join(repr(float(v)) for v in r.as_tuple()) for r in rows]
    return "\n".join(lines) + "\n"


def emit_csv(rows: Sequence[SweepRow], destination: Destination) -> None:
    text = csv_text(rows)
    fh, owned = _open(destination)
    try:
        fh.write(text)
    finally:
        if owned:
            fh.close()


def read_csv(source: Union[str, "os.PathLike[str]"]) -> list[SweepRow]:
    with open(source, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise ValueError(f"unexpected header {header!r}")
        return [SweepRow(*map(float, line.rstrip("\n").split(","))) for line in fh if line.strip()]


SVG_W, SVG_H = 800, 600
_LEFT, _RIGHT, _TOP, _BOTTOM = 80, 40, 40, 70
_COLORS = {"v_max": "#1f77b4", "u": "#d62728"}


def svg_text(rows: Sequence[SweepRow]) -> str:
    if len(rows) < 2:
        raise ValueError("an SVG plot needs at least two rows")
    xs = [r.a for r in rows]
    series = {"v_max": [r.v_max for r in rows], "u": [r.u for r in rows]}
    x0, x1 = min(xs), max(xs)
    y0 = min(0.0, *series["v_max"], *series["u"])
    y1 = max(*series["v_max"], *series["u"])
    y1 = y1 * 1.1 if y1 > 0 else 1.0
    pw, ph = SVG_W - _LEFT - _RIGHT, SVG_H - _TOP - _BOTTOM

    def px(x):
        return _LEFT + (x - x0) / (x1 - x0) * pw

    def py(y):
        return _TOP + (1 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" '
        f'viewBox="0 0 {SVG_W} {SVG_H}">',
        f'<rect x="0" y="0" width="{SVG_W}" height="{SVG_H}" fill="white"/>',
        f'<line id="x_axis" x1="{_LEFT}" y1="{py(y0):.3f}" x2="{SVG_W - _RIGHT}" y2="{py(y0):.3f}" stroke="black"/>',
        f'<line id="y_axis" x1="{_LEFT}" y1="{_TOP}" x2="{_LEFT}" y2="{SVG_H - _BOTTOM}" stroke="black"/>',
    ]
    for i in range(6):
        xv = x0 + (x1 - x0) * i / 5
        yv = y0 + (y1 - y0) * i / 5
        out.append(
            f'<text x="{px(xv):.3f}" y="{SVG_H - _BOTTOM + 20}" font-size="12" text-anchor="middle">{xv:.2f}</text>'
        )
        out.append(
            f'<text x="{_LEFT - 8}" y="{py(yv) + 4:.3f}" font-size="12" text-anchor="end">{yv:.3f}</text>'
        )
    out.append(
        f'<text id="x_label" x="{_LEFT + pw / 2:.1f}" y="{SVG_H - 20}" font-size="16" text-anchor="middle">a</text>'
    )
    out.append(
        f'<text id="y_label" x="20" y="{_TOP + ph / 2:.1f}" font-size="16" text-anchor="middle" '
        f'transform="rotate(-90 20 {_TOP + ph / 2:.1f})">advantage</text>'
    )
    for k, (name, ys) in enumerate(series.items()):
        pts = " ".join(f"{px(x):.3f},{py(y):.3f}" for x, y in zip(xs, ys))
        out.append(
            f'<polyline id="{name}" fill="none" stroke="{_COLORS[name]}" stroke-width="2" points="{pts}"/>'
        )
        ly = _TOP + 20 + 20 * k
        out.append(
            f'<line x1="{SVG_W - 160}" y1="{ly}" x2="{SVG_W - 130}" y2="{ly}" stroke="{_COLORS[name]}" stroke-width="2"/>'
        )
        out.append(f'<text x="{SVG_W - 122}" y="{ly + 4}" font-size="14">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(rows: Sequence[SweepRow], destination: Destination) -> None:
    text = svg_text(rows)
    fh, owned = _open(destination)
    try:
        fh.write(text)
    finally:
        if owned:
            fh.close()


# ---------------------------------------------------------------- invariant suite


def a_grid(n: int) -> list[float]:
    """``n`` interior points ``1/(n+1), ..., n/(n+1)``; 99 gives 0.01 .. 0.99."""
    return [(i + 1) / (n + 1) for i in range(n)]


def _pmap(fn: Callable, items: Iterable, threads: int) -> list:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def check_povm(grid: Sequence[float]) -> CheckReport:
    worst_sum = worst_eig = worst_unamb = 0.0
    for a in grid:
        params = make_params(a)
        povm = build_povm(params)
        st = build_signal_states(params)
        total = povm.e1 + povm.e2 + povm.e3
        worst_sum = max(worst_sum, abs(total.m00 - 1), abs(total.m11 - 1), abs(total.m01))
        worst_eig = min(worst_eig, *(eigs2(e)[0][0] for e in povm.elements))
        worst_unamb = max(worst_unamb, expectation(povm.e1, st.psi0), expectation(povm.e2, st.psi1))
    ok = worst_sum <= 1e-12 and worst_eig >= -1e-10 and worst_unamb <= 1e-12
    return CheckReport(
        "povm_validity", ok, f"sum_err={worst_sum:.3g} min_eig={worst_eig:.3g} unambiguity={worst_unamb:.3g}"
    )


def check_honest_bot(grid: Sequence[float]) -> CheckReport:
    worst = 0.0
    for a in grid:
        params = make_params(a)
        for dist in honest_table(params):
            worst = max(worst, abs(dist[2] - a))
    return CheckReport("honest_bot_rate", worst <= 1e-12, f"max_err={worst:.3g}")


def check_advantage_formula(grid: Sequence[float], n_d: int = 50) -> CheckReport:
    worst = adv.advantage_grid_discrepancy(grid, n_d)
    return CheckReport("advantage_formula", worst <= 1e-10, f"max_err={worst:.3g}")


def check_alice_extremes(grid: Sequence[float], threads: int = 1) -> CheckReport:
    def one(a):
        found = adv.search_alice_extreme(a, "max")
        hi = adv.max_alice_advantage(a)
        lo = adv.min_alice_advantage(a)
        lam = eigs2(build_povm(make_params(a)).e3)[0][0]
        return (
            abs(found.v - hi.v),
            abs(found.d1 - hi.state.d1),
            abs(lam),
            abs(lo.v + a),
        )

    errs = np.array(_pmap(one, grid, threads))
    worst = errs.max(axis=0)
    ok = worst[0] <= 1e-6 and worst[1] <= 1e-3 and worst[2] <= 1e-12 and worst[3] <= 1e-10
    return CheckReport(
        "alice_extremes",
        ok,
        f"v_err={worst[0]:.3g} d1_err={worst[1]:.3g} lambda_min={worst[2]:.3g} v_min_err={worst[3]:.3g}",
    )


def check_bob_optimum(grid: Sequence[float]) -> CheckReport:
    worst_theta = worst_q = worst_hel = 0.0
    for a in grid:
        rep = adv.optimal_bob(a)
        theta_scan, _ = adv.scan_bob_theta(a)
        st = build_signal_states(make_params(a))
        worst_theta = max(worst_theta, abs(theta_scan - rep.theta))
        worst_q = max(worst_q, abs(rep.q - float(adv.q_closed(a))))
        worst_hel = max(worst_hel, abs(rep.q - adv.helstrom_bound(st.psi0, st.psi1)))
    ok = worst_theta <= 2e-4 and worst_q <= 1e-12 and worst_hel <= 1e-12
    return CheckReport(
        "bob_optimum", ok, f"theta_err={worst_theta:.3g} q_err={worst_q:.3g} helstrom_err={worst_hel:.3g}"
    )


def check_landmarks(steps: int = 101) -> CheckReport:
    rows = sweep(SweepConfig(0.0, 1.0, steps))
    h = 1.0 / (steps - 1)
    v = np.array([r.v_max for r in rows])
    u = np.array([r.u for r in rows])
    a = np.array([r.a for r in rows])
    kv, ku = int(np.argmax(v)), int(np.argmax(u))
    ok = (
        abs(a[kv] - (math.sqrt(2) - 1)) <= h
        and abs(a[ku] - 1 / math.sqrt(2)) <= h
        and abs(v[kv] - (3 - 2 * math.sqrt(2))) <= landmark_tol(h)
        and abs(u[ku] - (math.sqrt(2) - 1) / 2) <= landmark_tol(h)
    )
    return CheckReport("curve_landmarks", ok, f"v_peak={float(v[kv])!r}@{float(a[kv])!r} u_peak={float(u[ku])!r}@{float(a[ku])!r}")


def landmark_tol(h: float) -> float:
    """Bound on peak value minus nearest grid sample for grid spacing ``h``.

    Both curves have |f''| < 2 within a grid step of their peaks, so the gap is at most (h/2)^2.
    """
    return h * h / 4


def check_entanglement(grid: Sequence[float], seed: int, n_states: int = 100) -> CheckReport:
    rng = np.random.default_rng(seed)
    joints = [adv.random_joint_state(rng) for _ in range(n_states)]
    worst = 0.0
    ok = True
    for a in grid:
        for joint in joints:
            rep = adv.entangled_alice_no_advantage(a, joint)
            worst = max(worst, rep.max_diff)
            ok &= rep.ok
    return CheckReport("entanglement_no_advantage", ok, f"max_diff={worst:.3g}")


def check_monotone(steps: int = 101) -> CheckReport:
    rows = sweep(SweepConfig(0.0, 1.0, steps))
    v = [r.v_max for r in rows if 0 < r.a <= math.sqrt(2) - 1]
    u = [r.u for r in rows if 0 < r.a <= 1 / math.sqrt(2)]
    ok = all(y > x for x, y in zip(v, v[1:])) and all(y > x for x, y in zip(u, u[1:]))
    return CheckReport("small_a_suppression", ok)


def check_sweep_rows(steps: int = 101) -> CheckReport:
    rows = sweep(SweepConfig(0.0, 1.0, steps))
    bad = [r.a for r in rows if row_violations(r)]
    interior = [r for r in rows if 0 < r.a < 1]
    ok = (
        not bad
        and all(r.v_max < r.a for r in interior)
        and all(r.u >= 0 and r.v_max >= 0 for r in rows)
        and rises_then_falls([r.v_max for r in rows])
        and rises_then_falls([r.u for r in rows])
    )
    return CheckReport("sweep_rows", ok, f"bad_rows={len(bad)}")


def verify_suite(n_grid: int = 99, seed: int = 0, threads: int = 1) -> list[CheckReport]:
    """Every analytic invariant of the protocol and both attacks on an ``n_grid``-point grid."""
    grid = a_grid(n_grid)
    return [
        check_povm(grid),
        check_honest_bot(grid),
        check_advantage_formula(grid),
        check_alice_extremes(grid, threads),
        check_bob_optimum(grid),
        check_landmarks(),
        check_entanglement(grid, seed),
        check_monotone(),
        check_sweep_rows(),
    ]
