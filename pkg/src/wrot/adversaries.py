"""Cheating strategies against the weak Rabin OT round.

A cheating Alice replaces the signal state by an arbitrary qubit
``sqrt(1 - d1^2 - d2^2)|0> + (d1 + i d2)|1>`` to shift the probability that
Bob's POVM ends in ``BOT``. A cheating Bob never outputs ``BOT`` and instead
guesses the bit with a projective measurement in a rotated real basis.

Every closed form here has a search-based or linear-algebra counterpart so
the two can be compared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .protocol import (
    OutOfRange,
    bob_distribution,
    build_povm,
    build_signal_states,
    make_params,
)
from .qalg import (
    JointState,
    StateVector,
    eigs2,
    expectation,
    expectation_array,
    make_state,
    reduce_to_bob,
    trace_product,
)

BALL_TOL = 1e-12


class OutOfBall(ValueError):
    pass


# ---------------------------------------------------------------- closed forms
# These accept the closed interval [0, 1] so sweeps can include the endpoints.


def v_max_closed(a):
    return a * (1 - a) / (1 + a)


def v_min_closed(a):
    return 0.0 - a  # keeps a = 0 from producing -0.0


def q_closed(a):
    return (1 + np.sqrt((1 - a) * (1 + a))) / 2


def baseline(a):
    """Success rate of a Bob who decodes honestly and guesses on BOT."""
    p = 1 - a
    return p + (1 - p) / 2


def u_closed(a):
    return (a - 1 + np.sqrt((1 - a) * (1 + a))) / 2


def bob_theta_closed(a: float) -> float:
    return math.pi / 4 - math.acos(a) / 2


def helstrom_bound(psi0: StateVector, psi1: StateVector) -> float:
    """Best success probability for telling two equiprobable pure states apart."""
    overlap2 = abs(psi0.inner(psi1)) ** 2
    return (1.0 + math.sqrt(max(0.0, 1.0 - overlap2))) / 2.0


# ---------------------------------------------------------------- Alice


@dataclass(frozen=True)
class PureCheatState:
    d1: float
    d2: float

    def __post_init__(self):
        r2 = self.d1**2 + self.d2**2
        if r2 > 1.0 + BALL_TOL:
            raise OutOfBall(f"d1^2 + d2^2 = {r2!r} exceeds 1")


def cheat_state(d: PureCheatState) -> StateVector:
    s = math.sqrt(max(0.0, 1.0 - d.d1**2 - d.d2**2))
    return make_state(s, complex(d.d1, d.d2))


def alice_advantage_analytic(a: float, d: PureCheatState) -> float:
    """Shift of Bob's BOT probability caused by preparing ``d``, by formula."""
    rest = 1.0 - d.d1**2 - d.d2**2  # same rounding as cheat_state near the sphere
    root = math.sqrt(max(0.0, (1 - a * a) * rest))
    return 2 * a * (-a * (1.0 - rest) + d.d1 * root) / (1 + a)


def alice_advantage_numeric(a: float, d: PureCheatState) -> float:
    """Same shift, measured as <psi|E3|psi> - a on the constructed POVM."""
    e3 = build_povm(make_params(a)).e3
    return expectation(e3, cheat_state(d)) - a


def _analytic_array(a, d1, d2):
    rest = 1.0 - d1**2 - d2**2
    root = np.sqrt(np.clip((1 - a * a) * rest, 0.0, None))
    return 2 * a * (-a * (1.0 - rest) + d1 * root) / (1 + a)


def _numeric_array(e3, a, d1, d2):
    s = np.sqrt(np.clip(1.0 - d1**2 - d2**2, 0.0, None))
    return expectation_array(e3, s.astype(complex), d1 + 1j * d2) - a


def advantage_grid_discrepancy(a_values, n_d: int = 50) -> float:
    """Largest |analytic - numeric| over an ``n_d x n_d`` (d1, d2) grid inside the unit disk, per a."""
    d = np.linspace(-1.0, 1.0, n_d)
    d1, d2 = np.meshgrid(d, d, indexing="ij")
    inside = d1**2 + d2**2 <= 1.0
    d1, d2 = d1[inside], d2[inside]
    worst = 0.0
    for a in a_values:
        e3 = build_povm(make_params(a)).e3
        diff = np.abs(_analytic_array(a, d1, d2) - _numeric_array(e3, a, d1, d2))
        worst = max(worst, float(diff.max()))
    return worst


@dataclass(frozen=True)
class AliceAttackReport:
    kind: str
    a: float
    v: float
    p_bot_observed: float
    state: PureCheatState

    def __post_init__(self):
        if abs(self.p_bot_observed - (self.a + self.v)) > 1e-12:
            raise ValueError("p_bot_observed must equal a + v")
        if not -self.a - 1e-10 <= self.v <= v_max_closed(self.a) + 1e-10:
            raise ValueError(f"v={self.v!r} outside the achievable range")

    @property
    def abs_v(self) -> float:
        return abs(self.v)

    def to_record(self) -> dict:
        return {"a": self.a, "kind": self.kind, "v": self.v, "d1": self.state.d1, "d2": self.state.d2}


def _report(kind: str, a: float, d: PureCheatState) -> AliceAttackReport:
    v = alice_advantage_analytic(a, d)
    return AliceAttackReport(kind=kind, a=a, v=v, p_bot_observed=a + v, state=d)


def max_alice_advantage(a: float) -> AliceAttackReport:
    """Alice's best attempt at making Bob output BOT more often."""
    make_params(a)
    return _report("alice_max", a, PureCheatState(math.sqrt((1 - a) / 2), 0.0))


def min_alice_advantage(a: float) -> AliceAttackReport:
    """Alice's preparation that Bob can never fail on: the kernel of E3.

    The kernel is read off the eigendecomposition, with the global phase fixed
    so that the |0> amplitude is real and positive; that leaves d1 < 0.
    """
    e3 = build_povm(make_params(a)).e3
    (lam, kernel), _ = eigs2(e3)
    if abs(lam) > 1e-12:
        raise ArithmeticError(f"E3 is not singular at a={a!r}: lambda_min={lam!r}")
    d = PureCheatState(kernel.amp1.real, kernel.amp1.imag)
    return _report("alice_min", a, d)


def _golden_max(f, lo: float, hi: float, tol: float) -> float:
    inv_phi = (math.sqrt(5) - 1) / 2
    c, d = hi - inv_phi * (hi - lo), lo + inv_phi * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = f(d)
    return (lo + hi) / 2


@dataclass(frozen=True)
class SearchResult:
    v: float
    d1: float
    d2: float


def search_alice_extreme(a: float, sense: str = "max", step: float = 1e-3, tol: float = 1e-6) -> SearchResult:
    """Brute-force optimum of Alice's advantage, independent of the closed forms.

    Scans (d1, d2) over the unit disk on a square grid with spacing ``step``,
    evaluating ``<psi|E3|psi> - a`` directly, then refines the best grid point
    by alternating golden-section searches on d1 and d2 until both move less
    than ``tol``. Ties on the grid go to the lowest index (smallest d1, d2).
    """
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    sign = 1.0 if sense == "max" else -1.0
    e3 = build_povm(make_params(a)).e3
    n = int(round(2.0 / step)) + 1
    grid = np.linspace(-1.0, 1.0, n)

    best = (-np.inf, 0.0, 0.0)
    rows = 256
    for start in range(0, n, rows):
        d1 = grid[start : start + rows, None]
        d2 = grid[None, :]
        val = sign * _numeric_array(e3, a, d1, d2)
        val = np.where(d1**2 + d2**2 <= 1.0, val, -np.inf)
        k = int(np.argmax(val))
        i, j = divmod(k, n)
        if val.flat[k] > best[0]:
            best = (float(val.flat[k]), float(grid[start + i]), float(grid[j]))

    def objective(x1, x2):
        if x1 * x1 + x2 * x2 > 1.0:
            return -np.inf
        s = math.sqrt(1.0 - x1 * x1 - x2 * x2)
        return sign * (expectation(e3, StateVector(complex(s), complex(x1, x2))) - a)

    _, x1, x2 = best
    for _ in range(50):
        n1 = _golden_max(lambda t: objective(t, x2), x1 - step, x1 + step, tol / 10)
        n2 = _golden_max(lambda t: objective(n1, t), x2 - step, x2 + step, tol / 10)
        moved = max(abs(n1 - x1), abs(n2 - x2))
        x1, x2 = n1, n2
        if moved < tol:
            break
    return SearchResult(v=sign * objective(x1, x2), d1=x1, d2=x2)


def alice_cheat_table(a: float, d: PureCheatState) -> list[tuple[float, float, float]]:
    """Bob's outcome distribution when Alice sends ``d`` regardless of her bit."""
    dist = bob_distribution(build_povm(make_params(a)), cheat_state(d))
    return [dist, dist]


@dataclass(frozen=True)
class EntanglementCheck:
    direct: tuple[float, float, float]
    reduced: tuple[float, float, float]
    p_bot: float
    bot_ceiling: float
    max_diff: float
    ok: bool


def random_joint_state(rng: np.random.Generator) -> JointState:
    z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    z /= np.linalg.norm(z)
    return JointState(tuple(complex(c) for c in z))


def entangled_alice_no_advantage(a: float, joint: JointState, tol: float = 1e-10) -> EntanglementCheck:
    """Compare Bob's outcome statistics on an entangled preparation two ways.

    ``direct`` applies ``I (x) E_i`` to the joint state, ``reduced`` traces out
    Alice first. They must agree, and the BOT probability must stay within
    ``[0, lambda_max(E3)]``, the range already reachable with a single qubit.
    """
    povm = build_povm(make_params(a))
    psi = joint.as_array()
    direct = tuple(
        float(np.real(np.vdot(psi, np.kron(np.eye(2), e.matrix()) @ psi))) for e in povm.elements
    )
    rho = reduce_to_bob(joint)
    reduced = tuple(trace_product(rho, e) for e in povm.elements)
    ceiling = eigs2(povm.e3)[1][0]
    max_diff = max(abs(x - y) for x, y in zip(direct, reduced))
    p_bot = reduced[2]
    ok = max_diff <= tol and -tol <= p_bot <= ceiling + tol
    return EntanglementCheck(direct, reduced, p_bot, ceiling, max_diff, ok)


# ---------------------------------------------------------------- Bob


@dataclass(frozen=True)
class BobGuessStrategy:
    """Projective guess: outcome phi0 -> bit 0, phi1 -> bit 1."""

    theta: float
    phi0: StateVector
    phi1: StateVector


def rotated_basis(beta: float) -> tuple[StateVector, StateVector]:
    """Real orthonormal basis with phi0 at angle ``beta`` from |0>."""
    c, s = math.cos(beta), math.sin(beta)
    return make_state(c, s), make_state(-s, c)


def bob_guess_basis(a: float, theta: float) -> BobGuessStrategy:
    """Basis with phi0 rotated by ``theta`` away from psi1, i.e. at angle -theta.

    At ``theta = pi/4 - alpha/2`` both signal states sit at that same angle
    from their partner basis vector.
    """
    if not 0.0 <= theta <= math.pi / 4:
        raise OutOfRange(f"theta={theta!r} outside [0, pi/4]")
    make_params(a)
    phi0, phi1 = rotated_basis(-theta)
    return BobGuessStrategy(theta, phi0, phi1)


def bob_success_rate(a: float, strategy: BobGuessStrategy) -> float:
    """Probability of guessing a uniformly random bit correctly."""
    states = build_signal_states(make_params(a))
    hit0 = abs(strategy.phi0.inner(states.psi0)) ** 2
    hit1 = abs(strategy.phi1.inner(states.psi1)) ** 2
    return (hit0 + hit1) / 2


def _success_for_angles(a: float, beta: np.ndarray) -> np.ndarray:
    s = math.sqrt((1 - a) * (1 + a))
    # phi0 = (cos b, sin b), phi1 = (-sin b, cos b); psi0 = (1, 0), psi1 = (a, s)
    hit0 = np.cos(beta) ** 2
    hit1 = (-np.sin(beta) * a + np.cos(beta) * s) ** 2
    return (hit0 + hit1) / 2


def scan_bob_theta(a: float, step: float = 1e-4) -> tuple[float, float]:
    """Grid argmax of the success rate over theta in [0, pi/4]; returns (theta, q)."""
    theta = np.arange(0.0, math.pi / 4 + step / 2, step)
    q = _success_for_angles(a, -theta)
    k = int(np.argmax(q))
    return float(theta[k]), float(q[k])


def scan_bob_rotations(a: float, step: float = 1e-4) -> tuple[float, float]:
    """Grid argmax over every real rotation beta in [-pi/2, pi/2]; returns (beta, q)."""
    beta = np.arange(-math.pi / 2, math.pi / 2 + step / 2, step)
    q = _success_for_angles(a, beta)
    k = int(np.argmax(q))
    return float(beta[k]), float(q[k])


@dataclass(frozen=True)
class BobAttackReport:
    a: float
    q: float
    u: float
    baseline: float
    strategy: BobGuessStrategy

    def __post_init__(self):
        if abs(self.u - (self.q - self.baseline)) > 1e-12:
            raise ValueError("u must equal q - baseline")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError("q must be a probability")

    @property
    def theta(self) -> float:
        return self.strategy.theta

    def to_record(self) -> dict:
        return {"a": self.a, "kind": "bob_opt", "u": self.u, "q": self.q, "theta": self.theta}


def bob_report(a: float, strategy: BobGuessStrategy) -> BobAttackReport:
    q = bob_success_rate(a, strategy)
    base = baseline(a)
    return BobAttackReport(a=a, q=q, u=q - base, baseline=base, strategy=strategy)


def optimal_bob(a: float) -> BobAttackReport:
    return bob_report(a, bob_guess_basis(a, bob_theta_closed(a)))


def bob_guess_table(a: float, strategy: BobGuessStrategy) -> list[tuple[float, float, float]]:
    """Bob's output distribution per message bit; he never reports BOT."""
    states = build_signal_states(make_params(a))
    table = []
    for x in (0, 1):
        p1 = abs(strategy.phi1.inner(states[x])) ** 2
        p0 = abs(strategy.phi0.inner(states[x])) ** 2
        table.append((p1, p0, 0.0))
    return table
