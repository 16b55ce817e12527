"""The honest weak Rabin OT round.

Alice encodes a bit in one of two non-orthogonal qubit states, Bob applies the
unambiguous-discrimination POVM and either learns the bit or outputs ``BOT``.
Monte Carlo runs use a counter-based Philox stream per trial: trial ``i`` under
master seed ``s`` always sees the same uniforms, so results do not depend on
how the trials are split across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .qalg import (
    PSD_TOL,
    HermitianOp,
    StateVector,
    cutpoints,
    expectation,
    make_state,
    sample_outcome,
    sample_outcomes,
)

BitSource = Union[str, int]

CHUNK = 1 << 16
# uniforms reserved per trial: [bit draw, measurement draw, unused, unused]
_DRAWS_PER_TRIAL = 4
_DUST = 1e-14


class OutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class ProtocolParams:
    a: float
    alpha: float
    p: float

    def __post_init__(self):
        if not 0.0 < self.a < 1.0:
            raise OutOfRange(f"overlap a={self.a!r} must lie strictly inside (0, 1)")
        if self.p != 1.0 - self.a:
            raise ValueError("p must equal 1 - a")
        if abs(self.alpha - math.acos(self.a)) > 1e-12:
            raise ValueError("alpha must equal arccos(a)")


def make_params(a: float) -> ProtocolParams:
    a = float(a)
    if not 0.0 < a < 1.0 or math.isnan(a):
        raise OutOfRange(f"overlap a={a!r} must lie strictly inside (0, 1)")
    return ProtocolParams(a=a, alpha=math.acos(a), p=1.0 - a)


@dataclass(frozen=True)
class SignalStates:
    psi0: StateVector
    psi1: StateVector

    def __getitem__(self, x: int) -> StateVector:
        return (self.psi0, self.psi1)[x]


def build_signal_states(params: ProtocolParams) -> SignalStates:
    a = params.a
    return SignalStates(
        psi0=make_state(1.0, 0.0),
        psi1=make_state(a, math.sqrt((1.0 - a) * (1.0 + a))),
    )


@dataclass(frozen=True)
class Povm:
    """Elements in output order: e1 -> bit 1, e2 -> bit 0, e3 -> BOT."""

    e1: HermitianOp
    e2: HermitianOp
    e3: HermitianOp

    def __post_init__(self):
        for name in ("e1", "e2", "e3"):
            if not getattr(self, name).is_psd(PSD_TOL):
                raise ValueError(f"POVM element {name} is not positive semidefinite")
        total = self.e1 + self.e2 + self.e3
        if max(abs(total.m00 - 1.0), abs(total.m11 - 1.0), abs(total.m01)) > 1e-12:
            raise ValueError("POVM elements do not sum to the identity")

    @property
    def elements(self) -> tuple[HermitianOp, HermitianOp, HermitianOp]:
        return (self.e1, self.e2, self.e3)


def build_povm(params: ProtocolParams) -> Povm:
    a = params.a
    s = math.sqrt((1.0 - a) * (1.0 + a))
    scale = 1.0 / (1.0 + a)
    e1 = HermitianOp.projector(0.0, 1.0, scale)
    e2 = HermitianOp.projector(s, -a, scale)
    e3 = HermitianOp.identity() - e1 - e2
    return Povm(e1, e2, e3)


class BobOutput(Enum):
    ZERO = 0
    ONE = 1
    BOT = "bot"

    @property
    def bit(self) -> int | None:
        return None if self is BobOutput.BOT else self.value


# sampling order matches the POVM element order
OUTCOME_ORDER = (BobOutput.ONE, BobOutput.ZERO, BobOutput.BOT)


def _clean(prob: float) -> float:
    if abs(prob) < _DUST:
        return 0.0
    return min(1.0, max(0.0, prob))


def bob_distribution(povm: Povm, state: StateVector) -> tuple[float, float, float]:
    """Outcome probabilities ``(p_bit1, p_bit0, p_bot)`` for one received qubit."""
    probs = tuple(_clean(expectation(e, state)) for e in povm.elements)
    assert abs(sum(probs) - 1.0) <= 1e-10, probs
    return probs


def draw_bit(u: float) -> int:
    return 1 if u >= 0.5 else 0


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for trial ``index`` under master ``seed``."""
    return np.random.Generator(np.random.Philox(key=seed, counter=index))


def honest_round(
    x: int, params: ProtocolParams, povm: Povm, rng: np.random.Generator
) -> BobOutput:
    """One honest round: Alice sends the state for ``x``, Bob measures."""
    if x not in (0, 1):
        raise ValueError(f"message bit must be 0 or 1, got {x!r}")
    states = build_signal_states(params)
    probs = bob_distribution(povm, states[x])
    return OUTCOME_ORDER[sample_outcome(probs, rng)]


@dataclass
class RunStats:
    a: float
    trials: int
    seed: int
    count0: int
    count1: int
    countBot: int
    correct: int
    sent_bits: np.ndarray | None = field(default=None, repr=False)
    outputs: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.count0 + self.count1 + self.countBot != self.trials:
            raise ValueError("outcome counts do not add up to the number of trials")

    @property
    def empirical_bot_rate(self) -> float:
        return self.countBot / self.trials

    @property
    def empirical_correct_rate(self) -> float:
        return self.correct / self.trials

    @property
    def stderr_bot(self) -> float:
        r = self.empirical_bot_rate
        return math.sqrt(r * (1.0 - r) / self.trials)

    def to_record(self) -> dict:
        return {
            "a": self.a,
            "trials": self.trials,
            "seed": self.seed,
            "count0": self.count0,
            "count1": self.count1,
            "countBot": self.countBot,
            "bot_rate": self.empirical_bot_rate,
            "stderr": self.stderr_bot,
        }


def _validate_source(bit_source: BitSource) -> None:
    if bit_source != "random" and bit_source not in (0, 1):
        raise ValueError(f"bit_source must be 'random', 0 or 1, got {bit_source!r}")


def _run_chunk(cuts: np.ndarray, seed: int, start: int, stop: int, bit_source: BitSource):
    gen = np.random.Philox(key=seed)
    gen.advance(start)
    u = np.random.Generator(gen).random((stop - start, _DRAWS_PER_TRIAL))
    if bit_source == "random":
        x = (u[:, 0] >= 0.5).astype(np.int8)
    else:
        x = np.full(stop - start, bit_source, dtype=np.int8)
    idx = sample_outcomes(cuts[x], u[:, 1])
    return x, idx.astype(np.int8)


def simulate_rounds(
    a: float,
    table: Sequence[Sequence[float]],
    trials: int,
    seed: int,
    bit_source: BitSource = "random",
    threads: int = 1,
    keep_records: bool = False,
) -> RunStats:
    """Sample Bob's outputs given his outcome distribution for each message bit.

    ``table[x]`` is the ``(p_bit1, p_bit0, p_bot)`` distribution Bob faces when
    Alice's message bit is ``x``. Honest runs, cheating preparations and Bob's
    guessing measurements all reduce to such a table.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    _validate_source(bit_source)
    cuts = np.stack([cutpoints(row) for row in table])
    bounds = [(s, min(s + CHUNK, trials)) for s in range(0, trials, CHUNK)]

    def work(bound):
        return _run_chunk(cuts, seed, bound[0], bound[1], bit_source)

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, bounds))
    else:
        parts = [work(b) for b in bounds]

    counts = np.zeros(3, dtype=np.int64)
    correct = 0
    for x, idx in parts:
        counts += np.bincount(idx, minlength=3)
        correct += int(np.count_nonzero((idx == 0) & (x == 1)) + np.count_nonzero((idx == 1) & (x == 0)))
    sent = outs = None
    if keep_records:
        sent = np.concatenate([p[0] for p in parts])
        outs = np.concatenate([p[1] for p in parts])
    return RunStats(
        a=float(a),
        trials=trials,
        seed=seed,
        count0=int(counts[1]),
        count1=int(counts[0]),
        countBot=int(counts[2]),
        correct=correct,
        sent_bits=sent,
        outputs=outs,
    )


def honest_table(params: ProtocolParams, povm: Povm | None = None) -> list[tuple[float, float, float]]:
    povm = povm or build_povm(params)
    states = build_signal_states(params)
    return [bob_distribution(povm, states[x]) for x in (0, 1)]


def run_monte_carlo(
    params: ProtocolParams,
    trials: int,
    seed: int,
    bit_source: BitSource = "random",
    threads: int = 1,
    keep_records: bool = False,
) -> RunStats:
    """Honest Alice, honest Bob, ``trials`` independent rounds."""
    return simulate_rounds(
        params.a, honest_table(params), trials, seed, bit_source, threads, keep_records
    )


def run_sequential(params: ProtocolParams, trials: int, seed: int, bit_source: BitSource = "random") -> list[tuple[int, BobOutput]]:
    """Trial-by-trial reference path using :func:`honest_round` on each trial's own stream.

    Slow; exists to pin the vectorized runner to the single-round semantics.
    """
    _validate_source(bit_source)
    povm = build_povm(params)
    out = []
    for i in range(trials):
        rng = trial_rng(seed, i)
        u = rng.random()
        x = draw_bit(u) if bit_source == "random" else int(bit_source)
        out.append((x, honest_round(x, params, povm, rng)))
    return out
