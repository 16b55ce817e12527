"""Weak Rabin oblivious transfer built on B92 state pairs.

Honest protocol simulation, both cheating models with their optimal attacks,
and the advantage-versus-overlap trade-off curves.
"""

from .adversaries import (
    AliceAttackReport,
    BobAttackReport,
    BobGuessStrategy,
    OutOfBall,
    PureCheatState,
    alice_advantage_analytic,
    alice_advantage_numeric,
    bob_guess_basis,
    bob_success_rate,
    cheat_state,
    entangled_alice_no_advantage,
    max_alice_advantage,
    min_alice_advantage,
    optimal_bob,
)
from .harness import SweepConfig, SweepRow, emit_csv, emit_svg, sweep, validate_sweep_by_simulation
from .protocol import (
    BobOutput,
    OutOfRange,
    Povm,
    ProtocolParams,
    RunStats,
    SignalStates,
    bob_distribution,
    build_povm,
    build_signal_states,
    honest_round,
    make_params,
    run_monte_carlo,
)
from .qalg import (
    BadDistribution,
    DensityMatrix,
    HermitianOp,
    JointState,
    NotNormalized,
    StateVector,
    eigs2,
    expectation,
    make_state,
    reduce_to_bob,
    sample_outcome,
)

__version__ = "0.1.0"
