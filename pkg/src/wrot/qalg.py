"""Exact single-qubit linear algebra.

Only what the protocol needs: pure states, 2x2 Hermitian operators stored
by their upper triangle, closed-form eigendecomposition, the partial trace
of a two-qubit pure state onto its second factor, and an inverse-CDF
outcome sampler.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

NORM_TOL = 1e-9
PSD_TOL = 1e-10
CLAMP_TOL = 1e-12
SUM_TOL = 1e-9


class NotNormalized(ValueError):
    """Raised when a state vector does not have unit norm."""

    def __init__(self, norm: float):
        super().__init__(f"state norm is {norm!r}, expected 1")
        self.norm = norm


class BadDistribution(ValueError):
    """Raised when sampling weights are not a probability distribution."""


@dataclass(frozen=True)
class StateVector:
    amp0: complex
    amp1: complex

    def __post_init__(self):
        norm = math.hypot(abs(self.amp0), abs(self.amp1))
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(norm)

    def inner(self, other: StateVector) -> complex:
        """Return <self|other>."""
        return self.amp0.conjugate() * other.amp0 + self.amp1.conjugate() * other.amp1

    def as_array(self) -> np.ndarray:
        return np.array([self.amp0, self.amp1], dtype=complex)


@dataclass(frozen=True)
class HermitianOp:
    m00: float
    m11: float
    m01: complex

    @property
    def m10(self) -> complex:
        return self.m01.conjugate()

    @classmethod
    def identity(cls) -> HermitianOp:
        return cls(1.0, 1.0, 0j)

    @classmethod
    def projector(cls, amp0: complex, amp1: complex, scale: float = 1.0) -> HermitianOp:
        """scale * |v><v| for the (not necessarily normalized) vector v."""
        return cls(
            scale * abs(amp0) ** 2,
            scale * abs(amp1) ** 2,
            complex(scale * amp0 * amp1.conjugate()),
        )

    def __add__(self, other: HermitianOp) -> HermitianOp:
        return HermitianOp(self.m00 + other.m00, self.m11 + other.m11, self.m01 + other.m01)

    def __sub__(self, other: HermitianOp) -> HermitianOp:
        return HermitianOp(self.m00 - other.m00, self.m11 - other.m11, self.m01 - other.m01)

    @property
    def trace(self) -> float:
        return self.m00 + self.m11

    @property
    def det(self) -> float:
        return self.m00 * self.m11 - abs(self.m01) ** 2

    def matrix(self) -> np.ndarray:
        return np.array([[self.m00, self.m01], [self.m10, self.m11]], dtype=complex)

    def apply(self, psi: StateVector) -> tuple[complex, complex]:
        return (
            self.m00 * psi.amp0 + self.m01 * psi.amp1,
            self.m10 * psi.amp0 + self.m11 * psi.amp1,
        )

    def is_psd(self, tol: float = PSD_TOL) -> bool:
        return eigvals2(self)[0] >= -tol


@dataclass(frozen=True)
class DensityMatrix(HermitianOp):
    """A HermitianOp with unit trace and no negative eigenvalues."""

    def __post_init__(self):
        if abs(self.trace - 1.0) > 1e-12:
            raise ValueError(f"density matrix trace is {self.trace!r}")
        if not self.is_psd():
            raise ValueError("density matrix has a negative eigenvalue")

    @property
    def purity(self) -> float:
        return self.m00**2 + self.m11**2 + 2 * abs(self.m01) ** 2


@dataclass(frozen=True)
class JointState:
    """Two-qubit pure state; amplitudes ordered |00>, |01>, |10>, |11>.

    The first factor is Alice's register, the second is the qubit sent to Bob.
    """

    amps: tuple[complex, complex, complex, complex]

    def __post_init__(self):
        if len(self.amps) != 4:
            raise ValueError("a joint state has four amplitudes")
        norm = math.sqrt(sum(abs(c) ** 2 for c in self.amps))
        if abs(norm - 1.0) > 1e-12:
            raise NotNormalized(norm)

    @classmethod
    def product(cls, alice: StateVector, bob: StateVector) -> JointState:
        return cls(
            (
                alice.amp0 * bob.amp0,
                alice.amp0 * bob.amp1,
                alice.amp1 * bob.amp0,
                alice.amp1 * bob.amp1,
            )
        )

    def as_array(self) -> np.ndarray:
        return np.array(self.amps, dtype=complex)


def make_state(amp0: complex, amp1: complex) -> StateVector:
    """Build a qubit state, refusing anything that is not unit norm."""
    return StateVector(complex(amp0), complex(amp1))


def expectation(op: HermitianOp, psi: StateVector) -> float:
    """<psi|op|psi>, real by construction."""
    cross = psi.amp0.conjugate() * op.m01 * psi.amp1
    return op.m00 * abs(psi.amp0) ** 2 + op.m11 * abs(psi.amp1) ** 2 + 2.0 * cross.real


def expectation_array(op: HermitianOp, amp0: np.ndarray, amp1: np.ndarray) -> np.ndarray:
    """Vectorized ``expectation`` over arrays of amplitudes."""
    cross = np.conj(amp0) * op.m01 * amp1
    return op.m00 * np.abs(amp0) ** 2 + op.m11 * np.abs(amp1) ** 2 + 2.0 * cross.real


def trace_product(rho: HermitianOp, op: HermitianOp) -> float:
    """Tr(rho @ op) for two Hermitian operators."""
    return rho.m00 * op.m00 + rho.m11 * op.m11 + 2.0 * (rho.m01 * op.m01.conjugate()).real


def eigvals2(op: HermitianOp) -> tuple[float, float]:
    """Eigenvalues of a 2x2 Hermitian operator, ascending."""
    mean = 0.5 * (op.m00 + op.m11)
    radius = math.hypot(0.5 * (op.m00 - op.m11), abs(op.m01))
    lo, hi = mean - radius, mean + radius
    # recover the small-magnitude root from the determinant to avoid cancellation
    if abs(hi) >= abs(lo) and hi != 0.0:
        lo = op.det / hi
    elif lo != 0.0:
        hi = op.det / lo
    return (lo, hi) if lo <= hi else (hi, lo)


def eigs2(op: HermitianOp) -> list[tuple[float, StateVector]]:
    """Closed-form eigendecomposition, eigenvalues ascending.

    The second eigenvector is built as the orthogonal complement of the first,
    so the returned pair is orthonormal to rounding. For a degenerate spectrum
    the computational basis is returned.
    """
    lo, hi = eigvals2(op)
    b = op.m01
    if hi - lo <= 1e-15 * max(1.0, abs(hi)):
        return [(lo, StateVector(1 + 0j, 0j)), (hi, StateVector(0j, 1 + 0j))]
    # two candidate kernel vectors of (op - lo I); keep the better conditioned one
    c1 = (b, complex(lo - op.m00))
    c2 = (complex(lo - op.m11), b.conjugate())
    n1 = math.hypot(abs(c1[0]), abs(c1[1]))
    n2 = math.hypot(abs(c2[0]), abs(c2[1]))
    v0, v1 = c1 if n1 >= n2 else c2
    n = max(n1, n2)
    v0, v1 = v0 / n, v1 / n
    # fix the global phase so the first nonzero amplitude is real and positive
    ref = v0 if abs(v0) > 1e-15 else v1
    phase = cmath.exp(-1j * cmath.phase(ref))
    v0, v1 = v0 * phase, v1 * phase
    low = StateVector(v0, v1)
    high = StateVector(-v1.conjugate(), v0.conjugate())
    return [(lo, low), (hi, high)]


def reduce_to_bob(joint: JointState) -> DensityMatrix:
    """Partial trace over Alice's register."""
    c00, c01, c10, c11 = joint.amps
    return DensityMatrix(
        abs(c00) ** 2 + abs(c10) ** 2,
        abs(c01) ** 2 + abs(c11) ** 2,
        c00 * c01.conjugate() + c10 * c11.conjugate(),
    )


def cutpoints(weights: Sequence[float]) -> np.ndarray:
    """Interior CDF breakpoints for inverse-CDF sampling.

    Returns ``len(weights) - 1`` cumulative sums; a uniform draw ``u`` maps to
    the number of breakpoints ``<= u``. Outcomes with zero weight are never
    selected.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise BadDistribution("weights must be a non-empty 1-d sequence")
    if np.any(w < -CLAMP_TOL):
        raise BadDistribution(f"negative weight in {w.tolist()}")
    total = float(w.sum())
    if abs(total - 1.0) > SUM_TOL:
        raise BadDistribution(f"weights sum to {total!r}")
    w = np.where(w < 0.0, 0.0, w)
    return np.cumsum(w)[:-1]


def sample_outcome(weights: Sequence[float], rng: np.random.Generator) -> int:
    """Draw an index with probability ``weights[i]`` using one uniform from ``rng``."""
    cuts = cutpoints(weights)
    u = rng.random()
    return int(np.count_nonzero(cuts <= u))


def sample_outcomes(cuts: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Vectorized inverse CDF; ``cuts`` may be per-draw with shape ``(n, k-1)``."""
    cuts = np.asarray(cuts)
    if cuts.ndim == 1:
        return np.searchsorted(cuts, u, side="right")
    return np.count_nonzero(cuts <= u[:, None], axis=1)
