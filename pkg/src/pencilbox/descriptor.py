"""Forward solutions of implicit linear difference systems.

The model is ``F @ Y[k+1] = G @ Y[k] + V[k]`` with ``F`` possibly singular,
so the update cannot simply be inverted.  Through the Weierstrass form of
the pencil ``s*F - G`` the state splits into a slow block that obeys an
ordinary forward recursion driven by ``J_p`` and a fast block that is
pinned to the inputs through the nilpotent ``H_q``::

    z1[k+1] = J_p @ z1[k] + P_1 @ V[k]
    z2[k]   = -(P_2 @ V[k] + H_q @ P_2 @ V[k+1] + ...)   (q_star terms)

so evaluating the fast block at ``k`` looks ahead ``q_star - 1`` input
samples.  The general solution is ``Y[k] = Q_p @ J_p^(k-k0) @ C + Q @ D[k]``
with a free p-vector ``C``; an initial state is consistent exactly when it
lies on the affine manifold ``colspan(Q_p) + Q @ D[k0]``, and then the
initial-value problem has a unique solution.

Every solver here re-checks the defining residual of the system on the
trajectory it returns, so a returned ``Trajectory`` is certified rather
than merely constructed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import (
    InconsistentInitialCondition,
    IrregularPencil,
    MissingInput,
    NumericalBreakdown,
)
from .pencil import MatrixPencil, RegularityVerdict, WeierstrassForm, is_regular

__all__ = [
    "CONSISTENCY_RTOL",
    "TRAJECTORY_RESIDUAL_RTOL",
    "InputSequence",
    "DescriptorSystem",
    "Trajectory",
    "ForcedTerm",
    "InitialCondition",
    "ConsistencyReport",
    "forced_term",
    "solve_general",
    "check_consistency",
    "solve_ivp",
]

# Max-norm consistency threshold, relative to 1 + the initial-state scale.
CONSISTENCY_RTOL = 1e-8

# Allowed max-abs residual of F@Y[k+1] - G@Y[k] - V[k] along a returned
# trajectory, relative to max(1, max|Y|).
TRAJECTORY_RESIDUAL_RTOL = 1e-9


def _frozen_vector(values, dim: int | None = None) -> np.ndarray:
    vec = np.array(values, dtype=float)
    if vec.ndim != 1:
        raise ValueError(f"expected a vector, got array of shape {vec.shape}")
    if dim is not None and vec.shape[0] != dim:
        raise ValueError(f"expected a vector of length {dim}, got {vec.shape[0]}")
    if not np.isfinite(vec).all():
        raise ValueError("vector entries must be finite")
    vec.flags.writeable = False
    return vec


@dataclass(frozen=True)
class InputSequence:
    """Input samples ``V[k]`` as a partial map from integers to m-vectors.

    ``value(k)`` is defined for ``start <= k`` and, when ``stop`` is not
    None, ``k < stop``; outside that window it raises ``MissingInput``.
    Build instances with :meth:`constant`, :meth:`from_vectors`, or
    :meth:`zeros` rather than calling the constructor directly.
    """

    dim: int
    start: int
    stop: int | None
    _lookup: Callable[[int], np.ndarray] = field(repr=False, compare=False)

    @classmethod
    def constant(cls, vector, start: int = 0) -> "InputSequence":
        """The same vector at every index ``k >= start`` (infinite support)."""
        vec = _frozen_vector(vector)
        return cls(dim=vec.shape[0], start=start, stop=None, _lookup=lambda k: vec)

    @classmethod
    def from_vectors(cls, vectors, start: int = 0) -> "InputSequence":
        """Finite table of samples; index ``start`` maps to the first one."""
        table = [_frozen_vector(v) for v in vectors]
        if not table:
            raise ValueError("from_vectors needs at least one sample")
        dim = table[0].shape[0]
        for v in table[1:]:
            if v.shape[0] != dim:
                raise ValueError("all input samples must have the same length")
        frozen = tuple(table)
        return cls(
            dim=dim,
            start=start,
            stop=start + len(frozen),
            _lookup=lambda k: frozen[k - start],
        )

    @classmethod
    def zeros(cls, dim: int, start: int = 0) -> "InputSequence":
        return cls.constant(np.zeros(dim), start=start)

    def value(self, k: int) -> np.ndarray:
        """The sample ``V[k]``, or ``MissingInput`` outside the support."""
        if k < self.start or (self.stop is not None and k >= self.stop):
            hi = "inf" if self.stop is None else str(self.stop)
            raise MissingInput(
                f"input V[{k}] requested outside the supported range [{self.start}, {hi})"
            )
        return self._lookup(k)


@dataclass(frozen=True)
class DescriptorSystem:
    """The implicit system ``F @ Y[k+1] = G @ Y[k] + V[k]`` for ``k >= start_index``.

    The pencil must be square and regular; that is checked at construction
    so every solver can assume a Weierstrass form exists.
    """

    pencil: MatrixPencil
    inputs: InputSequence
    start_index: int = 0

    def __post_init__(self):
        verdict = is_regular(self.pencil)
        if verdict is not RegularityVerdict.REGULAR:
            raise IrregularPencil(f"descriptor system needs a regular pencil, got {verdict.value}")
        if self.inputs.dim != self.pencil.rows:
            raise ValueError(
                f"input dimension {self.inputs.dim} does not match state dimension {self.pencil.rows}"
            )
        if self.inputs.start > self.start_index:
            raise ValueError(
                f"inputs start at {self.inputs.start}, after the system start {self.start_index}"
            )

    @property
    def dim(self) -> int:
        return self.pencil.rows


@dataclass(frozen=True)
class Trajectory:
    """States ``Y[k]`` for ``k = start_index ... start_index + len - 1``, one per row."""

    start_index: int
    states: np.ndarray

    def __post_init__(self):
        states = np.array(self.states, dtype=float)
        if states.ndim != 2:
            raise ValueError("states must be a 2-d array, one state per row")
        states.flags.writeable = False
        object.__setattr__(self, "states", states)

    @property
    def final_index(self) -> int:
        return self.start_index + self.states.shape[0] - 1

    def state_at(self, k: int) -> np.ndarray:
        if not self.start_index <= k <= self.final_index:
            raise IndexError(f"index {k} outside [{self.start_index}, {self.final_index}]")
        return self.states[k - self.start_index]

    def max_residual(self, system: DescriptorSystem) -> float:
        """Max-abs of ``F@Y[k+1] - G@Y[k] - V[k]`` over consecutive pairs."""
        F, G = system.pencil.F, system.pencil.G
        worst = 0.0
        for i in range(self.states.shape[0] - 1):
            V = system.inputs.value(self.start_index + i)
            gap = F @ self.states[i + 1] - G @ self.states[i] - V
            worst = max(worst, float(np.max(np.abs(gap))))
        return worst


@dataclass(frozen=True)
class ForcedTerm:
    """The input-driven state component ``Q @ D[k]`` at one index."""

    k: int
    value: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "value", _frozen_vector(self.value))


@dataclass(frozen=True)
class InitialCondition:
    """A prescribed state ``Y0`` at index ``k0``."""

    k0: int
    Y0: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "Y0", _frozen_vector(self.Y0))


@dataclass(frozen=True)
class ConsistencyReport:
    """Verdict of the manifold membership test for an initial condition.

    ``Z`` is the least-squares coordinate of ``Y0 - Q@D[k0]`` in the
    ``Q_p`` basis; ``residual`` is the max-norm of what that fit leaves
    unexplained.
    """

    consistent: bool
    residual: float
    Z: np.ndarray


def _nilpotent_weights(wform: WeierstrassForm) -> list[np.ndarray]:
    """The matrices ``H_q^i @ P_2`` for ``i < q_star``."""
    weights = []
    mat = np.array(wform.P_2)
    for _ in range(wform.q_star):
        weights.append(mat)
        mat = wform.H_q @ mat
    return weights


def _transformed_forcing(system: DescriptorSystem, wform: WeierstrassForm, k_last: int):
    """Blocks of ``D[k]`` for ``k = start_index ... k_last``.

    Returns ``(top, bottom)`` where row ``k - start_index`` of ``top`` is
    the slow block (the accumulated sum of ``J_p`` powers against past
    inputs) and the same row of ``bottom`` is the fast block (the
    lookahead sum against ``H_q`` powers).  Raises ``MissingInput`` when
    the inputs do not cover ``k_last + q_star - 1``.
    """
    start = system.start_index
    n = k_last - start + 1
    p, q, q_star = wform.p, wform.q, wform.q_star
    needed = n + q_star - 1 if q_star > 0 else n - 1
    samples = [system.inputs.value(start + i) for i in range(max(needed, 0))]

    top = np.zeros((n, p))
    for i in range(n - 1):
        top[i + 1] = wform.J_p @ top[i] + wform.P_1 @ samples[i]

    bottom = np.zeros((n, q))
    weights = _nilpotent_weights(wform)
    for i in range(n):
        for j, W in enumerate(weights):
            bottom[i] -= W @ samples[i + j]
    return top, bottom


def forced_term(system: DescriptorSystem, wform: WeierstrassForm, k: int) -> ForcedTerm:
    """The forced component ``Q @ D[k]`` of the general solution.

    The slow block of ``D[k]`` accumulates inputs from ``start_index``
    through ``k - 1`` (an empty sum at ``k = start_index``); the fast
    block combines ``V[k] ... V[k + q_star - 1]``.

    Raises
    ------
    MissingInput
        When the inputs do not cover the lookahead window.
    """
    if k < system.start_index:
        raise ValueError(f"forced term undefined before start index ({k} < {system.start_index})")
    top, bottom = _transformed_forcing(system, wform, k)
    D = np.concatenate([top[-1], bottom[-1]])
    return ForcedTerm(k=k, value=wform.Q @ D)


def _mode_states(wform: WeierstrassForm, C: np.ndarray, count: int) -> np.ndarray:
    """Rows ``J_p^i @ C`` for ``i = 0 ... count - 1`` by repeated multiplication."""
    out = np.zeros((count, wform.p))
    cur = C
    for i in range(count):
        out[i] = cur
        cur = wform.J_p @ cur
    return out


def _solve(
    system: DescriptorSystem,
    wform: WeierstrassForm,
    C: np.ndarray,
    anchor: int,
    horizon: int,
) -> Trajectory:
    """States ``Q_p @ J_p^(k-anchor) @ C + Q @ D[k]`` for ``k = anchor ... horizon``.

    The forced blocks are always accumulated from ``system.start_index``
    regardless of the anchor, so re-anchored solves (initial conditions
    given mid-stream) stay on the same solution family.
    """
    if horizon < anchor:
        raise ValueError(f"horizon {horizon} lies before the first index {anchor}")
    top, bottom = _transformed_forcing(system, wform, horizon)
    offset = anchor - system.start_index
    n = horizon - anchor + 1
    mode = _mode_states(wform, C, n)
    Z = np.hstack([mode + top[offset:], bottom[offset:]])
    states = Z @ wform.Q.T
    traj = Trajectory(start_index=anchor, states=states)

    scale = max(1.0, float(np.max(np.abs(states))) if states.size else 0.0)
    residual = traj.max_residual(system)
    if residual > TRAJECTORY_RESIDUAL_RTOL * scale:
        raise NumericalBreakdown(
            f"solution residual {residual:.3e} exceeds {TRAJECTORY_RESIDUAL_RTOL:.1e} * {scale:.3e}"
        )
    return traj


def solve_general(
    system: DescriptorSystem, wform: WeierstrassForm, C, horizon: int
) -> Trajectory:
    """General solution with mode coefficient ``C``, from start_index to horizon.

    ``horizon`` is the final absolute index, not a step count.  The
    returned trajectory satisfies the defining residual bound of
    ``Trajectory`` (checked, with ``NumericalBreakdown`` on failure).
    """
    C = np.asarray(C, dtype=float)
    if C.shape != (wform.p,):
        raise ValueError(f"mode coefficient must have shape ({wform.p},), got {C.shape}")
    return _solve(system, wform, C, system.start_index, horizon)


def check_consistency(
    system: DescriptorSystem, wform: WeierstrassForm, ic: InitialCondition
) -> ConsistencyReport:
    """Test whether ``Y0`` lies on the solution manifold at ``k0``.

    Fits ``Q_p @ Z`` to ``Y0 - Q@D[k0]`` by least squares; the state is
    consistent when the max-norm of the misfit is below
    ``CONSISTENCY_RTOL * (1 + max|Y0|)``.
    """
    if ic.k0 < system.start_index:
        raise ValueError(f"initial index {ic.k0} lies before start index {system.start_index}")
    if ic.Y0.shape[0] != system.dim:
        raise ValueError(f"initial state has length {ic.Y0.shape[0]}, expected {system.dim}")
    rhs = ic.Y0 - forced_term(system, wform, ic.k0).value
    if wform.p > 0:
        Z, *_ = np.linalg.lstsq(wform.Q_p, rhs, rcond=None)
        misfit = rhs - wform.Q_p @ Z
    else:
        Z = np.zeros(0)
        misfit = rhs
    residual = float(np.max(np.abs(misfit))) if misfit.size else 0.0
    y_scale = float(np.max(np.abs(ic.Y0))) if ic.Y0.size else 0.0
    tol = CONSISTENCY_RTOL * (1.0 + y_scale)
    return ConsistencyReport(consistent=residual < tol, residual=residual, Z=Z)


def solve_ivp(
    system: DescriptorSystem, wform: WeierstrassForm, ic: InitialCondition, horizon: int
) -> Trajectory:
    """The unique solution through a consistent initial state.

    Anchors the mode at ``ic.k0`` with the coefficient recovered by
    :func:`check_consistency`, so ``Y[k0]`` reproduces ``ic.Y0`` within
    the consistency tolerance.

    Raises
    ------
    InconsistentInitialCondition
        When the initial state is off the solution manifold.
    """
    report = check_consistency(system, wform, ic)
    if not report.consistent:
        raise InconsistentInitialCondition(
            f"initial state at k={ic.k0} is off the solution manifold "
            f"(residual {report.residual:.3e})"
        )
    return _solve(system, wform, report.Z, ic.k0, horizon)
