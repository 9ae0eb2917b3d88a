"""The multiplier-accelerator income model as a 3x3 implicit system.

Samuelson's classical model (1939) couples three yearly quantities: national
income ``T``, consumption ``C``, and private investment ``I``.  Consumption
follows last year's income with multiplier ``a``, investment responds to the
change in consumption with accelerator ``b``, and income splits into
consumption, investment, and government expenditure ``G``::

    C[k] = a * T[k-1]
    I[k] = b * (C[k] - C[k-1])
    T[k] = C[k] + I[k] + G[k]

Eliminating C and I gives the scalar recursion
``T[k] = a(1+b) T[k-1] - ab T[k-2] + G[k]``, which this module implements
directly as the ground-truth oracle.  Stacking the three equations instead
gives the implicit system ``F @ Y[k+1] = G @ Y[k] + V[k]`` on the state
``Y = (T, C, I)`` with a singular ``F``, which is what the pencil and
descriptor machinery consumes.  A third, independent route evaluates the
closed-form solution: two geometric modes fixed by (T0, T1) plus a
convolution of the expenditure path with the recursion's impulse response.

All three routes must agree; the test suite and the verification command
hold them against each other.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .descriptor import DescriptorSystem, InitialCondition, InputSequence
from .exceptions import InsufficientExpenditureData, NumericalBreakdown, ValidationError
from .pencil import CLUSTER_TOL, MatrixPencil

__all__ = [
    "START_INDEX",
    "ConstantExpenditure",
    "SequenceExpenditure",
    "GovernmentExpenditure",
    "SamuelsonParams",
    "EconomicState",
    "Roots",
    "ClosedForm",
    "Regime",
    "build_system",
    "recursion_oracle",
    "roots",
    "impulse_response",
    "closed_form_weights",
    "closed_form_trajectory",
    "consistent_initial_state",
    "classify_regime",
]

# First year the coupled equations hold; years 0 and 1 only seed the lags.
START_INDEX = 2


@dataclass(frozen=True)
class ConstantExpenditure:
    """The same government expenditure every year (infinite support)."""

    level: float

    def __post_init__(self):
        if not math.isfinite(self.level):
            raise ValidationError("expenditure level must be finite")

    def value_at(self, k: int) -> float:
        return self.level


@dataclass(frozen=True)
class SequenceExpenditure:
    """Explicit yearly expenditure values; index ``start`` dates the first."""

    values: tuple
    start: int = 0

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ValidationError("expenditure sequence must not be empty")
        if not all(math.isfinite(v) for v in values):
            raise ValidationError("expenditure values must be finite")
        object.__setattr__(self, "values", values)

    @property
    def stop(self) -> int:
        return self.start + len(self.values)

    def value_at(self, k: int) -> float:
        if not self.start <= k < self.stop:
            raise InsufficientExpenditureData(
                f"expenditure G[{k}] outside the provided range [{self.start}, {self.stop})"
            )
        return self.values[k - self.start]


GovernmentExpenditure = ConstantExpenditure | SequenceExpenditure


@dataclass(frozen=True)
class SamuelsonParams:
    """Model parameters: multiplier ``a``, accelerator ``b``, expenditure ``g``.

    Validation is strict: the open intervals 0 < a < 1 and b > 0 are
    enforced at construction, boundary values included in neither.
    """

    a: float
    b: float
    g: GovernmentExpenditure = ConstantExpenditure(0.0)

    def __post_init__(self):
        if not (math.isfinite(self.a) and 0.0 < self.a < 1.0):
            raise ValidationError(f"multiplier a must satisfy 0 < a < 1, got {self.a!r}")
        if not (math.isfinite(self.b) and self.b > 0.0):
            raise ValidationError(f"accelerator b must satisfy b > 0, got {self.b!r}")
        if not isinstance(self.g, (ConstantExpenditure, SequenceExpenditure)):
            raise ValidationError("g must be a ConstantExpenditure or SequenceExpenditure")


@dataclass(frozen=True)
class EconomicState:
    """One year of the model; ``C`` and ``I`` are None before their lags exist."""

    T: float
    C: float | None
    I: float | None


@dataclass(frozen=True)
class Roots:
    """Finite pencil eigenvalues, i.e. roots of s^2 - a(1+b) s + ab."""

    s1: complex
    s2: complex
    discriminant: float


@dataclass(frozen=True)
class ClosedForm:
    """Mode weights of the homogeneous part plus a note on the forced part."""

    c1: complex
    c2: complex
    particular: str


@dataclass(frozen=True)
class Regime:
    """Qualitative behaviour: cycling or not, decaying or not."""

    oscillatory: bool
    stable: bool
    spectral_radius: float


def build_system(params: SamuelsonParams) -> DescriptorSystem:
    """The model as ``F @ Y[k+1] = G @ Y[k] + V[k]`` on the state (T, C, I).

    Row one is the income identity dated k, rows two and three advance the
    consumption and investment equations; ``V[k] = (G_k, 0, 0)``.  ``F`` is
    singular by construction, so the pencil route exercises the full
    descriptor machinery.
    """
    a, b = params.a, params.b
    F = [[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, -b, 1.0]]
    G = [[-1.0, 1.0, 1.0], [a, 0.0, 0.0], [0.0, -b, 0.0]]
    if isinstance(params.g, ConstantExpenditure):
        inputs = InputSequence.constant([params.g.level, 0.0, 0.0], start=START_INDEX)
    else:
        table = [[params.g.value_at(k), 0.0, 0.0] for k in range(params.g.start, params.g.stop)]
        inputs = InputSequence.from_vectors(table, start=params.g.start)
    return DescriptorSystem(MatrixPencil(F, G), inputs, start_index=START_INDEX)


def recursion_oracle(params: SamuelsonParams, T0: float, T1: float, horizon: int):
    """Plain-loop iteration of the income recursion; the ground truth.

    Returns one ``EconomicState`` per year k = 0 ... horizon.  ``C`` is
    reconstructed as a*T[k-1] from k = 1 on, ``I`` as a*b*(T[k-1]-T[k-2])
    from k = 2 on; earlier entries are None.

    Raises
    ------
    InsufficientExpenditureData
        When the expenditure data does not cover 2 ... horizon.
    """
    if horizon < START_INDEX:
        raise ValueError(f"horizon must be at least {START_INDEX}, got {horizon}")
    a, b = params.a, params.b
    T = [float(T0), float(T1)]
    for k in range(START_INDEX, horizon + 1):
        T.append(a * (1.0 + b) * T[k - 1] - a * b * T[k - 2] + params.g.value_at(k))
    states = [EconomicState(T=T[0], C=None, I=None)]
    states.append(EconomicState(T=T[1], C=a * T[0], I=None))
    for k in range(2, horizon + 1):
        states.append(
            EconomicState(T=T[k], C=a * T[k - 1], I=a * b * (T[k - 1] - T[k - 2]))
        )
    return states


def roots(params: SamuelsonParams) -> Roots:
    """Characteristic roots by the quadratic formula (complex when cycling)."""
    a, b = params.a, params.b
    trace = a * (1.0 + b)
    disc = trace * trace - 4.0 * a * b
    offset = cmath.sqrt(complex(disc, 0.0))
    s1 = (trace + offset) / 2.0
    s2 = (trace - offset) / 2.0
    return Roots(s1=s1, s2=s2, discriminant=disc)


def _is_double(rts: Roots) -> bool:
    return abs(rts.s1 - rts.s2) <= CLUSTER_TOL


def impulse_response(params: SamuelsonParams, n: int) -> float:
    """Income response n years after a unit expenditure impulse.

    Normalized so the response in the impulse year itself is 1:
    h(0) = 0, h(1) = 1, h(2) = a(1+b), and in general
    h(n) = (s1^n - s2^n)/(s1 - s2), or n * s^(n-1) at a double root.
    """
    if n < 0:
        raise ValueError("impulse response is defined for n >= 0")
    rts = roots(params)
    if _is_double(rts):
        s = ((rts.s1 + rts.s2) / 2.0).real
        return float(n * s ** (n - 1)) if n > 0 else 0.0
    value = (rts.s1**n - rts.s2**n) / (rts.s1 - rts.s2)
    return float(value.real)


def closed_form_weights(params: SamuelsonParams, T0: float, T1: float) -> ClosedForm:
    """Mode weights c1, c2 pinned by the two seed years.

    Distinct roots: T_hom[k] = c1 s1^k + c2 s2^k with c1 = (T1 - s2 T0)/(s1 - s2).
    Double root s: T_hom[k] = (c1 + c2 k) s^k with c1 = T0, c2 = T1/s - T0.
    """
    rts = roots(params)
    if _is_double(rts):
        s = ((rts.s1 + rts.s2) / 2.0).real
        c1 = complex(T0)
        c2 = complex(T1 / s - T0)
    else:
        gap = rts.s1 - rts.s2
        c1 = (T1 - rts.s2 * T0) / gap
        c2 = (rts.s1 * T0 - T1) / gap
    return ClosedForm(c1=c1, c2=c2, particular="impulse-response convolution")


def closed_form_trajectory(params: SamuelsonParams, T0: float, T1: float, horizon: int):
    """Trajectory from the explicit solution formula; independent of both
    the recursion loop and the pencil solver.

    The homogeneous part mixes the two geometric modes; the forced part is
    the convolution of the expenditure path (from year 2 on) with the
    impulse response.  The result must come out real; a residual imaginary
    part above 1e-10 of the income scale raises ``NumericalBreakdown``.
    """
    if horizon < START_INDEX:
        raise ValueError(f"horizon must be at least {START_INDEX}, got {horizon}")
    a, b = params.a, params.b
    rts = roots(params)
    weights = closed_form_weights(params, T0, T1)
    k = np.arange(horizon + 1)
    double = _is_double(rts)
    if double:
        s = ((rts.s1 + rts.s2) / 2.0).real
        hom = (weights.c1 + weights.c2 * k) * np.power(s, k)
    else:
        hom = weights.c1 * np.power(rts.s1, k) + weights.c2 * np.power(rts.s2, k)

    g = np.array([params.g.value_at(i) for i in range(START_INDEX, horizon + 1)])
    total = np.asarray(hom, dtype=complex)
    if g.size:
        n = np.arange(1, g.size + 1)
        if double:
            kernel = n * np.power(complex(s), n - 1)
        else:
            kernel = (np.power(rts.s1, n) - np.power(rts.s2, n)) / (rts.s1 - rts.s2)
        conv = np.convolve(kernel, g)
        forced = np.zeros(horizon + 1, dtype=complex)
        forced[START_INDEX:] = conv[: horizon - 1]
        total = total + forced

    scale = max(1.0, float(np.max(np.abs(total.real))))
    worst_imag = float(np.max(np.abs(total.imag)))
    if worst_imag > 1e-10 * scale:
        raise NumericalBreakdown(
            f"closed form produced imaginary residue {worst_imag:.3e} at scale {scale:.3e}"
        )
    T = total.real

    states = [EconomicState(T=float(T[0]), C=None, I=None)]
    states.append(EconomicState(T=float(T[1]), C=float(a * T[0]), I=None))
    for i in range(2, horizon + 1):
        states.append(
            EconomicState(
                T=float(T[i]),
                C=float(a * T[i - 1]),
                I=float(a * b * (T[i - 1] - T[i - 2])),
            )
        )
    return states


def consistent_initial_state(
    params: SamuelsonParams, T0: float, T1: float, T2: float | None = None
) -> InitialCondition:
    """The year-2 state ``(T2, a T1, a b (T1 - T0))`` as an initial condition.

    When ``T2`` is omitted it is taken from the recursion, which makes the
    state the natural continuation of the seed years and guarantees it lies
    on the solution manifold.  An explicitly supplied ``T2`` is packed as
    given; whether it is consistent is then a fact about the number, not a
    promise of this function, because the income identity ties T2 to the
    seed years and the year-2 expenditure.
    """
    a, b = params.a, params.b
    if T2 is None:
        T2 = a * (1.0 + b) * T1 - a * b * T0 + params.g.value_at(START_INDEX)
    y0 = [float(T2), a * float(T1), a * b * (float(T1) - float(T0))]
    return InitialCondition(k0=START_INDEX, Y0=y0)


def classify_regime(params: SamuelsonParams) -> Regime:
    """Cycle/decay classification from the root geometry.

    Complex roots make every solution oscillate; their common modulus is
    sqrt(ab) by the Vieta product.  Stability asks for spectral radius
    strictly below 1, so radius exactly 1 (for instance ab = 1 with
    complex roots) counts as unstable.
    """
    rts = roots(params)
    oscillatory = rts.discriminant < 0.0
    if oscillatory:
        radius = math.sqrt(params.a * params.b)
    else:
        radius = max(abs(rts.s1), abs(rts.s2))
    return Regime(oscillatory=oscillatory, stable=radius < 1.0, spectral_radius=radius)
