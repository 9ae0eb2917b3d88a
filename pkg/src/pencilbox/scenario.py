"""Scenario configuration, simulation engines, and delimited output.

A scenario is a flat key=value description of one model run: parameters,
seed years, expenditure, horizon, and which engine to use.  Three engines
produce the same trajectory by unrelated routes (plain recursion, explicit
closed form, pencil decomposition), which is what makes the verify command
meaningful: it runs all of them and reports the worst relative deviation
from the recursion.

Numbers are printed in two styles on purpose.  CSV cells use the shortest
representation that parses back to the identical double, so emitted files
are lossless; human-facing reports round to 12 significant digits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .descriptor import check_consistency, solve_ivp
from .exceptions import ConfigError, ValidationError
from .pencil import pencil_det_poly, weierstrass_decompose
from .samuelson import (
    ConstantExpenditure,
    EconomicState,
    SamuelsonParams,
    SequenceExpenditure,
    build_system,
    classify_regime,
    closed_form_trajectory,
    consistent_initial_state,
    recursion_oracle,
    roots,
)

__all__ = [
    "ENGINES",
    "VERIFY_TOL",
    "T2_MATCH_RTOL",
    "ScenarioConfig",
    "Row",
    "VerifyReport",
    "parse_config_file",
    "build_config",
    "run_engine",
    "trajectory_rows",
    "format_value",
    "write_csv",
    "read_csv",
    "eigen_report",
    "verify_scenario",
    "format_verify_report",
]

ENGINES = ("pencil", "closed_form", "oracle", "verify_all")

# Worst per-series relative deviation an engine may show against the
# recursion before verify fails.
VERIFY_TOL = 1e-8

# A user-supplied t2 must continue the recursion this tightly.
T2_MATCH_RTOL = 1e-9

CSV_HEADER = "k,T,C,I,G"

_CONFIG_KEYS = (
    "a",
    "b",
    "t0",
    "t1",
    "t2",
    "gbar",
    "expenditure",
    "horizon",
    "engine",
    "out",
    "fig",
)


@dataclass(frozen=True)
class ScenarioConfig:
    """One fully validated model run.

    Exactly one of ``gbar``/``expenditure`` is active; when neither was
    given, expenditure defaults to the constant 0.  ``expenditure`` is an
    inline list of yearly values dated from year 0 and must cover the
    horizon.  ``t2`` is optional; when present it must continue the
    recursion from (t0, t1), because the year-2 income identity leaves no
    freedom there.
    """

    a: float
    b: float
    t0: float = 0.0
    t1: float = 0.0
    t2: float | None = None
    gbar: float | None = None
    expenditure: tuple | None = None
    horizon: int = 20
    engine: str = "oracle"
    out: str | None = None
    fig: str | None = None

    def params(self) -> SamuelsonParams:
        if self.expenditure is not None:
            g = SequenceExpenditure(self.expenditure, start=0)
        else:
            g = ConstantExpenditure(self.gbar if self.gbar is not None else 0.0)
        return SamuelsonParams(a=self.a, b=self.b, g=g)


@dataclass(frozen=True)
class Row:
    """One CSV line: year, income, consumption, investment, expenditure."""

    k: int
    T: float
    C: float | None
    I: float | None
    G: float


@dataclass(frozen=True)
class VerifyReport:
    """Cross-engine agreement summary; ``passed`` gates the exit code."""

    deviations: dict
    consistency_ok: bool
    eigen_summary: str
    tolerance: float
    passed: bool


def parse_config_file(path: str) -> dict:
    """Flat ``key = value`` lines; ``#`` comments and blanks are skipped.

    Returns raw string values keyed by option name.  Structural problems
    (unknown keys, repeated keys, lines without ``=``) raise
    ``ConfigError``; a missing or unreadable file raises ``OSError``.
    """
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown option {key!r}")
            if key in values:
                raise ConfigError(f"{path}:{lineno}: option {key!r} given twice")
            values[key] = value
    return values


def _parse_float(key: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"option {key!r} needs a number, got {text!r}") from None


def _parse_int(key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"option {key!r} needs an integer, got {text!r}") from None


def _parse_expenditure(text: str) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    if not all(parts):
        raise ConfigError(f"malformed expenditure list {text!r}")
    return tuple(_parse_float("expenditure", p) for p in parts)


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> ScenarioConfig:
    """Merge file values with command-line overrides and validate.

    ``file_values`` holds raw strings from :func:`parse_config_file`;
    ``overrides`` holds already typed values (floats, ints, strings) and
    wins key by key.  Type problems raise ``ConfigError``; semantic
    problems (parameter bounds, horizon, engine name, t2 mismatch,
    expenditure coverage) raise ``ValidationError``.
    """
    merged: dict = {}
    for key, text in (file_values or {}).items():
        if key in ("a", "b", "t0", "t1", "t2", "gbar"):
            merged[key] = _parse_float(key, text)
        elif key == "horizon":
            merged[key] = _parse_int(key, text)
        elif key == "expenditure":
            merged[key] = _parse_expenditure(text)
        else:
            merged[key] = text
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value

    if "a" not in merged or "b" not in merged:
        raise ConfigError("options 'a' and 'b' are required")
    config = ScenarioConfig(**merged)
    _validate(config)
    return config


def _validate(config: ScenarioConfig) -> None:
    if config.gbar is not None and config.expenditure is not None:
        raise ValidationError("give either gbar or an expenditure list, not both")
    if config.horizon < 3:
        raise ValidationError(f"horizon must be at least 3, got {config.horizon}")
    if config.engine not in ENGINES:
        raise ValidationError(
            f"unknown engine {config.engine!r}; choose one of {', '.join(ENGINES)}"
        )
    params = config.params()  # parameter bounds checked here
    if config.expenditure is not None and len(config.expenditure) < config.horizon + 1:
        raise ValidationError(
            f"expenditure list covers years 0..{len(config.expenditure) - 1}, "
            f"horizon needs 0..{config.horizon}"
        )
    if config.t2 is not None:
        a, b = config.a, config.b
        implied = a * (1 + b) * config.t1 - a * b * config.t0 + params.g.value_at(2)
        if abs(config.t2 - implied) > T2_MATCH_RTOL * max(1.0, abs(implied)):
            raise ValidationError(
                f"t2={config.t2!r} does not continue the recursion from t0, t1 "
                f"(year-2 identity gives {implied!r})"
            )


def trajectory_rows(states, expenditure) -> list:
    """Attach the expenditure column to a list of yearly states."""
    return [
        Row(k=k, T=s.T, C=s.C, I=s.I, G=expenditure.value_at(k))
        for k, s in enumerate(states)
    ]


def _pencil_states(config: ScenarioConfig):
    """Trajectory through the descriptor machinery, reshaped to states."""
    params = config.params()
    system = build_system(params)
    wform = weierstrass_decompose(system.pencil)
    ic = consistent_initial_state(params, config.t0, config.t1, config.t2)
    traj = solve_ivp(system, wform, ic, horizon=config.horizon)
    a = params.a
    states = [
        EconomicState(T=config.t0, C=None, I=None),
        EconomicState(T=config.t1, C=a * config.t0, I=None),
    ]
    for k in range(2, config.horizon + 1):
        y = traj.state_at(k)
        states.append(EconomicState(T=float(y[0]), C=float(y[1]), I=float(y[2])))
    return states


def run_engine(config: ScenarioConfig, engine: str) -> list:
    """Rows k = 0..horizon computed by the named engine."""
    params = config.params()
    if engine == "oracle":
        states = recursion_oracle(params, config.t0, config.t1, config.horizon)
    elif engine == "closed_form":
        states = closed_form_trajectory(params, config.t0, config.t1, config.horizon)
    elif engine == "pencil":
        states = _pencil_states(config)
    else:
        raise ValidationError(f"engine {engine!r} does not produce a single trajectory")
    return trajectory_rows(states, params.g)


def format_value(x) -> str:
    """Shortest decimal that parses back to the identical double."""
    if x is None:
        return ""
    text = repr(float(x))
    if text.endswith(".0"):
        text = text[:-2]
    return text


def write_csv(rows, fh) -> None:
    fh.write(CSV_HEADER + "\n")
    for r in rows:
        fh.write(
            f"{r.k},{format_value(r.T)},{format_value(r.C)},"
            f"{format_value(r.I)},{format_value(r.G)}\n"
        )


def write_csv_file(rows, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_csv(rows, fh)


def read_csv(path: str) -> list:
    """Parse a trajectory CSV back into rows (blank cells become None)."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise ConfigError(f"unexpected CSV header {header!r}")
        for line in fh:
            cells = line.rstrip("\n").split(",")
            if len(cells) != 5:
                raise ConfigError(f"malformed CSV line {line!r}")
            k = int(cells[0])
            T, C, I, G = (float(c) if c else None for c in cells[1:])
            rows.append(Row(k=k, T=T, C=C, I=I, G=G))
    return rows


def _fmt12(x: float) -> str:
    return f"{x:.12g}"


def _fmt_complex(z: complex) -> str:
    if z.imag == 0.0:
        return _fmt12(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{_fmt12(z.real)}{sign}{_fmt12(abs(z.imag))}i"


def eigen_report(config: ScenarioConfig) -> str:
    """Human-readable spectral summary, 12 significant digits throughout."""
    params = config.params()
    system = build_system(params)
    poly = pencil_det_poly(system.pencil)
    wform = weierstrass_decompose(system.pencil)
    rts = roots(params)
    regime = classify_regime(params)
    coeffs = ", ".join(_fmt12(c) for c in poly.coefficients)
    lines = [
        f"pencil: {system.dim}x{system.dim}, regular",
        f"det coefficients (ascending powers): {coeffs}",
        f"finite eigenvalues: s1 = {_fmt_complex(rts.s1)}, s2 = {_fmt_complex(rts.s2)}",
        f"discriminant: {_fmt12(rts.discriminant)}",
        f"multiplicities: p = {wform.p}, q = {wform.q}, q_star = {wform.q_star}",
        "regime: {}, {}, spectral radius {}".format(
            "oscillatory" if regime.oscillatory else "non-oscillatory",
            "stable" if regime.stable else "unstable",
            _fmt12(regime.spectral_radius),
        ),
    ]
    if isinstance(params.g, ConstantExpenditure) and regime.stable:
        lines.append(f"steady state: {_fmt12(params.g.level / (1 - params.a))}")
    return "\n".join(lines) + "\n"


def _series_deviation(got_rows, want_rows) -> float:
    """Worst per-series relative gap, each series on its own scale."""
    worst = 0.0
    for pick, first in ((lambda r: r.T, 0), (lambda r: r.C, 1), (lambda r: r.I, 2)):
        got = np.array([pick(r) for r in got_rows[first:]])
        want = np.array([pick(r) for r in want_rows[first:]])
        scale = max(1.0, float(np.max(np.abs(want))))
        worst = max(worst, float(np.max(np.abs(got - want))) / scale)
    return worst


def verify_scenario(config: ScenarioConfig, tamper=None) -> VerifyReport:
    """Run every engine against the recursion and check the year-2 state.

    ``tamper`` is a test hook: a callable ``(engine_name, rows) -> rows``
    applied to each engine's output before comparison, used to prove the
    comparison actually bites.
    """
    baseline = run_engine(config, "oracle")
    if tamper is not None:
        baseline = tamper("oracle", baseline)
    deviations = {}
    for engine in ("closed_form", "pencil"):
        rows = run_engine(config, engine)
        if tamper is not None:
            rows = tamper(engine, rows)
        deviations[engine] = _series_deviation(rows, baseline)

    params = config.params()
    system = build_system(params)
    wform = weierstrass_decompose(system.pencil)
    ic = consistent_initial_state(params, config.t0, config.t1, config.t2)
    consistency_ok = check_consistency(system, wform, ic).consistent

    rts = roots(params)
    regime = classify_regime(params)
    eigen_summary = (
        f"s1 = {_fmt_complex(rts.s1)}, s2 = {_fmt_complex(rts.s2)}, "
        f"radius {_fmt12(regime.spectral_radius)}"
    )
    passed = consistency_ok and all(d <= VERIFY_TOL for d in deviations.values())
    return VerifyReport(
        deviations=deviations,
        consistency_ok=consistency_ok,
        eigen_summary=eigen_summary,
        tolerance=VERIFY_TOL,
        passed=passed,
    )


def format_verify_report(report: VerifyReport) -> str:
    lines = [f"verify tolerance: {_fmt12(report.tolerance)} relative"]
    for engine, dev in report.deviations.items():
        verdict = "ok" if dev <= report.tolerance else "FAIL"
        lines.append(f"engine {engine}: max deviation {_fmt12(dev)} [{verdict}]")
    lines.append(
        "year-2 state consistency: {}".format("ok" if report.consistency_ok else "FAIL")
    )
    lines.append(f"eigen: {report.eigen_summary}")
    lines.append("result: {}".format("PASS" if report.passed else "FAIL"))
    return "\n".join(lines) + "\n"
