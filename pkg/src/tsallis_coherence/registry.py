"""Named states and counterexample pairs with their reference values.

Reference numbers carry four significant decimals, so replay compares at an
absolute tolerance of 5e-4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hermitian import DensityMatrix, PureState
from .measures import MeasureId, evaluate
from .ordering import Verdict, compare
from .qubit import QubitParams, rho_tz

REPRODUCE_TOL = 5e-4

L1 = MeasureId.l1()
C2 = MeasureId.tsallis(2.0)
C1 = MeasureId.rel_entropy()
CHALF = MeasureId.tsallis(0.5)


@dataclass(frozen=True)
class RegistryState:
    name: str
    description: str
    state: DensityMatrix
    expected: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CounterexampleCase:
    name: str
    state_a: str
    state_b: str
    measure_a: MeasureId
    measure_b: MeasureId
    verdict: Verdict
    note: str = ""


def _pure(amplitudes) -> DensityMatrix:
    return PureState(np.sqrt(np.asarray(amplitudes, dtype=float))).density()


def registry_states() -> dict[str, RegistryState]:
    """The two qutrit states and five qubit states with their reported values.

    ``psi1`` uses weights (12/25, 12/25, 1/25); the three equal weights
    12/25 do not normalize, while this choice reproduces both reported values.
    """
    s21 = math.sqrt(21) / 5
    states = [
        RegistryState("psi1", "qutrit pure, weights (12/25, 12/25, 1/25)",
                      _pure([12 / 25, 12 / 25, 1 / 25]), {L1: 1.5143, CHALF: 0.6400}),
        RegistryState("psi2", "qutrit pure, weights (7/10, 2/10, 1/10)",
                      _pure([7 / 10, 2 / 10, 1 / 10]), {L1: 1.5603, CHALF: 0.5303}),
        RegistryState("ex1-rho1", "rho(0.5, 0)", rho_tz(QubitParams(0.5, 0.0)),
                      {L1: 0.5, C2: 0.25, C1: 0.13081, CHALF: 0.0681}),
        RegistryState("ex1-rho2", "rho(0.4, sqrt(21)/5)", rho_tz(QubitParams(0.4, s21)),
                      {L1: 0.4, C2: 0.4, C1: 0.17344, CHALF: 0.0817}),
        RegistryState("ex2-rho1", "rho(0.5, 0.5)", rho_tz(QubitParams(0.5, 0.5)),
                      {C1: 0.1458, C2: 0.3090, CHALF: 0.0746}),
        RegistryState("ex2-rho2", "rho(0.48, 0.58)", rho_tz(QubitParams(0.48, 0.58)),
                      {C1: 0.1400, C2: 0.3100, CHALF: 0.0707}),
        RegistryState("ex2-rho3", "rho(0.48, 0.64)", rho_tz(QubitParams(0.48, 0.64)),
                      {C1: 0.1463, C2: 0.3326, CHALF: 0.0733}),
    ]
    return {s.name: s for s in states}


def counterexample_registry() -> list[CounterexampleCase]:
    v = Verdict.VIOLATION
    return [
        CounterexampleCase("qutrit-l1-vs-half", "psi1", "psi2", L1, CHALF, v,
                           "l1 ranks psi2 higher, C_1/2 ranks psi1 higher"),
        CounterexampleCase("ex1-l1-vs-c2", "ex1-rho1", "ex1-rho2", L1, C2, v),
        CounterexampleCase("ex1-l1-vs-c1", "ex1-rho1", "ex1-rho2", L1, C1, v),
        CounterexampleCase("ex1-l1-vs-c-half", "ex1-rho1", "ex1-rho2", L1, CHALF, v),
        CounterexampleCase("c1-vs-c2", "ex2-rho1", "ex2-rho2", C1, C2, v),
        CounterexampleCase("c-half-vs-c2", "ex2-rho1", "ex2-rho2", CHALF, C2, v),
        CounterexampleCase("c-half-vs-c1", "ex2-rho1", "ex2-rho3", CHALF, C1, v),
    ]


@dataclass
class ValueCheck:
    state: str
    measure: MeasureId
    expected: float
    computed: float

    @property
    def ok(self) -> bool:
        return abs(self.computed - self.expected) <= REPRODUCE_TOL


@dataclass
class VerdictCheck:
    case: str
    expected: Verdict
    computed: Verdict
    values: dict

    @property
    def ok(self) -> bool:
        return self.expected is self.computed


@dataclass
class Reproduction:
    values: list[ValueCheck]
    verdicts: list[VerdictCheck]

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.values) and all(v.ok for v in self.verdicts)

    def mismatches(self) -> list:
        return [v for v in self.values if not v.ok] + [v for v in self.verdicts if not v.ok]


def case_names() -> list[str]:
    return [c.name for c in counterexample_registry()]


def reproduce(name: str = "all") -> Reproduction:
    """Recompute registry values and verdicts; ``name`` is a case or ``"all"``.

    Raises ``KeyError`` for an unknown case name.
    """
    states = registry_states()
    cases = counterexample_registry()
    if name == "all":
        selected = cases
        wanted = [(s, m) for s in states.values() for m in s.expected]
    else:
        selected = [c for c in cases if c.name == name]
        if not selected:
            raise KeyError(name)
        c = selected[0]
        wanted = [(states[s], m) for s in (c.state_a, c.state_b)
                  for m in (c.measure_a, c.measure_b) if m in states[s].expected]

    values = [
        ValueCheck(s.name, m, s.expected[m], float(evaluate(s.state, m))) for s, m in wanted
    ]
    verdicts = []
    for c in selected:
        rec = compare(states[c.state_a].state, states[c.state_b].state, c.measure_a, c.measure_b)
        verdicts.append(VerdictCheck(c.name, c.verdict, rec.verdict, rec.values()))
    return Reproduction(values, verdicts)
