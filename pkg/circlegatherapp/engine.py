"""
Semi-synchronous simulation loop.

At each step a scheduler picks a set of robots; every picked robot takes a
snapshot of the same configuration, computes its destination, and all moves
are applied at once. Robots carry an index only so that schedulers and
traces can refer to them; decision functions never see it.
"""

import logging
import random
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from fractions import Fraction
from typing import Callable, Iterable

from .algorithm import RULE_4, Algorithm, Decision, Rule, Snapshot, get_algorithm
from .configuration import Configuration, head, is_rotationally_symmetric
from .exceptions import ContractViolation, GatherSimError, SchedulerError
from .geometry import (
    QUARTER_TURN,
    HALF_TURN,
    Angle,
    antipodal,
    as_fraction,
    cw,
    format_fraction,
    offset_visible,
    parse_fraction,
    sees,
    validate_theta,
)

logger = logging.getLogger(__name__)

DEFAULT_STEP_CAP = 10_000
DEFAULT_FAIRNESS_BOUND = 16


class Scheduler(ABC):
    """Chooses the robots activated at each step (steps count from 1)."""

    spec: str

    def bind(self, n: int) -> None:
        """Prepare for a swarm of n robots; called once before a run."""

    @abstractmethod
    def activate(self, step: int, n: int) -> frozenset[int]: ...

    def __str__(self) -> str:
        return self.spec


class FullScheduler(Scheduler):
    spec = "full"

    def activate(self, step: int, n: int) -> frozenset[int]:
        return frozenset(range(n))


class RoundRobinScheduler(Scheduler):
    spec = "round_robin"

    def activate(self, step: int, n: int) -> frozenset[int]:
        return frozenset({(step - 1) % n})


class RandomScheduler(Scheduler):
    """
    Activates each robot independently with probability p.

    Any robot idle for `fairness_bound` consecutive steps is forced in.
    Probabilities are exact: a robot is picked when a uniform draw below
    p's denominator falls under its numerator.
    """

    def __init__(self, p, seed: int, fairness_bound: int = DEFAULT_FAIRNESS_BOUND):
        self.p = as_fraction(p)
        if not 0 <= self.p <= 1:
            raise SchedulerError("activation probability must be in [0, 1]")
        if fairness_bound < 1:
            raise SchedulerError("fairness bound must be positive")
        self.seed = seed
        self.fairness_bound = fairness_bound
        self.spec = f"random:{format_fraction(self.p)}:{fairness_bound}"
        self._rng = random.Random(seed)
        self._idle: list[int] = []

    def bind(self, n: int) -> None:
        self._rng = random.Random(self.seed)
        self._idle = [0] * n

    def activate(self, step: int, n: int) -> frozenset[int]:
        if len(self._idle) != n:
            self.bind(n)
        chosen = set()
        for robot in range(n):
            draw = self._rng.randrange(self.p.denominator)
            if draw < self.p.numerator or self._idle[robot] >= self.fairness_bound:
                chosen.add(robot)
        for robot in range(n):
            self._idle[robot] = 0 if robot in chosen else self._idle[robot] + 1
        return frozenset(chosen)


class ScriptScheduler(Scheduler):
    """Replays a fixed cycle of activation sets, starting `offset` steps in."""

    def __init__(self, sets: Iterable[Iterable[int]], offset: int = 0):
        self.sets = tuple(frozenset(s) for s in sets)
        if not self.sets:
            raise SchedulerError("script needs at least one activation set")
        self.offset = offset
        self.spec = "script:" + ";".join(
            ",".join(str(i) for i in sorted(s)) if s else "-" for s in self.sets
        )

    def bind(self, n: int) -> None:
        covered = frozenset().union(*self.sets)
        if any(i < 0 or i >= n for i in covered):
            raise SchedulerError(f"script refers to robots outside 0..{n - 1}")
        if covered != frozenset(range(n)):
            missing = sorted(frozenset(range(n)) - covered)
            raise SchedulerError(f"script never activates robots {missing}")

    def activate(self, step: int, n: int) -> frozenset[int]:
        return self.sets[(self.offset + step - 1) % len(self.sets)]

    def shifted(self, steps: int) -> "ScriptScheduler":
        return ScriptScheduler(self.sets, self.offset + steps)


def parse_scheduler(
    spec: str, seed: int = 0, fairness_bound: int = DEFAULT_FAIRNESS_BOUND
) -> Scheduler:
    """
    Build a scheduler from its text form.

    Forms: "full", "round_robin", "random:<p>[:<F>]", "script:<set>;<set>;..."
    where a set is comma-separated robot indices or "-" for the empty set.

    Raises:
        SchedulerError: On an unknown or malformed spec.
    """
    kind, _, argument = spec.strip().partition(":")
    kind = kind.replace("-", "_")
    if kind == "full" and not argument:
        return FullScheduler()
    if kind == "round_robin" and not argument:
        return RoundRobinScheduler()
    if kind == "random":
        probability, _, bound = argument.partition(":")
        try:
            p = parse_fraction(probability) if probability else Fraction(1, 2)
            bound = int(bound) if bound else fairness_bound
        except ValueError as exc:
            raise SchedulerError(f"bad random scheduler spec {spec!r}: {exc}")
        return RandomScheduler(p, seed, bound)
    if kind == "script" and argument:
        try:
            sets = [
                [] if chunk.strip() == "-" else [int(i) for i in chunk.split(",") if i.strip()]
                for chunk in argument.split(";")
            ]
        except ValueError:
            raise SchedulerError(f"bad script scheduler spec {spec!r}")
        return ScriptScheduler(sets)
    raise SchedulerError(f"unknown scheduler {spec!r}")


@dataclass(frozen=True)
class Swarm:
    """Robot positions by robot index."""

    positions: tuple[Angle, ...]

    def __post_init__(self):
        if not self.positions:
            raise GatherSimError("a swarm needs at least one robot")
        object.__setattr__(self, "positions", tuple(Angle(p) for p in self.positions))

    @classmethod
    def from_configuration(cls, S: Configuration) -> "Swarm":
        return cls(S.expanded())

    @property
    def n(self) -> int:
        return len(self.positions)

    @property
    def configuration(self) -> Configuration:
        return Configuration.from_points(self.positions)


@dataclass(frozen=True)
class RobotMove:
    robot: int
    position: Angle
    rule: Rule
    offset: Angle


@dataclass(frozen=True)
class TraceRecord:
    step: int
    activated: tuple[int, ...]
    moves: tuple[RobotMove, ...]
    positions: tuple[Angle, ...]

    @property
    def configuration(self) -> Configuration:
        return Configuration.from_points(self.positions)

    @property
    def swarm(self) -> Swarm:
        return Swarm(self.positions)


class Outcome(StrEnum):
    GATHERED = "gathered"
    STEP_CAP_EXCEEDED = "step_cap_exceeded"
    CONTRACT_VIOLATION = "contract_violation"


@dataclass(frozen=True)
class Violation:
    check: str
    message: str
    step: int | None = None

    def __str__(self) -> str:
        where = f"step {self.step}: " if self.step is not None else ""
        return f"{where}({self.check}) {self.message}"


@dataclass
class RunResult:
    outcome: Outcome
    step: int
    final: Swarm
    point: Angle | None = None
    description: str | None = None
    rule_counts: Counter = field(default_factory=Counter)
    violations: list[Violation] = field(default_factory=list)
    trace: list[TraceRecord] = field(default_factory=list)

    @property
    def final_configuration(self) -> Configuration:
        return self.final.configuration

    def summary(self) -> str:
        if self.outcome is Outcome.GATHERED:
            return f"gathered at {self.point} after {self.step} steps"
        if self.outcome is Outcome.STEP_CAP_EXCEEDED:
            return f"step cap exceeded after {self.step} steps"
        return f"contract violation at step {self.step}: {self.description}"


DecisionTable = dict[Angle, Decision]


def _as_swarm(state) -> Swarm:
    return state if isinstance(state, Swarm) else Swarm.from_configuration(state)


def decide_at(
    S: Configuration, observer: Angle, algorithm: Algorithm, theta, *, reinterpret: bool = False
) -> Decision:
    return algorithm(Snapshot.of(S, observer, theta), reinterpret=reinterpret)


def decision_table(
    S: Configuration, algorithm, theta, *, reinterpret: bool = False
) -> DecisionTable:
    """Decision of a robot at each occupied point (co-located robots agree)."""
    algorithm = get_algorithm(algorithm)
    return {p: decide_at(S, p, algorithm, theta, reinterpret=reinterpret) for p in S.points}


def hypothetical_decisions(state, algorithm, theta, *, reinterpret: bool = False) -> list[Decision]:
    """
    Decision every robot would make if it were activated now.

    Robots are listed by index (canonical order when given a Configuration).
    The configuration is not modified.
    """
    swarm = _as_swarm(state)
    table = decision_table(swarm.configuration, algorithm, theta, reinterpret=reinterpret)
    return [table[p] for p in swarm.positions]


def step(
    state,
    activated: Iterable[int],
    algorithm,
    theta,
    *,
    step_index: int = 0,
    reinterpret: bool = False,
    table: DecisionTable | None = None,
) -> tuple[Swarm, TraceRecord]:
    """
    One semi-synchronous time unit.

    All activated robots decide from the same input configuration and move
    simultaneously; inactive robots stay where they are.

    Raises:
        ContractViolation: If a destination is outside the snapshot or an
            activated robot's decision carries a contract flag.
        SchedulerError: If an activated index does not name a robot.
    """
    swarm = _as_swarm(state)
    algorithm = get_algorithm(algorithm)
    theta = validate_theta(theta, allow_full=True)
    S = swarm.configuration
    table = {} if table is None else table
    chosen = tuple(sorted(set(activated)))
    if any(i < 0 or i >= swarm.n for i in chosen):
        raise SchedulerError(f"activation set {chosen} names robots outside 0..{swarm.n - 1}")

    positions = list(swarm.positions)
    moves = []
    for robot in chosen:
        here = swarm.positions[robot]
        if here not in table:
            table[here] = decide_at(S, here, algorithm, theta, reinterpret=reinterpret)
        decision = table[here]
        if not offset_visible(decision.destination_offset, theta):
            raise ContractViolation("algorithm returned invisible destination", step_index)
        if decision.contract_violation:
            raise ContractViolation(decision.contract_violation, step_index)
        positions[robot] = here + decision.destination_offset
        moves.append(RobotMove(robot, here, decision.rule, decision.destination_offset))

    record = TraceRecord(step_index, chosen, tuple(moves), tuple(positions))
    return Swarm(tuple(positions)), record


def _visible_with_antipodals(S: Configuration, observer: Angle, theta) -> set[Angle]:
    seen = {p for p in S.points if p == observer or sees(observer, p, theta)}
    return seen | {antipodal(p) for p in seen}


def monitor_invariants(
    before, decisions: list[Decision], after, activated: Iterable[int], theta=HALF_TURN
) -> list[Violation]:
    """
    Check the per-step guarantees of the gathering rules.

    Applies only when the configuration before the step is rotationally
    asymmetric and free of multiplicity points; otherwise returns no
    violations. `decisions` are every robot's hypothetical decisions on
    `before`, by robot index.
    """
    before, after = _as_swarm(before), _as_swarm(after)
    S = before.configuration
    if not S.is_set or is_rotationally_symmetric(S):
        return []
    activated = frozenset(activated)
    leader = head(S)
    positions = before.positions
    able = [i for i, d in enumerate(decisions) if not d.is_null]
    violations = []

    if len(able) > 2:
        violations.append(Violation("a", f"{len(able)} robots are able to move"))

    leader_index = positions.index(leader)
    if decisions[leader_index].is_null:
        violations.append(Violation("b", f"true leader at {leader} is unable to move"))

    rule3 = [i for i in able if decisions[i].rule is Rule.R3]
    if len(rule3) > 1 or any(positions[i] != leader for i in rule3):
        where = ", ".join(str(positions[i]) for i in rule3)
        violations.append(Violation("c", f"rule 3 applicable at {where}, leader is {leader}"))

    for i in able:
        if decisions[i].rule in RULE_4 and positions[i] != leader:
            to_leader = cw(positions[i], leader).value
            if not QUARTER_TURN < to_leader <= HALF_TURN or antipodal(positions[i]) not in S:
                violations.append(
                    Violation("d", f"non-leader at {positions[i]} applies rule {decisions[i].rule}")
                )

    moved = [i for i in sorted(activated) if not decisions[i].is_null]
    if moved and all(decisions[i].rule in (Rule.R4B, Rule.R4C) for i in moved):
        A = after.configuration
        if not A.is_set or is_rotationally_symmetric(A):
            violations.append(
                Violation("e", "rule 4.b/4.c moves produced a symmetric or multiplicity configuration")
            )

    for i in moved:
        if decisions[i].rule is not Rule.R3:
            continue
        destination = positions[i] + decisions[i].destination_offset
        for j in able:
            if j != i and j not in activated and positions[j] == destination:
                violations.append(Violation("f", f"rule 3 mover lands on idle mover at {destination}"))

    for i in able:
        if decisions[i].rule in RULE_4:
            destination = positions[i] + decisions[i].destination_offset
            if destination in _visible_with_antipodals(S, positions[i], theta):
                violations.append(
                    Violation("g", f"rule {decisions[i].rule} destination {destination} is in V'")
                )
    return violations


def is_gathered(state, algorithm, theta, *, table: DecisionTable | None = None) -> bool:
    """All robots coincide and none of them would move if activated."""
    swarm = _as_swarm(state)
    S = swarm.configuration
    if not S.is_gathered:
        return False
    if table is None:
        table = decision_table(S, algorithm, theta)
    return all(d.is_null for d in table.values())


def run(
    initial,
    scheduler: Scheduler,
    algorithm,
    theta,
    step_cap: int = DEFAULT_STEP_CAP,
    monitor: bool = False,
    *,
    keep_trace: bool = True,
    on_record: Callable[[TraceRecord], None] | None = None,
    start_step: int = 0,
) -> RunResult:
    """
    Iterate steps until the swarm is gathered and stable, or the cap is hit.

    `initial` is a Configuration (robots indexed in canonical order) or a
    Swarm (to resume a run from a trace record, together with a shifted
    scheduler and start_step).
    """
    if step_cap < 1:
        raise GatherSimError("step cap must be at least 1")
    swarm = _as_swarm(initial)
    algorithm = get_algorithm(algorithm)
    theta = validate_theta(theta, allow_full=True)
    scheduler.bind(swarm.n)
    result = RunResult(Outcome.STEP_CAP_EXCEEDED, start_step, swarm)

    cached_config, table = None, {}

    def current_table(S: Configuration) -> DecisionTable:
        nonlocal cached_config, table
        if S != cached_config:
            cached_config, table = S, {}
        return table

    def finish_if_gathered(at_step: int) -> bool:
        S = swarm.configuration
        if not S.is_gathered:
            return False
        t = current_table(S)
        for p in S.points:
            if p not in t:
                t[p] = decide_at(S, p, algorithm, theta)
        if all(d.is_null for d in t.values()):
            result.outcome, result.step, result.point = Outcome.GATHERED, at_step, S.points[0]
            return True
        return False

    try:
        if finish_if_gathered(start_step):
            result.final = swarm
            return result
        for t in range(start_step + 1, start_step + step_cap + 1):
            activated = scheduler.activate(t, swarm.n)
            before = swarm
            S = before.configuration
            t_table = current_table(S)
            decisions = None
            if monitor:
                for p in S.points:
                    if p not in t_table:
                        t_table[p] = decide_at(S, p, algorithm, theta)
                decisions = [t_table[p] for p in before.positions]
            swarm, record = step(
                before, activated, algorithm, theta, step_index=t, table=t_table
            )
            for move in record.moves:
                result.rule_counts[str(move.rule)] += 1
            if keep_trace:
                result.trace.append(record)
            if on_record is not None:
                on_record(record)
            result.step = t
            if monitor:
                found = monitor_invariants(before, decisions, swarm, activated, theta)
                if found:
                    result.violations.extend(Violation(v.check, v.message, t) for v in found)
                    raise ContractViolation(str(result.violations[0]), t)
            if finish_if_gathered(t):
                break
    except ContractViolation as exc:
        logger.warning("contract violation at step %s: %s", exc.step, exc)
        result.outcome = Outcome.CONTRACT_VIOLATION
        result.description = str(exc)
        result.step = exc.step if exc.step is not None else result.step
    result.final = swarm
    logger.info("run finished: %s", result.summary())
    return result
