"""
Robot decision functions.

A decision function maps a Snapshot (the egocentric view of one robot) to a
Decision (a clockwise destination offset plus the rule that produced it).
Everything is expressed in the observer's frame: the observer sits at offset
0 and offsets grow clockwise, so decisions never depend on absolute angles.
"""

import logging
from dataclasses import dataclass, replace
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from fractions import Fraction
from typing import Callable

from .configuration import Configuration, head, is_rotationally_symmetric
from .exceptions import AlgorithmError, ConfigurationError
from .geometry import (
    FULL_VISIBILITY,
    HALF_TURN,
    QUARTER_TURN,
    ZERO,
    Angle,
    antipodal,
    as_fraction,
    cw,
    offset_visible,
    sees,
    validate_theta,
)

logger = logging.getLogger(__name__)


class Multiplicity(StrEnum):
    ONE = "one"
    MANY = "many"


class Rule(StrEnum):
    R1A = "1a"
    R1B = "1b"
    R2 = "2"
    R3 = "3"
    R4A = "4a"
    R4B = "4b"
    R4C = "4c"
    R5 = "5"
    NEXT = "next"
    JOIN = "join"
    STAY = "stay"
    MOVE = "move"


RULE_4 = frozenset({Rule.R4A, Rule.R4B, Rule.R4C})


class LeaderRole(StrEnum):
    COGNIZANT = "cognizant"
    UNDECIDED = "undecided"
    NONE = "none"


@dataclass(frozen=True)
class VisiblePoint:
    offset: Angle
    flag: Multiplicity = Multiplicity.ONE


@dataclass(frozen=True)
class Snapshot:
    """
    What an activated robot sees.

    `visible` lists occupied points other than the observer's own location,
    as clockwise offsets in strictly increasing order; the observer's own
    location is described only by `own_multiplicity`.
    """

    theta: Fraction
    own_multiplicity: Multiplicity
    visible: tuple[VisiblePoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "theta", validate_theta(self.theta, allow_full=True))
        previous = ZERO
        for point in self.visible:
            if point.offset.value <= previous.value:
                raise AlgorithmError("snapshot offsets must be positive and increasing")
            if not offset_visible(point.offset, self.theta):
                raise AlgorithmError(f"offset {point.offset} is outside the snapshot")
            previous = point.offset

    @classmethod
    def of(cls, S: Configuration, observer: Angle, theta) -> "Snapshot":
        """Snapshot taken by a robot located at observer in configuration S."""
        observer = Angle(observer)
        theta = validate_theta(theta, allow_full=True)
        visible = []
        for point, count in S.positions:
            if point == observer or not sees(observer, point, theta):
                continue
            flag = Multiplicity.MANY if count > 1 else Multiplicity.ONE
            visible.append(VisiblePoint(cw(observer, point), flag))
        own = Multiplicity.MANY if S.count(observer) > 1 else Multiplicity.ONE
        return cls(theta, own, tuple(sorted(visible, key=lambda v: v.offset)))

    @classmethod
    def build(cls, theta, visible=(), own=Multiplicity.ONE) -> "Snapshot":
        """Convenience constructor from (offset, flag) pairs or bare offsets."""
        points = []
        for item in visible:
            if isinstance(item, tuple):
                offset, flag = item
                points.append(VisiblePoint(Angle(offset), Multiplicity(flag)))
            else:
                points.append(VisiblePoint(Angle(item)))
        return cls(as_fraction(theta), Multiplicity(own), tuple(points))

    def with_theta(self, theta) -> "Snapshot":
        return replace(self, theta=as_fraction(theta))

    @property
    def offsets(self) -> tuple[Angle, ...]:
        return tuple(point.offset for point in self.visible)

    def multiplicity_offsets(self) -> tuple[Angle, ...]:
        own = (ZERO,) if self.own_multiplicity is Multiplicity.MANY else ()
        return own + tuple(p.offset for p in self.visible if p.flag is Multiplicity.MANY)


@dataclass(frozen=True)
class Decision:
    destination_offset: Angle
    rule: Rule
    contract_violation: str | None = None

    @property
    def is_null(self) -> bool:
        return self.destination_offset == ZERO


STAY_PUT = Decision(ZERO, Rule.STAY)


@dataclass(frozen=True)
class LocalView:
    """
    The sets a robot derives from its snapshot when theta is one half turn.

    `visible` is V (observer at offset 0 plus visible points, as a set),
    `ghost` is V plus the observer's antipodal point, `with_antipodals` is V
    plus the antipodal of each of its points, `delta` is the smallest
    positive clockwise gap inside `with_antipodals`, and `s` is the nearest
    visible robot clockwise (None when nothing else is visible).
    """

    visible: Configuration
    ghost: Configuration
    with_antipodals: Configuration
    delta: Fraction
    s: Angle | None

    @classmethod
    def from_snapshot(cls, snap: Snapshot) -> "LocalView":
        points = (ZERO,) + snap.offsets
        visible = Configuration.from_points(points)
        ghost = Configuration.from_points(points + (Angle(HALF_TURN),))
        doubled = Configuration.from_points(points + tuple(antipodal(p) for p in points))
        ring = doubled.points
        delta = min(cw(ring[i], ring[(i + 1) % len(ring)]).value for i in range(len(ring)))
        s = snap.offsets[0] if snap.offsets else None
        return cls(visible, ghost, doubled, delta, s)


def _head_with_fallback(primary: Configuration, fallback: Configuration) -> Angle:
    if not is_rotationally_symmetric(primary):
        return head(primary)
    if not is_rotationally_symmetric(fallback):
        return head(fallback)
    raise AlgorithmError("leader undefined")


def visible_head(view: LocalView) -> Angle:
    """v(r): head of V, or head of G when V is symmetric."""
    return _head_with_fallback(view.visible, view.ghost)


def ghost_head(view: LocalView) -> Angle:
    """g(r): head of G, or head of V when G is symmetric."""
    return _head_with_fallback(view.ghost, view.visible)


def classify_leader(view: LocalView) -> LeaderRole:
    v, g = visible_head(view), ghost_head(view)
    if v == g == ZERO:
        return LeaderRole.COGNIZANT
    if v != g and ZERO in (v, g):
        return LeaderRole.UNDECIDED
    return LeaderRole.NONE


def _multiplicity_decision(targets: tuple[Angle, ...]) -> Decision:
    if len(targets) == 1:
        return Decision(targets[0], Rule.R1A)
    if len(targets) == 2:
        a, b = targets
        if cw(a, b) > cw(b, a):
            return Decision(a, Rule.R1B)
        if cw(b, a) > cw(a, b):
            return Decision(b, Rule.R1B)
        return Decision(ZERO, Rule.R1B, "two antipodal multiplicity points")
    return Decision(ZERO, Rule.R1B, f"{len(targets)} multiplicity points visible")


def gathering_decision(snap: Snapshot) -> Decision:
    """
    Gathering rules for robots that see everything but their antipodal point.

    Rules are tried in order: 1 (join a visible multiplicity point), 2 (alone:
    step a quarter turn clockwise), 3 (cognizant leader: move onto s), 4
    (undecided leader: approach s), 5 (stay).

    Raises:
        AlgorithmError: If the snapshot was not taken with theta = 1/2.
    """
    if snap.theta != HALF_TURN:
        raise AlgorithmError("algorithm requires theta = pi")

    targets = snap.multiplicity_offsets()
    if targets:
        return _multiplicity_decision(targets)
    if not snap.visible:
        return Decision(Angle(QUARTER_TURN), Rule.R2)

    view = LocalView.from_snapshot(snap)
    try:
        v, g = visible_head(view), ghost_head(view)
    except AlgorithmError as exc:
        logger.warning("rule 5 by contract violation: %s", exc)
        return Decision(ZERO, Rule.R5, str(exc))

    if g == ZERO:
        return Decision(view.s, Rule.R3)
    if v == ZERO:
        s = view.s
        if g == Angle(HALF_TURN) and antipodal(s) in view.visible:
            return Decision(s + view.delta / 3, Rule.R4A)
        half = s.value / 2
        if Angle(half) in view.with_antipodals:
            return Decision(Angle(half + view.delta / 7), Rule.R4B)
        return Decision(Angle(half), Rule.R4C)
    return Decision(ZERO, Rule.R5)


def full_visibility_decision(snap: Snapshot) -> Decision:
    """
    Reference algorithm for robots that see the whole circle.

    The head moves clockwise onto the next robot; once a multiplicity point
    exists, the first robot clockwise of it moves back onto it.

    Raises:
        AlgorithmError: If the snapshot does not have full visibility.
    """
    if snap.theta != FULL_VISIBILITY:
        raise AlgorithmError("full-visibility algorithm requires full visibility")

    targets = snap.multiplicity_offsets()
    if targets:
        if ZERO in targets:
            return STAY_PUT
        if len(targets) > 1:
            return Decision(ZERO, Rule.STAY, "several multiplicity points")
        target = targets[0]
        others = [ZERO] + [p for p in snap.offsets if p != target]
        follower = min(others, key=lambda p: cw(target, p))
        return Decision(target, Rule.JOIN) if follower == ZERO else STAY_PUT

    if not snap.visible:
        return STAY_PUT
    view = Configuration.from_points((ZERO,) + snap.offsets)
    try:
        leader = head(view)
    except ConfigurationError:
        return Decision(ZERO, Rule.STAY, "leader undefined")
    if leader == ZERO:
        return Decision(snap.offsets[0], Rule.NEXT)
    return STAY_PUT


def _nearest_clockwise(snap: Snapshot) -> Angle | None:
    ahead = [p for p in snap.offsets if p.value < HALF_TURN]
    return ahead[0] if ahead else None


def stay_decision(snap: Snapshot) -> Decision:
    return STAY_PUT


def midpoint_decision(snap: Snapshot) -> Decision:
    """Move halfway to the nearest robot ahead (clockwise), else stay."""
    target = _nearest_clockwise(snap)
    if target is None:
        return STAY_PUT
    return Decision(Angle(target.value / 2), Rule.MOVE)


def nearest_decision(snap: Snapshot) -> Decision:
    """Move onto the nearest robot ahead (clockwise), else stay."""
    target = _nearest_clockwise(snap)
    if target is None:
        return STAY_PUT
    return Decision(target, Rule.MOVE)


@dataclass(frozen=True)
class Algorithm:
    """
    A named decision function.

    `native_theta` is the visibility range the function was written for. When
    called with reinterpret=True, a snapshot taken with a different range is
    relabelled with the native one (its contents are left untouched).
    """

    name: str
    decide: Callable[[Snapshot], Decision]
    native_theta: Fraction | None = None

    def __call__(self, snap: Snapshot, *, reinterpret: bool = False) -> Decision:
        if reinterpret and self.native_theta is not None and snap.theta != self.native_theta:
            snap = snap.with_theta(self.native_theta)
        return self.decide(snap)


ALGORITHMS: dict[str, Algorithm] = {}


def register(name: str, decide: Callable[[Snapshot], Decision], native_theta=None) -> Algorithm:
    algorithm = Algorithm(name, decide, None if native_theta is None else as_fraction(native_theta))
    ALGORITHMS[name] = algorithm
    return algorithm


def get_algorithm(name_or_algorithm) -> Algorithm:
    if isinstance(name_or_algorithm, Algorithm):
        return name_or_algorithm
    try:
        return ALGORITHMS[name_or_algorithm]
    except KeyError:
        known = ", ".join(sorted(ALGORITHMS))
        raise AlgorithmError(f"unknown algorithm {name_or_algorithm!r} (known: {known})")


register("listing1", gathering_decision, HALF_TURN)
register("fullvis", full_visibility_decision, FULL_VISIBILITY)
register("stay", stay_decision)
register("midpoint", midpoint_decision)
register("nearest", nearest_decision)
