"""
Multisets of robot positions and the machinery built on them: angle
sequences, truncation, lexicographic heads, rotational symmetry and
visibility graphs.
"""

import logging
import random
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import networkx as nx

from .exceptions import ConfigurationError
from .geometry import (
    Angle,
    as_fraction,
    angular_distance,
    antipodal,
    cw,
    format_fraction,
    parse_fraction,
    sees,
    validate_theta,
)

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"^(?P<angle>-?\d+(?:\s*/\s*\d+)?)\s*(?:x\s*(?P<count>\d+))?$")


@dataclass(frozen=True)
class AngleSequence:
    """Clockwise gaps read from one point; full sequences sum to one turn."""

    gaps: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "gaps", tuple(as_fraction(g) for g in self.gaps))
        if any(g < 0 for g in self.gaps):
            raise ConfigurationError("angle sequence gaps must be non-negative")

    def __len__(self) -> int:
        return len(self.gaps)

    def __iter__(self):
        return iter(self.gaps)

    def __getitem__(self, index):
        return self.gaps[index]

    def total(self) -> Fraction:
        return sum(self.gaps, Fraction(0))

    def __str__(self) -> str:
        return "(" + ", ".join(format_fraction(g) for g in self.gaps) + ")"


@dataclass(frozen=True)
class Configuration:
    """
    A finite multiset of points on the circle.

    `positions` holds (point, count) pairs in ascending point order, which is
    also the canonical robot order once multiplicities are expanded.
    """

    positions: tuple[tuple[Angle, int], ...]

    def __post_init__(self):
        merged: Counter = Counter()
        for point, count in self.positions:
            if count < 1:
                raise ConfigurationError("multiplicities must be at least 1")
            merged[Angle(point)] += int(count)
        if not merged:
            raise ConfigurationError("a configuration needs at least one robot")
        object.__setattr__(self, "positions", tuple(sorted(merged.items())))

    @classmethod
    def from_points(cls, points: Iterable) -> "Configuration":
        counts = Counter(Angle(p) for p in points)
        return cls(tuple(counts.items()))

    @classmethod
    def from_counts(cls, counts: Mapping) -> "Configuration":
        return cls(tuple((Angle(p), c) for p, c in counts.items()))

    @property
    def n(self) -> int:
        return sum(count for _, count in self.positions)

    @property
    def points(self) -> tuple[Angle, ...]:
        return tuple(point for point, _ in self.positions)

    def expanded(self) -> tuple[Angle, ...]:
        return tuple(point for point, count in self.positions for _ in range(count))

    def count(self, p: Angle) -> int:
        return dict(self.positions).get(Angle(p), 0)

    def __contains__(self, p) -> bool:
        return self.count(p) > 0

    @property
    def is_set(self) -> bool:
        return all(count == 1 for _, count in self.positions)

    @property
    def is_gathered(self) -> bool:
        return len(self.positions) == 1

    def multiplicity_points(self) -> tuple[Angle, ...]:
        return tuple(point for point, count in self.positions if count > 1)

    def rotate(self, by) -> "Configuration":
        return Configuration(tuple((point + by, count) for point, count in self.positions))

    def with_point(self, p: Angle) -> "Configuration":
        return Configuration(self.positions + ((Angle(p), 1),))

    def without_point(self, p: Angle) -> "Configuration":
        p = Angle(p)
        if p not in self:
            raise ConfigurationError("point unoccupied")
        counts = Counter(dict(self.positions))
        counts[p] -= 1
        return Configuration(tuple((q, c) for q, c in counts.items() if c > 0))

    def antipodal_closed(self) -> bool:
        """True iff every occupied point's antipodal carries the same count."""
        return all(self.count(antipodal(p)) == c for p, c in self.positions)

    def start_index(self, p: Angle, occurrence_index: int = 1) -> int:
        """Index in expanded() of the given occurrence of p."""
        p = Angle(p)
        offset = 0
        for point, count in self.positions:
            if point == p:
                if not 1 <= occurrence_index <= count:
                    raise ConfigurationError(
                        f"occurrence index must be in 1..{count}, got {occurrence_index}"
                    )
                return offset + occurrence_index - 1
            offset += count
        raise ConfigurationError("point unoccupied")

    def __str__(self) -> str:
        return ", ".join(format_token(p, c) for p, c in self.positions)


def format_token(point: Angle, count: int = 1) -> str:
    return f"{point}x{count}" if count > 1 else str(point)


def _gap_cycle(S: Configuration) -> tuple[Fraction, ...]:
    """Gaps between consecutive expanded points, read from expanded index 0."""
    points = S.expanded()
    n = len(points)
    return tuple(cw(points[i], points[(i + 1) % n]).value for i in range(n))


def _all_coincident(S: Configuration) -> bool:
    return len(S.positions) == 1


def _sequence_at(S: Configuration, index: int) -> AngleSequence:
    n = S.n
    if _all_coincident(S):
        gaps = [Fraction(0)] * n
        gaps[index] = Fraction(1)
        return AngleSequence(tuple(gaps))
    cycle = _gap_cycle(S)
    return AngleSequence(cycle[index:] + cycle[:index])


def angle_sequence(S: Configuration, p: Angle, occurrence_index: int = 1) -> AngleSequence:
    """
    Angle sequence of the given occurrence of p with respect to S.

    Coincident points are read in ascending occurrence order. When every
    point coincides, the sequence is all zeros with a single full turn at the
    position of the occurrence.

    Raises:
        ConfigurationError: If p is not occupied in S.
    """
    return _sequence_at(S, S.start_index(p, occurrence_index))


def all_angle_sequences(S: Configuration) -> list[AngleSequence]:
    return [_sequence_at(S, i) for i in range(S.n)]


def truncate(W: AngleSequence, S: Configuration, p: Angle, q: Angle) -> AngleSequence:
    """
    The angle sequence W of p truncated at q.

    Finds the unique j with 0 < cw(p_j, q) <= cw(p_j, p_{j+1}) and returns the
    first j - 1 gaps followed by cw(p_j, q).

    Raises:
        ConfigurationError: If p is unoccupied or q equals p.
    """
    p, q = Angle(p), Angle(q)
    if p not in S:
        raise ConfigurationError("point unoccupied")
    if p == q:
        raise ConfigurationError("truncation point equals start")
    position = p
    for j, gap in enumerate(W.gaps):
        reach = cw(position, q).value
        if 0 < reach <= gap:
            return AngleSequence(W.gaps[:j] + (reach,))
        position = position + gap
    raise ConfigurationError("angle sequence does not cover the truncation point")


def lex_compare(W1: AngleSequence, W2: AngleSequence) -> int:
    """Compare two sequences lexicographically after zero-padding: -1, 0 or 1."""
    length = max(len(W1), len(W2))
    left = tuple(W1) + (Fraction(0),) * (length - len(W1))
    right = tuple(W2) + (Fraction(0),) * (length - len(W2))
    return (left > right) - (left < right)


def least_rotation(seq: tuple) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    doubled = seq + seq
    failure = [-1] * len(doubled)
    k = 0
    for j in range(1, len(doubled)):
        current = doubled[j]
        i = failure[j - k - 1]
        while i != -1 and current != doubled[k + i + 1]:
            if current < doubled[k + i + 1]:
                k = j - i - 1
            i = failure[i]
        if current != doubled[k + i + 1]:
            if current < doubled[k]:
                k = j
            failure[j - k] = -1
        else:
            failure[j - k] = i + 1
    return k % len(seq) if seq else 0


def _smallest_period(seq: tuple) -> int:
    n = len(seq)
    prefix = [0] * n
    for i in range(1, n):
        k = prefix[i - 1]
        while k and seq[i] != seq[k]:
            k = prefix[k - 1]
        if seq[i] == seq[k]:
            k += 1
        prefix[i] = k
    period = n - prefix[-1]
    return period if n % period == 0 else n


def rotation_symmetry_order(S: Configuration) -> int:
    """The k of the k-fold rotational symmetry of S (1 when asymmetric)."""
    if _all_coincident(S):
        return 1
    return S.n // _smallest_period(_gap_cycle(S))


def is_rotationally_symmetric(S: Configuration) -> bool:
    """True iff a non-identity rotation preserves S with multiplicities."""
    return rotation_symmetry_order(S) > 1


def symmetric_by_rotation_search(S: Configuration) -> bool:
    """Reference check: try every rotation taking the first point onto another."""
    points = S.expanded()
    for other in points[1:]:
        shift = cw(points[0], other)
        if shift.value != 0 and S.rotate(shift) == S:
            return True
    return False


def head(S: Configuration) -> Angle:
    """
    The point of S with the lexicographically smallest angle sequence.

    Raises:
        ConfigurationError: If S is rotationally symmetric.
    """
    if is_rotationally_symmetric(S):
        raise ConfigurationError("head undefined on symmetric configuration")
    points = S.expanded()
    if _all_coincident(S):
        return points[-1]
    return points[least_rotation(_gap_cycle(S))]


def two_missing_antipodals_implies_asymmetric(S: Configuration) -> bool:
    """
    True iff exactly two points of the set S lack an antipodal partner.

    Whenever this holds, S is rotationally asymmetric.

    Raises:
        ConfigurationError: If S has multiplicities.
    """
    if not S.is_set:
        raise ConfigurationError("antipodal test needs a set without multiplicities")
    unpaired = [p for p in S.points if antipodal(p) not in S]
    return len(unpaired) == 2


@dataclass(frozen=True)
class VisibilityGraph:
    """Mutual-visibility graph over robot indices in canonical order."""

    graph: nx.Graph

    @property
    def n(self) -> int:
        return self.graph.number_of_nodes()

    def has_edge(self, i: int, j: int) -> bool:
        return self.graph.has_edge(i, j)

    def edges(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(edge) for edge in self.graph.edges)

    def is_connected(self) -> bool:
        return nx.is_connected(self.graph)


def visibility_graph(S: Configuration, theta) -> VisibilityGraph:
    theta = validate_theta(theta, allow_full=True)
    return visibility_graph_of(S.expanded(), theta)


def visibility_graph_of(points: Iterable[Angle], theta) -> VisibilityGraph:
    """Visibility graph over an explicit robot order (index i is points[i])."""
    points = tuple(points)
    graph = nx.Graph()
    graph.add_nodes_from(range(len(points)))
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if sees(points[i], points[j], theta):
                graph.add_edge(i, j)
    return VisibilityGraph(graph)


def random_asymmetric_config(
    n: int, seed: int, denominator_bound: int = 1000, max_attempts: int = 10_000
) -> Configuration:
    """
    Seeded random rotationally asymmetric set of n distinct rational points.

    Points are k / denominator_bound for distinct k; draws are rejected until
    the set is asymmetric.

    Raises:
        ConfigurationError: If n < 2 or denominator_bound < 4n.
    """
    if n < 2:
        raise ConfigurationError("n must be at least 2")
    if denominator_bound < 4 * n:
        raise ConfigurationError(
            f"denominator bound {denominator_bound} too small for {n} distinct angles"
        )
    rng = random.Random(seed)
    for attempt in range(max_attempts):
        numerators = rng.sample(range(denominator_bound), n)
        S = Configuration.from_points(Fraction(k, denominator_bound) for k in numerators)
        if not is_rotationally_symmetric(S):
            logger.debug("asymmetric config after %d attempts (seed=%s)", attempt + 1, seed)
            return S
    raise ConfigurationError("no asymmetric configuration found")


def parse_configuration(text: str) -> Configuration:
    """
    Parse the configuration text format.

    One robot point per line (or comma-separated), "num/den" in turns, with an
    optional "xK" suffix for multiplicity K; '#' starts a comment.

    Raises:
        ConfigurationError: On a malformed line or an empty configuration.
    """
    counts: Counter = Counter()
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for token in line.split(","):
            token = token.strip()
            if not token:
                continue
            match = _TOKEN_RE.match(token)
            if not match:
                raise ConfigurationError(f"line {line_number}: bad token {token!r}")
            count = int(match.group("count") or 1)
            if count < 1:
                raise ConfigurationError(f"line {line_number}: multiplicity must be >= 1")
            counts[Angle(parse_fraction(match.group("angle")))] += count
    if not counts:
        raise ConfigurationError("configuration is empty")
    return Configuration(tuple(counts.items()))


def format_configuration(S: Configuration) -> str:
    return "".join(format_token(p, c) + "\n" for p, c in S.positions)
