"""
Counterexample machinery for visibility ranges of at most a quarter turn.

Given any decision function, the forge looks at perturbations of a regular
configuration and produces a certificate that the function cannot gather:
either a stuck asymmetric configuration, or an asymmetric configuration that
one semi-synchronous step turns into an antipodally symmetric multiset.
"""

import itertools
import logging
import multiprocessing
import random
from collections import defaultdict
from dataclasses import dataclass, field, replace
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from fractions import Fraction
from typing import Iterable, Sequence

from .algorithm import Algorithm, Decision, Snapshot, get_algorithm
from .configuration import (
    Configuration,
    is_rotationally_symmetric,
    two_missing_antipodals_implies_asymmetric,
    visibility_graph,
    visibility_graph_of,
)
from .engine import Swarm, decide_at, step
from .exceptions import (
    CertificateError,
    DerandomizationError,
    ForgeExhausted,
    ImpossibilityError,
)
from .geometry import (
    HALF_TURN,
    QUARTER_TURN,
    ZERO,
    Angle,
    angular_distance,
    antipodal,
    as_fraction,
    offset_visible,
    regular_set,
    sees,
    semicircle,
)

logger = logging.getLogger(__name__)

DEFAULT_DENOMINATOR_BOUND = 1000
DEFAULT_MAX_SAMPLES = 50


def validate_small_theta(theta) -> Fraction:
    theta = as_fraction(theta)
    if not 0 < theta <= QUARTER_TURN:
        raise ImpossibilityError("theta must be <= 1/4 turn")
    return theta


def regular_configuration(n: int) -> Configuration:
    return Configuration.from_points(regular_set(n))


def is_compatible(n: int, theta) -> bool:
    """
    Check the three size conditions on the regular n-set.

    1. The open semicircle centered at each point holds exactly n/2 points.
    2. No two points are exactly theta apart.
    3. Some two distinct points are closer than theta.

    All points of a regular set see the same picture, so each condition is
    evaluated from the point at angle 0.

    Raises:
        ImpossibilityError: If theta is not in (0, 1/4].
    """
    theta = validate_small_theta(theta)
    if n < 2:
        return False
    points = regular_set(n)
    origin = points[0]
    half = semicircle(origin)
    if 2 * sum(1 for p in points if half.contains(p)) != n:
        return False
    distances = [angular_distance(origin, p).value for p in points[1:]]
    if theta in distances:
        return False
    return min(distances) < theta


def find_compatible(theta, n_min: int) -> int:
    """Smallest n >= n_min compatible with theta; only 4k + 2 can qualify."""
    theta = validate_small_theta(theta)
    n = max(n_min, 2)
    n += (2 - n) % 4
    while not is_compatible(n, theta):
        n += 4
    return n


def epsilon(theta, n: int) -> Fraction:
    """
    Largest perturbation step that keeps the regular n-set's visibility.

    Half the distance from theta to the nearest multiple of 1/n.

    Raises:
        ImpossibilityError: If n is not compatible with theta.
    """
    theta = validate_small_theta(theta)
    if not is_compatible(n, theta):
        raise ImpossibilityError(f"n = {n} is not compatible with theta = {theta}")
    delta = min(abs(theta - Fraction(a, n)) for a in range(n + 1))
    eps = delta / 2
    if not 0 < eps <= Fraction(1, 4 * n):
        raise ImpossibilityError(f"epsilon {eps} out of range for n = {n}")
    return eps


@dataclass(frozen=True)
class PerturbationCoefficients:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(as_fraction(v) for v in self.values)
        if any(not 0 <= v <= 1 for v in values):
            raise ImpossibilityError("perturbation coefficients must lie in [0, 1]")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, index: int) -> Fraction:
        return self.values[index]

    @property
    def distinct(self) -> bool:
        return len(set(self.values)) == len(self.values)

    def with_coordinate(self, index: int, value) -> "PerturbationCoefficients":
        values = list(self.values)
        values[index] = as_fraction(value)
        return PerturbationCoefficients(tuple(values))


def _coefficients(gamma) -> PerturbationCoefficients:
    if isinstance(gamma, PerturbationCoefficients):
        return gamma
    return PerturbationCoefficients(tuple(gamma))


def i_related(gamma1, gamma2, index: int) -> bool:
    """True iff the two coefficient vectors agree everywhere except maybe at index."""
    gamma1, gamma2 = _coefficients(gamma1), _coefficients(gamma2)
    if len(gamma1) != len(gamma2):
        return False
    return all(a == b for j, (a, b) in enumerate(zip(gamma1, gamma2)) if j != index)


@dataclass(frozen=True)
class Perturbation:
    """
    A perturbed regular n-set that remembers which copy came from which point.

    copies[i] is the perturbed copy of the regular point i/n.
    """

    n: int
    eps: Fraction
    gamma: PerturbationCoefficients
    copies: tuple[Angle, ...]

    @property
    def regular(self) -> tuple[Angle, ...]:
        return regular_set(self.n)

    @property
    def configuration(self) -> Configuration:
        return Configuration.from_points(self.copies)


def perturb(n: int, eps, gamma) -> Perturbation:
    """
    Rotate regular point i clockwise by gamma[i] * eps.

    Raises:
        ImpossibilityError: If gamma does not have n entries or eps is not
            in (0, 1/n).
    """
    gamma = _coefficients(gamma)
    eps = as_fraction(eps)
    if len(gamma) != n:
        raise ImpossibilityError(f"expected {n} coefficients, got {len(gamma)}")
    if not 0 < eps < Fraction(1, n):
        raise ImpossibilityError(f"perturbation size must satisfy 0 < eps < 1/{n}")
    copies = tuple(p + g * eps for p, g in zip(regular_set(n), gamma))
    return Perturbation(n, eps, gamma, copies)


def sample_coefficients(
    n: int, rng: random.Random, denominator_bound: int = DEFAULT_DENOMINATOR_BOUND
) -> PerturbationCoefficients:
    """n distinct coefficients of the form k / denominator_bound."""
    if denominator_bound + 1 < n:
        raise ImpossibilityError(f"denominator bound {denominator_bound} too small for {n} coefficients")
    numerators = rng.sample(range(denominator_bound + 1), n)
    return PerturbationCoefficients(tuple(Fraction(k, denominator_bound) for k in numerators))


def d_combination(S1: Configuration, S2: Configuration, center: Angle) -> Configuration:
    """
    Points of S1 inside the open semicircle D centered at center, together
    with the antipodals of the points of S2 inside D. The result is a set.
    """
    half = semicircle(Angle(center))
    kept = {p for p in S1.points if half.contains(p)}
    mirrored = {antipodal(p) for p in S2.points if half.contains(p)}
    return Configuration.from_points(kept | mirrored)


def semicircle_partition_holds(perturbation: Perturbation) -> bool:
    """
    For every regular point p, the open semicircle at p holds exactly n/2
    copies, namely the copies of the regular points it holds, and the
    semicircle at p's copy holds the same copies.
    """
    n = perturbation.n
    regular, copies = perturbation.regular, perturbation.copies
    for index, p in enumerate(regular):
        around_p = semicircle(p)
        around_copy = semicircle(copies[index])
        expected = {i for i, q in enumerate(regular) if around_p.contains(q)}
        inside = {i for i, q in enumerate(copies) if around_p.contains(q)}
        inside_copy = {i for i, q in enumerate(copies) if around_copy.contains(q)}
        if 2 * len(inside) != n or inside != expected or inside_copy != inside:
            return False
    return True


def neighborhood_preserved(perturbation: Perturbation, theta) -> bool:
    """q is in the theta-neighborhood of p iff q's copy is in that of p's copy."""
    regular, copies = perturbation.regular, perturbation.copies
    n = perturbation.n
    for i, j in itertools.permutations(range(n), 2):
        if sees(regular[i], regular[j], theta) != sees(copies[i], copies[j], theta):
            return False
    return True


def isomorphism_check(S: Configuration, perturbed, theta) -> bool:
    """
    True iff mapping regular point i to its copy preserves visibility edges.

    Raises:
        ImpossibilityError: If perturbed carries no correspondence (is not a
            Perturbation) or is not a perturbation of S.
    """
    if not isinstance(perturbed, Perturbation):
        raise ImpossibilityError("no recorded correspondence")
    if Configuration.from_points(perturbed.regular) != S:
        raise ImpossibilityError("configuration is not the regular set of the perturbation")
    before = visibility_graph_of(perturbed.regular, theta)
    after = visibility_graph_of(perturbed.copies, theta)
    return before.edges() == after.edges()


class CertificateVariant(StrEnum):
    FROZEN = "frozen"
    LEMMA1 = "lemma1"
    LEMMA2 = "lemma2"


@dataclass(frozen=True)
class Certificate:
    """
    Evidence that an algorithm fails to gather.

    `configuration` is the stuck configuration (frozen) or S' (lemma1,
    lemma2). For lemma2, `other` is S'' and `other_mover` is p'' in S''.
    `combined` is Q, `successor` is the configuration after activating the
    movers of Q, and `witness` is a rotation mapping the successor to itself.
    """

    variant: CertificateVariant
    algorithm: str
    theta: Fraction
    n: int
    gamma: PerturbationCoefficients
    configuration: Configuration
    decisions: tuple[Decision, ...] = ()
    mover_index: int | None = None
    mover: Angle | None = None
    target: Angle | None = None
    gamma_other: PerturbationCoefficients | None = None
    other: Configuration | None = None
    other_mover: Angle | None = None
    combined: Configuration | None = None
    successor: Configuration | None = None
    witness: Angle | None = None
    sample: int | None = None
    checks: tuple[tuple[str, bool], ...] = field(default=(), compare=False)

    @property
    def verified(self) -> bool:
        return bool(self.checks) and all(passed for _, passed in self.checks)

    @property
    def failed_checks(self) -> list[str]:
        return [name for name, passed in self.checks if not passed]


def _raise_on_failure(checks: list[tuple[str, bool]], variant: str) -> None:
    failed = [name for name, passed in checks if not passed]
    if failed:
        raise CertificateError(f"{variant} certificate failed: {', '.join(failed)}", failed)


def _frozen_checks(cert: Certificate, algorithm: Algorithm) -> list[tuple[str, bool]]:
    S = cert.configuration
    table = {p: decide_at(S, p, algorithm, cert.theta, reinterpret=True) for p in S.points}
    return [
        ("set", S.is_set and S.n == cert.n),
        ("asymmetric", not is_rotationally_symmetric(S)),
        ("connected", visibility_graph(S, cert.theta).is_connected()),
        ("all_null", all(d.is_null for d in table.values())),
    ]


def _successor(Q: Configuration, movers: Iterable[Angle], algorithm: Algorithm, theta) -> Configuration:
    swarm = Swarm.from_configuration(Q)
    activated = [swarm.positions.index(p) for p in movers]
    after, _ = step(swarm, activated, algorithm, theta, reinterpret=True)
    return after.configuration


def _combined_checks(
    cert: Certificate,
    algorithm: Algorithm,
    Q: Configuration,
    snapshot_pairs: list[tuple[Angle, Configuration, Angle]],
) -> tuple[list[tuple[str, bool]], Configuration | None]:
    """
    Checks shared by both lemma variants. Each snapshot pair is (point of Q,
    original configuration, point there) and must give the same snapshot.
    """
    theta = cert.theta
    checks = [
        ("combination", cert.combined == Q),
        ("size", Q.is_set and Q.n == cert.n),
        ("two_unpaired_antipodals", Q.is_set and two_missing_antipodals_implies_asymmetric(Q)),
        ("asymmetric", not is_rotationally_symmetric(Q)),
        ("connected", visibility_graph(Q, theta).is_connected()),
    ]
    same_view = all(
        p in Q and Snapshot.of(Q, p, theta) == Snapshot.of(S, origin, theta)
        for p, S, origin in snapshot_pairs
    )
    checks.append(("snapshot_preserved", same_view))
    R = None
    if same_view:
        R = _successor(Q, [p for p, _, _ in snapshot_pairs], algorithm, theta)
    witness = cert.witness
    checks += [
        ("successor", R is not None and R == cert.successor),
        ("successor_antipodal_closed", R is not None and R.antipodal_closed()),
        (
            "successor_symmetric",
            R is not None and witness is not None and witness != ZERO and R.rotate(witness) == R,
        ),
    ]
    return checks, R


def _lemma1_checks(cert: Certificate, algorithm: Algorithm) -> list[tuple[str, bool]]:
    S1 = cert.configuration
    moved = S1.without_point(cert.mover).with_point(cert.target)
    Q = d_combination(S1, moved, cert.mover)
    checks, _ = _combined_checks(cert, algorithm, Q, [(cert.mover, S1, cert.mover)])
    return checks


def _lemma2_checks(cert: Certificate, algorithm: Algorithm) -> list[tuple[str, bool]]:
    S1, S2 = cert.configuration, cert.other
    center = regular_set(cert.n)[cert.mover_index]
    Q = d_combination(S1, S2, center)
    mirrored = antipodal(cert.other_mover)
    checks, _ = _combined_checks(
        cert, algorithm, Q, [(cert.mover, S1, cert.mover), (mirrored, S2, cert.other_mover)]
    )
    related = (
        cert.gamma_other is not None
        and cert.gamma != cert.gamma_other
        and i_related(cert.gamma, cert.gamma_other, cert.mover_index)
    )
    checks.insert(0, ("bundle", related))
    return checks


def check_certificate(cert: Certificate, algorithm=None) -> tuple[tuple[str, bool], ...]:
    """
    Recompute every check of a certificate from its stored data alone.

    The algorithm is looked up by the certificate's algorithm name unless one
    is passed in.
    """
    algorithm = get_algorithm(algorithm or cert.algorithm)
    if cert.variant is CertificateVariant.FROZEN:
        checks = _frozen_checks(cert, algorithm)
    elif cert.variant is CertificateVariant.LEMMA1:
        checks = _lemma1_checks(cert, algorithm)
    else:
        checks = _lemma2_checks(cert, algorithm)
    return tuple(checks)


def verify_certificate(cert: Certificate, algorithm=None) -> Certificate:
    """
    Re-verify a certificate and return it with fresh check results.

    Raises:
        CertificateError: If any check fails.
    """
    checks = list(check_certificate(cert, algorithm))
    _raise_on_failure(checks, cert.variant)
    return replace(cert, checks=tuple(checks))


def _decision_of(S: Configuration, p: Angle, algorithm: Algorithm, theta) -> Decision:
    decision = decide_at(S, p, algorithm, theta, reinterpret=True)
    if not offset_visible(decision.destination_offset, theta):
        raise ImpossibilityError("algorithm returned invisible destination")
    return decision


def build_frozen_certificate(algorithm, theta, n: int, gamma, sample: int | None = None) -> Certificate:
    """
    Raises:
        ImpossibilityError: If some robot would move.
        CertificateError: If a check fails.
    """
    algorithm = get_algorithm(algorithm)
    theta = validate_small_theta(theta)
    perturbation = perturb(n, epsilon(theta, n), gamma)
    S = perturbation.configuration
    decisions = tuple(_decision_of(S, p, algorithm, theta) for p in perturbation.copies)
    if not all(d.is_null for d in decisions):
        raise ImpossibilityError("configuration is not frozen")
    cert = Certificate(
        CertificateVariant.FROZEN, algorithm.name, theta, n, perturbation.gamma, S,
        decisions=decisions, sample=sample,
    )
    return verify_certificate(cert, algorithm)


def build_lemma1_certificate(
    algorithm, theta, n: int, gamma, mover_index: int, sample: int | None = None
) -> Certificate:
    """
    Counterexample from a robot that moves to an unoccupied point.

    On S' = perturb(n, epsilon, gamma) the robot at p' (copy mover_index)
    moves to q not in S'. Q is the D-combination of S' and S' with p'
    replaced by q, for D centered at p'. Activating only the robot at p' in
    Q leaves an antipodally closed configuration.

    Raises:
        ImpossibilityError: "lemma 1 inapplicable" if the robot does not move
            to an unoccupied point.
        CertificateError: If a check fails.
    """
    algorithm = get_algorithm(algorithm)
    theta = validate_small_theta(theta)
    perturbation = perturb(n, epsilon(theta, n), gamma)
    S1 = perturbation.configuration
    mover = perturbation.copies[mover_index]
    decision = _decision_of(S1, mover, algorithm, theta)
    target = mover + decision.destination_offset
    if decision.is_null or target in S1:
        raise ImpossibilityError("lemma 1 inapplicable")
    moved = S1.without_point(mover).with_point(target)
    Q = d_combination(S1, moved, mover)
    R = _successor(Q, [mover], algorithm, theta) if mover in Q else None
    cert = Certificate(
        CertificateVariant.LEMMA1, algorithm.name, theta, n, perturbation.gamma, S1,
        mover_index=mover_index, mover=mover, target=target, combined=Q, successor=R,
        witness=Angle(HALF_TURN), sample=sample,
    )
    return verify_certificate(cert, algorithm)


def build_lemma2_certificate(
    algorithm, theta, n: int, gamma1, gamma2, mover_index: int, sample: int | None = None
) -> Certificate:
    """
    Counterexample from two bundle members that send a robot onto the same robot.

    S' and S'' differ only in the copy of regular point p = mover_index / n;
    in both, that copy moves onto the same occupied point q. Q is the
    D-combination of S' and S'' for D centered at p itself. Activating p'
    and the antipodal of p'' in Q creates multiplicities at q and at its
    antipodal.

    Raises:
        ImpossibilityError: "lemma 2 inapplicable" if the coefficient vectors
            are equal or not related at mover_index, or the two copies do not
            both move onto the same occupied point.
        CertificateError: If a check fails.
    """
    algorithm = get_algorithm(algorithm)
    theta = validate_small_theta(theta)
    gamma1, gamma2 = _coefficients(gamma1), _coefficients(gamma2)
    if gamma1 == gamma2 or not i_related(gamma1, gamma2, mover_index):
        raise ImpossibilityError("lemma 2 inapplicable")
    eps = epsilon(theta, n)
    first, second = perturb(n, eps, gamma1), perturb(n, eps, gamma2)
    S1, S2 = first.configuration, second.configuration
    p1, p2 = first.copies[mover_index], second.copies[mover_index]
    d1 = _decision_of(S1, p1, algorithm, theta)
    d2 = _decision_of(S2, p2, algorithm, theta)
    q = p1 + d1.destination_offset
    if d1.is_null or d2.is_null or q != p2 + d2.destination_offset or q not in S1 or q not in S2:
        raise ImpossibilityError("lemma 2 inapplicable")
    Q = d_combination(S1, S2, regular_set(n)[mover_index])
    mirrored = antipodal(p2)
    R = _successor(Q, [p1, mirrored], algorithm, theta) if p1 in Q and mirrored in Q else None
    cert = Certificate(
        CertificateVariant.LEMMA2, algorithm.name, theta, n, gamma1, S1,
        mover_index=mover_index, mover=p1, target=q, gamma_other=gamma2, other=S2,
        other_mover=p2, combined=Q, successor=R, witness=Angle(HALF_TURN), sample=sample,
    )
    return verify_certificate(cert, algorithm)


@dataclass(frozen=True)
class SampleClassification:
    """Which robots of one perturbation move, and where."""

    index: int
    gamma: PerturbationCoefficients
    to_empty: tuple[int, ...]
    to_occupied: tuple[tuple[int, Angle], ...]

    @property
    def frozen(self) -> bool:
        return not self.to_empty and not self.to_occupied


def classify_sample(algorithm, theta, n: int, index: int, gamma) -> SampleClassification:
    algorithm = get_algorithm(algorithm)
    perturbation = perturb(n, epsilon(theta, n), gamma)
    S = perturbation.configuration
    to_empty, to_occupied = [], []
    for i, p in enumerate(perturbation.copies):
        decision = _decision_of(S, p, algorithm, theta)
        if decision.is_null:
            continue
        target = p + decision.destination_offset
        if target in S:
            to_occupied.append((i, target))
        else:
            to_empty.append(i)
    return SampleClassification(index, perturbation.gamma, tuple(to_empty), tuple(to_occupied))


def _classify_job(job) -> SampleClassification:
    return classify_sample(*job)


def _bundle_search(
    algorithm: Algorithm, theta, n: int, sample: SampleClassification, denominator_bound: int, seed
) -> Certificate | None:
    """
    Re-sample one moving robot's coefficient up to n times, looking for two
    bundle members that send it to the same robot.
    """
    eps = epsilon(theta, n)
    rng = random.Random(f"{seed}/{sample.index}")
    for mover_index, first_target in sample.to_occupied:
        seen = {first_target: sample.gamma}
        used = {sample.gamma[mover_index]}
        for _ in range(n):
            value = Fraction(rng.randrange(denominator_bound + 1), denominator_bound)
            if value in used:
                continue
            used.add(value)
            gamma = sample.gamma.with_coordinate(mover_index, value)
            if not gamma.distinct:
                continue
            perturbation = perturb(n, eps, gamma)
            S = perturbation.configuration
            p = perturbation.copies[mover_index]
            decision = _decision_of(S, p, algorithm, theta)
            if decision.is_null:
                continue
            target = p + decision.destination_offset
            if target not in S:
                return build_lemma1_certificate(algorithm, theta, n, gamma, mover_index, sample.index)
            if target in seen:
                return build_lemma2_certificate(
                    algorithm, theta, n, seen[target], gamma, mover_index, sample.index
                )
            seen[target] = gamma
        logger.debug("bundle of robot %d in sample %d gave no repeated target", mover_index, sample.index)
    return None


def forge(
    algorithm,
    theta,
    n: int,
    seed: int = 0,
    max_samples: int = DEFAULT_MAX_SAMPLES,
    denominator_bound: int = DEFAULT_DENOMINATOR_BOUND,
    jobs: int = 1,
) -> Certificate:
    """
    Search perturbations of the regular n-set for a certificate against algorithm.

    Each sample draws distinct rational coefficients. A sample where nobody
    moves gives a frozen certificate; a robot moving to an empty point gives
    a lemma-1 certificate; a robot moving onto another robot starts a bundle
    search for a lemma-2 certificate. Samples are classified in parallel when
    jobs > 1 and always consumed in ascending order.

    Raises:
        ImpossibilityError: If theta > 1/4 or n is incompatible with theta.
        ForgeExhausted: If max_samples samples produce no certificate.
    """
    algorithm = get_algorithm(algorithm)
    theta = validate_small_theta(theta)
    epsilon(theta, n)
    rng = random.Random(seed)
    draws = [sample_coefficients(n, rng, denominator_bound) for _ in range(max_samples)]
    job_list = [(algorithm, theta, n, index, gamma) for index, gamma in enumerate(draws, start=1)]
    if jobs > 1:
        with multiprocessing.Pool(jobs) as workers:
            classified = workers.map(_classify_job, job_list)
    else:
        classified = map(_classify_job, job_list)

    for sample in classified:
        if sample.frozen:
            logger.info("forge: frozen certificate on sample %d", sample.index)
            return build_frozen_certificate(algorithm, theta, n, sample.gamma, sample.index)
        if sample.to_empty:
            logger.info("forge: lemma 1 certificate on sample %d", sample.index)
            return build_lemma1_certificate(
                algorithm, theta, n, sample.gamma, sample.to_empty[0], sample.index
            )
        cert = _bundle_search(algorithm, theta, n, sample, denominator_bound, seed)
        if cert is not None:
            logger.info("forge: %s certificate on sample %d", cert.variant, sample.index)
            return cert
    raise ForgeExhausted("no certificate found")


@dataclass(frozen=True)
class DerandGrid:
    """
    The finite grid the derandomized search runs over.

    Axis i (1-based) has a_i = m ** 2 ** (i - 1) values j / s_n for
    s_(i-1) < j <= s_i, so the axes are disjoint and every grid point has
    distinct coordinates.
    """

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise DerandomizationError("m and n must be positive")

    def a(self, i: int) -> int:
        return self.m ** (2 ** (i - 1))

    def s(self, i: int) -> int:
        return sum(self.a(j) for j in range(1, i + 1))

    @property
    def total(self) -> int:
        return self.s(self.n)

    def axis(self, i: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(j, self.total) for j in range(self.s(i - 1) + 1, self.s(i) + 1))

    def points(self):
        """Every point of the grid, in lexicographic order."""
        return itertools.product(*(self.axis(i) for i in range(1, self.n + 1)))


Point = tuple[Fraction, ...]


def _obstacle_sets(n: int, X: Sequence[Iterable]) -> list[frozenset[Point]]:
    if len(X) != n:
        raise DerandomizationError(f"expected {n} obstacle sets, got {len(X)}")
    sets = []
    for obstacles in X:
        points = set()
        for point in obstacles:
            point = tuple(as_fraction(c) for c in point)
            if len(point) != n:
                raise DerandomizationError(f"obstacle {point} does not have {n} coordinates")
            if any(not 0 <= c <= 1 for c in point):
                raise DerandomizationError(f"obstacle {point} lies outside the unit cube")
            points.add(point)
        sets.append(frozenset(points))
    return sets


def check_line_bound(m: int, X: list[frozenset[Point]]) -> None:
    """
    Raises:
        DerandomizationError: If some line parallel to axis i meets X_i in m
            or more points.
    """
    for i, obstacles in enumerate(X):
        lines = defaultdict(int)
        for point in obstacles:
            lines[point[:i] + point[i + 1:]] += 1
        if any(count >= m for count in lines.values()):
            raise DerandomizationError("line bound exceeded")


def derandomize(m: int, n: int, X: Sequence[Iterable]) -> Point:
    """
    A grid point with distinct coordinates lying in none of the X_i.

    X_i is a finite set of points of [0, 1]^n met by every line parallel to
    axis i in fewer than m points. The point is built by induction on the
    axis: for a fixed suffix, each value of axis i gets a witness prefix, and
    some prefix serves at least m of those values, one of which avoids X_i.

    Raises:
        DerandomizationError: On malformed obstacles or a violated line bound.
    """
    grid = DerandGrid(m, n)
    obstacles = _obstacle_sets(n, X)
    check_line_bound(m, obstacles)

    def clear(point: Point, i: int) -> bool:
        return all(point not in obstacles[j] for j in range(i))

    def solve(i: int, suffix: Point) -> Point:
        if i == 1:
            for y in grid.axis(1):
                if (y,) + suffix not in obstacles[0]:
                    return (y,)
            raise DerandomizationError("line bound exceeded")
        served = defaultdict(list)
        for y in grid.axis(i):
            served[solve(i - 1, (y,) + suffix)].append(y)
        prefix, values = max(served.items(), key=lambda item: len(item[1]))
        if len(values) < m:
            raise DerandomizationError(f"no prefix serves {m} values on axis {i}")
        for y in values:
            point = prefix + (y,)
            if clear(point + suffix, i):
                return point
        raise DerandomizationError("line bound exceeded")

    result = solve(n, ())
    logger.debug("derandomize(m=%d, n=%d) -> %s", m, n, result)
    return result
