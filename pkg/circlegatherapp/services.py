import logging
from pathlib import Path

from django.conf import settings

from .configuration import (
    Configuration,
    format_configuration,
    parse_configuration,
    random_asymmetric_config,
)
from .engine import Outcome, RunResult, parse_scheduler, run
from .exceptions import ConfigurationError
from .formats import TraceWriter, certificate_data, format_point, parse_obstacles
from .geometry import format_fraction, validate_theta
from .impossibility import Certificate, derandomize, find_compatible, forge
from .models import ForgeRecord, SimulationRun

logger = logging.getLogger(__name__)


class SimulationService:
    """
    Runs simulations with defaults taken from Django settings.

    Used by the `simulate` management command and the runs API. All
    randomness comes from the seed, so a stored SimulationRun can be
    re-run to reproduce its trace exactly.
    """

    @classmethod
    def initial_configuration(cls, config: str | None = None, n: int | None = None, seed: int = 0) -> Configuration:
        """
        Resolve the initial configuration.

        Args:
            config (str | None): Inline tokens ("0/1,1/10,2/5"), multi-line
                configuration text, or a path to a configuration file.
            n (int | None): Robot count for a generated configuration when no
                config is given; also checked against config when both are set.
            seed (int): Seed for the generator.

        Returns:
            Configuration: The parsed or generated configuration.

        Raises:
            ConfigurationError: If neither source is given, the text is
                malformed, or n disagrees with the parsed configuration.
        """
        if config:
            path = Path(config)
            text = path.read_text(encoding="utf-8") if "\n" not in config and path.is_file() else config
            S = parse_configuration(text)
            if n is not None and S.n != n:
                raise ConfigurationError(f"configuration has {S.n} robots, expected {n}")
            return S
        if n is None:
            raise ConfigurationError("either a configuration or n is required")
        return random_asymmetric_config(n, seed, settings.GATHERSIM_DENOMINATOR_BOUND)

    @classmethod
    def simulate(
        cls,
        initial: Configuration,
        theta,
        algorithm: str = "listing1",
        scheduler: str = "full",
        seed: int = 0,
        step_cap: int | None = None,
        monitor: bool = False,
        trace_stream=None,
        keep_trace: bool = False,
    ) -> RunResult:
        """
        Run the engine once.

        Args:
            trace_stream: Optional binary file; when given, the JSON Lines
                trace is written to it while the run progresses.

        Raises:
            GatherSimError: On bad theta, scheduler or algorithm input.
        """
        theta = validate_theta(theta, allow_full=True)
        step_cap = settings.GATHERSIM_STEP_CAP if step_cap is None else step_cap
        strategy = parse_scheduler(scheduler, seed, settings.GATHERSIM_FAIRNESS_BOUND)
        on_record = None
        if trace_stream is not None:
            on_record = TraceWriter(
                trace_stream,
                n=initial.n,
                theta=theta,
                algorithm=algorithm,
                scheduler=str(strategy),
                seed=seed,
                step_cap=step_cap,
            )
        logger.info("simulating %s robots, theta=%s, %s under %s", initial.n, theta, algorithm, strategy)
        return run(
            initial,
            strategy,
            algorithm,
            theta,
            step_cap,
            monitor,
            keep_trace=keep_trace,
            on_record=on_record,
        )

    @classmethod
    def save(
        cls, initial: Configuration, result: RunResult, *, theta, algorithm, scheduler, seed, step_cap, monitor
    ) -> SimulationRun:
        return SimulationRun.objects.create(
            initial_configuration=format_configuration(initial),
            theta=format_fraction(validate_theta(theta, allow_full=True)),
            algorithm=algorithm,
            scheduler=scheduler,
            seed=seed,
            step_cap=settings.GATHERSIM_STEP_CAP if step_cap is None else step_cap,
            monitor=monitor,
            outcome=str(result.outcome),
            outcome_step=result.step,
            gathered_point=str(result.point) if result.outcome is Outcome.GATHERED else "",
            final_configuration=format_configuration(result.final_configuration),
            rule_counts=dict(result.rule_counts),
            violation=result.description or "",
        )

    @classmethod
    def replay(cls, record: SimulationRun) -> RunResult:
        """Re-run a stored simulation with its trace kept in memory."""
        return cls.simulate(
            record.initial(),
            record.theta,
            record.algorithm,
            record.scheduler,
            record.seed,
            record.step_cap,
            record.monitor,
            keep_trace=True,
        )


class ForgeService:
    """Certificate search with sample limits and denominators from settings."""

    @classmethod
    def forge(
        cls,
        algorithm: str,
        theta,
        n: int | None = None,
        auto_n: bool = False,
        seed: int = 0,
        max_samples: int | None = None,
        jobs: int = 1,
    ) -> Certificate:
        """
        Forge a certificate against a registered algorithm.

        Args:
            n (int | None): Swarm size; with auto_n, the smallest compatible
                size at least n (or 2) is used instead.

        Raises:
            ImpossibilityError: If theta > 1/4 or n is missing or incompatible.
            ForgeExhausted: If no sample produced a certificate.
        """
        if auto_n:
            n = find_compatible(theta, n or 2)
        if n is None:
            raise ConfigurationError("n is required unless auto_n is set")
        return forge(
            algorithm,
            theta,
            n,
            seed=seed,
            max_samples=settings.GATHERSIM_FORGE_MAX_SAMPLES if max_samples is None else max_samples,
            denominator_bound=settings.GATHERSIM_DENOMINATOR_BOUND,
            jobs=jobs,
        )

    @classmethod
    def save(cls, cert: Certificate, seed: int = 0) -> ForgeRecord:
        return ForgeRecord.objects.create(
            algorithm=cert.algorithm,
            theta=format_fraction(cert.theta),
            n=cert.n,
            seed=seed,
            variant=str(cert.variant),
            certificate_json=certificate_data(cert),
            verified=cert.verified,
        )


class ToolService:
    """Thin wrappers shared by the compat, gen_config and derandomize entry points."""

    @classmethod
    def compat(cls, theta, n_min: int = 2) -> int:
        return find_compatible(theta, n_min)

    @classmethod
    def gen_config(cls, n: int, seed: int = 0) -> str:
        return format_configuration(random_asymmetric_config(n, seed, settings.GATHERSIM_DENOMINATOR_BOUND))

    @classmethod
    def derandomize(cls, m: int, n: int, obstacles_text: str) -> str:
        """
        Raises:
            DerandomizationError: On malformed obstacles or a violated line bound.
        """
        point = derandomize(m, n, parse_obstacles(obstacles_text, n))
        return format_point(point)
