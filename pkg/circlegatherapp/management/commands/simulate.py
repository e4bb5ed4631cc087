from django.core.management.base import BaseCommand, CommandError

from circlegatherapp.engine import Outcome
from circlegatherapp.exceptions import GatherSimError
from circlegatherapp.services import SimulationService

from ._exitcodes import EXIT_STEP_CAP, EXIT_VIOLATION, usage_error


class Command(BaseCommand):
    help = "Run a semi-synchronous simulation and write its JSON Lines trace."

    def add_arguments(self, parser):
        parser.add_argument("--n", type=int, help="Robot count (generated configuration if --config is absent)")
        parser.add_argument("--config", help='Inline tokens such as "0/1,1/10,2/5" or a configuration file')
        parser.add_argument("--theta", default="1/2", help="Visibility range in turns, num/den (1/1 for full)")
        parser.add_argument("--alg", default="listing1", help="Registered algorithm name")
        parser.add_argument("--sched", default="full", help="full | round_robin | random:<p>[:<F>] | script:<sets>")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--step-cap", type=int, default=None)
        parser.add_argument("--trace", help="Path of the trace file to write")
        parser.add_argument("--monitor", action="store_true", help="Check the per-step invariants")
        parser.add_argument("--save", action="store_true", help="Store the outcome in the database")

    def handle(self, *args, **options):
        try:
            initial = SimulationService.initial_configuration(options["config"], options["n"], options["seed"])
            params = dict(
                theta=options["theta"],
                algorithm=options["alg"],
                scheduler=options["sched"],
                seed=options["seed"],
                step_cap=options["step_cap"],
                monitor=options["monitor"],
            )
            if options["trace"]:
                with open(options["trace"], "wb") as stream:
                    result = SimulationService.simulate(initial, trace_stream=stream, **params)
            else:
                result = SimulationService.simulate(initial, **params)
        except (GatherSimError, OSError) as exc:
            raise usage_error(exc)

        if options["save"]:
            SimulationService.save(initial, result, **params)

        summary = result.summary()
        if result.outcome is Outcome.GATHERED:
            self.stdout.write(self.style.SUCCESS(summary))
            return
        self.stdout.write(f"final configuration: {result.final_configuration}")
        code = EXIT_STEP_CAP if result.outcome is Outcome.STEP_CAP_EXCEEDED else EXIT_VIOLATION
        raise CommandError(summary, returncode=code)
