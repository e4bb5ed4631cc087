from django.core.management.base import BaseCommand

from circlegatherapp.exceptions import GatherSimError
from circlegatherapp.services import ToolService

from ._exitcodes import usage_error


class Command(BaseCommand):
    help = "Generate a seeded rotationally asymmetric configuration of n distinct points."

    def add_arguments(self, parser):
        parser.add_argument("--n", type=int, required=True)
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--out", help="Write the configuration to this file instead of stdout")

    def handle(self, *args, **options):
        try:
            text = ToolService.gen_config(options["n"], options["seed"])
            if options["out"]:
                with open(options["out"], "w", encoding="utf-8") as stream:
                    stream.write(text)
                return
        except (GatherSimError, OSError) as exc:
            raise usage_error(exc)
        self.stdout.write(text, ending="")
