from pathlib import Path

from django.core.management.base import BaseCommand

from circlegatherapp.exceptions import GatherSimError
from circlegatherapp.services import ToolService

from ._exitcodes import usage_error


class Command(BaseCommand):
    help = "Find a grid point with distinct coordinates that avoids every obstacle set."

    def add_arguments(self, parser):
        parser.add_argument("--m", type=int, required=True, help="Line bound: axis-parallel lines meet X_i in < m points")
        parser.add_argument("--n", type=int, required=True, help="Dimension")
        parser.add_argument("--obstacles", help="Obstacle file, one '<axis> <c_1> ... <c_n>' per line")

    def handle(self, *args, **options):
        try:
            text = Path(options["obstacles"]).read_text(encoding="utf-8") if options["obstacles"] else ""
            point = ToolService.derandomize(options["m"], options["n"], text)
        except (GatherSimError, OSError) as exc:
            raise usage_error(exc)
        self.stdout.write(point)
