from django.core.management.base import BaseCommand

from circlegatherapp.exceptions import GatherSimError
from circlegatherapp.services import ToolService

from ._exitcodes import usage_error


class Command(BaseCommand):
    help = "Print the smallest swarm size compatible with theta that is at least --min."

    def add_arguments(self, parser):
        parser.add_argument("--theta", required=True)
        parser.add_argument("--min", type=int, default=2)

    def handle(self, *args, **options):
        try:
            n = ToolService.compat(options["theta"], options["min"])
        except GatherSimError as exc:
            raise usage_error(exc)
        self.stdout.write(str(n))
