from django.core.management.base import BaseCommand, CommandError

from circlegatherapp.exceptions import ForgeExhausted, GatherSimError
from circlegatherapp.formats import render_certificate
from circlegatherapp.services import ForgeService

from ._exitcodes import EXIT_EXHAUSTED, usage_error


class Command(BaseCommand):
    help = "Forge a verified impossibility certificate against an algorithm for theta <= 1/4."

    def add_arguments(self, parser):
        parser.add_argument("--alg", default="listing1")
        parser.add_argument("--theta", default="1/4")
        parser.add_argument("--n", type=int, help="Swarm size (minimum size with --auto-n)")
        parser.add_argument("--auto-n", action="store_true", help="Use the smallest compatible swarm size")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--max-samples", type=int, default=None)
        parser.add_argument("--jobs", type=int, default=1, help="Worker processes for sample classification")
        parser.add_argument("--out", help="Path of the certificate file to write")
        parser.add_argument("--save", action="store_true", help="Store the certificate in the database")

    def handle(self, *args, **options):
        try:
            cert = ForgeService.forge(
                options["alg"],
                options["theta"],
                options["n"],
                options["auto_n"],
                options["seed"],
                options["max_samples"],
                options["jobs"],
            )
        except ForgeExhausted as exc:
            raise CommandError(str(exc), returncode=EXIT_EXHAUSTED)
        except GatherSimError as exc:
            raise usage_error(exc)

        if options["out"]:
            try:
                with open(options["out"], "wb") as stream:
                    stream.write(render_certificate(cert))
            except OSError as exc:
                raise usage_error(exc)
        if options["save"]:
            ForgeService.save(cert, options["seed"])

        self.stdout.write(
            self.style.SUCCESS(f"{cert.variant} certificate (n={cert.n}, sample {cert.sample})")
        )
        for name, passed in cert.checks:
            self.stdout.write(f"  {name}: {'ok' if passed else 'FAILED'}")
