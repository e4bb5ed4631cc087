from django.core.management.base import CommandError

EXIT_USAGE = 2
EXIT_STEP_CAP = 3
EXIT_VIOLATION = 4
EXIT_EXHAUSTED = 5


def usage_error(exc) -> CommandError:
    return CommandError(str(exc), returncode=EXIT_USAGE)
