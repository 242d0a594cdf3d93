"""Shared plumbing for the recognition management commands."""

from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from recognition.exceptions import InputError, ResourceLimit

EXIT_INPUT_ERROR = 2
EXIT_RESOURCE_LIMIT = 3


class RecognitionCommand(BaseCommand):
    """
    Base command that maps engine errors to exit codes.

    Input errors exit with 2 and exhausted budgets with 3; any other error
    propagates.
    """

    def run(self, *args, **options):
        raise NotImplementedError

    def handle(self, *args, **options):
        try:
            return self.run(*args, **options)
        except InputError as exc:
            raise CommandError(str(exc), returncode=EXIT_INPUT_ERROR) from exc
        except ResourceLimit as exc:
            raise CommandError(str(exc), returncode=EXIT_RESOURCE_LIMIT) from exc
        except FileNotFoundError as exc:
            raise CommandError(f'file not found: {exc.filename}', returncode=EXIT_INPUT_ERROR) from exc

    def write_output(self, text: str, out=None):
        """Write ``text`` to the ``out`` path, or to stdout when no path is given."""
        if out:
            Path(out).parent.mkdir(parents=True, exist_ok=True)
            Path(out).write_text(text, encoding='utf-8')
            self.stdout.write(self.style.SUCCESS(f'Wrote {out}'))
        else:
            self.stdout.write(text)
