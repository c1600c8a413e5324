"""
Base class for the pipeline management commands
"""
import logging
import sys

from django.core.management.base import BaseCommand, CommandError

from .exceptions import EXIT_INTERNAL, EXIT_USAGE, FraudLabError

logger = logging.getLogger(__name__)


class PipelineCommand(BaseCommand):
    """
    BaseCommand with the pipeline exit-code contract:
    usage errors exit 1, data/config/model errors exit 2, anything else exits 3.
    """

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)

        def usage_error(message):
            if parser.called_from_command_line:
                parser.print_usage(sys.stderr)
                parser.exit(EXIT_USAGE, f'{parser.prog}: error: {message}\n')
            raise CommandError(f'Error: {message}', returncode=EXIT_USAGE)

        parser.error = usage_error
        return parser

    @property
    def command_name(self):
        return self.__class__.__module__.rsplit(".", 1)[-1]

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except CommandError:
            raise
        except FraudLabError as e:
            logger.error(f"{self.command_name} failed: {e}")
            raise CommandError(str(e), returncode=e.exit_code) from e
        except Exception as e:
            logger.exception(f"{self.command_name} failed with an internal error")
            raise CommandError(f'Internal error: {e}', returncode=EXIT_INTERNAL) from e
