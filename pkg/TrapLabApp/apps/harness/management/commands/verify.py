from django.core.management.base import BaseCommand, CommandError

from apps.core.conf import setting
from apps.core.exceptions import TrapLabError
from apps.exact.certificates import write_certificates
from apps.harness.cli import add_output_argument, finish, output_dir
from apps.harness.verify import SUITES, run_verify


class Command(BaseCommand):
    help = "Runs the exact-oracle and statistical verification suites"

    def add_arguments(self, parser):
        parser.add_argument("--suite", action="append", choices=list(SUITES), help="repeatable; default all")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--quick", action="store_true", help="small instances")
        parser.add_argument("--significance", type=float, default=None)
        add_output_argument(parser)

    def handle(self, *args, **options):
        level = options["significance"] or setting("TRAPLAB_SIGNIFICANCE")
        try:
            report, certificates = run_verify(options["suite"], options["seed"], options["quick"], level)
        except TrapLabError as exc:
            raise CommandError(str(exc)) from exc

        directory = output_dir(options)
        directory.mkdir(parents=True, exist_ok=True)
        if certificates:
            write_certificates(certificates, directory / "certificates.json")
        finish(self, report, directory, "verify")
