from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import TrapLabError
from apps.harness.cli import add_output_argument, finish, output_dir
from apps.harness.ktest import kprocess_self_test, run_ktest
from apps.kprocess.params import load_kparams


class Command(BaseCommand):
    help = "Tests K-process hitting and holding laws on random parameter sets"

    def add_arguments(self, parser):
        parser.add_argument("--sets", type=int, default=20)
        parser.add_argument("--samples", type=int, default=100_000)
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--significance", type=float, default=None)
        parser.add_argument("--self-test", dest="self_test", help="K-process JSON to push through the trace statistics")
        parser.add_argument("--M", type=int, default=5)
        parser.add_argument("--n-hit", dest="n_hit", type=int, default=3)
        add_output_argument(parser)

    def handle(self, *args, **options):
        try:
            if options["self_test"]:
                p = load_kparams(options["self_test"])
                report = kprocess_self_test(
                    p, options["M"], options["n_hit"], options["samples"], options["seed"], options["significance"]
                )
                stem = "ktest_self"
            else:
                report = run_ktest(options["sets"], options["samples"], options["seed"], options["significance"])
                stem = "ktest"
        except TrapLabError as exc:
            raise CommandError(str(exc)) from exc
        finish(self, report, output_dir(options), stem)
