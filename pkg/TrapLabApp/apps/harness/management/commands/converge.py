from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import TrapLabError
from apps.harness.cli import add_config_arguments, add_output_argument, config_overrides, finish, output_dir
from apps.harness.config import load_config
from apps.harness.experiment import run_convergence_experiment


class Command(BaseCommand):
    help = "Runs the end-to-end convergence experiment and writes its report"

    def add_arguments(self, parser):
        add_config_arguments(parser, seed_required=True)
        add_output_argument(parser)

    def handle(self, *args, **options):
        try:
            cfg = load_config(options["config"], config_overrides(options))
            report = run_convergence_experiment(cfg)
        except TrapLabError as exc:
            raise CommandError(str(exc)) from exc
        finish(self, report, output_dir(options), f"converge_{cfg.graph.kind}_seed{cfg.seed}")
