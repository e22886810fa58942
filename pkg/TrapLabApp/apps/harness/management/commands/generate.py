from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import TrapLabError
from apps.core.random_source import RandomSource
from apps.environment.environment import save_environment
from apps.environment.weights import coupled_environment
from apps.graphs.graph import write_edge_list
from apps.harness.cli import add_config_arguments, add_output_argument, config_overrides, output_dir
from apps.harness.config import load_config
from apps.harness.experiment import ENUM_STREAM, ENV_STREAM, GRAPH_STREAM, build_graph, separate_deep_traps
from apps.kprocess.params import KParams, save_kparams


class Command(BaseCommand):
    help = "Writes the graph, coupled environment and limit K-process parameters of an experiment config"

    def add_arguments(self, parser):
        add_config_arguments(parser, seed_required=True)
        add_output_argument(parser)

    def handle(self, *args, **options):
        try:
            cfg = load_config(options["config"], config_overrides(options))
            root = RandomSource(cfg.seed)
            graph = build_graph(cfg.graph, root.spawn(GRAPH_STREAM))
            env, limit = coupled_environment(graph, cfg.alpha, root.spawn(ENV_STREAM), cfg.truncation, cfg.seed)
            env, resamples = separate_deep_traps(env, cfg.M, cfg.ell, root.spawn(ENUM_STREAM), cfg.max_resamples)
        except TrapLabError as exc:
            raise CommandError(str(exc)) from exc

        directory = output_dir(options)
        directory.mkdir(parents=True, exist_ok=True)
        write_edge_list(graph, directory / "graph.txt")
        save_environment(env, directory / "environment.json")
        save_kparams(KParams.from_limit_weights(limit), directory / "kparams.json")

        self.stdout.write(
            self.style.SUCCESS(
                f"✅ {cfg.graph.label()}: {graph.n_vertices} vertices, {graph.n_edges} edges, "
                f"top {cfg.M} traps separated after {resamples} re-enumerations, written to {directory}"
            )
        )
