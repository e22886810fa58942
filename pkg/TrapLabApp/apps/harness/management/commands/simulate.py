from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import TrapLabError
from apps.core.random_source import RandomSource
from apps.environment.environment import load_environment
from apps.graphs.graph import read_edge_list
from apps.harness.cli import add_output_argument, output_dir
from apps.kprocess.params import INFINITY, load_kparams
from apps.kprocess.sampler import sample_kprocess
from apps.walks.simulate import simulate
from apps.walks.trace import excursion_decomposition


class Command(BaseCommand):
    help = "Simulates a trap-walk or K-process trajectory and writes it as JSONL (plus a cycle CSV with --cycles)"

    def add_arguments(self, parser):
        parser.add_argument("--graph", help="edge-list file")
        parser.add_argument("--environment", help="environment JSON for --graph")
        parser.add_argument("--kparams", help="K-process parameter JSON; samples the K-process instead of the walk")
        parser.add_argument("--start-rank", type=int, default=1, help="start at the trap of this rank (or K state)")
        parser.add_argument("--from-infinity", action="store_true", help="K-process only: start at infinity")
        parser.add_argument("--horizon", type=float, required=True)
        parser.add_argument("--seed", type=int, required=True)
        parser.add_argument("--cycles", type=int, help="also decompose this many cycles on the top M traps")
        parser.add_argument("--M", type=int, default=3)
        parser.add_argument("--ell", type=int, default=1)
        parser.add_argument(
            "--step-budget", type=int, help="jump budget of the cycle decomposition (default TRAPLAB_STEP_BUDGET)"
        )
        add_output_argument(parser)

    def handle(self, *args, **options):
        directory = output_dir(options)
        directory.mkdir(parents=True, exist_ok=True)
        source = RandomSource(options["seed"])
        try:
            if options["kparams"]:
                p = load_kparams(options["kparams"])
                start = INFINITY if options["from_infinity"] else options["start_rank"]
                path = sample_kprocess(p, start, options["horizon"], source.spawn(0))
                path.trajectory.to_jsonl(directory / "kprocess.jsonl")
                self.stdout.write(
                    self.style.SUCCESS(
                        f"✅ K-process path with {path.trajectory.n_segments} segments, "
                        f"misattribution bound {path.misattribution_bound:.4g}"
                    )
                )
                return

            if not (options["graph"] and options["environment"]):
                raise CommandError("walk simulation needs --graph and --environment (or --kparams)")
            env = load_environment(options["environment"], read_edge_list(options["graph"]))
            x0 = env.vertex_of_rank(options["start_rank"])
            traj = simulate(env, x0, options["horizon"], source.spawn(0))
            traj.to_jsonl(directory / "walk.jsonl")
            self.stdout.write(self.style.SUCCESS(f"✅ walk from vertex {x0}: {traj.n_segments} segments"))

            if options["cycles"]:
                A = env.deep_traps(options["M"])
                stats = excursion_decomposition(
                    env, A, options["ell"], options["cycles"], A[0], source.spawn(1), options["step_budget"]
                )
                stats.to_csv(directory / "cycles.csv")
                self.stdout.write(
                    self.style.SUCCESS(
                        f"✅ {stats.n_cycles} cycles, mean length {stats.mean_cycle_length:.6g}, "
                        f"{stats.self_jumps} self-jumps"
                    )
                )
        except TrapLabError as exc:
            raise CommandError(str(exc)) from exc
