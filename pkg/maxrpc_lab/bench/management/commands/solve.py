from csp.search import BRANCHINGS, MODES, VAR_HEURISTICS
from bench.management.commands.preprocess import Command as PreprocessCommand
from bench.runner import SEARCH, run_search


class Command(PreprocessCommand):
    help = "Run backtracking search maintaining each algorithm and report time, nodes and checks"

    mode = SEARCH

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--branching", choices=BRANCHINGS)
        parser.add_argument("--var-heuristic", choices=VAR_HEURISTICS)
        parser.add_argument(
            "--search-mode",
            choices=MODES,
            help="Stop at the first solution (default), count them all, or only refute",
        )
        parser.add_argument("--node-limit", type=int)
        parser.add_argument("--time-limit", type=float, help="Seconds")

    def run(self, manifest):
        return run_search(manifest)
