from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from csp.algorithms import algorithm_config
from csp.exceptions import CSPError, GuardExceeded, SearchLimitReached
from csp.oracle import enumerate_solutions
from csp.search import BRANCHINGS, SearchConfig, count_solutions
from instances.loaders import load_source


class Command(BaseCommand):
    help = "Count the solutions of one instance exactly, optionally checking against brute-force enumeration"

    def add_arguments(self, parser):
        parser.add_argument("instance", help="Instance file or gen: spec")
        parser.add_argument("--algorithm", help="Algorithm id maintained during search")
        parser.add_argument("--branching", choices=BRANCHINGS)
        parser.add_argument("--guard", type=int, help="Node guard for the count")
        parser.add_argument("--verify", action="store_true", help="Compare with exhaustive enumeration")

    def handle(self, *args, **kwargs):
        lab = settings.MAXRPC_LAB
        name = kwargs["algorithm"] or lab["DEFAULT_ALGORITHM"]
        try:
            doc = load_source(kwargs["instance"])
            network = doc.to_network(lab["DENSE_TABLE_RATIO"])
            config = SearchConfig(
                propagator=algorithm_config(name),
                branching=kwargs["branching"] or lab["DEFAULT_BRANCHING"],
                var_heuristic=lab["DEFAULT_VAR_HEURISTIC"],
                time_limit=lab["TIME_LIMIT"],
            )
            count = count_solutions(network, config, guard=kwargs["guard"] or lab["COUNT_NODE_GUARD"])
        except SearchLimitReached as exc:
            raise CommandError(f"Count incomplete: {exc}")
        except (CSPError, OSError, ValueError) as exc:
            raise CommandError(str(exc))

        self.stdout.write(f"{doc.name or kwargs['instance']}: {count} solutions ({name})")
        if kwargs["verify"]:
            try:
                expected = len(enumerate_solutions(network, guard=lab["ENUMERATION_GUARD"]))
            except GuardExceeded as exc:
                raise CommandError(f"Cannot verify: {exc}")
            if expected != count:
                raise CommandError(f"Enumeration finds {expected} solutions, search counted {count}")
            self.stdout.write(self.style.SUCCESS("Enumeration agrees"))
