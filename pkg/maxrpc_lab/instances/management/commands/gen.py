from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from instances.exceptions import InstanceFormatError
from instances.generators import gen_geometric, gen_model_b, gen_queens, model_b_like
from instances.loaders import FORMATS, dump_document


class Command(BaseCommand):
    help = "Generate a random model B, geometric or n-queens instance"

    def add_arguments(self, parser):
        parser.add_argument("family", choices=["model-b", "geometric", "queens"])
        parser.add_argument("--n", type=int, default=10, help="Number of variables (queens: board size)")
        parser.add_argument("--d", type=int, default=5, help="Domain size")
        parser.add_argument("--p1", type=float, default=0.5, help="Constraint density (model B)")
        parser.add_argument("--p2", type=float, default=0.4, help="Tightness: share of forbidden tuples")
        parser.add_argument("--dist", type=float, default=0.5, help="Distance threshold (geometric)")
        parser.add_argument("--seed", type=int, help="Random seed (default 0; with --like, the index in the name)")
        parser.add_argument("--forced", action="store_true", help="Plant a solution")
        parser.add_argument(
            "--like",
            metavar="NAME",
            help="Model B parameters from a rand-2-n-d-e-t-index instance name",
        )
        parser.add_argument("--format", choices=FORMATS, default="native")
        parser.add_argument("--out", help="Output file (default: stdout)")

    def handle(self, *args, **kwargs):
        family = kwargs["family"]
        seed = kwargs["seed"] if kwargs["seed"] is not None else 0
        try:
            if family == "queens":
                doc = gen_queens(kwargs["n"])
            elif kwargs["like"]:
                if family != "model-b":
                    raise CommandError("--like only applies to model-b")
                doc = model_b_like(kwargs["like"], seed=kwargs["seed"], forced=kwargs["forced"])
            elif family == "model-b":
                doc = gen_model_b(
                    kwargs["n"], kwargs["d"], kwargs["p1"], kwargs["p2"], seed=seed, forced=kwargs["forced"]
                )
            else:
                doc = gen_geometric(
                    kwargs["n"], kwargs["d"], kwargs["dist"], kwargs["p2"], seed=seed, forced=kwargs["forced"]
                )
            text = dump_document(doc, kwargs["format"])
        except (ValueError, InstanceFormatError) as exc:
            raise CommandError(str(exc))

        if kwargs["out"]:
            try:
                Path(kwargs["out"]).write_text(text)
            except OSError as exc:
                raise CommandError(f"Cannot write {kwargs['out']}: {exc}")
            self.stdout.write(f"Wrote {doc.name} ({len(doc.constraints)} constraints) to {kwargs['out']}")
        else:
            self.stdout.write(text, ending="")
