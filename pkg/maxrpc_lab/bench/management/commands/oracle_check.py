from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from bench.checks import run_acceptance


class Command(BaseCommand):
    help = (
        "Cross-check every propagator against the brute-force oracle on a seeded random suite. "
        "This is the oracle-check verb; Django command names take an underscore."
    )

    def add_arguments(self, parser):
        parser.add_argument("--instances", type=int, help="Suite size (default ORACLE_SUITE_SIZE)")
        parser.add_argument("--seed", type=int, help="Suite seed (default ORACLE_SUITE_SEED)")
        parser.add_argument("--search", action="store_true", help="Also run the search, parity and trail checks")

    def handle(self, *args, **kwargs):
        lab = settings.MAXRPC_LAB
        count = kwargs["instances"] or lab["ORACLE_SUITE_SIZE"]
        seed = kwargs["seed"] if kwargs["seed"] is not None else lab["ORACLE_SUITE_SEED"]
        if count < 1:
            raise CommandError("--instances must be at least 1")

        checks = run_acceptance(
            count,
            seed=seed,
            search=kwargs["search"],
            guard=lab["ENUMERATION_GUARD"],
            dense_ratio=lab["DENSE_TABLE_RATIO"],
        )
        failed = [check for check in checks if not check.passed]
        for check in checks:
            status = self.style.SUCCESS("ok") if check.passed else self.style.ERROR("FAILED")
            line = f"{check.name}: {status} ({check.checked} checked)"
            if check.detail:
                line += f" {check.detail}"
            self.stdout.write(line)
            for failure in check.failures[:5]:
                self.stdout.write(f"  {failure}")
        if failed:
            raise CommandError(f"{len(failed)} of {len(checks)} checks failed")
