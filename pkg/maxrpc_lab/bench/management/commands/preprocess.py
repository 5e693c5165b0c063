from django.core.management.base import BaseCommand, CommandError

from bench.exceptions import BenchError
from bench.manifest import add_algorithm_arguments, manifest_from_options
from bench.reports import emit, write_report
from bench.runner import run_preprocess


class Command(BaseCommand):
    help = "Enforce each algorithm on each instance at the root and report time, checks and deletions"

    mode = "preprocess"

    def add_arguments(self, parser):
        add_algorithm_arguments(parser)

    def run(self, manifest):
        return run_preprocess(manifest)

    def handle(self, *args, **kwargs):
        try:
            manifest = manifest_from_options(kwargs, self.mode)
            report = self.run(manifest)
        except BenchError as exc:
            raise CommandError(str(exc))

        if manifest.output_path:
            try:
                write_report(report, manifest.output_format, manifest.output_path)
            except OSError as exc:
                raise CommandError(f"Cannot write {manifest.output_path}: {exc}")
            self.stdout.write(
                f"Wrote {len(report.rows)} rows ({len(report.errors)} errors) to {manifest.output_path}"
            )
        else:
            self.stdout.write(emit(report, manifest.output_format).decode("utf-8"), ending="")
