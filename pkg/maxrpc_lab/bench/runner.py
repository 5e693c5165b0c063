"""
Batch execution of bench manifests.

A batch is flattened into jobs, one per (instance, algorithm) in manifest
order. Each job is a JSON-serializable dict, so it can run in-process or as
a Celery task; either way it gets its own session and returns one report
row. Per-job failures become ERROR rows and never stop the batch.
"""
import logging

from django.conf import settings

from csp.propagators import Variant
from csp.session import Session
from csp.search import SearchConfig, Verdict, solve
from csp.exceptions import CSPError
from instances.loaders import document_from_data, load_source
from instances.serializers import document_to_data
from bench.checks import fixpoint_check, solution_check
from bench.exceptions import BenchError, NonDeterministicRun
from bench.manifest import PREPROCESS, SEARCH, AlgorithmEntry
from bench.reports import CONSISTENT, WIPEOUT, Report, ReportRow, error_row
from bench.utils import class_tag, expand_sources, median


logger = logging.getLogger(__name__)

INLINE = "inline"
CELERY = "celery"
EXECUTORS = (INLINE, CELERY)

EMULATION_NOTES = {
    Variant.MAXRPC2_EMU: "maxRPC2 emulation",
    Variant.MAXRPCRM_EMU: "maxRPCrm emulation without its extra residues",
}


def _lab(key):
    return settings.MAXRPC_LAB[key]


def build_jobs(manifest, mode: str):
    """Jobs in manifest order; a source that fails to load yields ready-made ERROR rows."""
    jobs = []
    for source in expand_sources(manifest.sources, seed=manifest.seed):
        try:
            doc = load_source(source)
        except (CSPError, OSError, ValueError) as exc:
            logger.warning(f"Skipping {source}: {exc}")
            for entry in manifest.algorithms:
                jobs.append({"error": error_row(source, entry.label, exc, class_tag(None, source)).as_data()})
            continue
        data = document_to_data(doc)
        for entry in manifest.algorithms:
            jobs.append(
                {
                    "mode": mode,
                    "source": source,
                    "instance": doc.name or source,
                    "class": class_tag(doc, source),
                    "document": data,
                    "algorithm": entry.as_data(),
                    "search": manifest.search_options(),
                    "repetitions": manifest.repetitions,
                    "oracle_check": manifest.oracle_check,
                    "dense_ratio": _lab("DENSE_TABLE_RATIO"),
                    "enumeration_guard": _lab("ENUMERATION_GUARD"),
                }
            )
    return jobs


def _preprocess_once(network, entry):
    session = Session(network, entry.config)
    consistent = session.preprocess()
    return CONSISTENT if consistent else WIPEOUT, session.stats, (consistent, session.value_sets())


def _search_once(network, entry, options):
    result = solve(network, SearchConfig(propagator=entry.config, **options))
    return result.verdict.value, result.stats, result


def run_job(job: dict) -> dict:
    """Run one job and return its report row as plain data."""
    if "error" in job:
        return job["error"]
    instance, tag = job["instance"], job["class"]
    label = job["algorithm"]["id"]
    try:
        entry = AlgorithmEntry.from_data(job["algorithm"])
        label = entry.label
        network = document_from_data(job["document"]).to_network(job.get("dense_ratio", 0.5))
        timings = []
        counters = None
        for repetition in range(job.get("repetitions", 1)):
            if job["mode"] == PREPROCESS:
                verdict, stats, outcome = _preprocess_once(network, entry)
            elif job["mode"] == SEARCH:
                verdict, stats, outcome = _search_once(network, entry, job["search"])
            else:
                raise BenchError(f"Unknown bench mode {job['mode']!r}")
            timings.append(stats.elapsed)
            current = (verdict, stats.cc, stats.nodes, len(stats.bumps), stats.deletions)
            if counters is not None and current != counters:
                raise NonDeterministicRun(f"repetition {repetition + 1} gave {current}, first run gave {counters}")
            counters = current

        check = ""
        if job.get("oracle_check"):
            if job["mode"] == PREPROCESS:
                check = fixpoint_check(network, entry.config, *outcome)
            else:
                check = solution_check(network, outcome, job.get("enumeration_guard", 10**7))
        notes = []
        if entry.config.variant in EMULATION_NOTES:
            notes.append(EMULATION_NOTES[entry.config.variant])
        if verdict == Verdict.LIMIT.value:
            notes.append("limit reached")
        if len(timings) > 1:
            notes.append(f"median of {len(timings)} runs")
        row = ReportRow(
            instance=instance,
            algorithm=label,
            verdict=verdict,
            t=median(timings),
            n=stats.nodes,
            cc=stats.cc,
            bumps=len(stats.bumps),
            class_tag=tag,
            deletions=stats.deletions,
            check=check,
            note="; ".join(notes),
        )
    except Exception as exc:
        logger.warning(f"{label} on {instance} failed: {exc}")
        row = error_row(instance, label, exc, class_tag=tag)
    return row.as_data()


def execute(jobs, executor: str = None) -> list:
    """Rows in job order, computed in-process or through a Celery group."""
    executor = executor or _lab("BENCH_EXECUTOR")
    if executor == INLINE:
        return [run_job(job) for job in jobs]
    if executor == CELERY:
        from celery import group

        from bench.tasks import run_bench_job

        logger.info(f"Dispatching {len(jobs)} jobs to celery")
        return group(run_bench_job.s(job) for job in jobs).apply_async().get()
    raise BenchError(f"Unknown executor {executor!r}; choose from {', '.join(EXECUTORS)}")


def run_batch(manifest, mode: str, executor: str = None) -> Report:
    if not manifest.algorithms:
        raise BenchError("A batch needs at least one algorithm")
    jobs = build_jobs(manifest, mode)
    rows = [ReportRow.from_data(data) for data in execute(jobs, executor)]
    report = Report.from_rows(rows, title=manifest.name or None)
    logger.info(
        f"Batch {manifest.name or '<unnamed>'} ({mode}) finished: {len(rows)} rows, "
        f"{len(report.errors)} errors, seed={manifest.seed}"
    )
    return report


def run_preprocess(manifest, executor: str = None) -> Report:
    """Stand-alone enforcement per instance and algorithm, with class aggregates."""
    return run_batch(manifest, PREPROCESS, executor)


def run_search(manifest, executor: str = None) -> Report:
    """Full search per instance and algorithm, with class aggregates."""
    return run_batch(manifest, SEARCH, executor)
