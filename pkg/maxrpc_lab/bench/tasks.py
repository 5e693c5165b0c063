from celery import shared_task

from bench.runner import run_job


@shared_task
def run_bench_job(job):
    """One (instance, algorithm) run of a bench batch; returns the report row as a dict."""
    return run_job(job)


# cd maxrpc_lab
# MAXRPC_BENCH_EXECUTOR=celery python manage.py preprocess "data/*.xml" --algorithm maxrpc3
