"""Ordered task map over a process pool.

Results come back in submission order, so any reduction done by the caller
is the same for every worker count.
"""
from concurrent.futures import ProcessPoolExecutor


def ordered_map(func, tasks, workers=1):
    tasks = list(tasks)
    if workers is None or workers <= 1 or len(tasks) <= 1:
        return [func(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        futures = [pool.submit(func, *t) for t in tasks]
        return [f.result() for f in futures]
