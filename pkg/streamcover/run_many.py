#!/usr/bin/env python3

import logging
import os
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import psutil
import ray

log = logging.getLogger(__name__)

# Need to add streamcover to PYTHONPATH for ray workers to import it
os.environ['PYTHONPATH'] = str(Path(os.path.realpath(__file__)).parent.parent)


def default_jobs() -> int:
    return psutil.cpu_count() or 1


@ray.remote
def _call(fn: Callable, args: Sequence):
    return fn(*args)


def run_parallel(fn: Callable, arg_list: Sequence[Sequence], jobs: Optional[int] = 1) -> List:
    """fn(*args) for every args, in order; fans out over ray workers when jobs > 1"""
    jobs = default_jobs() if jobs is None else jobs
    if jobs <= 1 or len(arg_list) <= 1:
        return [fn(*args) for args in arg_list]
    if not ray.is_initialized():
        ray.init(num_cpus=jobs, include_dashboard=False, log_to_driver=False)
    log.info(f'Running {len(arg_list)} tasks on {jobs} ray workers')
    return ray.get([_call.remote(fn, args) for args in arg_list])
