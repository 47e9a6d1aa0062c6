import os
import psutil


def get_optimal_worker_count(min_mem_per_worker_gb: float = 0.25, cpu_util_fraction: float = 0.75) -> int:
    """Return a recommended number of Monte Carlo worker threads.

    ``WORKER_COUNT`` in the environment overrides the CPU/memory estimate.
    """
    env_override = os.environ.get("WORKER_COUNT")
    if env_override and env_override.isdigit() and int(env_override) > 0:
        return int(env_override)

    total_cores = os.cpu_count() or 1
    available_mem_gb = psutil.virtual_memory().available / (1024 ** 3)

    max_by_cpu = max(1, int(total_cores * cpu_util_fraction))
    max_by_mem = max(1, int(available_mem_gb / min_mem_per_worker_gb))

    return min(max_by_cpu, max_by_mem, 32)
