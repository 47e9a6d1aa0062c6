from __future__ import annotations

VERSION = "0.3.1"


def format_run(command: str, params: dict) -> str:
    """Return a short string describing a run for progress bars and logs."""
    parts = [command]
    for key in ("construction", "s", "n", "k_max"):
        value = params.get(key)
        if value is None:
            continue
        parts.append(str(value) if key == "construction" else f"{key}{value}")
    return "-".join(parts)
