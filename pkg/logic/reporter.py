"""Output utilities for writing run artifacts as JSON and CSV."""

from __future__ import annotations

import json
import os
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
import xxhash

from logic.magic import MagicMatrix
from utils import VERSION
from utils.logger import debug_log


def encode_complex(z: complex) -> list[float]:
    """Complex numbers serialise as ``[re, im]``."""
    z = complex(z)
    return [z.real, z.imag]


def matrix_to_json(m) -> list:
    """Row-major nested lists of ``[re, im]`` pairs."""
    return [[encode_complex(z) for z in row] for row in np.asarray(m)]


def magic_to_json(v: MagicMatrix) -> dict:
    return {
        "n": v.n,
        "d": v.d,
        "labels": list(v.labels) if v.labels is not None else None,
        "blocks": [[matrix_to_json(v.block(i, j)) for j in range(v.n)] for i in range(v.n)],
    }


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)


def fingerprint(payload: Any) -> str:
    return xxhash.xxh64(canonical_json(payload).encode("utf-8")).hexdigest()


def build_envelope(params: dict, payload: dict, measure_label: Optional[str]) -> dict:
    """Wrap *payload* with the run parameters, seed, version and measure label."""
    envelope = {
        "version": VERSION,
        "config": params,
        "seed": params.get("seed"),
        "measure_label": measure_label,
        "result": payload,
    }
    envelope["fingerprint"] = fingerprint(envelope)
    return envelope


class ArtifactWriter:
    """Collect JSON/CSV artifacts and write them together on close."""

    def __init__(self, output_path: Optional[str], config: Optional[dict] = None):
        self.output_path = output_path
        self.config = config
        self.buffer: List[tuple[str, str]] = []
        self.written: List[str] = []

    def _target(self, suffix: str) -> Optional[str]:
        if self.output_path is None:
            return None
        root, ext = os.path.splitext(self.output_path)
        return self.output_path if ext == suffix else root + suffix

    def write_json(self, envelope: Dict) -> None:
        self.buffer.append((".json", canonical_json(envelope) + "\n"))

    def write_csv(self, frame: pd.DataFrame) -> None:
        self.buffer.append((".csv", frame.to_csv(index=False, float_format="%.12g", lineterminator="\n")))

    def flush(self) -> None:
        if not self.buffer:
            debug_log("Flush called but buffer is empty.", self.config, level="high")
            return
        for suffix, text in self.buffer:
            target = self._target(suffix)
            if target is None:
                print(text, end="")
                continue
            directory = os.path.dirname(target)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(target, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            self.written.append(target)
            debug_log(f"Wrote artifact {target}", self.config, level="low")
        self.buffer.clear()

    def close(self) -> None:
        self.flush()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            self.close()


def histogram_frame(centers, density) -> pd.DataFrame:
    """Two-column table (bin center, density) for plotting tools."""
    return pd.DataFrame({"bin_center": np.asarray(centers), "density": np.asarray(density)})


def moments_frame(rows: list[dict]) -> pd.DataFrame:
    columns = ["k", "mc_estimate", "mc_stderr", "exact_value", "catalan_ref", "z_score"]
    return pd.DataFrame(rows)[columns]


def fusion_frame(coefficients: list[int], targets: list[int], clebsch: list[int]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "k": range(len(coefficients)),
            "poincare": coefficients,
            "catalan": targets,
            "clebsch_gordan": clebsch,
        }
    )
