"""Command implementations invoked by ``scripts/magic_runner.py``.

Each ``run_*`` function takes a :class:`RunConfig` and the loaded YAML config
and returns ``(exit_code, artifacts)`` where artifacts is a list of
``("json", envelope)`` or ``("csv", DataFrame)`` items.
"""

from __future__ import annotations

from contextlib import nullcontext
from typing import Optional

from tqdm import tqdm

from logic.clifford import basis_labels
from logic.config_loader import RunConfig
from logic.fusion import (
    clebsch_gordan_moments,
    dimension,
    fundamental_power,
    poincare_coefficients,
)
from logic.haar import (
    HAAR_LABEL,
    ROTOR_LABEL,
    SPHERE_LABEL,
    SeededSampler,
    measure_label,
    sample_unitary,
)
from logic.linalg import commutator_norm, hermitian_eigenvalues, max_norm
from logic.magic import (
    MagicMatrix,
    block_4x4,
    character,
    character_diagonal_exact,
    character_exact,
    clifford_magic,
    generated_algebra_dimension,
    glue_identity,
    permutation_magic,
    sample_projections,
    two_by_two,
    verify_magic,
)
from logic.moments import (
    catalan,
    character_form,
    estimate_phi_moments,
    hypothesis_report,
    spectral_histogram,
)
from logic.reporter import (
    build_envelope,
    fusion_frame,
    histogram_frame,
    magic_to_json,
    matrix_to_json,
    moments_frame,
)
from utils import format_run
from utils.logger import debug_log

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2
EXIT_HYPOTHESIS_VIOLATED = 3

ELEMENT_STREAM = 0
PROJECTION_STREAM = 1
MAX_EMBEDDED_ENTRIES = 128


def unitary_label(s: int) -> str:
    if s == 2:
        return HAAR_LABEL
    return ROTOR_LABEL if s >= 3 else SPHERE_LABEL


def _progress(rc: RunConfig):
    if not rc.progress:
        return nullcontext()
    return tqdm(desc=format_run(rc.command, rc.as_dict()), unit="block")


def build_construction(rc: RunConfig, config: Optional[dict] = None) -> tuple[MagicMatrix, dict]:
    """Build the magic matrix requested by *rc* plus construction metadata."""
    sampler = SeededSampler(rc.seed, ELEMENT_STREAM)
    meta: dict = {"construction": rc.construction}
    if rc.construction == "clifford":
        x = sample_unitary(rc.s, sampler, 0)
        v = clifford_magic(x, rc.tolerance)
        meta["element"] = [c.real for c in x.coeffs]
        meta["labels"] = basis_labels(rc.s)
    elif rc.construction == "permutation":
        v = permutation_magic(rc.n)
    else:
        projections = sample_projections(2, 1, sampler.derive(PROJECTION_STREAM), count=2)
        if rc.construction == "two-by-two":
            v = two_by_two(projections[0], rc.tolerance)
            meta["generated_algebra_dimension"] = generated_algebra_dimension(projections[:1])
        else:
            p, q = projections
            v = block_4x4(p, q, rc.tolerance)
            meta["commutator_norm"] = commutator_norm(p, q)
            meta["generated_algebra_dimension"] = generated_algebra_dimension([p, q])
    if rc.glue:
        v = glue_identity(v, rc.glue)
        meta["glued_identity"] = rc.glue
    debug_log(f"Built {rc.construction} construction n={v.n} d={v.d}", config, level="medium")
    return v, meta


def run_verify(rc: RunConfig, config: Optional[dict] = None) -> tuple[int, list]:
    v, meta = build_construction(rc, config)
    report = verify_magic(v, rc.tolerance, config)
    payload = {**meta, "n": v.n, "d": v.d, "report": report.as_dict()}
    if v.n * v.d <= MAX_EMBEDDED_ENTRIES:
        payload["matrix"] = magic_to_json(v)
    label = unitary_label(rc.s) if rc.construction == "clifford" else None
    code = EXIT_OK if report.passed else EXIT_VERIFY_FAILED
    return code, [("json", build_envelope(rc.as_dict(), payload, label))]


def run_character(rc: RunConfig, config: Optional[dict] = None) -> tuple[int, list]:
    x = sample_unitary(rc.s, SeededSampler(rc.seed, ELEMENT_STREAM), 0)
    chi = character(clifford_magic(x, rc.tolerance))
    exact = character_exact(x, rc.tolerance)
    defect = max_norm(chi - exact)
    diagonal = character_diagonal_exact(x, rc.tolerance) if rc.s % 2 == 0 else None
    payload = {
        "element": [c.real for c in x.coeffs],
        "labels": basis_labels(rc.s),
        "character": matrix_to_json(chi),
        "character_form": character_form(rc.s),
        "exact_character": matrix_to_json(exact),
        "exact_diagonal": diagonal,
        "defect": defect,
        "eigenvalues": hermitian_eigenvalues(chi, config=config),
    }
    if defect > rc.tolerance:
        debug_log(f"Character defect {defect:.3e} exceeds tolerance {rc.tolerance}", config, level="low")
    code = EXIT_OK if defect <= rc.tolerance else EXIT_VERIFY_FAILED
    return code, [("json", build_envelope(rc.as_dict(), payload, unitary_label(rc.s)))]


def run_moments(rc: RunConfig, config: Optional[dict] = None) -> tuple[int, list]:
    with _progress(rc) as progress:
        report = estimate_phi_moments(
            rc.s,
            rc.k_max,
            rc.samples,
            SeededSampler(rc.seed, ELEMENT_STREAM),
            workers=rc.workers,
            progress=progress,
            config=config,
        )
    payload = report.as_dict()
    if rc.format == "csv":
        return EXIT_OK, [("csv", moments_frame(payload["moments"]))]
    return EXIT_OK, [("json", build_envelope(rc.as_dict(), payload, report.measure_label))]


def run_spectrum(rc: RunConfig, config: Optional[dict] = None) -> tuple[int, list]:
    with _progress(rc) as progress:
        hist = spectral_histogram(
            rc.s,
            rc.samples,
            rc.bins,
            SeededSampler(rc.seed, ELEMENT_STREAM),
            workers=rc.workers,
            progress=progress,
            config=config,
        )
    metadata = hist.as_dict()
    return EXIT_OK, [
        ("csv", histogram_frame(hist.centers, hist.density)),
        ("json", build_envelope(rc.as_dict(), metadata, hist.measure_label)),
    ]


def run_fusion(rc: RunConfig, config: Optional[dict] = None) -> tuple[int, list]:
    coefficients = poincare_coefficients(rc.k_max)
    targets = [catalan(k) for k in range(rc.k_max + 1)]
    dimensions = [dimension(fundamental_power(m)) for m in range(rc.k_max + 1)]
    clebsch = clebsch_gordan_moments(rc.k_max)
    agrees = coefficients == targets and clebsch == targets
    payload = {
        "poincare_coefficients": coefficients,
        "catalan": targets,
        "clebsch_gordan_moments": clebsch,
        "dimension_check": [d == 4 ** m for m, d in enumerate(dimensions)],
        "agrees": agrees,
    }
    code = EXIT_OK if agrees else EXIT_HYPOTHESIS_VIOLATED
    if rc.format == "csv":
        return code, [("csv", fusion_frame(coefficients, targets, clebsch))]
    return code, [("json", build_envelope(rc.as_dict(), payload, None))]


def run_report(rc: RunConfig, config: Optional[dict] = None) -> tuple[int, list]:
    with _progress(rc) as progress:
        report = hypothesis_report(
            rc.s,
            rc.k_max,
            rc.samples,
            SeededSampler(rc.seed, ELEMENT_STREAM),
            workers=rc.workers,
            progress=progress,
            config=config,
        )
    print(report.summary())
    code = EXIT_OK if report.satisfied else EXIT_HYPOTHESIS_VIOLATED
    artifacts = []
    if rc.output is not None:
        artifacts.append(("json", build_envelope(rc.as_dict(), report.as_dict(), measure_label(rc.s))))
    return code, artifacts


COMMAND_TABLE = {
    "verify": run_verify,
    "character": run_character,
    "moments": run_moments,
    "spectrum": run_spectrum,
    "fusion": run_fusion,
    "report": run_report,
}


def run(rc: RunConfig, config: Optional[dict] = None) -> tuple[int, list]:
    """Dispatch *rc* to its command."""
    return COMMAND_TABLE[rc.command](rc, config)
