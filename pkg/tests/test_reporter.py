import sys, os; sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))
import json

import numpy as np

from logic.clifford import CliffordElement
from logic.magic import clifford_magic
from logic.reporter import (
    ArtifactWriter,
    build_envelope,
    canonical_json,
    encode_complex,
    fingerprint,
    fusion_frame,
    histogram_frame,
    magic_to_json,
    matrix_to_json,
    moments_frame,
)
from utils import VERSION


def test_complex_and_matrix_encoding():
    assert encode_complex(1 - 2j) == [1.0, -2.0]
    assert matrix_to_json(np.array([[1, 1j], [0, 2]])) == [
        [[1.0, 0.0], [0.0, 1.0]],
        [[0.0, 0.0], [2.0, 0.0]],
    ]


def test_magic_to_json_layout():
    data = magic_to_json(clifford_magic(CliffordElement.unit(2)))
    assert data["n"] == 4 and data["d"] == 4
    assert data["labels"] == ["1", "i", "j", "k"]
    assert data["blocks"][0][0][0][0] == [1.0, 0.0]


def test_envelope_carries_run_metadata():
    params = {"command": "fusion", "seed": 7, "k_max": 2}
    envelope = build_envelope(params, {"coefficients": [1, 1, 2]}, "sphere measure")
    assert envelope["version"] == VERSION
    assert envelope["seed"] == 7
    assert envelope["config"] == params
    assert envelope["measure_label"] == "sphere measure"
    body = {k: v for k, v in envelope.items() if k != "fingerprint"}
    assert envelope["fingerprint"] == fingerprint(body)
    assert build_envelope(params, {"coefficients": [1, 1, 2]}, "sphere measure") == envelope


def test_canonical_json_is_key_ordered():
    assert canonical_json({"b": 1, "a": 2}).index('"a"') < canonical_json({"b": 1, "a": 2}).index('"b"')


def test_writer_writes_json_and_csv(tmp_path):
    target = tmp_path / "out" / "spectrum.json"
    envelope = build_envelope({"seed": 1}, {"bins": 2}, None)
    with ArtifactWriter(str(target)) as writer:
        writer.write_json(envelope)
        writer.write_csv(histogram_frame([0.5, 1.5], [0.25, 0.75]))
    assert json.loads(target.read_text(encoding="utf-8")) == envelope
    csv_text = (tmp_path / "out" / "spectrum.csv").read_text(encoding="utf-8")
    assert csv_text == "bin_center,density\n0.5,0.25\n1.5,0.75\n"
    assert sorted(os.path.basename(p) for p in writer.written) == ["spectrum.csv", "spectrum.json"]


def test_writer_prints_without_output(capsys):
    writer = ArtifactWriter(None)
    writer.flush()
    writer.write_json({"a": 1})
    writer.close()
    assert json.loads(capsys.readouterr().out) == {"a": 1}


def test_writer_skips_flush_after_exception(tmp_path):
    target = tmp_path / "never.json"
    try:
        with ArtifactWriter(str(target)) as writer:
            writer.write_json({"a": 1})
            raise RuntimeError("boom")
    except RuntimeError:
        pass
    assert not target.exists()


def test_frames():
    rows = [
        {"k": 0, "mc_estimate": 1.0, "mc_stderr": 0.0, "exact_value": "1", "catalan_ref": 1, "z_score": None, "extra": 1}
    ]
    frame = moments_frame(rows)
    assert list(frame.columns) == ["k", "mc_estimate", "mc_stderr", "exact_value", "catalan_ref", "z_score"]
    table = fusion_frame([1, 1], [1, 1], [1, 1])
    assert list(table["k"]) == [0, 1]
