"""Target and result files.

Target files are line-oriented text::

    # trapsynth target
    format: trapsynth-target/1
    kind: unitary            (or: state)
    n_qubits: 2
    rows: 4
    cols: 4
    seed: 7                  (optional provenance)
    stream: 0                (optional provenance)
    data:
    <re> <im>                one entry per line, row-major, 17 significant digits

Result files are JSON. Floats are written with ``repr`` and therefore read
back bit-exactly. A result embeds its target so it can be replayed alone.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .ansatz import Topology
from .engine import SynthesisTarget, TargetKind
from .linalg import n_qubits_for, unitarity_residual, vec_norm
from .optimize import OptimizationRun, OptimizerConfig

TARGET_FORMAT = "trapsynth-target/1"
RESULT_FORMAT = "trapsynth-result/1"
LOAD_TOL = 1e-8


class FileFormatError(ValueError):
    pass


@dataclass
class TargetFile:
    kind: str
    data: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def n_qubits(self) -> int:
        return n_qubits_for(self.data.shape[0])

    def to_target(self, columns=None) -> SynthesisTarget:
        if self.kind == "state":
            return SynthesisTarget.state(self.data, tol=LOAD_TOL)
        if columns is None:
            return SynthesisTarget.unitary(self.data, tol=LOAD_TOL)
        return SynthesisTarget.unitary_columns(self.data, columns, tol=LOAD_TOL)


def _fmt(z: complex) -> str:
    return f"{z.real:.17g} {z.imag:.17g}"


def save_target(path, data, kind: str | None = None, seed=None, stream=None) -> None:
    data = np.asarray(data, dtype=np.complex128)
    if kind is None:
        kind = "state" if data.ndim == 1 else "unitary"
    if kind not in ("state", "unitary"):
        raise ValueError(f"unknown target kind {kind!r}")
    rows = data.shape[0]
    cols = 1 if data.ndim == 1 else data.shape[1]
    lines = [
        "# trapsynth target",
        f"format: {TARGET_FORMAT}",
        f"kind: {kind}",
        f"n_qubits: {n_qubits_for(rows)}",
        f"rows: {rows}",
        f"cols: {cols}",
    ]
    if seed is not None:
        lines.append(f"seed: {int(seed)}")
    if stream is not None:
        lines.append(f"stream: {int(stream)}")
    lines.append("data:")
    lines.extend(_fmt(z) for z in data.ravel())
    Path(path).write_text("\n".join(lines) + "\n")


def load_target(path) -> TargetFile:
    """Parse and validate a target file (power-of-two size, unitarity or norm to 1e-8)."""
    text = Path(path).read_text()
    header: dict[str, str] = {}
    entries: list[complex] = []
    in_data = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if in_data:
            parts = line.split()
            if len(parts) != 2:
                raise FileFormatError(f"line {lineno}: expected 're im', got {line!r}")
            try:
                entries.append(complex(float(parts[0]), float(parts[1])))
            except ValueError:
                raise FileFormatError(f"line {lineno}: malformed number in {line!r}") from None
        elif line == "data:":
            in_data = True
        else:
            key, sep, value = line.partition(":")
            if not sep:
                raise FileFormatError(f"line {lineno}: expected 'key: value', got {line!r}")
            header[key.strip()] = value.strip()

    if header.get("format") != TARGET_FORMAT:
        raise FileFormatError(f"unsupported target format {header.get('format')!r}")
    kind = header.get("kind")
    if kind not in ("state", "unitary"):
        raise FileFormatError(f"unknown target kind {kind!r}")
    try:
        rows, cols = int(header["rows"]), int(header["cols"])
    except (KeyError, ValueError):
        raise FileFormatError("header needs integer 'rows' and 'cols'") from None
    if len(entries) != rows * cols:
        raise FileFormatError(f"expected {rows * cols} entries, found {len(entries)}")
    if not np.all(np.isfinite(entries)):
        raise FileFormatError("non-finite entry")
    n = n_qubits_for(rows)
    if "n_qubits" in header and int(header["n_qubits"]) != n:
        raise FileFormatError("n_qubits disagrees with the matrix size")

    arr = np.array(entries, dtype=np.complex128)
    if kind == "state":
        if cols != 1:
            raise FileFormatError("a state has exactly one column")
        err = abs(vec_norm(arr) - 1.0)
        if err > LOAD_TOL:
            raise FileFormatError(f"state is not normalized (|norm - 1| = {err:.3e})")
        if err > 1e-12:
            arr = arr / vec_norm(arr)
    else:
        if cols != rows:
            raise FileFormatError(f"unitary must be square, got {rows}x{cols}")
        arr = arr.reshape(rows, cols)
        res = unitarity_residual(arr)
        if res > LOAD_TOL:
            raise FileFormatError(f"matrix is not unitary (residual {res:.3e})")
    meta = {k: header[k] for k in ("seed", "stream") if k in header}
    return TargetFile(kind, arr, meta)


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def target_to_dict(t: SynthesisTarget) -> dict:
    return {
        "kind": t.kind.value,
        "n_qubits": t.n_qubits,
        "selection": list(t.selection),
        "columns": [[_fmt(z) for z in col] for col in t.columns],
    }


def target_from_dict(d: dict) -> SynthesisTarget:
    cols = np.array([[complex(*map(float, s.split())) for s in col] for col in d["columns"]])
    kind = TargetKind(d["kind"])
    if kind is TargetKind.STATE:
        return SynthesisTarget.state(cols[0], tol=LOAD_TOL)
    if kind is TargetKind.UNITARY:
        return SynthesisTarget.unitary(cols.T, tol=LOAD_TOL)
    return SynthesisTarget.from_columns(d["selection"], cols, tol=LOAD_TOL)


@dataclass
class ResultFile:
    topology: Topology
    target: SynthesisTarget
    config: OptimizerConfig
    run: OptimizationRun
    backend: str
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "format": RESULT_FORMAT,
            "topology": self.topology.descriptor(),
            "optimizer": self.config.to_dict(),
            "backend": self.backend,
            "target": target_to_dict(self.target),
        }
        d.update(self.run.to_dict())
        d["extra"] = self.extra
        return d


def save_result(path, result: ResultFile) -> None:
    Path(path).write_text(json.dumps(result.to_dict(), indent=1) + "\n")


def load_result(path) -> ResultFile:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"result file is not valid JSON: {exc}") from None
    if d.get("format") != RESULT_FORMAT:
        raise FileFormatError(f"unsupported result format {d.get('format')!r}")
    from .optimize import RestartResult

    per = [RestartResult(np.empty(0), r["final_cost"], r["iterations"], r["reason"],
                         r.get("n_evals", 0), r.get("wall_time_s", 0.0)) for r in d["per_restart"]]
    run = OptimizationRun(np.array(d["best_x"], dtype=np.float64), d["best_cost"], d["iterations"],
                          d["converged"], d["best_restart"], per)
    return ResultFile(Topology.from_descriptor(d["topology"]), target_from_dict(d["target"]),
                      OptimizerConfig.from_dict(d["optimizer"]), run, d["backend"], d.get("extra", {}))
