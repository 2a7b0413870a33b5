"""JSON system-description documents, reports, and CSV export.

Matrices are stored as nested arrays of [re, im] pairs so documents are
human-diffable and representation-explicit.  All file writes are atomic
(write to a temp file in the same directory, then rename).
"""

import json
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .devices import CavitySpec, DpaSpec, build_cavity, build_dpa
from .errors import QhinfError
from .options import DEFAULT, NumericOptions
from .passive import PassivePlant
from .plant import HinfPlant, build_plant
from .qls import SlhModel

SCHEMA_VERSION = "1"
KINDS = ("slh", "plant", "passive_plant", "cavity", "dpa", "controller")


class DocumentError(QhinfError, ValueError):
    """Malformed or inconsistent system document."""


def complex_to_pairs(M: np.ndarray) -> list:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    return [[[float(x.real), float(x.imag)] for x in row] for row in M]


def pairs_to_complex(data, where: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{where}: entries must be [re, im] number pairs") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise DocumentError(
            f"{where}: expected a 2-D matrix of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _realify_doc(M: np.ndarray, where: str) -> np.ndarray:
    if np.max(np.abs(M.imag), initial=0.0) > 0:
        raise DocumentError(f"{where}: must be real (all imaginary parts zero)")
    return M.real


def atomic_write_text(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class SystemDocument:
    """Parsed on-disk description of a system plus target gamma."""
    kind: str
    matrices: dict
    params: dict = field(default_factory=dict)
    gamma: float | None = None
    schema_version: str = SCHEMA_VERSION

    def to_json(self) -> str:
        payload = {
            "schema_version": self.schema_version,
            "kind": self.kind,
            "matrices": {k: complex_to_pairs(v) for k, v in self.matrices.items()},
            "params": self.params,
        }
        if self.gamma is not None:
            payload["gamma"] = self.gamma
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def save_document(doc: SystemDocument, path: str) -> None:
    atomic_write_text(path, doc.to_json())


def load_document(path: str) -> SystemDocument:
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    if not isinstance(payload, dict):
        raise DocumentError(f"{path}: top level must be an object")
    version = payload.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError(f"{path}: unrecognized schema_version {version!r}")
    kind = payload.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"{path}: kind must be one of {KINDS}, got {kind!r}")
    matrices = {k: pairs_to_complex(v, where=f"{path}: matrices.{k}")
                for k, v in payload.get("matrices", {}).items()}
    gamma = payload.get("gamma")
    if gamma is not None and not (isinstance(gamma, (int, float)) and gamma > 0):
        raise DocumentError(f"{path}: gamma must be a positive number")
    return SystemDocument(kind=kind, matrices=matrices,
                          params=payload.get("params", {}),
                          gamma=gamma, schema_version=version)


def _require(doc: SystemDocument, names: tuple, path: str = "document"):
    missing = [n for n in names if n not in doc.matrices]
    if missing:
        raise DocumentError(f"{path}: kind {doc.kind!r} needs matrices {missing}")


def instantiate(doc: SystemDocument, gamma: float | None = None,
                opts: NumericOptions = DEFAULT):
    """Build the model/plant object a document describes.

    gamma overrides the document's value.  Returns SlhModel, HinfPlant,
    PassivePlant, or a plain dict of controller matrices depending on kind.
    """
    g = gamma if gamma is not None else doc.gamma
    if doc.kind == "slh":
        _require(doc, ("S", "Omega_minus", "Omega_plus", "C_minus", "C_plus"))
        m = doc.matrices
        return SlhModel(m["S"], m["Omega_minus"], m["Omega_plus"],
                        m["C_minus"], m["C_plus"], opts=opts)
    if doc.kind == "plant":
        _require(doc, ("Hmat", "C1", "C2", "D12", "D21"))
        m = doc.matrices
        if g is None:
            raise DocumentError("plant document needs gamma")
        return build_plant(_realify_doc(m["Hmat"], "Hmat"),
                           _realify_doc(m["C1"], "C1"),
                           _realify_doc(m["C2"], "C2"),
                           _realify_doc(m["D12"], "D12"),
                           _realify_doc(m["D21"], "D21"), g, opts=opts)
    if doc.kind == "passive_plant":
        _require(doc, ("C1", "C2"))
        m = doc.matrices
        if g is None:
            raise DocumentError("passive_plant document needs gamma")
        return PassivePlant(m["C1"], m["C2"],
                            m.get("D12", np.eye(m["C1"].shape[0])),
                            m.get("D21", np.eye(m["C2"].shape[0])), g, opts=opts)
    if doc.kind == "cavity":
        p = doc.params
        return build_cavity(CavitySpec(p["kappa1"], p["kappa2"],
                                       g if g is not None else 0.6), opts=opts)
    if doc.kind == "dpa":
        p = doc.params
        return build_dpa(DpaSpec(p["kappa_w"], p["kappa_u"], p["epsilon"],
                                 g if g is not None else 1.0), opts=opts)
    if doc.kind == "controller":
        _require(doc, ("AK", "BK", "CK"))
        return {k: doc.matrices[k] for k in ("AK", "BK", "CK")}
    raise DocumentError(f"unhandled kind {doc.kind!r}")


def document_for(obj, gamma: float | None = None) -> SystemDocument:
    """Inverse of instantiate for the object kinds the CLI emits."""
    if isinstance(obj, SlhModel):
        return SystemDocument("slh", {
            "S": obj.S, "Omega_minus": obj.Omega_minus,
            "Omega_plus": obj.Omega_plus,
            "C_minus": obj.C_minus, "C_plus": obj.C_plus}, gamma=gamma)
    if isinstance(obj, HinfPlant):
        return SystemDocument("plant", {
            "Hmat": obj.Hmat, "C1": obj.C1, "C2": obj.C2,
            "D12": obj.D12, "D21": obj.D21}, gamma=obj.gamma)
    if isinstance(obj, PassivePlant):
        return SystemDocument("passive_plant", {
            "C1": obj.C1, "C2": obj.C2, "D12": obj.D12, "D21": obj.D21},
            gamma=obj.gamma)
    raise DocumentError(f"cannot serialize object of type {type(obj).__name__}")


def write_csv(path: str, header: list[str], rows: list[list]) -> None:
    def fmt(x):
        if isinstance(x, (bool, np.bool_)) or isinstance(x, (int, np.integer)):
            return str(int(x))
        if isinstance(x, (float, np.floating)):
            return repr(float(x))
        return str(x)

    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(x) for x in row))
    atomic_write_text(path, "\n".join(lines) + "\n")
