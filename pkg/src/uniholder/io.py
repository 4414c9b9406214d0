"""Signal files and pyramid documents.

A signal file is a payload plus a JSON sidecar named ``<payload>.json``.  The
payload is either raw little-endian float64 samples or a CSV with the columns
``x,value``.  The sidecar carries the grid (``length``, ``x0``, ``dx``,
``extension``) and a free-form ``provenance`` object.  A CSV payload may be
read without a sidecar; the grid is then inferred from its ``x`` column.
"""

import csv
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .smoothness import SampledSignal
from .wavelets.pyramid import CoeffPyramid

SIDECAR_FORMAT = "uniholder-signal"
PAYLOADS = ("f64", "csv")


def sidecar_path(path):
    return f"{os.fspath(path)}.json"


def payload_kind(path):
    """``csv`` for a ``.csv`` suffix, ``f64`` otherwise."""
    return "csv" if os.fspath(path).lower().endswith(".csv") else "f64"


@dataclass
class SignalFile:
    """A signal together with its sidecar header.

    Attributes
    ----------
    signal : SampledSignal
    provenance : dict
        Generator name, parameters and any derived quantities worth keeping
        next to the samples.
    """

    signal: SampledSignal
    provenance: dict = field(default_factory=dict)

    def header(self, payload):
        s = self.signal
        return {
            "format": SIDECAR_FORMAT,
            "payload": payload,
            "length": s.n,
            "x0": s.x0,
            "dx": s.dx,
            "extension": s.extension,
            "provenance": self.provenance,
        }

    def write(self, path):
        """Write payload and sidecar; the payload kind follows the suffix."""
        path = os.fspath(path)
        kind = payload_kind(path)
        if kind == "csv":
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["x", "value"])
                for x, v in zip(self.signal.x, self.signal.values):
                    w.writerow([repr(float(x)), repr(float(v))])
        else:
            self.signal.values.astype("<f8").tofile(path)
        with open(sidecar_path(path), "w") as fh:
            json.dump(self.header(kind), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path

    @classmethod
    def read(cls, path):
        """Read a payload and its sidecar.

        Raises
        ------
        DomainError
            Missing or inconsistent header, unreadable payload.
        """
        path = os.fspath(path)
        if not os.path.exists(path):
            raise DomainError(f"{path}: no such file")
        head = _read_sidecar(path)
        kind = head.get("payload", payload_kind(path)) if head else payload_kind(path)
        if kind not in PAYLOADS:
            raise DomainError(f"{path}: unknown payload kind {kind!r}")
        if kind == "csv":
            xs, values = _read_csv(path)
        else:
            if head is None:
                raise DomainError(f"{path}: a raw float64 payload needs the sidecar {sidecar_path(path)}")
            values = np.fromfile(path, dtype="<f8")
            xs = None
        if head is None:
            x0, dx = _grid_from_x(path, xs)
            return cls(SampledSignal(values, x0, dx, "periodic"), {})
        try:
            length = int(head["length"])
            x0, dx = float(head["x0"]), float(head["dx"])
            extension = head.get("extension", "periodic")
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"{sidecar_path(path)}: malformed header ({exc})") from None
        if length != values.size:
            raise DomainError(f"{path}: header length {length} but payload has {values.size} samples")
        return cls(SampledSignal(values, x0, dx, extension), dict(head.get("provenance", {})))


def _read_sidecar(path):
    side = sidecar_path(path)
    if not os.path.exists(side):
        return None
    try:
        with open(side) as fh:
            head = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"{side}: {exc}") from None
    if not isinstance(head, dict):
        raise DomainError(f"{side}: header must be a JSON object")
    return head


def _read_csv(path):
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DomainError(f"{path}: {exc}") from None
    if not rows or [c.strip().lower() for c in rows[0]] != ["x", "value"]:
        raise DomainError(f"{path}: CSV must start with the header x,value")
    try:
        data = np.array([[float(a), float(b)] for a, b in rows[1:]], dtype=float).reshape(-1, 2)
    except ValueError as exc:
        raise DomainError(f"{path}: {exc}") from None
    return data[:, 0], data[:, 1]


def _grid_from_x(path, xs):
    if xs.size < 2:
        raise DomainError(f"{path}: need at least two rows")
    steps = np.diff(xs)
    dx = float(np.mean(steps))
    if not dx > 0 or np.max(np.abs(steps - dx)) > 1e-9 * max(1.0, abs(dx)):
        raise DomainError(f"{path}: x column is not a uniform increasing grid")
    return float(xs[0]), dx


def write_pyramid(pyramid: CoeffPyramid, path):
    with open(path, "w") as fh:
        fh.write(pyramid.to_json(indent=1, sort_keys=True))
        fh.write("\n")
    return os.fspath(path)


def read_pyramid(path) -> CoeffPyramid:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"{path}: {exc}") from None
    return CoeffPyramid.from_dict(doc)


def is_pyramid_file(path) -> bool:
    """True for a JSON document with a ``scales`` list (pyramid input mode)."""
    path = os.fspath(path)
    if not path.lower().endswith(".json"):
        return False
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return False
    return isinstance(doc, dict) and isinstance(doc.get("scales"), list)


def load_input(path):
    """``("pyramid", CoeffPyramid)`` or ``("signal", SignalFile)``."""
    if is_pyramid_file(path):
        return "pyramid", read_pyramid(path)
    return "signal", SignalFile.read(path)
