"""Per-scale wavelet coefficient container in the L∞ normalization."""

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError

NORMALIZATIONS = ("Linf",)


@dataclass
class CoeffPyramid:
    """Coefficients ``c_{j,k} = 2^j ∫ f(x) ψ(2^j x - k) dx`` for ``j_min <= j <= j_max``.

    Attributes
    ----------
    j_min, j_max : int
    coeffs : list of ndarray
        ``coeffs[j - j_min]`` holds the stored coefficients of scale ``j``.
    positions : list of ndarray
        Translation index ``k`` of every stored coefficient.
    sup_per_scale : ndarray
        ``s_j = max_k |c_{j,k}|`` (0 for a scale with no stored coefficient).
    meta : dict
        Free-form provenance (wavelet, seam policy, generator parameters).
    """

    j_min: int
    j_max: int
    coeffs: list
    positions: list = None
    normalization: str = "Linf"
    meta: dict = field(default_factory=dict)
    sup_per_scale: np.ndarray = field(init=False)

    def __post_init__(self):
        self.j_min, self.j_max = int(self.j_min), int(self.j_max)
        if self.j_max < self.j_min:
            raise DomainError(f"empty pyramid range [{self.j_min}, {self.j_max}]")
        if self.normalization not in NORMALIZATIONS:
            raise DomainError(f"unsupported normalization {self.normalization!r}")
        n_scales = self.j_max - self.j_min + 1
        if len(self.coeffs) != n_scales:
            raise DomainError(f"expected {n_scales} coefficient arrays, got {len(self.coeffs)}")
        self.coeffs = [np.asarray(c, dtype=float).ravel() for c in self.coeffs]
        if self.positions is None:
            self.positions = [np.arange(c.size) for c in self.coeffs]
        self.positions = [np.asarray(p, dtype=np.int64).ravel() for p in self.positions]
        for c, p in zip(self.coeffs, self.positions):
            if c.shape != p.shape:
                raise DomainError("positions and coefficients differ in length")
            if not np.all(np.isfinite(c)):
                raise DomainError("coefficients must be finite")
        self.sup_per_scale = np.array([np.max(np.abs(c)) if c.size else 0.0 for c in self.coeffs])

    @property
    def js(self) -> np.ndarray:
        return np.arange(self.j_min, self.j_max + 1)

    def sup(self, j: int) -> float:
        return float(self.sup_per_scale[int(j) - self.j_min])

    def scale(self, j: int) -> np.ndarray:
        return self.coeffs[int(j) - self.j_min]

    @classmethod
    def from_sups(cls, js, sups, meta=None):
        """Pyramid holding one coefficient ``s_j`` per scale (``k = 0``)."""
        js = np.asarray(js, dtype=int)
        sups = np.asarray(sups, dtype=float)
        if js.size == 0 or np.any(np.diff(js) != 1):
            raise DomainError("scales must be consecutive integers")
        if np.any(sups < 0):
            raise DomainError("sup magnitudes must be nonnegative")
        return cls(int(js[0]), int(js[-1]), [np.array([s]) for s in sups], meta=dict(meta or {}))

    def restricted(self, j_lo, j_hi):
        """Sub-pyramid on ``[j_lo, j_hi]``."""
        if j_lo < self.j_min or j_hi > self.j_max or j_lo > j_hi:
            raise DomainError(f"[{j_lo}, {j_hi}] is outside [{self.j_min}, {self.j_max}]")
        a, b = j_lo - self.j_min, j_hi - self.j_min + 1
        return CoeffPyramid(j_lo, j_hi, self.coeffs[a:b], self.positions[a:b], self.normalization, dict(self.meta))

    def to_dict(self):
        scales = []
        for j, c, p, s in zip(self.js, self.coeffs, self.positions, self.sup_per_scale):
            entry = {"j": int(j), "coeffs": c.tolist(), "sup": float(s)}
            if not np.array_equal(p, np.arange(c.size)):
                entry["positions"] = p.tolist()
            scales.append(entry)
        return {
            "j_min": self.j_min,
            "j_max": self.j_max,
            "normalization": self.normalization,
            "scales": scales,
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, d):
        try:
            scales = sorted(d["scales"], key=lambda s: s["j"])
            j_min, j_max = int(d["j_min"]), int(d["j_max"])
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed pyramid document: {exc}") from None
        if [s["j"] for s in scales] != list(range(j_min, j_max + 1)):
            raise DomainError("pyramid scales must cover j_min..j_max exactly once")
        coeffs = [np.asarray(s["coeffs"], dtype=float) for s in scales]
        positions = [np.asarray(s.get("positions", np.arange(len(s["coeffs"]))), dtype=np.int64) for s in scales]
        pyr = cls(j_min, j_max, coeffs, positions, d.get("normalization", "Linf"), dict(d.get("meta", {})))
        for s, got in zip(scales, pyr.sup_per_scale):
            if "sup" in s and not np.isclose(float(s["sup"]), got, rtol=1e-12, atol=0.0):
                raise DomainError(f"stored sup at j={s['j']} disagrees with its coefficients")
        return pyr

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))
