"""Analysis pipeline and its versioned JSON report.

A report body depends only on the input and the options.  Run-specific facts
(time stamp, package version, kernel backend) live in ``provenance``, which
:meth:`AnalysisReport.comparable` drops.
"""

from dataclasses import dataclass, field
import datetime
import json
import math
import warnings

from . import kernels
from .errors import DomainError, EstimationError
from .estimators import (CriterionTrace, irregularity_criterion, lower_index_wavelet,
                         naive_upper_slope, upper_index_wavelet)
from .smoothness import (M_CAP, IndexEstimate, _json_clean, modulus_profile, oracle_lower_index,
                         oracle_upper_index, select_order)
from .wavelets import TrigSeries, WaveletSpec, dwt_pyramid, meyer_series_pyramid
from .witness import DEFAULT_C_GRID, criterion_equivalence_check

SCHEMA = 1
ESTIMATES = ("wavelet_lower", "wavelet_upper", "oracle_lower", "oracle_upper")
WAVELET_MARGIN = 4
ORACLE_MARGIN = 5
STATUS_OK = "ok"
STATUS_DEGENERATE = "degenerate"


@dataclass
class AnalysisReport:
    """Everything one analysis produced.

    Attributes
    ----------
    input : dict
        Input descriptor (kind, path, grid or scale range, generator).
    wavelet : dict or None
    M : int
        Difference order used by the oracles and the criterion.
    M_policy : str
        ``"auto"`` or ``"fixed"``.
    estimates : dict
        Keys from ``ESTIMATES``; a value is an :class:`IndexEstimate` or None
        when the estimate could not be formed.
    criterion : CriterionTrace or None
    criterion_exponent : float or None
    naive_upper : dict or None
        Output of :func:`naive_upper_slope`.
    witness : list of dict
        One :class:`EquivalenceReport` document per tested ``α``.
    warnings : list of str
    status : str
        ``"ok"`` or ``"degenerate"`` (some estimate is absent).
    provenance : dict
    """

    input: dict
    wavelet: dict
    M: int
    M_policy: str
    estimates: dict
    criterion: CriterionTrace = None
    criterion_exponent: float = None
    naive_upper: dict = None
    witness: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    status: str = STATUS_OK
    provenance: dict = field(default_factory=dict)
    schema: int = SCHEMA

    def to_dict(self, provenance=True):
        d = {
            "schema": self.schema,
            "status": self.status,
            "input": _json_clean(self.input),
            "wavelet": self.wavelet,
            "M": self.M,
            "M_policy": self.M_policy,
            "estimates": {k: (None if e is None else e.to_dict()) for k, e in self.estimates.items()},
            "criterion": None if self.criterion is None else {
                "exponent": self.criterion_exponent,
                "trace": self.criterion.to_dict(),
            },
            "naive_upper": _json_clean(self.naive_upper),
            "witness": _json_clean(self.witness),
            "warnings": list(self.warnings),
        }
        if provenance:
            d["provenance"] = _json_clean(self.provenance)
        return d

    def comparable(self):
        """The report body without provenance, for output comparison."""
        return self.to_dict(provenance=False)

    def to_json(self, provenance=True, **kwargs):
        kwargs.setdefault("indent", 2)
        kwargs.setdefault("sort_keys", True)
        return json.dumps(self.to_dict(provenance), **kwargs)

    @classmethod
    def from_dict(cls, d):
        if d.get("schema") != SCHEMA:
            raise DomainError(f"unsupported report schema {d.get('schema')!r}")
        crit = d.get("criterion")
        return cls(
            input=d["input"],
            wavelet=d["wavelet"],
            M=d["M"],
            M_policy=d["M_policy"],
            estimates={k: (None if e is None else IndexEstimate.from_dict(e)) for k, e in d["estimates"].items()},
            criterion=None if crit is None else CriterionTrace.from_dict(crit["trace"]),
            criterion_exponent=None if crit is None else crit["exponent"],
            naive_upper=d.get("naive_upper"),
            witness=d.get("witness", []),
            warnings=d.get("warnings", []),
            status=d["status"],
            provenance=d.get("provenance", {}),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def csv_rows(self):
        """Header plus one row per estimate."""
        rows = [["estimate", "value", "j_min", "j_max", "M"]]
        for k in ESTIMATES:
            e = self.estimates.get(k)
            if e is None:
                rows.append([k, "", "", "", ""])
            else:
                rows.append([k, repr(e.value), e.fit_window[0], e.fit_window[1],
                             "" if e.order_M is None else e.order_M])
        return rows


def provenance_record(source=None, extra=None):
    rec = {
        "tool": "uniholder",
        "version": _version(),
        "backend": kernels.BACKEND,
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
    }
    if source is not None:
        rec["source"] = str(source)
    if extra:
        rec.update(extra)
    return rec


def _version():
    from . import __version__
    return __version__


def default_windows(signal):
    """Wavelet and oracle fit windows for a sampled signal.

    With ``J_c = -log2(length)`` and ``J_N = -log2(dx)`` the wavelet window is
    ``[J_c + 4, J_N - 4]`` and the oracle window ``[J_c + 5, J_N - 5]``.  The
    margins shrink on short signals so that each window keeps three scales;
    the coarsest oracle radius stays below ``length / (M_CAP + 1)``.
    """
    jN = -math.log2(signal.dx)
    jc = -math.log2(signal.length)
    jN, jc = int(math.floor(jN + 1e-9)), int(math.ceil(jc - 1e-9))

    def window(margin, floor_lo):
        while margin > 0 and (jN - margin) - (jc + margin) < 2:
            margin -= 1
        return max(jc + margin, floor_lo), jN - max(margin, 0)

    oracle_floor = jc + int(math.ceil(math.log2(M_CAP + 1)))
    return window(WAVELET_MARGIN, jc + 1), window(ORACLE_MARGIN, oracle_floor)


def _try(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs), None
    except EstimationError as exc:
        return None, str(exc)


def _tagged(name, err):
    return [err if err.startswith(f"{name}:") else f"{name}: {err}"] if err else []


def _clip_window(window, pyramid):
    lo, hi = max(window[0], pyramid.j_min), min(window[1], pyramid.j_max)
    return (lo, hi) if lo <= hi else (pyramid.j_min, pyramid.j_max)


def _witness_outcomes(pyramid, alphas, M, c_grid):
    out = []
    for a in alphas:
        if a is None or not 0 < a < M:
            continue
        out.append(criterion_equivalence_check(pyramid, float(a), M, c_grid).to_dict())
    return out


def _finish(report, pyramid, M, alphas, c_grid, errors):
    trace = irregularity_criterion(pyramid, M)
    report.criterion = trace
    up = report.estimates.get("wavelet_upper")
    report.criterion_exponent = None if up is None else up.value
    report.naive_upper = naive_upper_slope(pyramid)
    if alphas is None:
        alphas = [] if up is None else [up.value]
    report.witness = _witness_outcomes(pyramid, alphas, M, c_grid)
    report.warnings.extend(errors)
    if any(report.estimates.get(k) is None for k in report.estimates):
        report.status = STATUS_DEGENERATE
    return report


def analyze_pyramid(pyramid, M="auto", window=None, alphas=None, c_grid=DEFAULT_C_GRID,
                    convention="envelope", source=None):
    """Estimator-only analysis of a pre-built pyramid.

    Parameters
    ----------
    pyramid : CoeffPyramid
    M : "auto" or int
    window : (int, int), optional
        Fit window for both wavelet estimates.  Defaults to the whole range for
        the lower index and the range minus the ``M + 2`` finest scales for
        the upper one.
    alphas : list of float, optional
        Exponents for the witness search; defaults to the upper estimate.
    """
    errors = []
    lower, err = _try(lower_index_wavelet, pyramid, window, convention)
    errors += _tagged("wavelet_lower", err)

    def upper(m):
        return _try(upper_index_wavelet, pyramid, m, window, convention)

    if M == "auto":
        cache = {}

        def trial(m):
            cache[m] = upper(m)
            return [None if cache[m][0] is None else cache[m][0].value]

        M_used, _, saturated = select_order(trial)
        up, err = cache[M_used]
        policy = "auto"
    else:
        M_used, saturated, policy = int(M), False, "fixed"
        up, err = upper(M_used)
    errors += _tagged("wavelet_upper", err)
    report = AnalysisReport(
        input={"kind": "pyramid", "path": None if source is None else str(source),
               "j_min": pyramid.j_min, "j_max": pyramid.j_max,
               "generator": pyramid.meta.get("generator")},
        wavelet={"name": pyramid.meta.get("wavelet")},
        M=M_used,
        M_policy=policy,
        estimates={"wavelet_lower": lower, "wavelet_upper": up},
        provenance=provenance_record(source),
    )
    if saturated:
        report.warnings.append(f"M reached the cap {M_CAP} with the estimate still near M")
    return _finish(report, pyramid, M_used, alphas, c_grid, errors)


def _signal_pyramid(signal, spec, series):
    if spec.family == "meyer":
        if series is None:
            raise DomainError("the Meyer wavelet needs a trigonometric-series input (a fabe file)")
        top = int(series.freq_exps[-1]) + 1 if len(series) else 1
        return meyer_series_pyramid(series, 1, max(top, 2))
    return dwt_pyramid(signal, spec)


def analyze_signal(signal, spec=None, M="auto", window=None, oracle_window=None, alphas=None,
                   c_grid=DEFAULT_C_GRID, convention="envelope", source=None, input_provenance=None):
    """Full pipeline on a sampled signal: wavelet and oracle estimates of both indices.

    Parameters
    ----------
    signal : SampledSignal
    spec : WaveletSpec, optional
        Defaults to ``daubechies:4``.  ``meyer`` needs ``input_provenance``
        holding the generating ``series``.
    M : "auto" or int
        ``auto`` raises M from 1 until every estimate sits below ``M - 0.1``.
    window, oracle_window : (int, int), optional
        Fit windows; see :func:`default_windows`.
    """
    spec = spec or WaveletSpec.daubechies(4)
    input_provenance = dict(input_provenance or {})
    series = input_provenance.get("series")
    series = TrigSeries.from_dict(series) if series else None
    w_default, o_default = default_windows(signal)
    oracle_window = tuple(oracle_window or o_default)
    errors, caught = [], []
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        pyramid = _signal_pyramid(signal, spec, series)
        if window is None and spec.family == "daubechies":
            window = _clip_window(w_default, pyramid)
        lower, err = _try(lower_index_wavelet, pyramid, window, convention)
        errors += _tagged("wavelet_lower", err)
        cache = {}

        def trial(m):
            profile = modulus_profile(signal, m, oracle_window)
            res = {
                "oracle_lower": _try(oracle_lower_index, profile, None, convention),
                "oracle_upper": _try(oracle_upper_index, profile, None, convention),
                "wavelet_upper": _try(upper_index_wavelet, pyramid, m, window, convention),
            }
            cache[m] = res
            return [None if e is None else e.value for e, _ in res.values()]

        if M == "auto":
            M_used, _, saturated = select_order(trial)
            policy = "auto"
        else:
            M_used, saturated, policy = int(M), False, "fixed"
            trial(M_used)
        caught = [str(w.message) for w in rec]
    chosen = cache[M_used]
    errors += [m for k, (_, err) in chosen.items() for m in _tagged(k, err)]
    report = AnalysisReport(
        input={"kind": "signal", "path": None if source is None else str(source), "n": signal.n,
               "x0": signal.x0, "dx": signal.dx, "extension": signal.extension,
               "generator": input_provenance.get("generator")},
        wavelet=spec.to_dict(),
        M=M_used,
        M_policy=policy,
        estimates={
            "wavelet_lower": lower,
            "wavelet_upper": chosen["wavelet_upper"][0],
            "oracle_lower": chosen["oracle_lower"][0],
            "oracle_upper": chosen["oracle_upper"][0],
        },
        provenance=provenance_record(source),
    )
    report.warnings.extend(dict.fromkeys(caught))
    if "warning" in pyramid.meta:
        report.warnings.append(pyramid.meta["warning"])
    if saturated:
        report.warnings.append(f"M reached the cap {M_CAP} with estimates still near M; the signal looks smooth")
    return _finish(report, pyramid, M_used, alphas, c_grid, errors)


def summary_line(report):
    """One human-readable line with the four estimates."""
    parts = []
    for k in ESTIMATES:
        if k in report.estimates:
            e = report.estimates[k]
            parts.append(f"{k}={'absent' if e is None else format(e.value, '.4f')}")
    return f"M={report.M} " + " ".join(parts) + f" status={report.status}"

