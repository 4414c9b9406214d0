"""The piecewise modulus θ attached to a scale sequence, and its properties.

For ``j_n <= j < j_{n+1}``:

    θ(2^{-j}) = min(2^{-j_n α}, 2^{j_{n+1}(M - α)} 2^{-jM}).

Values are kept as ``log2 θ`` so that long sequences never underflow.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError

REL_TOL = 1e-9


@dataclass(frozen=True)
class ScaleSequence:
    """Strictly increasing nonnegative integers ``(j_n)``."""

    j_n: tuple

    def __post_init__(self):
        seq = tuple(int(j) for j in self.j_n)
        if any(b <= a for a, b in zip(seq, seq[1:])):
            raise DomainError(f"scale sequence must be strictly increasing: {seq}")
        if seq and seq[0] < 0:
            raise DomainError("scale sequence must start at j >= 0")
        object.__setattr__(self, "j_n", seq)

    def __len__(self):
        return len(self.j_n)

    def __iter__(self):
        return iter(self.j_n)

    def __getitem__(self, i):
        return self.j_n[i]

    def to_list(self):
        return list(self.j_n)


@dataclass(frozen=True)
class ThetaProfile:
    """``θ(2^{-j})`` for ``j = j_1 .. j_max``.

    Attributes
    ----------
    alpha : float
    M : int
    seq : ScaleSequence
    js : ndarray of int
    log2_values : ndarray
        ``log2 θ(2^{-j})``.
    branch : ndarray of int
        0 where ``2^{-j_n α}`` is the minimum, 1 where the second term is.
    """

    alpha: float
    M: int
    seq: ScaleSequence
    js: np.ndarray
    log2_values: np.ndarray
    branch: np.ndarray

    @property
    def values(self) -> np.ndarray:
        return np.exp2(self.log2_values)

    def at(self, j: int) -> float:
        return float(np.exp2(self.log2_values[int(j) - int(self.js[0])]))

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "M": self.M,
            "seq": self.seq.to_list(),
            "js": self.js.tolist(),
            "log2_values": self.log2_values.tolist(),
        }


def theta_build(seq: ScaleSequence, alpha: float, M: int, j_max: int) -> ThetaProfile:
    """Evaluate θ on ``[j_1, j_max]``.

    Raises
    ------
    DomainError
        If ``alpha`` is not in ``(0, M)`` or the sequence stops before
        ``j_max + 1`` (the last block would have no right end).
    """
    if not isinstance(seq, ScaleSequence):
        seq = ScaleSequence(seq)
    M = int(M)
    if not 0 < alpha < M:
        raise DomainError(f"alpha must lie in (0, M={M}), got {alpha}")
    if len(seq) < 2 or seq[-1] <= j_max:
        raise DomainError(f"the sequence must extend past j_max={j_max}")
    if j_max < seq[0]:
        raise DomainError(f"j_max={j_max} is below j_1={seq[0]}")
    js = np.arange(seq[0], int(j_max) + 1)
    heads = np.asarray(seq.j_n, dtype=float)
    block = np.searchsorted(heads, js, side="right") - 1
    first = -heads[block] * alpha
    second = heads[block + 1] * (M - alpha) - js * M
    return ThetaProfile(float(alpha), M, seq, js, np.minimum(first, second), (second < first).astype(int))


@dataclass
class ConditionResult:
    """Outcome of one property check with its measured constant."""

    name: str
    passed: bool
    constant: float
    tolerance: float
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "constant": _finite_or_str(self.constant),
            "tolerance": _finite_or_str(self.tolerance),
            "detail": self.detail,
        }


@dataclass
class ThetaReport:
    """Per-condition results of :func:`theta_properties_check`."""

    alpha: float
    M: int
    beta: float
    J_range: tuple
    conditions: dict

    @property
    def weak_passed(self) -> bool:
        weak = ("doubling", "faible_un", "faible_deux", "faible_trois")
        return all(self.conditions[k].passed for k in weak)

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "M": self.M,
            "beta": self.beta,
            "J_range": list(self.J_range),
            "weak_passed": self.weak_passed,
            "conditions": {k: v.to_dict() for k, v in self.conditions.items()},
        }


def _finite_or_str(v):
    v = float(v)
    return v if math.isfinite(v) else ("inf" if v > 0 else "nan")


def _log2_sum(log2_terms):
    """``log2 Σ 2^{t}``, stable."""
    if log2_terms.size == 0:
        return -math.inf
    top = np.max(log2_terms)
    return float(top + np.log2(np.sum(np.exp2(log2_terms - top))))


def _log2_suffix_sums(log2_terms):
    out = np.empty(log2_terms.size)
    run = -math.inf
    for i in range(log2_terms.size - 1, -1, -1):
        run = np.logaddexp2(run, log2_terms[i])
        out[i] = run
    return out


def _log2_prefix_sums(log2_terms):
    return np.logaddexp2.accumulate(log2_terms)


def weak_two_bound(alpha, M, beta):
    """Ceiling used as the pass threshold of the second weak condition.

    With ``|ln θ_j| <= α j ln 2`` each term is at most ``(α ln 2)^β θ_j`` times a
    weight ``<= 1``.  A flat stretch of a block then contributes at most
    ``β/(β-1)`` times ``(α ln 2)^β θ_J``, a geometric stretch at most
    ``1/(1 - 2^{-M})`` times it, and a run of short blocks (the power law) at
    most ``1/(1 - 2^{-α})`` times it.  The factor 2 covers the block where
    ``J`` falls.
    """
    lead = (alpha * math.log(2.0)) ** beta
    return 2.0 * lead * (beta / (beta - 1.0) + 1.0 / (1.0 - 2.0 ** (-M)) + 1.0 / (1.0 - 2.0 ** (-alpha)))


def power_law_constants(alpha, M):
    """Constants of the two strong conditions for ``θ = 2^{-jα}`` (infinite when they fail)."""
    fort_un = 1.0 / (1.0 - 2.0 ** (-(M - alpha)))
    gap = alpha - (M - 1)
    fort_deux = 1.0 / (1.0 - 2.0 ** (-gap)) if gap > 0 else math.inf
    return fort_un, fort_deux


def theta_properties_check(theta: ThetaProfile, beta: float = 2.0, J_range=None, strong=True,
                           slack=None) -> ThetaReport:
    """Measure the constants of the modulus properties of θ.

    Parameters
    ----------
    theta : ThetaProfile
    beta : float
        Exponent ``> 1`` of the second weak condition (natural logarithm).
    J_range : (int, int), optional
        Values of ``J`` at which the sums are compared; defaults to the whole
        profile.  Sums over ``j >= J`` stop at the last profile scale.
    strong : bool
        Also check the two strong conditions.
    slack : float, optional
        Multiplier applied to the power-law constants to form the strong
        tolerances; defaults to ``2^{M+1}``.

    Returns
    -------
    ThetaReport
        Conditions ``doubling``, ``faible_un``, ``faible_deux``,
        ``faible_trois`` and, if requested, ``fort_un``, ``fort_deux``.  Each
        carries the measured constant (the max over ``J`` of the ratio of the
        two sides), the tolerance it was compared with, and the ``J`` where the
        maximum occurs.
    """
    if beta <= 1:
        raise DomainError(f"beta must exceed 1, got {beta}")
    a, M = theta.alpha, theta.M
    js = theta.js.astype(float)
    lt = theta.log2_values
    if J_range is None:
        J_range = (int(theta.js[0]), int(theta.js[-1]))
    J_lo, J_hi = max(int(J_range[0]), int(theta.js[0]), 1), min(int(J_range[1]), int(theta.js[-1]))
    sel = (theta.js >= J_lo) & (theta.js <= J_hi)
    Js = js[sel]
    conds = {}

    # θ(2r) <= 2^M θ(r) and monotonicity, on adjacent dyadic pairs
    step = lt[:-1] - lt[1:]
    doubling = float(np.exp2(step.max())) if step.size else 1.0
    conds["doubling"] = ConditionResult(
        "doubling", bool(step.size == 0 or (step.max() <= M + REL_TOL and step.min() >= -REL_TOL)),
        doubling, 2.0**M, {"min_log2_step": float(step.min()) if step.size else 0.0},
    )

    # Σ_{j_1<=j<=J} 2^{Mj} θ_j <= C J 2^{MJ} θ_J
    pre = _log2_prefix_sums(M * js + lt)[sel]
    ratio1 = pre - (np.log2(Js) + M * Js + lt[sel])
    conds["faible_un"] = _max_result("faible_un", ratio1, Js, 2.0)

    # Σ_{j>=J} θ_j |ln θ_j|^β / j^β <= C J^β θ_J
    with np.errstate(divide="ignore"):
        log_ln = np.log2(np.abs(lt * math.log(2.0)))
    terms2 = lt + beta * log_ln - beta * np.log2(np.maximum(js, 1.0))
    terms2 = np.where(np.isfinite(terms2), terms2, -np.inf)
    suf2 = _log2_suffix_sums(terms2)[sel]
    ratio2 = suf2 - (beta * np.log2(Js) + lt[sel])
    conds["faible_deux"] = _max_result("faible_deux", ratio2, Js, weak_two_bound(a, M, beta))

    # 2^{-Mj} / θ_j -> 0; since θ_j >= 2^{-jα} the product with 2^{(M-α)j} is <= 1
    ratio3 = -M * js - lt
    scaled = ratio3 + (M - a) * js
    conds["faible_trois"] = ConditionResult(
        "faible_trois", bool(scaled.max() <= REL_TOL and ratio3[-1] < ratio3[0]),
        float(np.exp2(scaled.max())), 1.0, {"log2_ratio_first": float(ratio3[0]), "log2_ratio_last": float(ratio3[-1])},
    )

    if strong:
        s = 2.0 ** (M + 1) if slack is None else float(slack)
        c_un, c_deux = power_law_constants(a, M)
        ratio4 = _log2_prefix_sums(M * js + lt)[sel] - (M * Js + lt[sel])
        conds["fort_un"] = _max_result("fort_un", ratio4, Js, s * c_un)
        ratio5 = _log2_suffix_sums((M - 1) * js + lt)[sel] - ((M - 1) * Js + lt[sel])
        conds["fort_deux"] = _max_result("fort_deux", ratio5, Js, s * c_deux)
    return ThetaReport(float(a), int(M), float(beta), (J_lo, J_hi), conds)


def _max_result(name, log2_ratios, Js, tolerance):
    if log2_ratios.size == 0:
        return ConditionResult(name, True, 0.0, tolerance, {"argmax_J": None})
    i = int(np.argmax(log2_ratios))
    const = float(np.exp2(log2_ratios[i]))
    return ConditionResult(name, bool(const <= tolerance * (1 + REL_TOL)), const, tolerance,
                           {"argmax_J": int(Js[i])})


def doubly_exponential_sequence(alpha, ell0, n_terms, cap=None):
    """Heads ``j_1 = ell0``, ``j_{n+1} = floor(2^{j_n α}/(1-α) - j_n α)``.

    Stops early (returning fewer than ``n_terms`` heads) when the next head
    would exceed ``cap``.
    """
    seq = [int(ell0)]
    while len(seq) < n_terms:
        j = seq[-1]
        if j * alpha > 1000:
            break
        nxt = int(math.floor(2.0 ** (j * alpha) / (1.0 - alpha) - j * alpha))
        if cap is not None and nxt > cap:
            break
        if nxt <= j:
            raise DomainError(f"recursion is not increasing at j={j} for alpha={alpha}")
        seq.append(nxt)
    return seq
