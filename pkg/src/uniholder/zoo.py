"""Reference signals: Weierstrass sums, two lacunary constructions and gap pyramids.

``cex1``
    A wavelet series whose coefficients sit on three kinds of blocks driven by
    the doubly exponential heads ``j_{n+1} = [2^{j_n α}/(1-α) - j_n α]``.  It is
    uniformly irregular with an exponent below ``α`` yet admits weak-Hölder
    witnesses at ``α``.
``fabe``
    The lacunary sine series ``Σ_n Σ_{j_n < j <= j_{n+1}} min(2^{-j_n α},
    2^{j_{n+1}(1-α)} 2^{-j}) j^{-ε} sin(2^j π x)`` with ``j_n = floor(growth^n)``.
"""

from dataclasses import asdict, dataclass
from fractions import Fraction
import math
import warnings

import numpy as np

from .errors import DomainError, TruncationError
from .smoothness import SampledSignal
from .wavelets import daubechies
from .wavelets.meyer import TrigSeries
from .wavelets.pyramid import CoeffPyramid

FREQ_CAP = 30


@dataclass(frozen=True)
class Grid:
    """Sampling grid ``x0 + i * length / n``."""

    n: int = 2**16
    x0: float = 0.0
    length: float = 2.0
    extension: str = "periodic"

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)


# --------------------------------------------------------------------------
# Weierstrass


def weierstrass_terms(a: float, tol: float = 1e-12) -> int:
    """Smallest term count with ``a^n < tol``."""
    return int(math.floor(math.log(tol) / math.log(a))) + 1


def weierstrass_exponent(a: float, b: float) -> float:
    """Common index ``-log a / log b`` of the sum (capped at 1 when ``ab <= 1``)."""
    return min(1.0, -math.log(a) / math.log(b))


def _exact_phase_mod2(mult: int, x: np.ndarray):
    """``(mult * x) mod 2`` computed exactly for dyadic-rational samples, or None."""
    fr = [Fraction(float(v)) for v in (x[0], x[1] - x[0])]
    den = max(f.denominator for f in fr)
    num0, step = fr[0] * den, fr[1] * den
    if num0.denominator != 1 or step.denominator != 1:
        return None
    m = int(num0) + int(step) * np.arange(x.size, dtype=object)
    if not np.array_equal(np.asarray(m / den, dtype=float), x):
        return None
    mod = 2 * den
    if mod * (abs(int(num0)) + abs(int(step)) * x.size) >= 2**62:
        return None
    m64 = np.asarray(m, dtype=np.int64) % mod
    r = (m64 * (mult % mod)) % mod
    return r.astype(float) / den


def weierstrass_function(a: float, b: int, n_terms: int):
    """Callable ``x ↦ Σ_{n < n_terms} a^n cos(b^n π x)`` (floating-point phases)."""

    def f(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for n in range(n_terms):
            out += a**n * np.cos(float(b) ** n * np.pi * x)
        return out

    return f


def weierstrass(a: float, b: int = 2, n_terms: int | None = None, grid: Grid = Grid()) -> SampledSignal:
    """Sample ``Σ_{n < n_terms} a^n cos(b^n π x)``.

    Phases ``b^n x mod 2`` are reduced exactly in integer arithmetic on dyadic
    grids, so high-order terms are sampled without loss of precision.

    Parameters
    ----------
    a : float
        Amplitude ratio in ``(0, 1)``.
    b : int
        Frequency ratio, at least 2.
    n_terms : int, optional
        Defaults to the smallest count with ``a^{n_terms} < 1e-12``.
    grid : Grid
    """
    if not 0 < a < 1:
        raise DomainError(f"a must lie in (0, 1), got {a}")
    if int(b) != b or b < 2:
        raise DomainError(f"b must be an integer >= 2, got {b}")
    b = int(b)
    if a * b <= 1:
        warnings.warn(f"a*b = {a * b:.3g} <= 1: the sum is C^1 and both indices are >= 1", stacklevel=2)
    if n_terms is None:
        n_terms = weierstrass_terms(a)
    if n_terms < 1:
        raise DomainError("n_terms must be >= 1")
    x = grid.x
    out = np.zeros(grid.n)
    for n in range(n_terms):
        phase = _exact_phase_mod2(b**n, x)
        if phase is None:
            phase = np.mod(float(b) ** n * x, 2.0)
        out += a**n * np.cos(np.pi * phase)
    return SampledSignal(out, grid.x0, grid.dx, grid.extension)


# --------------------------------------------------------------------------
# cex1


@dataclass(frozen=True)
class Cex1Params:
    """Parameters of the three-block wavelet series.

    Attributes
    ----------
    alpha, epsilon : float in (0, 1)
    ell0 : int
        ``j_1 = ell0``; ``supp ψ`` must fit in ``[-2^{ell0}, 2^{ell0}]``.
    truncation_n : int
        Blocks ``n = 1..truncation_n`` are kept (0 gives the zero function).
    wavelet_N : int
        Daubechies order, at least 4.
    freq_cap : int
        Largest scale ``ℓ`` that may be used.
    clip : bool
        Allow blocks whose last part reaches past ``freq_cap`` and drop the
        scales above the cap instead of refusing the truncation.
    """

    alpha: float
    epsilon: float
    ell0: int = 3
    truncation_n: int = 2
    wavelet_N: int = 4
    freq_cap: int = FREQ_CAP
    clip: bool = False

    def __post_init__(self):
        for name in ("alpha", "epsilon"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise DomainError(f"{name} must lie in (0, 1), got {v}")
        if self.ell0 < 1:
            raise DomainError("ell0 must be a positive integer")
        if self.truncation_n < 0:
            raise DomainError("truncation_n must be >= 0")
        if self.wavelet_N < 4:
            raise DomainError("cex1 needs a Daubechies wavelet with N >= 4")


def cex1_beta(alpha: float, epsilon: float) -> float:
    """Irregularity exponent ``max(αε, αε / ((1-α) + αε))`` of the cex1 series."""
    if not (0 < alpha < 1 and 0 < epsilon < 1):
        raise DomainError("alpha and epsilon must lie in (0, 1)")
    ae = alpha * epsilon
    return max(ae, ae / ((1.0 - alpha) + ae))


def cex1_exact_beta(alpha: Fraction, epsilon: Fraction) -> Fraction:
    """:func:`cex1_beta` in rational arithmetic."""
    alpha, epsilon = Fraction(alpha), Fraction(epsilon)
    ae = alpha * epsilon
    return max(ae, ae / ((1 - alpha) + ae))


def cex1_sequences(alpha: float, ell0: int, count: int):
    """Heads ``j_1..j_count`` and ``j_{n,α} = floor(2^{j_n α})``.

    Raises
    ------
    TruncationError
        When ``2^{j_n α}`` would overflow a double; ``feasible`` is the number
        of heads that could be formed.
    """
    heads = [int(ell0)]
    while len(heads) < count:
        j = heads[-1]
        if j * alpha > 1000:
            raise TruncationError(f"2^(j_n alpha) overflows at j_n = {j}", feasible=len(heads))
        heads.append(int(math.floor(2.0 ** (j * alpha) / (1.0 - alpha) - j * alpha)))
        if heads[-1] <= j:
            raise DomainError(f"the recursion stalls at j_n = {j}; increase ell0")
    alphas = []
    for j in heads:
        if j * alpha > 1000:
            raise TruncationError(f"2^(j_n alpha) overflows at j_n = {j}", feasible=len(alphas))
        alphas.append(int(math.floor(2.0 ** (j * alpha))))
    return heads, alphas


def _cex1_layout(p: Cex1Params):
    """Heads, feasibility and the deepest frequency a truncation needs."""
    if p.truncation_n == 0:
        return [], [], 0
    try:
        heads, alphas = cex1_sequences(p.alpha, p.ell0, p.truncation_n + 1)
    except TruncationError as exc:
        raise TruncationError(str(exc), feasible=max(0, exc.feasible - 1)) from None
    feasible = 0
    for n in range(1, p.truncation_n + 1):
        if max(alphas[n - 1], heads[n], alphas[n]) <= p.freq_cap:
            feasible = n
        else:
            break
    return heads, alphas, feasible


@dataclass(frozen=True)
class Cex1Term:
    """One wavelet ``coef · ψ_c(2^ℓ (x - 2^{-(j-ell0)}))``.

    ``ψ_c(t) = σ ψ(t + t_c)`` with ``σ`` the sign of ``ψ(t_c)``, so that
    ``ψ_c(0) > 0``; ``coef`` already includes ``σ``.
    """

    block: int
    part: str
    j: int
    ell: int
    coef: float


def cex1_shift(N: int = 4):
    """Integer ``t_c`` maximising ``|ψ(t_c)|`` and the value ``ψ(t_c)``.

    The construction needs a wavelet that does not vanish at the probe point;
    Daubechies wavelets vanish at 0, so the integer translate ``ψ(· + t_c)``
    (still an element of the same basis) is used instead.
    """
    h = daubechies.daubechies_taps(N)
    _, _, psi = daubechies.cascade(h, 0)
    tc = int(np.argmax(np.abs(psi)))
    return tc, float(psi[tc])


def cex1_terms(p: Cex1Params):
    """Enumerate the terms of the truncated series.

    Returns
    -------
    terms : list of Cex1Term
    info : dict
        Heads, ``j_{n,α}``, feasible depth and whether scales were clipped.

    Raises
    ------
    TruncationError
        If ``truncation_n`` needs scales past ``freq_cap`` and ``clip`` is off.
    """
    heads, alphas, feasible = _cex1_layout(p)
    if p.truncation_n > feasible and not p.clip:
        raise TruncationError(
            f"truncation_n={p.truncation_n} needs scales beyond 2^{p.freq_cap}; "
            f"at most {feasible} block(s) fit", feasible=feasible)
    a, e, cap = p.alpha, p.epsilon, p.freq_cap
    sgn = math.copysign(1.0, cex1_shift(p.wavelet_N)[1])
    terms, clipped = [], False
    for n in range(1, p.truncation_n + 1):
        jn, jna, jn1, jn1a = heads[n - 1], alphas[n - 1], heads[n], alphas[n]
        for j in range(jn, jna + 1):
            for ell in range(j + 2, jna + 1):
                terms.append(Cex1Term(n, "a", j, ell, sgn * 2.0 ** (-jn * a) * ell ** (-e)))
        for j in range(jna + 1, jn1):
            for ell in range(j + 2, jn1 + 1):
                terms.append(Cex1Term(n, "b", j, ell, sgn * 2.0 ** (jn1 * (1 - a) - ell) * ell ** (-e)))
            top = jn1a
            if top > cap:
                top, clipped = cap, True
            for ell in range(jn1, top + 1):
                terms.append(Cex1Term(n, "c", j, ell, sgn * 2.0 ** (-jn1 * a) * ell ** (-e)))
    info = {
        "j_n": heads,
        "j_n_alpha": alphas,
        "feasible_n": feasible,
        "clipped": clipped,
        "freq_cap": cap,
    }
    return terms, info


class _PsiTable:
    """Linear interpolation in a cascade table; exact on its dyadic nodes."""

    def __init__(self, N, resolution=12):
        self.t, _, self.psi = daubechies.cascade(daubechies.daubechies_taps(N), resolution)

    def __call__(self, t):
        return np.interp(t, self.t, self.psi, left=0.0, right=0.0)


def cex1_evaluate(p: Cex1Params, x, resolution=12):
    """Evaluate the truncated series at arbitrary points."""
    terms, _ = cex1_terms(p)
    tc, _ = cex1_shift(p.wavelet_N)
    psi = _PsiTable(p.wavelet_N, resolution)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for term in terms:
        centre = 2.0 ** (p.ell0 - term.j)
        out += term.coef * psi(np.ldexp(x - centre, term.ell) + tc)
    return out


def cex1_block_values(p: Cex1Params, x, resolution=12):
    """Per-``j`` contributions ``f_j(x)``; keys are the ``j`` indices."""
    terms, _ = cex1_terms(p)
    tc, _ = cex1_shift(p.wavelet_N)
    psi = _PsiTable(p.wavelet_N, resolution)
    x = np.asarray(x, dtype=float)
    blocks = {}
    for term in terms:
        centre = 2.0 ** (p.ell0 - term.j)
        vals = term.coef * psi(np.ldexp(x - centre, term.ell) + tc)
        blocks[term.j] = blocks.get(term.j, 0.0) + vals
    return blocks


def cex1_signal(p: Cex1Params, grid: Grid = Grid(n=2**16, x0=-0.5, length=2.0)) -> SampledSignal:
    """Render the truncated series on a grid.

    On a dyadic grid with step ``2^{-G}`` the cascade table holds every needed
    value of ψ exactly when its resolution is at least ``G``.
    """
    res = max(12, int(math.ceil(-math.log2(grid.dx))))
    values = cex1_evaluate(p, grid.x, resolution=res)
    return SampledSignal(values, grid.x0, grid.dx, grid.extension)


def cex1_pyramid(p: Cex1Params, j_min: int = 0) -> CoeffPyramid:
    """Exact L∞ coefficients of the series in the basis ``ψ(2^ℓ x - k)``.

    The term at ``(j, ℓ)`` is the basis element with
    ``k = 2^{ℓ - j + ell0} - t_c``; coinciding terms are added.
    """
    terms, info = cex1_terms(p)
    tc, psi_tc = cex1_shift(p.wavelet_N)
    top = max([t.ell for t in terms], default=j_min)
    j_max = max(top, j_min)
    per_scale = [dict() for _ in range(j_max - j_min + 1)]
    for t in terms:
        if t.ell < j_min:
            continue
        k = 2 ** (t.ell - t.j + p.ell0) - tc
        slot = per_scale[t.ell - j_min]
        slot[k] = slot.get(k, 0.0) + t.coef
    coeffs = [np.array([d[k] for k in sorted(d)]) for d in per_scale]
    positions = [np.array(sorted(d), dtype=np.int64) for d in per_scale]
    meta = {"generator": "cex1", "params": asdict(p), "t_c": tc, "psi_t_c": psi_tc, **info,
            "wavelet": f"daubechies:{p.wavelet_N}"}
    return CoeffPyramid(j_min, j_max, coeffs, positions, meta=meta)


def cex1_check_support(p: Cex1Params) -> dict:
    """Numerical checks of the construction's assumptions.

    Returns ``psi_tc`` (must exceed 1e-6 in magnitude), whether the shifted
    support ``[-t_c, L-1-t_c]`` fits in ``[-2^{ell0}, 2^{ell0}]``, and the
    support interval of every ``f_j``.
    """
    tc, val = cex1_shift(p.wavelet_N)
    L = 2 * p.wavelet_N
    lo, hi = -tc, L - 1 - tc
    terms, _ = cex1_terms(p)
    intervals = {}
    for t in terms:
        centre = 2.0 ** (p.ell0 - t.j)
        a, b = centre + lo * 2.0 ** -t.ell, centre + hi * 2.0 ** -t.ell
        cur = intervals.get(t.j)
        intervals[t.j] = (a, b) if cur is None else (min(cur[0], a), max(cur[1], b))
    ordered = sorted(intervals.items(), key=lambda kv: kv[1][0])
    disjoint = all(ordered[i][1][1] < ordered[i + 1][1][0] for i in range(len(ordered) - 1))
    return {
        "t_c": tc,
        "psi_tc": val,
        "psi_nonzero": abs(val) > 1e-6,
        "support_fits": max(abs(lo), abs(hi)) <= 2**p.ell0,
        "intervals": {int(j): [float(a), float(b)] for j, (a, b) in intervals.items()},
        "disjoint": disjoint,
    }


def cex1_probe_families(p: Cex1Params):
    """Classify probe scales ``j`` by the lower bound that applies there.

    Returns a list of ``(j, block, family, bound)`` where ``family`` is
    ``"a"`` (``2^{-jαε}``), ``"b"`` (``2^{-jβ'} j^{-ε}``) or ``"c"``
    (``2^{-jβ'}``) with ``β' = αε / ((1-α) + αε)``.
    """
    heads, alphas, _ = _cex1_layout(p)
    a, e = p.alpha, p.epsilon
    bp = a * e / ((1 - a) + a * e)
    out = []
    for n in range(1, p.truncation_n + 1):
        jn, jna, jn1 = heads[n - 1], alphas[n - 1], heads[n]
        for j in range(jn, jna + 1):
            out.append((j, n, "a", 2.0 ** (-j * a * e)))
        for j in range(jna + 1, jn1):
            if j <= ((1 - a) + a * e) * jn1:
                out.append((j, n, "b", 2.0 ** (-j * bp) * j ** (-e)))
            else:
                out.append((j, n, "c", 2.0 ** (-j * bp)))
    return out


def cex1_probes(p: Cex1Params, resolution=12):
    """``f(2^{-(j - ell0)})`` at each probe with its bound and inner-sum count.

    Returns
    -------
    list of dict
        Keys ``j``, ``block``, ``family``, ``value``, ``bound``, ``ratio``,
        ``n_terms`` (terms of ``f_j``; 0 means the construction's inner sum is
        empty there) and ``f_at_zero``.
    """
    terms, _ = cex1_terms(p)
    counts = {}
    for t in terms:
        counts[t.j] = counts.get(t.j, 0) + 1
    probes = cex1_probe_families(p)
    xs = np.array([2.0 ** (p.ell0 - j) for j, *_ in probes] + [0.0])
    vals = cex1_evaluate(p, xs, resolution)
    f0 = float(vals[-1])
    rows = []
    for (j, n, fam, bound), v in zip(probes, vals[:-1]):
        rows.append({
            "j": j, "block": n, "family": fam, "value": float(v), "bound": bound,
            "ratio": float(v / bound), "n_terms": counts.get(j, 0), "f_at_zero": f0,
        })
    return rows


# --------------------------------------------------------------------------
# fabe


@dataclass(frozen=True)
class FabeParams:
    """Parameters of the lacunary sine series.

    ``j_n = floor(beta_growth^n)`` for ``n = 0..n_max+1``; blocks ``n = 0..n_max``
    are summed and frequencies above ``2^{j_cap}`` are dropped.
    """

    alpha: float
    epsilon: float
    beta_growth: float = 2.0
    n_max: int = 4
    j_cap: int = FREQ_CAP

    def __post_init__(self):
        for name in ("alpha", "epsilon"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise DomainError(f"{name} must lie in (0, 1), got {v}")
        if not self.beta_growth > 1:
            raise DomainError("beta_growth must exceed 1")
        if self.n_max < 0:
            raise DomainError("n_max must be >= 0")
        if not 1 <= self.j_cap <= FREQ_CAP:
            raise DomainError(f"j_cap must lie in [1, {FREQ_CAP}]")
        heads = self.heads
        if any(b <= a for a, b in zip(heads, heads[1:])):
            raise DomainError(f"floor(growth^n) is not strictly increasing: {heads}")

    @property
    def heads(self):
        """``[j_0, ..., j_{n_max+1}]``."""
        return [int(math.floor(self.beta_growth**n + 1e-12)) for n in range(self.n_max + 2)]


def fabe_series(p: FabeParams):
    """TrigSeries of the truncated sum plus a truncation report.

    The report lists ``j_0`` separately and ``j_n`` for ``n = 1..n_max+1``,
    the upper ends of the summed blocks.
    """
    a, e = p.alpha, p.epsilon
    heads = p.heads
    exps, amps = [], []
    for n in range(p.n_max + 1):
        jn, jn1 = heads[n], heads[n + 1]
        for j in range(jn + 1, jn1 + 1):
            if j > p.j_cap:
                continue
            amps.append(min(2.0 ** (-jn * a), 2.0 ** (jn1 * (1 - a) - j)) * j ** (-e))
            exps.append(j)
    truncated = heads[-1] > p.j_cap
    if truncated:
        warnings.warn(f"fabe: frequencies above 2^{p.j_cap} dropped (j_n reaches {heads[-1]})", stacklevel=2)
    info = {"j_0": heads[0], "j_n": heads[1:], "truncated": truncated, "j_cap": p.j_cap}
    return TrigSeries.sines(exps, amps), info


def fabe_signal(p: FabeParams, grid: Grid = Grid()):
    """Sample the truncated series; returns ``(SampledSignal, TrigSeries)``."""
    series, _ = fabe_series(p)
    x = grid.x
    out = np.zeros(grid.n)
    for j, amp in zip(series.freq_exps, series.amplitudes):
        phase = _exact_phase_mod2(2 ** int(j), x)
        if phase is None:
            phase = np.mod(np.ldexp(x, int(j)), 2.0)
        out += amp * np.sin(np.pi * phase)
    return SampledSignal(out, grid.x0, grid.dx, grid.extension), series


def fabe_block_bound(p: FabeParams, ell: int) -> float:
    """``min(2^{-j_n α}, 2^{j_{n+1}(1-α)} 2^{-ℓ})`` for ``j_n <= ℓ < j_{n+1}``."""
    heads = p.heads
    n = int(np.searchsorted(heads, ell, side="right")) - 1
    if n < 0 or n + 1 >= len(heads):
        raise DomainError(f"scale {ell} is outside the blocks {heads}")
    return min(2.0 ** (-heads[n] * p.alpha), 2.0 ** (heads[n + 1] * (1 - p.alpha) - ell))


# --------------------------------------------------------------------------
# gap pyramids


def _pattern(block_pattern, js):
    if isinstance(block_pattern, str):
        if block_pattern == "all":
            return np.ones(js.size, dtype=bool)
        if block_pattern == "alternating":
            return js % 2 == 0
        if block_pattern == "dyadic":
            return np.array([j > 0 and (j & (j - 1)) == 0 for j in js])
        raise DomainError(f"unknown block pattern {block_pattern!r}")
    alive = np.asarray(block_pattern, dtype=bool).ravel()
    if alive.size != js.size:
        raise DomainError(f"pattern has {alive.size} entries for {js.size} scales")
    return alive


def gap_pyramid(envelope_alpha: float, M: int, block_pattern, j_max: int, j_min: int = 1) -> CoeffPyramid:
    """Pyramid with ``s_j = 2^{-j α}`` on alive scales and 0 on dead ones.

    Parameters
    ----------
    envelope_alpha : float
    M : int
        Recorded for downstream criterion evaluation.
    block_pattern : {"all", "alternating", "dyadic"} or sequence of bool
        ``alternating`` keeps even scales, ``dyadic`` keeps ``j = 2^n``.
    j_max, j_min : int
    """
    js = np.arange(int(j_min), int(j_max) + 1)
    alive = _pattern(block_pattern, js)
    coeffs = [np.array([2.0 ** (-j * envelope_alpha)]) if ok else np.zeros(0) for j, ok in zip(js, alive)]
    meta = {"generator": "gap-pyramid", "envelope_alpha": envelope_alpha, "M": int(M),
            "pattern": block_pattern if isinstance(block_pattern, str) else [bool(v) for v in alive]}
    return CoeffPyramid(int(j_min), int(j_max), coeffs, meta=meta)
