"""Weak-Hölder witness search and its finite-scale equivalence with the criterion.

A witness for ``(α, M, C)`` on the stored scales ``[j_lo, j_hi]`` is a strictly
increasing ``(j_1, ..., j_K)`` inside that range such that

* ``s_j <= C 2^{(M-α) j_1} 2^{-jM}`` for ``j_lo <= j < j_1`` (a virtual head
  at ``-inf`` leaves only this constraint),
* ``s_j <= C min(2^{-j_n α}, 2^{(M-α) j_{n+1}} 2^{-jM})`` for
  ``j_n <= j < j_{n+1}``,
* ``s_j <= C 2^{-j_K α}`` for ``j_K <= j <= j_hi`` (a virtual head at
  ``+inf`` leaves only this constraint).

Under this convention a witness exists exactly when some scale ``J`` has
``crit(J) <= C 2^{-Jα}``, which is what :func:`criterion_equivalence_check`
verifies.
"""

from dataclasses import dataclass, field

import numpy as np

from .estimators import irregularity_criterion
from .theta import ScaleSequence

REL_TOL = 1e-12
DEFAULT_C_GRID = tuple(2.0**e for e in range(-10, 5))


def _log2_sups(pyramid):
    with np.errstate(divide="ignore"):
        return np.log2(np.asarray(pyramid.sup_per_scale, dtype=float))


class _Constraints:
    """Block admissibility in log2 form, precomputed for every pair of heads."""

    def __init__(self, pyramid, alpha, M, C):
        if C <= 0:
            raise ValueError(f"C must be positive, got {C}")
        js = pyramid.js.astype(float)
        ls = _log2_sups(pyramid)
        a, M = float(alpha), int(M)
        lc = np.log2(C) + np.log2(1.0 + REL_TOL)
        n = js.size
        self.js = js
        # s_j + M j, the quantity the second branch bounds
        v = ls + M * js
        suffix_max = np.maximum.accumulate(ls[::-1])[::-1]
        self.tail_ok = suffix_max <= lc - a * js
        prefix_max = np.concatenate([[-np.inf], np.maximum.accumulate(v)[:-1]])
        self.head_ok = prefix_max <= lc + (M - a) * js
        # adm[i, k]: block [j_i, j_k) admissible
        adm = np.zeros((n, n), dtype=bool)
        for i in range(n - 1):
            flat = np.logical_and.accumulate(ls[i:-1] <= lc - a * js[i])
            steep = np.maximum.accumulate(v[i:-1]) <= lc + (M - a) * js[i + 1 :]
            adm[i, i + 1 :] = flat & steep
        self.adm = adm

    def block_ok(self, i, k):
        """Block ``[j_i, j_k)`` is admissible."""
        return bool(self.adm[i, k])


def weak_holder_witness(pyramid, alpha, M, C):
    """Search a witness sequence for ``(α, M, C)``; None if there is none.

    The search is exact: a backward pass marks the heads from which the
    remaining scales can be covered, then the sequence is built forward taking,
    at each head, the largest admissible next head (longest blocks first).
    """
    con = _Constraints(pyramid, alpha, M, C)
    n = con.js.size
    reach = con.tail_ok.copy()
    nxt = np.full(n, -1)
    for i in range(n - 1, -1, -1):
        if reach[i]:
            continue
        cand = np.nonzero(reach[i + 1 :] & con.adm[i, i + 1 :])[0]
        if cand.size:
            reach[i] = True
            nxt[i] = i + 1 + int(cand[-1])
    starts = np.nonzero(reach & con.head_ok)[0]
    if starts.size == 0:
        return None
    i = int(starts[0])
    seq = [i]
    while not con.tail_ok[i]:
        i = int(nxt[i])
        seq.append(i)
    return ScaleSequence([int(con.js[k]) for k in seq])


def check_witness(pyramid, seq, alpha, M, C) -> bool:
    """Whether ``seq`` satisfies every block constraint on the stored scales."""
    con = _Constraints(pyramid, alpha, M, C)
    idx = [int(j) - pyramid.j_min for j in seq]
    if not idx or idx[0] < 0 or idx[-1] >= con.js.size:
        return False
    if any(b <= a for a, b in zip(idx, idx[1:])):
        return False
    if not con.head_ok[idx[0]] or not con.tail_ok[idx[-1]]:
        return False
    return all(con.block_ok(a, b) for a, b in zip(idx, idx[1:]))


def fitted_criterion_constant(pyramid, alpha, M, j0=None):
    """``C' = min_{j >= j0} crit(j) 2^{jα}``: the best constant in ``crit(j) >= C' 2^{-jα}``."""
    trace = irregularity_criterion(pyramid, M)
    sel = trace.js >= (pyramid.j_min if j0 is None else int(j0))
    with np.errstate(divide="ignore"):
        scaled = np.log2(trace.value[sel]) + alpha * trace.js[sel]
    return float(np.exp2(scaled.min())) if scaled.size else 0.0


@dataclass
class EquivalenceReport:
    """Witness outcomes on a C grid against the fitted criterion constant."""

    alpha: float
    M: int
    c_grid: list
    witness_found: list
    witnesses: list
    fitted_c_prime: float
    agreement: list
    disagreements: list = field(default_factory=list)

    @property
    def all_agree(self) -> bool:
        return not self.disagreements

    @property
    def some_c_fails(self) -> bool:
        """No witness for at least one C of the grid."""
        return not all(self.witness_found)

    @property
    def lower_bound_holds(self) -> bool:
        """Criterion bounded below by ``C' 2^{-jα}`` with ``C'`` above the grid minimum."""
        return self.fitted_c_prime > min(self.c_grid) * (1 + REL_TOL)

    @property
    def witnessing_c(self):
        """Smallest grid constant with a witness, if any."""
        found = [c for c, ok in zip(self.c_grid, self.witness_found) if ok]
        return min(found) if found else None

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "M": self.M,
            "c_grid": self.c_grid,
            "witness_found": self.witness_found,
            "witnesses": [None if w is None else w.to_list() for w in self.witnesses],
            "fitted_c_prime": self.fitted_c_prime,
            "witnessing_c": self.witnessing_c,
            "all_agree": self.all_agree,
            "disagreements": self.disagreements,
        }


def criterion_equivalence_check(pyramid, alpha, M, C_grid=DEFAULT_C_GRID, j0=None) -> EquivalenceReport:
    """Compare witness search with the criterion lower bound for each ``C`` in a grid.

    For every ``C``: a witness exists iff ``C' <= C``, where ``C'`` is
    :func:`fitted_criterion_constant` from the first stored scale (or ``j0``).
    Each returned witness is also re-validated with :func:`check_witness`.
    """
    grid = [float(c) for c in C_grid]
    if not grid:
        raise ValueError("C_grid must be nonempty")
    c_prime = fitted_criterion_constant(pyramid, alpha, M, j0)
    found, wits, agree, bad = [], [], [], []
    for C in grid:
        w = weak_holder_witness(pyramid, alpha, M, C)
        ok = w is not None
        predicted = c_prime <= C * (1 + REL_TOL)
        consistent = ok == predicted and (w is None or check_witness(pyramid, w, alpha, M, C))
        found.append(ok)
        wits.append(w)
        agree.append(consistent)
        if not consistent:
            bad.append({"C": C, "witness": ok, "criterion_predicts_witness": predicted})
    return EquivalenceReport(float(alpha), int(M), grid, found, wits, c_prime, agree, bad)
