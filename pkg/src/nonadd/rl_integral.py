"""Scalar integration against non-additive set functions.

On finite spaces and on the naturals the singleton partition is the finest
countable partition, so it is the maximum of the refinement order and the
Riemann-Lebesgue net is eventually constant at its tagged sum.  The RL integral
is therefore evaluated exactly as ``sum f(s) nu({s})`` (a closed-form series on
the naturals).  The Gould integral only admits finite partitions, so on the
naturals it is explored with budgeted refinement chains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SeriesDiverges
from .ground import EpSet, ep_extrema_of, mask_points, restrict
from .partition import Partition, common_refinement, prefix_singletons, refine_stream, residue_split
from .setfunc import SetFunction, subset_sums, variation

EXACT = "exact"
CONVERGED = "converged"
DIVERGED = "diverged"
NOT_INTEGRABLE = "not_integrable"
BUDGET_EXHAUSTED = "budget_exhausted"

GOULD_TOL = 1e-9
DIVERGENCE_STEP = 0.5
DIVERGENCE_CHAIN = 5


@dataclass(frozen=True)
class TraceRow:
    partition_index: int
    block_count: float
    sum_lo: float
    sum_hi: float


@dataclass(frozen=True)
class IntegralReport:
    value: float | None
    status: str
    witness: object = None
    trace: tuple = ()
    achieved: float | None = None
    method: str = "rl"

    @property
    def integrable(self) -> bool:
        return self.status in (EXACT, CONVERGED)

    def require(self) -> float:
        """The value, or raise if the integral does not exist."""
        if not self.integrable:
            w = self.witness or {}
            raise SeriesDiverges(
                f"{self.method} integral is {self.status}", partial_sums=w.get("partial_sums", ()) if isinstance(w, dict) else ()
            )
        return self.value


# --------------------------------------------------------------------------- #
# helpers


def _restricted(nu: SetFunction, f, E):
    sp = nu.space
    if E is None:
        return f
    return restrict(sp, f, sp.check_set(E))


def singleton_masses(nu: SetFunction):
    sp = nu.space
    if sp.is_finite:
        return np.array([nu.evaluate(1 << i) for i in range(sp.n)])
    return nu.singletons()


def block_range(f, nu: SetFunction, block) -> tuple[float, float]:
    """Range of ``f(tag) * nu(block)`` over tags in the block."""
    w = nu.evaluate(block)
    if w == 0.0:
        # zero-mass blocks contribute nothing whatever the tag
        return 0.0, 0.0
    ext = ep_extrema_of(f, block)
    return ext.inf * w, ext.sup * w


def partition_sum_range(f, nu: SetFunction, P: Partition) -> tuple[float, float]:
    """Smallest and largest tagged sum over all tag choices (tail singletons included)."""
    lo, hi = [], []
    for b in P.blocks:
        a, c = block_range(f, nu, b)
        lo.append(a)
        hi.append(c)
    if P.tail and not P.remainder.is_empty():
        t = _series(f, nu, P.remainder)
        lo.append(t)
        hi.append(t)
    return math.fsum(lo), math.fsum(hi)


def tagged_sum(f, nu: SetFunction, tagged) -> float:
    P = tagged.partition
    terms = [float(f[t] if nu.space.is_finite else f(t)) * nu.evaluate(b) for b, t in zip(P.blocks, tagged.tags)]
    if P.tail and not P.remainder.is_empty():
        terms.append(_series(f, nu, P.remainder))
    return math.fsum(terms)


def _series(f, nu: SetFunction, E: EpSet) -> float:
    return (f * singleton_masses(nu)).series_sum(E)


# --------------------------------------------------------------------------- #
# integrals


def rl_integrate(f, nu: SetFunction, E=None) -> IntegralReport:
    """Riemann-Lebesgue integral of ``f`` over ``E`` (default: the whole space)."""
    sp = nu.space
    E = sp.full() if E is None else sp.check_set(E)
    if sp.is_finite:
        f = np.asarray(f, dtype=float)
        pts = mask_points(E)
        value = math.fsum(float(f[i]) * nu.evaluate(1 << i) for i in pts)
        row = TraceRow(0, sp.n, value, value)
        return IntegralReport(value, EXACT, trace=(row,))
    prod = f * singleton_masses(nu)
    try:
        value = prod.series_sum(E)
    except SeriesDiverges as exc:
        return IntegralReport(
            None,
            NOT_INTEGRABLE,
            witness={"reason": str(exc), "partial_sums": list(exc.partial_sums)},
        )
    return IntegralReport(value, EXACT, trace=(TraceRow(0, math.inf, value, value),))


def birkhoff_simple_integrate(f, nu: SetFunction, E=None, horizon: int = 64) -> IntegralReport:
    """Birkhoff simple integral over the canonical enumeration of singleton blocks.

    The partial sums ``S_n`` are traced up to ``horizon``; the value ``b`` is accepted
    when ``limsup |S_n - b|`` vanishes, which holds exactly because the remainder
    of the closed-form series tends to 0.
    """
    sp = nu.space
    E = sp.full() if E is None else sp.check_set(E)
    rl = rl_integrate(f, nu, E)
    if not rl.integrable:
        return IntegralReport(None, rl.status, witness=rl.witness, method="birkhoff")
    if sp.is_finite:
        pts = mask_points(E)
        terms = [float(f[i]) * nu.evaluate(1 << i) for i in pts]
    else:
        prod = (f * singleton_masses(nu)).restrict(E)
        terms = [prod(n) for n in range(horizon)]
    trace = []
    for k in range(1, len(terms) + 1):
        s = math.fsum(terms[:k])
        trace.append(TraceRow(k - 1, k, s, s))
    if sp.is_finite:
        gap = abs(math.fsum(terms) - rl.value)
    else:
        # closed-form remainder past the horizon
        tail = (f * singleton_masses(nu)).series_sum(E & EpSet.tail(horizon))
        gap = abs(math.fsum(terms) + tail - rl.value)
    return IntegralReport(rl.value, EXACT, trace=tuple(trace), achieved=gap, method="birkhoff")


def _divergence_probe(f, nu, chain_len, step, need):
    rows = []
    for k in range(1, chain_len + 1):
        P = residue_split(k)
        lo, hi = partition_sum_range(f, nu, P)
        rows.append((P, lo, hi))
    best = None
    for sign in (1, -1):
        run = 1
        start = 0
        for i in range(1, len(rows)):
            a = rows[i - 1][1] if sign > 0 else rows[i - 1][2]
            b = rows[i][1] if sign > 0 else rows[i][2]
            if sign * (b - a) >= step:
                run += 1
            else:
                run = 1
                start = i
            if run >= need:
                best = (start, sign)
        if best:
            break
    return rows, best


def gould_integrate(
    f,
    nu: SetFunction,
    E=None,
    budget: int = 64,
    tol: float = GOULD_TOL,
    step: float = DIVERGENCE_STEP,
    chain: int = DIVERGENCE_CHAIN,
    probe: int = 10,
    depth: int = 3,
) -> IntegralReport:
    """Gould integral: limit of finite tagged sums along the refinement net."""
    sp = nu.space
    g = _restricted(nu, f, E)
    if sp.is_finite:
        g = np.asarray(g, dtype=float)
        trace = []
        P = None
        for i, P in enumerate(refine_stream(sp, "singleton-first", budget=max(budget, sp.n))):
            lo, hi = partition_sum_range(g, nu, P)
            trace.append(TraceRow(i, len(P.blocks), lo, hi))
        # the stream ends at the singleton partition, the top of the net
        value = math.fsum(float(g[i]) * nu.evaluate(1 << i) for i in range(sp.n))
        return IntegralReport(value, EXACT, trace=tuple(trace), method="gould")

    rows, div = _divergence_probe(g, nu, min(probe, budget), step, chain)
    trace = [TraceRow(i, len(P.blocks), lo, hi) for i, (P, lo, hi) in enumerate(rows)]
    if div is not None:
        start, sign = div
        witness = {
            "kind": "unbounded_chain",
            "direction": "increasing" if sign > 0 else "decreasing",
            "chain": [
                {"blocks": [str(b) for b in P.blocks], "block_count": len(P.blocks), "sum_lo": lo, "sum_hi": hi}
                for P, lo, hi in rows
            ],
        }
        return IntegralReport(None, DIVERGED, witness=witness, trace=tuple(trace), method="gould")

    # convergence search: prefix-singleton partitions and their residue refinements
    levels = []
    for k in range(budget):
        base = prefix_singletons(k)
        rngs = [partition_sum_range(g, nu, base)]
        for j in range(2, depth + 2):
            rngs.append(partition_sum_range(g, nu, common_refinement(base, residue_split(j))))
        levels.append((k, rngs))
        trace.append(TraceRow(len(trace), len(base.blocks), rngs[0][0], rngs[0][1]))
        lo_all = [r[0] for _, rs in levels[-5:] for r in rs]
        hi_all = [r[1] for _, rs in levels[-5:] for r in rs]
        if len(levels) >= 5 and max(hi_all) - min(lo_all) <= tol:
            value = 0.5 * (rngs[0][0] + rngs[0][1])
            return IntegralReport(
                value,
                CONVERGED,
                trace=tuple(trace),
                achieved=max(hi_all) - min(lo_all),
                method="gould",
            )
    # look for two fine partitions whose sums stay apart
    last = levels[-1][1]
    lo_min = min(r[0] for r in last)
    hi_max = max(r[1] for r in last)
    if hi_max - lo_min > 1e3 * tol:
        witness = {"kind": "separated_sums", "sum_lo": lo_min, "sum_hi": hi_max, "gap": hi_max - lo_min}
        return IntegralReport(None, NOT_INTEGRABLE, witness=witness, trace=tuple(trace), method="gould")
    return IntegralReport(None, BUDGET_EXHAUSTED, witness={"budget": budget}, trace=tuple(trace), method="gould")


class IndefiniteIntegral(SetFunction):
    """``E -> integral of f over E``; may take negative values when ``f`` does."""

    def __init__(self, f, nu: SetFunction):
        self.f = f
        self.nu = nu
        self.space = nu.space
        if self.space.is_finite:
            c = np.array([float(f[i]) * nu.evaluate(1 << i) for i in range(self.space.n)])
            self._table = subset_sums(c) if self.space.n <= 20 else None

    def evaluate(self, A) -> float:
        return rl_integrate(self.f, self.nu, A).require()

    def table(self) -> np.ndarray:
        self._finite_n()
        return self._table

    def describe(self):
        return f"T_f[{self.nu.describe()}]"


def indefinite_integral(f, nu: SetFunction) -> IndefiniteIntegral:
    return IndefiniteIntegral(f, nu)


@dataclass(frozen=True)
class Comparison:
    rl: IntegralReport
    gould: IntegralReport
    birkhoff: IntegralReport
    agree: bool
    counterexample_witness: object = None


def compare_integrals(f, nu: SetFunction, budget: int = 64, tol: float = GOULD_TOL) -> Comparison:
    rl = rl_integrate(f, nu)
    gould = gould_integrate(f, nu, budget=budget, tol=tol)
    bs = birkhoff_simple_integrate(f, nu)
    reps = (rl, gould, bs)
    if all(r.integrable for r in reps):
        vals = [r.value for r in reps]
        agree = max(vals) - min(vals) <= max(tol, 1e-12 * (1 + max(abs(v) for v in vals)))
        return Comparison(rl, gould, bs, agree)
    witness = None
    for r in reps:
        if not r.integrable:
            witness = {"method": r.method, "status": r.status, "detail": r.witness}
            break
    return Comparison(rl, gould, bs, False, witness)


def bound_check(f, nu: SetFunction, E=None) -> tuple[float, float]:
    """``(|integral|, sup|f| * variation)`` on ``E``."""
    sp = nu.space
    E = sp.full() if E is None else E
    val = abs(rl_integrate(f, nu, E).require())
    g = restrict(sp, f, E)
    sup = float(np.max(np.abs(g))) if sp.is_finite else g.sup_abs()
    return val, sup * variation(nu, E)
