"""Seminorms, Hoelder/Minkowski inequalities and reverses, RL-integrable set functions,
and the convergence-theorem harness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConjugateMismatch, HypothesisViolated, Unsupported
from .ground import EpSet, mask_points
from .interval import hausdorff, iv_inf, iv_sup
from .iv_integral import IvFunction, IvSetFunction, atom_convergence, iv_integral
from .rl_integral import rl_integrate
from .setfunc import CardinalityRule, Scaled, SetFunction, classify, is_additive_repr, subset_sums, variation, variation_distance

INEQ_TOL = 1e-12
CONV_TOL = 1e-8
CONV_N = 30
STRUCTURAL_E = "holds (finite-space stabilization)"


# --------------------------------------------------------------------------- #
# seminorm and RL-integrable set functions


def _abs_pow(space, f, p: float):
    if space.is_finite:
        return np.abs(np.asarray(f, dtype=float)) ** p
    return f.abs_pow(p)


def seminorm_p(f, nu: SetFunction, p: float) -> float:
    """``(integral of |f|^p dnu)^(1/p)``; ``p < 0`` is allowed for strictly positive ``f``."""
    if p == 0:
        raise ValueError("p must be nonzero")
    if p < 0 and nu.space.is_finite and np.any(np.asarray(f, dtype=float) == 0):
        raise ValueError("negative exponents need a strictly positive function")
    v = rl_integrate(_abs_pow(nu.space, f, p), nu).require()
    return v ** (1.0 / p)


@dataclass(frozen=True)
class RLIntegrability:
    holds: bool | None
    witness: object = None
    note: str = ""

    def __bool__(self):
        return bool(self.holds)


def is_rl_integrable_setfunction(nu: SetFunction) -> RLIntegrability:
    """Whether ``integral of chi_E dnu = nu(E)`` for every ``E``.

    The singleton partition is the finest, so this is additivity over singletons.
    """
    sp = nu.space
    if sp.is_finite:
        t = nu.table()
        s = subset_sums(nu.singletons())
        gap = np.abs(t - s)
        bad = np.nonzero(gap > 1e-12 * (1 + np.abs(t)))[0]
        if len(bad):
            E = int(bad[0])
            return RLIntegrability(False, mask_points(E), f"integral {s[E]!r} != nu(E) {t[E]!r}")
        return RLIntegrability(True)
    if is_additive_repr(nu):
        return RLIntegrability(True, note="countably additive weights")
    if isinstance(nu, Scaled):
        r = is_rl_integrable_setfunction(nu.inner)
        return RLIntegrability(True, note="zero multiple") if nu.alpha == 0 else r
    if isinstance(nu, CardinalityRule):
        a, b = nu.finite_value, nu.infinite_value
        if a == 0 and b == 0:
            return RLIntegrability(True, note="zero set function")
        # infinite sets: the singleton series is 0 (a = 0) or diverges (a > 0), never b
        return RLIntegrability(False, str(EpSet.full()), "singleton series over N does not equal nu(N)")
    return RLIntegrability(None, note=f"not decidable for {nu.describe()}")


# --------------------------------------------------------------------------- #
# inequalities

KINDS = ("holder", "minkowski", "reverse_holder", "reverse_minkowski")


@dataclass(frozen=True)
class InequalityReport:
    kind: str
    p: float
    q: float | None
    lhs: float
    rhs: float
    holds: bool
    hypotheses: dict = field(default_factory=dict)

    @property
    def applicable(self) -> bool:
        return all(v == "holds" or v.startswith("holds") for v in self.hypotheses.values())


def conjugate(p: float) -> float:
    return p / (p - 1.0)


def _flag(ok) -> str:
    return "holds" if ok else "fails"


def check_inequality(kind: str, g, h, nu: SetFunction, p: float, q: float | None = None, tol: float = INEQ_TOL) -> InequalityReport:
    """Evaluate both sides of Thm 3.7 a-d; hypotheses are reported, not enforced."""
    if kind not in KINDS:
        raise ValueError(f"unknown inequality {kind!r}")
    sp = nu.space
    hyp = {}
    rl = is_rl_integrable_setfunction(nu)
    hyp["nu_rl_integrable"] = "holds" if rl.holds else ("fails" if rl.holds is False else "not_decidable")
    rep = classify(nu)
    hyp["countably_subadditive"] = rep.sigma_subadditive.status
    if kind in ("holder", "reverse_holder"):
        qq = conjugate(p) if q is None else float(q)
        if p == 1 or abs(1.0 / p + 1.0 / qq - 1.0) > 1e-12:
            raise ConjugateMismatch(f"1/p + 1/q must be 1 (p={p}, q={qq})")
        q = qq
        hyp["p_q_conjugate"] = "holds"
    if kind == "holder":
        if not p > 1:
            raise ValueError("Hoelder needs p > 1")
        lhs = seminorm_p(_mul(sp, g, h), nu, 1.0)
        rhs = seminorm_p(g, nu, p) * seminorm_p(h, nu, q)
        ok = lhs <= rhs + tol * max(1.0, abs(rhs))
    elif kind == "minkowski":
        if not p >= 1:
            raise ValueError("Minkowski needs p >= 1")
        # Thm 3.7.b also lists |g+h|^(q(p-1)); finite and closed-form models make it integrable
        hyp["sum_power_integrable"] = "holds (bounded integrand)"
        lhs = seminorm_p(g + h, nu, p)
        rhs = seminorm_p(g, nu, p) + seminorm_p(h, nu, p)
        ok = lhs <= rhs + tol * max(1.0, abs(rhs))
    elif kind == "reverse_holder":
        if not 0 < p < 1:
            raise ValueError("reverse Hoelder needs 0 < p < 1")
        pos = _strictly_positive(sp, h)
        hyp["h_strictly_positive"] = _flag(pos)
        if not pos:
            raise HypothesisViolated("h_strictly_positive", witness=None)
        iq = rl_integrate(_abs_pow(sp, h, q), nu).require()
        hyp["h_q_integral_positive"] = _flag(iq > 0)
        lhs = seminorm_p(_mul(sp, g, h), nu, 1.0)
        rhs = seminorm_p(g, nu, p) * iq ** (1.0 / q) if iq > 0 else math.inf
        ok = rhs <= lhs + tol * max(1.0, abs(lhs))
    else:
        if not 0 < p < 1:
            raise ValueError("reverse Minkowski needs 0 < p < 1")
        lhs = seminorm_p(_abs_pow(sp, g, 1.0) + _abs_pow(sp, h, 1.0), nu, p)
        rhs = seminorm_p(g, nu, p) + seminorm_p(h, nu, p)
        ok = rhs <= lhs + tol * max(1.0, abs(lhs))
    return InequalityReport(kind, p, q, lhs, rhs, bool(ok), hyp)


def _mul(space, g, h):
    if space.is_finite:
        return np.asarray(g, dtype=float) * np.asarray(h, dtype=float)
    return g * h


def _strictly_positive(space, h) -> bool:
    if space.is_finite:
        return bool(np.all(np.asarray(h, dtype=float) > 0))
    from .ground import ep_extrema_of

    e = ep_extrema_of(h, EpSet.full())
    # bounded away from zero, so |h|^q stays bounded for q < 0
    return e.inf > 0


# --------------------------------------------------------------------------- #
# convergence harness

MODES = ("uniform", "in_measure", "ae", "p_norm", "fatou", "iv_fatou", "monotone", "setwise_varying", "atom")


@dataclass(frozen=True)
class SequenceSpec:
    """A sequence ``f_n``, ``n = 1..N``.

    ``geometric``: ``base + ratio^n * delta + spike`` (``delta`` omitted gives the
    constant sequence; ``direction="below"`` gives ``(1 - ratio^n) * base``).
    ``cyclic``: ``terms`` repeated forever; ``explicit``: exactly ``terms``.
    Functions are vectors or :class:`IvFunction` for interval modes.
    """

    family: str = "geometric"
    base: object = None
    delta: object = None
    ratio: float = 0.5
    N: int = CONV_N
    spike: object = None
    terms: tuple = ()
    direction: str = "above"

    def term(self, n: int):
        if self.family == "geometric":
            r = self.ratio**n
            if self.direction == "below":
                return _scale(self.base, 1.0 - r)
            f = self.base if self.delta is None else _add(self.base, _scale(self.delta, r))
            return f if self.spike is None else _add(f, self.spike)
        if self.family == "cyclic":
            return self.terms[(n - 1) % len(self.terms)]
        if self.family == "explicit":
            return self.terms[n - 1]
        raise ValueError(f"unknown family {self.family!r}")

    def count(self) -> int:
        return len(self.terms) if self.family == "explicit" else self.N

    def sequence(self):
        return [self.term(n) for n in range(1, self.count() + 1)]

    def limit(self):
        """Pointwise limit off the spike set (``geometric`` only)."""
        if self.family != "geometric":
            raise ValueError("only geometric families have a declared limit")
        return self.base


def _add(f, g):
    if isinstance(f, IvFunction):
        return f + g
    return np.asarray(f, dtype=float) + np.asarray(g, dtype=float)


def _scale(f, a):
    if isinstance(f, IvFunction):
        return f.scaled(a)
    return a * np.asarray(f, dtype=float)


@dataclass(frozen=True)
class ConvergenceReport:
    mode: str
    distances: tuple
    verdict: bool
    label: str  # "certified" | "exploratory"
    hypotheses: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)


def _limit_verdict(d, tol) -> bool:
    if not d:
        return False
    tailok = all(d[i + 1] <= d[i] * (1 + 1e-12) + 1e-15 for i in range(max(0, len(d) - 5), len(d) - 1))
    return d[-1] <= tol and tailok


def _measure_of(space, nu, diff, delta) -> float:
    """Semivariation of the level set ``{|diff| >= delta}``."""
    E = 0
    for i, v in enumerate(np.abs(diff)):
        if v >= delta:
            E |= 1 << i
    return variation(nu, E)


def _finish(mode, d, verdict, hyp, detail, strict):
    bad = [k for k, v in hyp.items() if not str(v).startswith("holds")]
    if bad and strict:
        raise HypothesisViolated(bad[0], witness=hyp[bad[0]])
    return ConvergenceReport(mode, tuple(d), bool(verdict), "exploratory" if bad else "certified", hyp, detail)


def run_convergence(
    mode: str,
    spec: SequenceSpec,
    nu: SetFunction | None = None,
    Gamma: IvSetFunction | None = None,
    tol: float = CONV_TOL,
    p: float = 2.0,
    B: int | None = None,
    level: float = 1e-6,
    strict: bool = False,
) -> ConvergenceReport:
    if mode not in MODES:
        raise ValueError(f"unknown convergence mode {mode!r}")
    space = (nu or Gamma.nu2).space
    if not space.is_finite:
        raise Unsupported("the convergence harness runs on finite spaces")
    hyp: dict = {}
    detail: dict = {}
    seq = spec.sequence()

    if mode in ("uniform", "in_measure", "ae", "p_norm"):
        h = spec.limit()
        vbar = variation(nu)
        hyp["finite_variation"] = _flag(math.isfinite(vbar))
        I = rl_integrate(h, nu).require()
        diffs = [np.asarray(f, dtype=float) - np.asarray(h, dtype=float) for f in seq]
        if mode == "uniform":
            sups = [float(np.max(np.abs(x))) for x in diffs]
            hyp["uniform_convergence"] = _flag(_limit_verdict(sups, tol) and spec.spike is None)
            detail["sup_distance"] = sups
        if mode in ("in_measure", "ae", "p_norm"):
            meas = [_measure_of(space, nu, x, level) for x in diffs]
            detail["level_set_measure"] = meas
        if mode == "in_measure":
            hyp["bounded"] = "holds (finite space)"
            hyp["converges_in_measure"] = _flag(meas[-1] == 0.0)
        if mode == "ae":
            rep = classify(nu)
            hyp["monotone"] = rep.monotone.status
            hyp["condition_E"] = STRUCTURAL_E
            hyp["bounded"] = "holds (finite space)"
            Z = 0
            if spec.spike is not None:
                for i, v in enumerate(np.asarray(spec.spike, dtype=float)):
                    if v != 0:
                        Z |= 1 << i
            hyp["exceptional_set_null"] = _flag(nu.evaluate(Z) == 0.0)
            detail["exceptional_set"] = mask_points(Z)
        if mode == "p_norm":
            rep = classify(nu)
            hyp["countably_subadditive"] = rep.sigma_subadditive.status
            d = [seminorm_p(x, nu, p) for x in diffs]
            # conclusion of the theorem: convergence in variation-measure
            detail["conclusion_in_measure"] = meas[-1] == 0.0
            verdict = _limit_verdict(d, tol) and meas[-1] == 0.0
            return _finish(mode, d, verdict, hyp, detail, strict)
        d = [abs(rl_integrate(f, nu).require() - I) for f in seq]
        return _finish(mode, d, _limit_verdict(d, tol), hyp, detail, strict)

    if mode == "fatou":
        rep = classify(nu)
        hyp["monotone"] = rep.monotone.status
        hyp["finite_variation"] = _flag(math.isfinite(variation(nu)))
        hyp["condition_E"] = STRUCTURAL_E
        hyp["uniformly_bounded"] = "holds (finite sequence model)"
        ints = [rl_integrate(f, nu).require() for f in seq]
        if spec.family == "cyclic":
            liminf_f = np.min(np.array(spec.terms, dtype=float), axis=0)
            liminf_int = min(ints[: len(spec.terms)])
        elif spec.family == "geometric":
            # pointwise liminf of base + r^n delta (+ spike) with r < 1
            liminf_f = _add(spec.base, spec.spike) if spec.spike is not None else np.asarray(spec.base, dtype=float)
            liminf_int = rl_integrate(liminf_f, nu).require()
        else:
            raise ValueError("fatou needs a cyclic or geometric family")
        lhs = rl_integrate(liminf_f, nu).require()
        detail.update(lhs=lhs, rhs=liminf_int)
        return _finish(mode, ints, lhs <= liminf_int + 1e-12, hyp, detail, strict)

    if mode == "iv_fatou":
        G = Gamma if Gamma is not None else IvSetFunction(nu, nu)
        for i, nui in enumerate((G.nu1, G.nu2), start=1):
            rep = classify(nui)
            hyp[f"nu{i}_monotone"] = rep.monotone.status
        vb = variation(G.nu2)
        hyp["variation_positive_finite"] = _flag(0 < vb < math.inf)
        hyp["condition_E"] = STRUCTURAL_E
        if spec.family != "cyclic":
            raise ValueError("iv_fatou needs a cyclic family")
        ints = [iv_integral(H, G) for H in seq]
        cyc = spec.terms
        lim = IvFunction(space, np.min([H.h1 for H in cyc], axis=0), np.min([H.h2 for H in cyc], axis=0))
        lhs = iv_integral(lim, G)
        rhs = iv_inf(ints[: len(cyc)])
        detail.update(lhs=lhs.as_list(), rhs=rhs.as_list())
        return _finish(mode, [i.as_list() for i in ints], lhs.precedes(rhs, 1e-12), hyp, detail, strict)

    if mode == "monotone":
        G = Gamma if Gamma is not None else IvSetFunction(nu, nu)
        hyp["finite_variation"] = _flag(all(math.isfinite(v) for v in G.variation()))
        inc = all(seq[i].precedes(seq[i + 1]) for i in range(len(seq) - 1))
        hyp["increasing"] = _flag(inc)
        top = IvFunction(space, np.max([H.h1 for H in seq], axis=0), np.max([H.h2 for H in seq], axis=0))
        lhs = iv_integral(top, G)
        ints = [iv_integral(H, G) for H in seq]
        rhs = iv_sup(ints)
        detail.update(lhs=lhs.as_list(), rhs=rhs.as_list())
        return _finish(mode, [hausdorff(i, rhs) for i in ints], lhs == rhs, hyp, detail, strict)

    if mode == "setwise_varying":
        G = Gamma
        H = spec.limit()
        rep1, rep2 = classify(G.nu1), classify(G.nu2)
        hyp["multisubmeasure"] = _flag(rep1.submeasure and rep2.submeasure)
        hyp["nu2_finite_variation"] = _flag(math.isfinite(variation(G.nu2)))
        Gs = [G.scaled(1.0 - spec.ratio**n) for n in range(1, spec.N + 1)]
        chain = all(Gs[i].precedes(Gs[i + 1]) for i in range(len(Gs) - 1)) and Gs[-1].precedes(G)
        hyp["gamma_increasing_below_limit"] = _flag(chain)
        sw = [max(variation_distance(Gn.nu1, G.nu1), variation_distance(Gn.nu2, G.nu2)) for Gn in Gs]
        hyp["setwise_convergence"] = _flag(_limit_verdict(sw, tol * (1 + variation(G.nu2))))
        hyp["H_increasing"] = _flag(all(seq[i].precedes(seq[i + 1]) for i in range(len(seq) - 1)))
        target = iv_integral(H, G)
        d = [hausdorff(iv_integral(Hn, Gn), target) for Hn, Gn in zip(seq, Gs)]
        detail["variation_distance"] = sw
        return _finish(mode, d, _limit_verdict(d, tol), hyp, detail, strict)

    # atom
    G = Gamma if Gamma is not None else IvSetFunction(nu, nu)
    H = spec.limit()
    res, rows = atom_convergence(seq, H, G, B)
    hyp.update(res.hypotheses)
    ok = all(r.distance <= r.bound + 1e-12 for r in rows)
    d = [r.distance for r in rows]
    detail.update(b=res.b, bounds=[r.bound for r in rows], exact=res.exact)
    return _finish(mode, d, ok and res.exact and _limit_verdict(d, tol), hyp, detail, strict)
