"""Pmf, moment, and waiting-time computations for time-changed Poisson counts.

The mixture identity P(N(X(t)) = k) = int p_k(x) dens_X(x, t) dx is evaluated
against frozen composite Gauss-Legendre rules.  A rule's nodes are built once
per (spec, lambda, time-window, kmax) and shared by every t in the window and
every count index, so a whole pmf table falls out of one matrix product and,
crucially, the quadrature error is a smooth function of t: finite-difference
operators applied to tables (see tcpp.verify) do not see it as noise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import gammainc, gammaln

from .errors import ConvergenceError, DomainError, NoDensityError
from .quadrules import gauss_panels, linear_panel_edges, log_panel_edges
from .subordinators.densities import (
    hitting_time_density_ig,
    ig_cdf,
    ig_density,
    inverse_tempered_density,
)
from .subordinators.sampling import rng_stream, sample
from .subordinators.spec import (
    InverseGaussian,
    InverseOf,
    Stable,
    SubordinatorSpec,
    TemperedStable,
    flatten_stable_composition,
    spec_from_dict,
)
from .subordinators.stable import stable_unit

__all__ = [
    "PoissonParams",
    "PmfTable",
    "poisson_pmf",
    "pmf_bessel_ig",
    "pmf_quadrature",
    "pmf_table",
    "pmf_monte_carlo",
    "fractional_poisson_pmf",
    "moments_ig",
    "waiting_time_survival",
    "waiting_time_lt",
]


@dataclass(frozen=True)
class PoissonParams:
    lam: float

    def __post_init__(self):
        if self.lam <= 0:
            raise DomainError("Poisson rate must be positive")


# -- Poisson pmf and its x-derivatives -----------------------------------------


def poisson_pmf(k: int, x, lam: float, order: int = 0):
    """P(N(x) = k) = e^{-lam x}(lam x)^k / k!, with d/dx orders 1 and 2.

    The derivatives use the shift identities p_k' = -lam (p_k - p_{k-1}) and
    p_k'' = lam^2 (p_k - 2 p_{k-1} + p_{k-2});  p_j = 0 for j < 0.
    """
    if k < 0:
        raise DomainError("count index k must be >= 0")
    if order == 0:
        return _poisson_value(k, x, lam)
    if order == 1:
        return -lam * (_poisson_value(k, x, lam) - _poisson_value(k - 1, x, lam))
    if order == 2:
        return lam * lam * (
            _poisson_value(k, x, lam)
            - 2.0 * _poisson_value(k - 1, x, lam)
            + _poisson_value(k - 2, x, lam)
        )
    raise DomainError("order must be 0, 1 or 2")


def _poisson_value(k: int, x, lam: float):
    x = np.asarray(x, dtype=float)
    if k < 0:
        return np.zeros_like(x)
    if np.any(x < 0):
        raise DomainError("poisson_pmf requires x >= 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        m = lam * x
        logp = k * np.log(m) - m - gammaln(k + 1.0)
        out = np.exp(logp)
    if k == 0:
        out = np.where(x == 0, 1.0, out)
    else:
        out = np.where(x == 0, 0.0, out)
    return out if out.ndim else float(out)


def _poisson_matrix(ks, x, lam: float):
    """Matrix p_{k}(lam x) over ks x nodes, log-space."""
    ks = np.asarray(ks, dtype=int)
    x = np.asarray(x, dtype=float)
    m = lam * x
    logm = np.log(m)
    logp = ks[:, None] * logm[None, :] - m[None, :] - gammaln(ks + 1.0)[:, None]
    return np.exp(logp)


# -- closed-form Bessel pmf for the IG time change --------------------------------


def _log_bessel_half_sum(n: int, omega):
    """log sum_{i=0}^n (n+i)! / (i!(n-i)! (2 w)^i), vectorized in omega."""
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    i = np.arange(n + 1, dtype=float)
    log_terms = (
        gammaln(n + i + 1.0)
        - gammaln(i + 1.0)
        - gammaln(n - i + 1.0)
        - i[None, :] * np.log(2.0 * omega)[:, None]
    )
    peak = np.max(log_terms, axis=1)
    return peak + np.log(np.sum(np.exp(log_terms - peak[:, None]), axis=1))


def pmf_bessel_ig(k: int, t, lam: float, delta: float, gamma: float):
    """P(N(G(t)) = k) in closed Bessel form (requires gamma > 0).

    sqrt(2/pi) delta t e^{delta gamma t} (lam^k/k!)
        (delta t / sqrt(gamma^2+2 lam))^(k-1/2) K_{k-1/2}(delta t sqrt(gamma^2+2 lam)),
    evaluated throughout in log space so large k and t cannot overflow.
    """
    if gamma <= 0:
        raise DomainError(
            "Bessel-form pmf needs gamma > 0 (use pmf_quadrature for gamma = 0)"
        )
    if k < 0:
        raise DomainError("count index k must be >= 0")
    scalar = np.isscalar(t) or np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t <= 0):
        raise DomainError("pmf_bessel_ig requires t > 0")
    c = math.sqrt(gamma * gamma + 2.0 * lam)
    omega = delta * t * c
    n = k - 1 if k >= 1 else 0
    log_k_bessel = 0.5 * (math.log(math.pi) - np.log(2.0 * omega)) - omega + _log_bessel_half_sum(n, omega)
    logp = (
        0.5 * math.log(2.0 / math.pi)
        + np.log(delta * t)
        + delta * gamma * t
        + k * math.log(lam)
        - gammaln(k + 1.0)
        + (k - 0.5) * (np.log(delta * t) - math.log(c))
        + log_k_bessel
    )
    out = np.exp(logp)
    return float(out[0]) if scalar else out


# -- frozen mixture rules -----------------------------------------------------------


def _poisson_cut(kmax: int, lam: float) -> float:
    """x beyond which every p_k(lam x), k <= kmax, is below ~e^-40."""
    return (kmax + 45.0 * math.sqrt(kmax + 1.0) + 45.0) / lam


@dataclass
class MixtureRule:
    """Frozen quadrature discretization of the mixing density family."""

    spec: SubordinatorSpec
    lam: float
    kind: str
    t_lo: float
    t_hi: float
    kmax: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    dens: np.ndarray | None = field(repr=False, default=None)
    params: dict = field(default_factory=dict)

    def _x_and_weighted_density(self, t: float):
        """(x nodes, weight * density) for this t."""
        p = self.params
        if self.kind == "ig":
            return self.nodes, self.weights * ig_density(self.nodes, t, p["delta"], p["gamma"])
        if self.kind == "stable":
            # x = t^(1/b) y with f(x,t) dx = f1(y) dy
            return t ** (1.0 / p["beta"]) * self.nodes, self.weights * self.dens
        if self.kind == "tempered":
            b, mu = p["beta"], p["mu"]
            x = t ** (1.0 / b) * self.nodes
            damp = np.exp(mu ** b * t - mu * x)
            return x, self.weights * self.dens * damp
        if self.kind == "inv-stable":
            x = t ** p["beta"] * self.nodes
            return x, self.weights * self.dens
        if self.kind == "hitting-ig":
            return self.nodes, self.weights * hitting_time_density_ig(
                self.nodes, t, p["delta"], p["gamma"]
            )
        if self.kind == "inv-tempered":
            return self.nodes, self.weights * inverse_tempered_density(
                self.nodes, t, p["beta"], p["mu"], n_panels=p["inner_panels"]
            )
        raise NoDensityError(f"no rule kind {self.kind}")

    def pmf_matrix(self, ts, ks):
        """pmf[k_i, t_j] for all requested counts and times in one pass."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        ks = np.asarray(ks, dtype=int)
        out = np.empty((ks.size, ts.size))
        for j, t in enumerate(ts):
            x, wd = self._x_and_weighted_density(float(t))
            out[:, j] = _poisson_matrix(ks, x, self.lam) @ wd
        return out

    def tail_mass(self, ts, kmax: int):
        """P(N > kmax) including the analytic mass beyond the node window."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        out = np.empty(ts.size)
        for j, t in enumerate(ts):
            x, wd = self._x_and_weighted_density(float(t))
            q = gammainc(kmax + 1.0, self.lam * x)  # P(Poi(lam x) > kmax)
            out[j] = np.sum(q * wd) + self._survivor(float(t))
        return out

    def _survivor(self, t: float) -> float:
        """Mixing mass beyond the node window (where p_k ~ Q ~ 1)."""
        p = self.params
        x_hi = self.params["x_hi"]
        if self.kind == "ig":
            return float(1.0 - ig_cdf(np.array([x_hi]), t, p["delta"], p["gamma"])[0])
        if self.kind == "stable":
            # node window scales with t, so the residual mass is t-free
            return float(stable_unit(p["beta"]).sf(np.array([p["y_hi"]]))[0])
        # remaining kinds chose x_hi so the residual mass is ~1e-16
        return 0.0

    def mixing_moments(self, t: float):
        """(mean, variance) of the mixing law, or None when the mean is infinite."""
        p = self.params
        if self.kind == "ig":
            if p["gamma"] == 0.0:
                return None
            m = p["delta"] * t / p["gamma"]
            return m, p["delta"] * t / p["gamma"] ** 3
        if self.kind == "stable":
            return None
        if self.kind == "tempered":
            b, mu = p["beta"], p["mu"]
            return t * b * mu ** (b - 1.0), t * b * (1.0 - b) * mu ** (b - 2.0)
        if self.kind == "inv-stable":
            b = p["beta"]
            m1 = t ** b / math.gamma(1.0 + b)
            m2 = 2.0 * t ** (2 * b) / math.gamma(1.0 + 2 * b)
            return m1, m2 - m1 * m1
        # numeric moments from the frozen nodes
        x, wd = self._x_and_weighted_density(t)
        m1 = float(np.sum(x * wd))
        m2 = float(np.sum(x * x * wd))
        return m1, m2 - m1 * m1


def _construct_rule(spec, lam, t_lo, t_hi, kmax, n_panels):
    cut = _poisson_cut(kmax, lam)
    if isinstance(spec, InverseGaussian):
        d, g = spec.delta, spec.gamma
        x_lo = d * d * t_lo * t_lo / 95.0
        x_hi = cut if g == 0.0 else max(cut, 2.0 * (d * g * t_hi + 45.0) / (g * g))
        x, w = gauss_panels(log_panel_edges(x_lo, x_hi, n_panels), 12)
        return MixtureRule(spec, lam, "ig", t_lo, t_hi, kmax, x, w,
                           params={"delta": d, "gamma": g, "x_hi": x_hi})
    eff = flatten_stable_composition(spec)
    if eff is not None:
        su = stable_unit(eff)
        y_hi = max(cut / t_lo ** (1.0 / eff), 10.0)
        y, w, f1 = su.mixture_nodes(y_hi, n_panels=n_panels, nodes_per_panel=12)
        return MixtureRule(spec, lam, "stable", t_lo, t_hi, kmax, y, w, dens=f1,
                           params={"beta": eff, "y_hi": y_hi, "x_hi": y_hi})
    if isinstance(spec, TemperedStable):
        b, mu = spec.beta, spec.mu
        su = stable_unit(b)
        x_need = max(cut, (mu ** b * t_hi + 42.0) / mu)
        y_hi = max(x_need / t_lo ** (1.0 / b), 10.0)
        y, w, f1 = su.mixture_nodes(y_hi, n_panels=n_panels, nodes_per_panel=12)
        return MixtureRule(spec, lam, "tempered", t_lo, t_hi, kmax, y, w, dens=f1,
                           params={"beta": b, "mu": mu, "x_hi": x_need})
    if isinstance(spec, InverseOf):
        base = spec.base
        eff = flatten_stable_composition(base)
        if eff is not None:
            su = stable_unit(eff)
            # phi(v) = (1/b) f1(v^(-1/b)) v^(-1-1/b): the t-free mixing factor
            v_hi = _phi_support_end(su, eff)
            v, w = gauss_panels(linear_panel_edges(0.0, v_hi, n_panels), 12)
            phi = (1.0 / eff) * su.pdf(v ** (-1.0 / eff)) * v ** (-1.0 - 1.0 / eff)
            return MixtureRule(spec, lam, "inv-stable", t_lo, t_hi, kmax, v, w, dens=phi,
                               params={"beta": eff, "x_hi": v_hi * t_hi ** eff})
        if isinstance(base, InverseGaussian):
            d, g = base.delta, base.gamma
            x_hi = (g * t_hi + 14.0 * math.sqrt(t_hi) + 2.0) / d
            x, w = gauss_panels(linear_panel_edges(1e-10, x_hi, n_panels), 12)
            return MixtureRule(spec, lam, "hitting-ig", t_lo, t_hi, kmax, x, w,
                               params={"delta": d, "gamma": g, "x_hi": x_hi})
        if isinstance(base, TemperedStable):
            b, mu = base.beta, base.mu
            x_hi = _inv_tempered_support_end(b, mu, t_hi)
            x, w = gauss_panels(linear_panel_edges(1e-10, x_hi, n_panels), 12)
            return MixtureRule(spec, lam, "inv-tempered", t_lo, t_hi, kmax, x, w,
                               params={"beta": b, "mu": mu, "x_hi": x_hi,
                                       "inner_panels": 48})
    raise NoDensityError(
        f"spec {spec.label()} has no density evaluator; use pmf_monte_carlo"
    )


def _phi_support_end(su, beta: float) -> float:
    """v beyond which phi(v) = (1/b) f1(v^(-1/b)) v^(-1-1/b) is < ~1e-19."""
    v = 2.0
    for _ in range(60):
        w = v ** (-1.0 / beta)
        val = (1.0 / beta) * float(su.pdf(np.array([w]))[0]) * v ** (-1.0 - 1.0 / beta)
        if val < 1e-19:
            return v
        v *= 1.3
    raise ConvergenceError("could not bound the inverse-stable support")


def _inv_tempered_support_end(beta: float, mu: float, t_hi: float) -> float:
    x = max(4.0 * t_hi ** beta, 4.0)
    for _ in range(60):
        val = float(inverse_tempered_density(np.array([x]), t_hi, beta, mu)[0])
        if val < 1e-18:
            return x
        x *= 1.4
    raise ConvergenceError("could not bound the inverse-tempered support")


# evaluators with their own inner quadrature/differencing noise cannot settle
# below these floors, however many outer panels are added
_KIND_TOL_FLOOR = {"inv-tempered": 1e-9, "hitting-ig": 1e-9}


@lru_cache(maxsize=64)
def mixture_rule(
    spec: SubordinatorSpec,
    lam: float,
    t_lo: float,
    t_hi: float,
    kmax: int,
    tol: float = 1e-10,
) -> MixtureRule:
    """Adaptive construction: double panel count until probe pmfs settle."""
    if not 0 < t_lo <= t_hi:
        raise DomainError("need 0 < t_lo <= t_hi")
    probe_ts = np.array([t_lo, math.sqrt(t_lo * t_hi), t_hi])
    probe_ks = np.unique(np.array([0, kmax // 2, kmax]))
    n_panels = 32
    prev = None
    while n_panels <= 2048:
        rule = _construct_rule(spec, lam, t_lo, t_hi, kmax, n_panels)
        eff_tol = max(tol, _KIND_TOL_FLOOR.get(rule.kind, 0.0))
        vals = rule.pmf_matrix(probe_ts, probe_ks)
        if prev is not None and np.max(np.abs(vals - prev)) < eff_tol:
            return rule
        prev = vals
        n_panels *= 2
    raise ConvergenceError(f"mixture rule did not converge for {spec.label()}")


# -- pmf tables -----------------------------------------------------------------


@dataclass
class PmfTable:
    """pmf values for k = 0..kmax at one (spec, lambda, t), with tail mass."""

    spec: SubordinatorSpec
    lam: float
    t: float
    kmax: int
    values: np.ndarray
    tail_bound: float
    stderr: np.ndarray | None = None
    seed: int | None = None
    method: str = "quadrature"
    tol: float = 1e-10

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.size != self.kmax + 1:
            raise DomainError("values must have length kmax + 1")
        if np.any(v < -1e-12) or np.any(v > 1.0 + 1e-9):
            raise DomainError("pmf values must lie in [0, 1]")
        defect = abs(float(np.sum(v)) + self.tail_bound - 1.0)
        if defect > 1e-3:
            raise DomainError(f"pmf normalization defect {defect:.2e} is too large")

    @property
    def normalization_defect(self) -> float:
        return float(np.sum(self.values)) + self.tail_bound - 1.0

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "lambda": self.lam,
            "t": self.t,
            "kmax": self.kmax,
            "values": [float(v) for v in self.values],
            "tail_bound": self.tail_bound,
            "stderr": None if self.stderr is None else [float(s) for s in self.stderr],
            "seed": self.seed,
            "method": self.method,
            "tolerances": {"quadrature_abs": self.tol},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PmfTable":
        return cls(
            spec=spec_from_dict(d["spec"]),
            lam=float(d["lambda"]),
            t=float(d["t"]),
            kmax=int(d["kmax"]),
            values=np.asarray(d["values"], dtype=float),
            tail_bound=float(d["tail_bound"]),
            stderr=None if d.get("stderr") is None else np.asarray(d["stderr"], dtype=float),
            seed=d.get("seed"),
            method=d.get("method", "quadrature"),
            tol=float(d.get("tolerances", {}).get("quadrature_abs", 1e-10)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def csv_rows(self):
        """Rows (k, value[, stderr]) with 17 significant digits."""
        header = ["k", "value"] + (["stderr"] if self.stderr is not None else [])
        yield header
        for k in range(self.kmax + 1):
            row = [str(k), format(self.values[k], ".17g")]
            if self.stderr is not None:
                row.append(format(self.stderr[k], ".17g"))
            yield row


def _auto_kmax(rule: MixtureRule, t: float, bound: float = 1e-10, cap: int = 2000) -> int:
    """Smallest K (within a growth factor) whose mixture tail drops below `bound`.

    A Bernstein-type bound from the numerically known mean and variance of
    N(X(t)) seeds the search; because Poisson mixtures over light-but-
    sub-exponential clocks beat that bound's validity, the candidate is then
    verified (and grown as needed) against the exact tail mass.  Heavy-tailed
    mixing (stable clocks, infinite mean) cannot reach 1e-10 at any sane K
    and instead targets an explicit 1e-6 tail mass, which the honest
    tail_bound then reports.
    """
    mv = rule.mixing_moments(t)
    lam = rule.lam
    if mv is None:
        k = 8
        while k < cap:
            if rule.tail_mass(np.array([t]), k)[0] < 1e-6:
                return k
            k *= 2
        return cap
    m, v = mv
    mean = lam * m
    var = lam * m + lam * lam * v
    k = int(mean) + 1
    while k < cap:
        dev = k - mean
        if math.exp(-(dev * dev) / (2.0 * (var + dev / 3.0))) < bound:
            break
        k += 1
    while k < cap and rule.tail_mass(np.array([t]), k)[0] >= bound:
        k = int(1.4 * k) + 4
    return min(k, cap)


def pmf_quadrature(k: int, t: float, lam: float, spec: SubordinatorSpec,
                   tol: float = 1e-10) -> float:
    """P(N(X(t)) = k) by adaptive quadrature of the Poisson mixture."""
    if k < 0:
        raise DomainError("count index k must be >= 0")
    if t <= 0 or lam <= 0:
        raise DomainError("pmf_quadrature requires t > 0 and lambda > 0")
    rule = mixture_rule(spec, lam, t, t, max(k, 8), tol)
    return float(rule.pmf_matrix(np.array([t]), np.array([k]))[0, 0])


def pmf_table(t: float, lam: float, spec: SubordinatorSpec, kmax: int | None = None,
              tol: float = 1e-10) -> PmfTable:
    """Full quadrature PmfTable with an honest tail bound."""
    if t <= 0 or lam <= 0:
        raise DomainError("pmf_table requires t > 0 and lambda > 0")
    rule = mixture_rule(spec, lam, t, t, kmax if kmax is not None else 64, tol)
    if kmax is None:
        kmax = _auto_kmax(rule, t)
        rule = mixture_rule(spec, lam, t, t, kmax, tol)
    ks = np.arange(kmax + 1)
    values = rule.pmf_matrix(np.array([t]), ks)[:, 0]
    tail = float(rule.tail_mass(np.array([t]), kmax)[0])
    return PmfTable(spec=spec, lam=lam, t=t, kmax=kmax, values=np.clip(values, 0.0, 1.0),
                    tail_bound=tail, method="quadrature", tol=tol)


def pmf_monte_carlo(t: float, lam: float, spec: SubordinatorSpec, count: int,
                    seed: int, kmax: int | None = None) -> PmfTable:
    """Empirical pmf from `count` sampled clock values and Poisson draws."""
    if count < 1000:
        raise DomainError("pmf_monte_carlo needs count >= 1000")
    clock = sample(spec, t, count, seed, stream=0)
    rng = rng_stream(seed, 1)
    # heavy-tailed clocks produce astronomically large means in a few draws;
    # those land in the tail bin regardless, so cap the Poisson argument
    counts = rng.poisson(np.minimum(lam * clock.values, 1e12))
    if kmax is None:
        kmax = int(min(np.max(counts), max(50, 4.0 * np.quantile(counts, 0.999)), 2000))
    freq = np.bincount(np.minimum(counts, kmax + 1), minlength=kmax + 2).astype(float)
    values = freq[: kmax + 1] / count
    tail = float(freq[kmax + 1] / count)
    stderr = np.sqrt(values * (1.0 - values) / count)
    return PmfTable(spec=spec, lam=lam, t=t, kmax=kmax, values=values,
                    tail_bound=tail, stderr=stderr, seed=seed, method="mc")


def fractional_poisson_pmf(k: int, t: float, lam: float, beta: float) -> float:
    """P(N(E(t)) = k) for the inverse-stable clock of index beta.

    For beta close enough to 1 that the stable density machinery degenerates,
    the clock E(t) concentrates at t and a second-order moment expansion with
    the exact moments E E(t)^n = n! t^(n beta)/Gamma(1 + n beta) is used.
    """
    if not 0 < beta < 1:
        raise DomainError("fractional order must satisfy 0 < beta < 1")
    if beta > 0.95:
        m1 = t ** beta / math.gamma(1.0 + beta)
        m2 = 2.0 * t ** (2.0 * beta) / math.gamma(1.0 + 2.0 * beta)
        var = m2 - m1 * m1
        return float(
            poisson_pmf(k, m1, lam) + 0.5 * var * poisson_pmf(k, m1, lam, order=2)
        )
    return pmf_quadrature(k, t, lam, InverseOf(Stable(beta)))


# -- moments and waiting times -----------------------------------------------------


def ig_moment_table(t: float, lam: float, delta: float, gamma: float,
                    tol: float = 1e-7) -> PmfTable:
    """PmfTable deep enough that even the k^2-weighted tail is below tol.

    Second-moment summation needs far more of the sub-exponential tail than
    pmf mass does: the table grows until tail_bound * kmax^2 < tol.
    """
    mean, var = moments_ig(t, lam, delta, gamma)
    kmax = max(256, int(mean + 70.0 * math.sqrt(var) + 70.0))
    while kmax < 20000:
        table = pmf_table(t, lam, InverseGaussian(delta, gamma), kmax=kmax)
        if table.tail_bound * kmax * kmax < tol:
            return table
        kmax = int(1.5 * kmax)
    raise ConvergenceError("could not bound the second-moment tail")


def moments_ig(t: float, lam: float, delta: float, gamma: float):
    """(mean, variance) of N(G(t)): lam delta t / gamma and the Bessel-form
    variance, evaluated through the scaled K_{3/2} so large delta gamma t
    cannot overflow."""
    if gamma <= 0:
        raise DomainError("moments_ig requires gamma > 0")
    if t <= 0 or lam <= 0 or delta <= 0:
        raise DomainError("moments_ig requires positive t, lambda, delta")
    mean = lam * delta * t / gamma
    omega = delta * gamma * t
    # e^omega K_{3/2}(omega) = sqrt(pi/(2 omega)) (1 + 1/omega)
    scaled_k = math.sqrt(math.pi / (2.0 * omega)) * (1.0 + 1.0 / omega)
    second = math.sqrt(2.0 / math.pi) * (delta * t) * (delta * t / gamma) ** 1.5 * scaled_k
    var = mean + lam * lam * second - mean * mean
    return mean, var


def waiting_time_survival(x: float, lam: float, delta: float, gamma: float,
                          n_panels: int = 96) -> float:
    """P(J > x) = E exp(-lam H(x)) for the renewal process N(H(t))."""
    if x <= 0:
        raise DomainError("waiting_time_survival requires x > 0")
    u_hi = (gamma * x + 14.0 * math.sqrt(x) + 2.0) / delta
    u, w = gauss_panels(linear_panel_edges(1e-10, u_hi, n_panels), 12)
    h = hitting_time_density_ig(u, x, delta, gamma)
    return float(np.sum(w * np.exp(-lam * u) * h))


def waiting_time_lt(s: float, lam: float, delta: float, gamma: float) -> float:
    """E exp(-s J) = lam / (lam + delta (sqrt(gamma^2 + 2s) - gamma))."""
    if s <= 0:
        raise DomainError("waiting_time_lt requires s > 0")
    return lam / (lam + delta * (math.sqrt(gamma * gamma + 2.0 * s) - gamma))
