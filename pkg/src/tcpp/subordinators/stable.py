"""Unit-time density machinery for the one-sided beta-stable law.

Everything here is for the standardized subordinator value D(1) with Laplace
transform E exp(-s D(1)) = exp(-s^beta), 0 < beta < 1.  Time enters elsewhere
through the scaling D(t) =d t^(1/beta) D(1).

Three evaluation regimes, stitched where they agree:

* bulk: the Zolotarev/Ibragimov-Chernin single integral
      f(x) = beta/(1-beta) * x^(-1/(1-beta)) * (1/pi) *
             int_0^pi A(th) exp(-x^(-beta/(1-beta)) A(th)) dth,
      A(th) = sin((1-beta) th) sin(beta th)^(beta/(1-beta)) / sin(th)^(1/(1-beta)),
* right tail: the convergent inverse-power series whose leading term is the
  classical  beta/(Gamma(1-beta) x^(1+beta))  asymptotic,
* deep left tail: the stretched-exponential asymptotic, used only where the
  density is below ~1e-290 anyway.

The series/integral switch point is picked per beta by requiring the two
routes to agree, then cached.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import erfc, gammaln, roots_legendre

from ..errors import ConvergenceError, DivergenceError, DomainError
from ..quadrules import gauss_panels, log_panel_edges

_BETA_MAX = 0.95
_DECAY = 48.0  # exp(-48) ~ 1.4e-21 relative truncation of the theta integral


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not 0.0 < beta < 1.0:
        raise DomainError("stable index beta must be in (0, 1)")
    if beta > _BETA_MAX:
        raise DomainError(
            f"density engine supports beta <= {_BETA_MAX}; the law is nearly "
            "degenerate beyond that (use moment expansions instead)"
        )
    return beta


class StableUnit:
    """Density, distribution and fractional moments of D(1)."""

    def __init__(self, beta: float):
        self.beta = _check_beta(beta)
        b = self.beta
        self.ratio = b / (1.0 - b)  # exponent beta/(1-beta)
        self.a0 = (1.0 - b) * b ** self.ratio
        self._gl_x, self._gl_w = roots_legendre(96)
        self._theta_probe = np.linspace(1e-9, math.pi - 1e-9, 512)
        self._log_a_probe = self._log_a(self._theta_probe)
        if np.any(np.diff(self._log_a_probe) <= 0):
            raise ConvergenceError("A(theta) not monotone; cannot bracket")
        self.x_series = self._calibrate_series_switch()
        # left edge of numerically visible support: exponent ~ _DECAY there
        self.x_tiny = (self.a0 / _DECAY) ** (1.0 / self.ratio)

    # -- Zolotarev kernel ---------------------------------------------------

    def _log_a(self, theta):
        b = self.beta
        theta = np.asarray(theta, dtype=float)
        return (
            np.log(np.sin((1.0 - b) * theta))
            + self.ratio * np.log(np.sin(b * theta))
            - (1.0 / (1.0 - b)) * np.log(np.sin(theta))
        )

    def _theta_for_log_a(self, log_a_target):
        """Invert log A on (0, pi) by bisection (A is monotone increasing)."""
        target = np.asarray(log_a_target, dtype=float)
        lo = np.full(target.shape, 1e-9)
        hi = np.full(target.shape, math.pi - 1e-12)
        out_of_range = target >= self._log_a_probe[-1]
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            below = self._log_a(mid) < target
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        theta = 0.5 * (lo + hi)
        theta[out_of_range] = math.pi - 1e-12
        return theta

    def _integral(self, x, want_pdf: bool):
        """Theta integral for pdf or cdf on moderate x (vectorized)."""
        x = np.asarray(x, dtype=float)
        xi = x ** (-self.ratio)
        eff = xi * self.a0
        # panel split at the e^-5 and e^-_DECAY points of the exponential decay
        log_a5 = np.log(self.a0 + 5.0 / xi)
        log_aD = np.log(self.a0 + _DECAY / xi)
        th5 = self._theta_for_log_a(log_a5)
        thD = self._theta_for_log_a(log_aD)
        gl, glw = self._gl_x, self._gl_w

        def panel(lo, hi):
            th = 0.5 * (hi - lo)[:, None] * gl[None, :] + 0.5 * (hi + lo)[:, None]
            w = 0.5 * (hi - lo)[:, None] * glw[None, :]
            log_a = self._log_a(th)
            expo = -np.exp(log_a + np.log(xi)[:, None]) + eff[:, None]
            if want_pdf:
                vals = np.exp(log_a + expo)
            else:
                vals = np.exp(expo)
            return np.sum(vals * w, axis=1)

        zero = np.zeros_like(x)
        raw = panel(zero, th5) + panel(th5, thD)
        # scaled by exp(+eff); undo it together with the prefactors
        if want_pdf:
            log_pref = (
                math.log(self.beta / (1.0 - self.beta))
                - (1.0 / (1.0 - self.beta)) * np.log(x)
                - math.log(math.pi)
                - eff
            )
        else:
            log_pref = -math.log(math.pi) - eff
        with np.errstate(over="ignore"):
            return np.where(raw > 0, np.exp(np.log(np.maximum(raw, 1e-300)) + log_pref), 0.0)

    # -- right-tail series ----------------------------------------------------

    def _tail_series(self, x, order_shift: float):
        """sum_n (-1)^(n+1) Gamma(n b + shift...)/n! sin(pi n b) x^(-n b - s0).

        order_shift = 1 gives the density (s0 = 1, Gamma(n b + 1)); 0 gives the
        survival function (s0 = 0, Gamma(n b)).  Returns (value, max_term).
        """
        b = self.beta
        x = np.asarray(x, dtype=float)
        n = np.arange(1, 501, dtype=float)
        if order_shift == 1:
            log_c = gammaln(n * b + 1.0) - gammaln(n + 1.0)
            pow_ = -(n * b + 1.0)
        else:
            log_c = gammaln(n * b) - gammaln(n + 1.0)
            pow_ = -(n * b)
        sgn = np.where(n % 2 == 1, 1.0, -1.0) * np.sin(np.pi * n * b)
        log_t = log_c[None, :] + pow_[None, :] * np.log(x)[:, None]
        log_t = np.where(log_t > 700.0, -np.inf, log_t)  # cancellation guard below
        t = np.exp(log_t)
        total = np.sum(t * sgn[None, :], axis=1) / math.pi
        max_term = np.max(t, axis=1) / math.pi
        return total, max_term

    def _calibrate_series_switch(self) -> float:
        candidates = np.geomspace(1.0, 60.0, 36)
        series, max_term = self._tail_series(candidates, 1)
        integral = self._integral(candidates, True)
        good = (
            (np.abs(series - integral) <= 1e-9 * np.maximum(np.abs(integral), 1e-280))
            & (max_term <= 1e10 * np.maximum(np.abs(series), 1e-300))
        )
        # series accuracy only improves with x, while the integral eventually
        # degrades (integrand concentrates at theta = pi); hand over at the
        # first point where two consecutive candidates agree
        for i in range(good.size - 1):
            if good[i] and good[i + 1]:
                return float(candidates[i])
        raise ConvergenceError(
            f"could not stitch tail series to integral for beta={self.beta}"
        )

    def _log_pdf_left_asymptotic(self, x):
        """Stretched-exponential small-x form, in log space."""
        b = self.beta
        x = np.asarray(x, dtype=float)
        return (
            ((2.0 - b) / (2.0 * (1.0 - b))) * np.log(b / x)
            - 0.5 * math.log(2.0 * math.pi * b * (1.0 - b))
            - (1.0 - b) * (x / b) ** (-self.ratio)
        )

    # -- public surface -------------------------------------------------------

    def pdf(self, x):
        """Density of D(1); vectorized, nonnegative, zero left of the support."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(x <= 0):
            raise DomainError("stable density requires x > 0")
        out = np.zeros_like(x)
        if abs(self.beta - 0.5) < 1e-14:
            out[:] = 0.5 / math.sqrt(math.pi) * x ** -1.5 * np.exp(-0.25 / x)
            return out
        deep = x < self.x_tiny
        tail = x >= self.x_series
        mid = ~deep & ~tail
        if np.any(deep):
            with np.errstate(over="ignore", under="ignore"):
                out[deep] = np.exp(self._log_pdf_left_asymptotic(x[deep]))
        if np.any(mid):
            out[mid] = self._integral(x[mid], True)
        if np.any(tail):
            out[tail] = self._tail_series(x[tail], 1)[0]
        return out

    def cdf(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(x <= 0):
            raise DomainError("stable cdf requires x > 0")
        if abs(self.beta - 0.5) < 1e-14:
            return erfc(0.5 / np.sqrt(x))
        out = np.zeros_like(x)
        deep = x < self.x_tiny
        tail = x >= self.x_series
        mid = ~deep & ~tail
        if np.any(mid):
            out[mid] = self._integral(x[mid], False)
        if np.any(tail):
            out[tail] = 1.0 - self._tail_series(x[tail], 0)[0]
        return np.clip(out, 0.0, 1.0)

    def sf(self, x):
        """Survival function P(D(1) > x)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(x)
        tail = x >= self.x_series
        if np.any(tail):
            out[tail] = self._tail_series(x[tail], 0)[0]
        if np.any(~tail):
            out[~tail] = 1.0 - self.cdf(x[~tail])
        return np.clip(out, 0.0, 1.0)

    def moment(self, p: float) -> float:
        """E[D(1)^p] for 0 < p < beta (diverges at p >= beta)."""
        p = float(p)
        if p <= 0:
            raise DomainError("moment order must be positive")
        if p >= self.beta:
            raise DivergenceError(
                f"E[D(1)^p] diverges for p >= beta (p={p}, beta={self.beta}); "
                "the x^-(1+beta) tail is not integrable against x^p"
            )
        x_lo = max(self.x_tiny * 0.5, 1e-300)
        n_panels = max(48, int(10 * math.log10(self.x_series / x_lo)))
        nodes, w = gauss_panels(log_panel_edges(x_lo, self.x_series, n_panels), 16)
        bulk = float(np.sum(w * nodes ** p * self.pdf(nodes)))
        # analytic tail: integrate the series term by term
        b = self.beta
        n = np.arange(1, 501, dtype=float)
        sgn = np.where(n % 2 == 1, 1.0, -1.0) * np.sin(np.pi * n * b)
        log_t = (
            gammaln(n * b + 1.0)
            - gammaln(n + 1.0)
            + (p - n * b) * math.log(self.x_series)
            - np.log(n * b - p)
        )
        tail = float(np.sum(np.exp(log_t) * sgn) / math.pi)
        return bulk + tail

    def mixture_nodes(self, x_hi: float, n_panels: int = 40, nodes_per_panel: int = 12):
        """Frozen quadrature rule (nodes, weights, pdf values) on (0, x_hi]."""
        x_lo = max(self.x_tiny * 0.25, 1e-10)
        if x_hi <= x_lo * 10:
            x_hi = x_lo * 10
        edges = log_panel_edges(x_lo, x_hi, n_panels)
        x, w = gauss_panels(edges, nodes_per_panel)
        return x, w, self.pdf(x)


@lru_cache(maxsize=32)
def stable_unit(beta: float) -> StableUnit:
    """Cached per-beta engine (construction calibrates the series switch)."""
    return StableUnit(float(beta))
