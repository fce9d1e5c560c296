"""Exact and approximate samplers for every time-change process.

RNG discipline: every sampler draws from a Philox counter-based generator
keyed by (seed, stream).  Batches are reproducible for a given
(spec, t, seed, stream, count) regardless of what else ran before, and
parallel consumers get disjoint streams.

Sampler routes:

* IG(delta, gamma):  two-root transformation method (gamma > 0); the
  gamma = 0 degenerate case is the Levy law (delta t)^2 / Z^2.
* stable(beta):      positive-stable transformation sampler from a uniform
  angle and a unit exponential.
* tempered(beta,mu): exponential-tilting rejection against the stable
  sampler, acceptance exp(-mu X).
* composition:       feed sampled values as the time argument of the next
  part (outermost part listed first).
* inverse:           first-passage time of the base.  Stable bases (and
  compositions of stables) use the exact scaling identity
  E(t) =d (t/D(1))^beta; IG bases use the running-maximum identity
  H(t) = M(t)/delta for a drifted Brownian motion; anything else walks the
  base path on a geometrically growing committed grid until it crosses t,
  bracketing the crossing to a relative tolerance.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError, GridBudgetError, RejectionBudgetError
from .spec import (
    Composition,
    InverseGaussian,
    InverseOf,
    SampleBatch,
    Stable,
    SubordinatorSpec,
    TemperedStable,
    flatten_stable_composition,
)

__all__ = ["rng_stream", "sample", "sample_path"]


def rng_stream(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for (seed, stream); disjoint across streams."""
    key = np.random.SeedSequence([int(seed) & (2**64 - 1), int(stream) & (2**64 - 1)])
    return np.random.Generator(np.random.Philox(key))


# -- elementary samplers -----------------------------------------------------


def _sample_ig(rng, t, delta, gamma, n=None):
    """IG(delta t, gamma) by the two-root transformation method."""
    t = np.asarray(t, dtype=float)
    size = t.shape if n is None else (n,)
    z = rng.standard_normal(size)
    u = rng.random(size)
    dt = delta * t
    if gamma == 0.0:
        return (dt / z) ** 2
    mean = dt / gamma
    shape = dt * dt
    nu = z * z
    w = mean * nu
    x1 = mean + mean / (2.0 * shape) * (w - np.sqrt(4.0 * shape * w + w * w))
    take_first = u <= mean / (mean + x1)
    return np.where(take_first, x1, mean * mean / x1)


def _sample_stable_unit(rng, beta, size):
    """D(1) for the stable law with LT exp(-s^beta)."""
    theta = math.pi * rng.random(size)
    theta = np.clip(theta, 1e-12, math.pi - 1e-12)
    w = rng.standard_exponential(size)
    b = beta
    log_a = (
        np.log(np.sin((1.0 - b) * theta))
        + (b / (1.0 - b)) * np.log(np.sin(b * theta))
        - (1.0 / (1.0 - b)) * np.log(np.sin(theta))
    )
    return np.exp((1.0 - b) / b * (log_a - np.log(w)))


def _sample_stable(rng, t, beta, n=None):
    t = np.asarray(t, dtype=float)
    size = t.shape if n is None else (n,)
    return t ** (1.0 / beta) * _sample_stable_unit(rng, beta, size)


def _sample_tempered(rng, t, beta, mu, n=None, budget_factor=400):
    """Tilting rejection: propose stable, accept with prob exp(-mu X)."""
    t = np.asarray(t, dtype=float)
    size = t.shape if n is None else (n,)
    t_b = np.broadcast_to(t, size)
    accept_rate = math.exp(-(mu ** beta) * float(np.max(t_b)))
    if accept_rate < 1e-8:
        raise RejectionBudgetError(
            f"tilting acceptance ~exp(-mu^beta t) = {accept_rate:.2e} is too small"
        )
    out = np.empty(size, dtype=float)
    pending = np.ones(size, dtype=bool)
    rounds = 0
    max_rounds = int(budget_factor / accept_rate) + 20
    while np.any(pending):
        rounds += 1
        if rounds > max_rounds:
            raise RejectionBudgetError("tempered stable rejection budget exceeded")
        idx = np.nonzero(pending)[0]
        x = _sample_stable(rng, t_b.ravel()[idx], beta)
        ok = rng.random(idx.shape) <= np.exp(-mu * x)
        out.ravel()[idx[ok]] = x[ok]
        pending.ravel()[idx[ok]] = False
    return out


def _sample_ig_hitting(rng, t, delta, gamma, n=None):
    """H(t) = M(t)/delta, M the running max of B(s) + gamma s on [0, t]."""
    t = np.asarray(t, dtype=float)
    size = t.shape if n is None else (n,)
    t_b = np.broadcast_to(t, size).astype(float)
    z = rng.standard_normal(size)
    u = rng.random(size)
    x_end = gamma * t_b + np.sqrt(t_b) * z
    m = 0.5 * (x_end + np.sqrt(x_end * x_end - 2.0 * t_b * np.log(np.maximum(u, 1e-300))))
    return m / delta


# -- increment sampling for path walks ----------------------------------------


def _increment(rng, spec: SubordinatorSpec, dt):
    """One increment of the Levy subordinator `spec` over per-element steps dt."""
    if isinstance(spec, InverseGaussian):
        return _sample_ig(rng, dt, spec.delta, spec.gamma)
    if isinstance(spec, Stable):
        return _sample_stable(rng, dt, spec.beta)
    if isinstance(spec, TemperedStable):
        return _sample_tempered(rng, dt, spec.beta, spec.mu)
    if isinstance(spec, Composition):
        v = np.asarray(dt, dtype=float)
        for part in reversed(spec.parts):
            v = _increment(rng, part, v)
        return v
    raise DomainError(f"cannot sample increments of {spec!r}")


def _first_passage_walk(rng, base, levels, n, rtol, max_iters=None):
    """Crossing times of the base path over every level in `levels`.

    Committed walk: the step taken from state (s, d) depends only on s, so no
    sampled increment is ever discarded and the crossing law stays unbiased.
    Steps grow geometrically (h = rtol * s), which brackets each crossing to a
    relative width rtol.  Returns an (n, len(levels)) array.
    """
    levels = np.asarray(levels, dtype=float)
    t_max = float(levels[-1])
    if max_iters is None:
        max_iters = int(60.0 / rtol) + 1000
    # crude lower scale for the first grid point; crossing below s0 is a
    # ~1e-6 tail event handled by restarting the whole path on a finer grid
    s0_scale = _passage_scale(base, t_max)
    out = np.full((n, levels.size), np.nan)

    def run(idx, s0, depth):
        if idx.size == 0:
            return
        if depth > 6:
            raise GridBudgetError("first-passage restart recursion exhausted")
        m = idx.size
        s = np.full(m, s0)
        d = _increment(rng, base, np.full(m, s0))
        next_level = np.zeros(m, dtype=int)
        # levels crossed by the very first committed step: restart those paths
        early = d > levels[0]
        for it in range(max_iters):
            alive = next_level < levels.size
            if not np.any(alive):
                break
            ai = np.nonzero(alive)[0]
            h = rtol * s[ai]
            inc = _increment(rng, base, h)
            s[ai] += h
            d[ai] += inc
            crossed = np.searchsorted(levels, d[ai], side="left")
            adv = crossed > next_level[ai]
            if np.any(adv):
                for j in np.nonzero(adv)[0]:
                    row = ai[j]
                    if not early[row]:
                        out[idx[row], next_level[row]:crossed[j]] = s[row] - 0.5 * h[j]
                    next_level[row] = crossed[j]
        else:
            raise GridBudgetError("first-passage walk exceeded its step budget")
        if np.any(early):
            run(idx[early], s0 * 1e-2, depth + 1)

    run(np.arange(n), max(1e-12, rtol * s0_scale), 0)
    return out


def _passage_scale(base, t):
    """Order of magnitude of the first-passage time over level t."""
    if isinstance(base, InverseGaussian):
        return t / base.delta * max(base.gamma, 1.0 / math.sqrt(t))
    if isinstance(base, Stable):
        return t ** base.beta
    if isinstance(base, TemperedStable):
        drift_scale = t / (base.beta * base.mu ** (base.beta - 1.0))
        return min(t ** base.beta, drift_scale)
    if isinstance(base, Composition):
        s = t
        for part in base.parts:
            s = _passage_scale(part, s)
        return s
    return t


# -- public sampling surface ----------------------------------------------------


def _sample_value(rng, spec: SubordinatorSpec, t: float, n: int, rtol: float):
    if isinstance(spec, InverseGaussian):
        return _sample_ig(rng, np.full(n, t), spec.delta, spec.gamma)
    if isinstance(spec, Stable):
        return _sample_stable(rng, np.full(n, t), spec.beta)
    if isinstance(spec, TemperedStable):
        return _sample_tempered(rng, np.full(n, t), spec.beta, spec.mu)
    if isinstance(spec, Composition):
        v = np.full(n, float(t))
        for part in reversed(spec.parts):
            v = _increment(rng, part, v)
        return v
    if isinstance(spec, InverseOf):
        base = spec.base
        eff = flatten_stable_composition(base)
        if eff is not None:
            # exact: E(t) =d (t / D(1))^beta by self-similar first passage
            return (t / _sample_stable_unit(rng, eff, (n,))) ** eff
        if isinstance(base, InverseGaussian):
            return _sample_ig_hitting(rng, np.full(n, t), base.delta, base.gamma)
        return _first_passage_walk(rng, base, np.array([t]), n, rtol)[:, 0]
    raise DomainError(f"cannot sample {spec!r}")


def sample(
    spec: SubordinatorSpec,
    t: float,
    count: int,
    seed: int,
    stream: int = 0,
    rtol: float = 1e-4,
) -> SampleBatch:
    """Draw `count` values of the process at time t; reproducible per seed."""
    if t <= 0:
        raise DomainError("sample requires t > 0")
    if count < 1:
        raise DomainError("sample requires count >= 1")
    rng = rng_stream(seed, stream)
    values = _sample_value(rng, spec, float(t), int(count), rtol)
    return SampleBatch(spec=spec, t=float(t), seed=int(seed), values=values)


def sample_path(
    spec: SubordinatorSpec,
    t_grid,
    paths: int,
    seed: int,
    stream: int = 0,
    rtol: float = 1e-4,
) -> np.ndarray:
    """Sample `paths` trajectories on the grid; rows are nondecreasing.

    Plain subordinators and compositions accumulate independent increments;
    inverse processes read all grid levels off one first-passage walk per
    path (their paths are continuous and nondecreasing).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1 or t_grid[0] <= 0 or np.any(np.diff(t_grid) <= 0):
        raise DomainError("t_grid must be strictly increasing and positive")
    if paths < 1:
        raise DomainError("paths must be >= 1")
    rng = rng_stream(seed, stream)
    if isinstance(spec, InverseOf):
        return _first_passage_walk(rng, spec.base, t_grid, paths, rtol)
    dts = np.diff(np.concatenate([[0.0], t_grid]))
    out = np.empty((paths, t_grid.size))
    acc = np.zeros(paths)
    for j, dt in enumerate(dts):
        acc = acc + _increment(rng, spec, np.full(paths, dt))
        out[:, j] = acc
    return out
