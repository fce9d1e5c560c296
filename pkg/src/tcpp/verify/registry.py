"""Registry of governing equations and the residual-certification driver.

Every entry discretizes one difference-differential or partial differential
equation satisfied by a pmf or density produced elsewhere in the package,
evaluates the residual on a dyadically refined grid, and grades the outcome:
pass when the residual decreases with an estimated convergence order inside
the entry's expected band, or when it is floor-limited below the noise floor.

Tables are always built once on the finest grid from a frozen quadrature rule
and subsampled to the coarser levels, so every level sees the same smooth
function and the finite-difference operators converge at their design order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import comb

from ..errors import DomainError, UnknownEquationError
from ..specfun import caputo_derivative, TimeSeries, gamma_fn
from ..subordinators.densities import (
    hitting_time_boundary_ig,
    ig_density,
    inverse_stable_density,
    inverse_tempered_density,
    stable_density,
    stable_moment,
    tempered_stable_density,
)
from ..subordinators.spec import InverseGaussian, InverseOf, Stable, TemperedStable
from ..subordinators.stable import stable_unit
from ..timechange import mixture_rule, pmf_bessel_ig
from .operators import central_difference, estimate_order, shift_power
from .report import GridSpec, LevelResidual, ResidualReport

__all__ = ["check_equation", "registry_ids", "REGISTRY"]

_FLOOR = 1e-9


# -- small helpers ---------------------------------------------------------------


def _dx_ref(fn, x: np.ndarray, order: int, h_rel: float = 8e-3):
    """High-accuracy x-derivative of a smooth vectorized evaluator.

    Five-point O(h^4) stencils at a fixed small step; this side of each PDE is
    treated as a reference while the time derivative carries the refinement.
    """
    h = h_rel * np.maximum(x, 0.5)
    if order == 1:
        vals = [fn(x + k * h) for k in (-2, -1, 1, 2)]
        return (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12.0 * h)
    if order == 2:
        vals = [fn(x + k * h) for k in (-2, -1, 0, 1, 2)]
        return (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3] - vals[4]) / (
            12.0 * h * h
        )
    raise DomainError("x-reference derivative supports orders 1 and 2")


def _shift_at_zero(j: int, ks: np.ndarray, lam: float):
    """(-lam)^j (1-shift)^j p_.(0) at each count: equals (-lam)^j (-1)^k C(j,k)."""
    out = np.zeros(ks.size)
    for i, k in enumerate(ks):
        if k <= j:
            out[i] = (-lam) ** j * (-1.0) ** k * comb(j, k, exact=True)
    return out


def _pmf_tables(spec, lam, times, ks, tol=1e-11):
    rule = mixture_rule(spec, lam, float(times[0]), float(times[-1]), int(np.max(ks)) + 1, tol)
    return rule.pmf_matrix(times, ks)


def _norms(res: np.ndarray):
    return float(np.max(np.abs(res))), float(math.sqrt(np.mean(np.square(res))))


# -- equation implementations -----------------------------------------------------
#
# Each returns (levels, scale, extras): levels is a list of (h, max, l2) from
# coarse to fine.


def _run_leveled(grid: GridSpec, tables_fine, residual_at):
    """Subsample finest-grid tables to every level and collect residual norms."""
    L = grid.refinement_levels
    t_fine = grid.level_times(L - 1)
    out = []
    scale = 1.0
    extras = {}
    for lev in range(L):
        stride = 2 ** (L - 1 - lev)
        tl = t_fine[::stride]
        sub = [v[..., ::stride] for v in tables_fine]
        res, scale, extras = residual_at(tl, sub, float(tl[1] - tl[0]), lev == L - 1)
        mx, l2 = _norms(res)
        out.append((float(tl[1] - tl[0]), mx, l2))
    return out, scale, extras


def _eq_prop21(params, grid, ks):
    lam, d, g = params["lam"], params["delta"], params["gamma"]
    t_fine = grid.level_times(grid.refinement_levels - 1)
    P = np.stack([pmf_bessel_ig(int(k), t_fine, lam, d, g) for k in ks])

    def residual(tl, sub, h, finest):
        (p,) = sub
        d2, m = central_difference(p, h, 2, richardson=True)
        d1, _ = central_difference(p, h, 1, richardson=True)
        rhs = 2.0 * d * d * lam * shift_power(p, 1, axis=0)[:, m:-m]
        res = d2 - 2.0 * d * g * d1 - rhs
        return res, float(np.max(np.abs(rhs))), {}

    return _run_leveled(grid, [P], residual)


def _eq_prop22(params, grid, ks):
    lam, d, g = params["lam"], params["delta"], params["gamma"]
    t_fine = grid.level_times(grid.refinement_levels - 1)
    P = _pmf_tables(InverseOf(InverseGaussian(d, g)), lam, t_fine, ks)
    h0 = np.array([hitting_time_boundary_ig(float(t), d, g) for t in t_fine])
    dpk0 = np.where(ks == 0, -lam, np.where(ks == 1, lam, 0.0))

    def residual(tl, sub, h, finest):
        p, h0t = sub
        d1, m = central_difference(p, h, 1, richardson=False)
        s1 = shift_power(p, 1, axis=0)
        s2 = shift_power(p, 2, axis=0)
        # (1/2 d^2)[lam^2 (1-shift)^2 - 2 d g lam (1-shift)] p + boundary source
        rhs = (lam * lam * s2 - 2.0 * d * g * lam * s1) / (2.0 * d * d)
        rhs = rhs + (dpk0[:, None] * h0t[None, :]) / (2.0 * d * d)
        res = d1 - rhs[:, m:-m]
        return res, float(np.max(np.abs(rhs))), {}

    return _run_leveled(grid, [P, h0], residual)


def _eq_ig_density_pde(params, grid, xs):
    d, g = params["delta"], params["gamma"]
    t_fine = grid.level_times(grid.refinement_levels - 1)
    xs = np.asarray(xs, dtype=float)
    G = np.stack([ig_density(x, t_fine, d, g) for x in xs])
    # exact space derivative of the closed-form density
    dGdx = np.stack([
        ig_density(x, t_fine, d, g)
        * (-1.5 / x + d * d * t_fine ** 2 / (2.0 * x * x) - g * g / 2.0)
        for x in xs
    ])

    def residual(tl, sub, h, finest):
        gtab, gx = sub
        d2, m = central_difference(gtab, h, 2, richardson=False)
        d1, _ = central_difference(gtab, h, 1, richardson=False)
        rhs = 2.0 * d * d * gx[:, m:-m]
        res = d2 - 2.0 * d * g * d1 - rhs
        return res, float(np.max(np.abs(rhs))), {}

    return _run_leveled(grid, [G, dGdx], residual)


def _eq_prop31(params, grid, ks):
    lam, n = params["lam"], int(params["n"])
    beta = 0.5 ** n
    order = 2 ** n
    t_fine = grid.level_times(grid.refinement_levels - 1)
    P = _pmf_tables(Stable(beta), lam, t_fine, ks, tol=1e-12)

    def residual(tl, sub, h, finest):
        (p,) = sub
        dN, m = central_difference(p, h, order, richardson=False)
        rhs = lam * shift_power(p, 1, axis=0)[:, m:-m]
        res = dN - rhs
        return res, float(np.max(np.abs(rhs))), {}

    return _run_leveled(grid, [P], residual)


def _stable_on_grid(x: float, times: np.ndarray, beta: float):
    """f(x, t) over a whole time grid in one vectorized density call."""
    scale = times ** (-1.0 / beta)
    return scale * stable_unit(beta).pdf(x * scale)


def _inv_stable_on_grid(x: float, times: np.ndarray, beta: float):
    return (times / beta) * stable_unit(beta).pdf(times * x ** (-1.0 / beta)) * x ** (
        -1.0 - 1.0 / beta
    )


def _eq_deblassie(params, grid, xs):
    beta = params["beta"]
    # beta = k/m in lowest terms; the registry instances use k = 1
    if abs(beta - 0.5) < 1e-12:
        m_ord = 2
    elif abs(beta - 1.0 / 3.0) < 1e-12:
        m_ord = 3
    else:
        raise DomainError("deblassie is registered for beta in {1/2, 1/3}")
    xs = np.asarray(xs, dtype=float)
    t_fine = grid.level_times(grid.refinement_levels - 1)
    F = np.stack([_stable_on_grid(x, t_fine, beta) for x in xs])
    dFdx = np.empty_like(F)
    for j, t in enumerate(t_fine):
        dFdx[:, j] = _dx_ref(lambda xv: stable_density(xv, float(t), beta), xs, 1)

    def residual(tl, sub, h, finest):
        f, fx = sub
        dm, m = central_difference(f, h, m_ord, richardson=False)
        rhs = (-1.0) ** m_ord * fx[:, m:-m]
        res = dm - rhs
        return res, float(np.max(np.abs(rhs))), {}

    return _run_leveled(grid, [F, dFdx], residual)


def _eq_thm31(params, grid, ks):
    lam, m_ord = params["lam"], int(params["m"])
    beta = 1.0 / m_ord
    t_fine = grid.level_times(grid.refinement_levels - 1)
    Q = _pmf_tables(InverseOf(Stable(beta)), lam, t_fine, ks)
    src = _thm31_source(t_fine, ks, lam, m_ord)

    def residual(tl, sub, h, finest):
        q, s = sub
        d1, m = central_difference(q, h, 1, richardson=True)
        rhs = (-lam) ** m_ord * shift_power(q, m_ord, axis=0) + s
        res = d1 - rhs[:, m:-m]
        return res, float(np.max(np.abs(rhs))), {}

    return _run_leveled(grid, [Q, src], residual)


def _thm31_source(times, ks, lam, m_ord):
    """sum_j (-lam)^j [(1-shift)^j p(0)]_k t^(-(m-j)/m) / Gamma(1-(m-j)/m)."""
    src = np.zeros((len(ks), times.size))
    for j in range(1, m_ord):
        frac = (m_ord - j) / m_ord
        coeff = _shift_at_zero(j, np.asarray(ks), lam)
        src += coeff[:, None] * times[None, :] ** (-frac) / gamma_fn(1.0 - frac)
    return src


def _eq_cor31(params, grid, ks):
    p = dict(params)
    p["m"] = 2 ** int(params["n"])
    return _eq_thm31(p, grid, ks)


def _caputo_level_times(grid: GridSpec, level: int):
    n = grid.points * 2 ** level
    h = grid.t_max / n
    return h * np.arange(1, n + 1)


def _run_caputo_leveled(grid, tables_fine, residual_at):
    L = grid.refinement_levels
    t_fine = _caputo_level_times(grid, L - 1)
    out = []
    scale, extras = 1.0, {}
    for lev in range(L):
        stride = 2 ** (L - 1 - lev)
        tl = t_fine[stride - 1 :: stride]
        sub = [v[..., stride - 1 :: stride] for v in tables_fine]
        res, scale, extras = residual_at(tl, sub, float(tl[0]), lev == L - 1)
        mx, l2 = _norms(res)
        out.append((float(tl[0]), mx, l2))
    return out, scale, extras


def _eq_frac_dde(params, grid, ks):
    lam, beta = params["lam"], params["beta"]
    L = grid.refinement_levels
    t_fine = _caputo_level_times(grid, L - 1)
    Q = _pmf_tables(InverseOf(Stable(beta)), lam, t_fine, ks)

    def residual(tl, sub, h, finest):
        (q,) = sub
        mask = tl >= grid.t_min
        cap = np.stack([
            caputo_derivative(TimeSeries(tl, q[i]), beta, 1.0 if k == 0 else 0.0).values
            for i, k in enumerate(ks)
        ])
        rhs = -lam * shift_power(q, 1, axis=0)
        res = (cap - rhs)[:, mask]
        return res, float(np.max(np.abs(rhs))), {}

    return _run_caputo_leveled(grid, [Q], residual)


def _eq_prop32(params, grid, ks):
    lam, n, beta = params["lam"], int(params["n"]), params["beta"]
    two_n = 2 ** n
    beta_tot = beta / two_n
    L = grid.refinement_levels
    t_fine = _caputo_level_times(grid, L - 1)
    Q = _pmf_tables(InverseOf(Stable(beta_tot)), lam, t_fine, ks)
    # U(gamma) = E[D(1)^(gamma beta)] for the outer index-beta subordinator
    u_vals = {j: stable_moment(beta, beta * (two_n - j) / two_n) for j in range(1, two_n)}
    src = np.zeros((len(ks), t_fine.size))
    for j in range(1, two_n):
        fracj = (two_n - j) / two_n
        coeff = _shift_at_zero(j, np.asarray(ks), lam)
        src += (
            coeff[:, None]
            * t_fine[None, :] ** (-beta * fracj)
            * u_vals[j]
            / gamma_fn(1.0 - fracj)
        )

    def residual(tl, sub, h, finest):
        q, s = sub
        mask = tl >= grid.t_min
        cap = np.stack([
            caputo_derivative(TimeSeries(tl, q[i]), beta, 1.0 if k == 0 else 0.0).values
            for i, k in enumerate(ks)
        ])
        rhs = lam ** two_n * shift_power(q, two_n, axis=0) + s
        res = (cap - rhs)[:, mask]
        extras = {}
        if finest:
            alt = lam ** two_n * shift_power(q, two_n - 1, axis=0) + s
            extras["alternative_shift_exponent_max_residual"] = float(
                np.max(np.abs((cap - alt)[:, mask]))
            )
        return res, float(np.max(np.abs(rhs))), extras

    return _run_caputo_leveled(grid, [Q, src], residual)


def _eq_et_pde(params, grid, xs):
    if int(params["m"]) != 2:
        raise DomainError("et-pde is registered for m = 2 (index 1/2)")
    beta = 0.5
    xs = np.asarray(xs, dtype=float)
    t_fine = grid.level_times(grid.refinement_levels - 1)
    M = np.stack([_inv_stable_on_grid(x, t_fine, beta) for x in xs])
    Mxx = _et_pde_xx(xs, t_fine, beta)

    def residual(tl, sub, h, finest):
        m_tab, mxx = sub
        d1, m = central_difference(m_tab, h, 1, richardson=False)
        rhs = mxx[:, m:-m]
        res = d1 - rhs
        extras = {}
        if finest:
            extras.update(_et_pde_boundaries(tl, beta))
        return res, float(np.max(np.abs(rhs))), extras

    return _run_leveled(grid, [M, Mxx], residual)


def _et_pde_xx(xs, times, beta):
    out = np.empty((len(xs), times.size))
    for j, t in enumerate(times):
        out[:, j] = _dx_ref(lambda xv: inverse_stable_density(xv, float(t), beta),
                            np.asarray(xs), 2)
    return out


def _et_pde_boundaries(times, beta):
    """Boundary system of the index-1/2 PDE at a few probe times."""
    probes = times[:: max(1, times.size // 4)]
    eps = 1e-5
    val_err = 0.0
    der_sz = 0.0
    far = 0.0
    for t in probes:
        m1 = float(inverse_stable_density(np.array([eps]), float(t), beta)[0])
        m2 = float(inverse_stable_density(np.array([2 * eps]), float(t), beta)[0])
        m0 = 2.0 * m1 - m2
        target = float(t) ** (-beta) / gamma_fn(1.0 - beta)
        val_err = max(val_err, abs(m0 - target))
        der_sz = max(der_sz, abs((m2 - m1) / eps))
        far = max(far, float(inverse_stable_density(np.array([40.0 * math.sqrt(t)]),
                                                    float(t), beta)[0]))
    return {
        "boundary_value_max_error": val_err,
        "boundary_derivative_max_abs": der_sz,
        "far_field_max": far,
    }


def _eq_prop41(params, grid, xs):
    mu, m_ord = params["mu"], int(params["m"])
    beta = 1.0 / m_ord
    xs = np.asarray(xs, dtype=float)
    t_fine = grid.level_times(grid.refinement_levels - 1)
    F = np.stack([
        np.exp(-mu * x + mu ** beta * t_fine) * _stable_on_grid(x, t_fine, beta)
        for x in xs
    ])
    dFdx = np.empty_like(F)
    for j, t in enumerate(t_fine):
        dFdx[:, j] = _dx_ref(
            lambda xv: tempered_stable_density(xv, float(t), beta, mu), xs, 1
        )

    def residual(tl, sub, h, finest):
        f, fx = sub
        parts = []
        margin = 2 if m_ord >= 3 else 1
        lhs = None
        for j in range(1, m_ord + 1):
            dj, m = central_difference(f, h, j, richardson=False)
            trim = margin - m
            dj = dj[:, trim : dj.shape[1] - trim or None]
            term = (-1.0) ** j * comb(m_ord, j, exact=True) * mu ** (1.0 - j / m_ord) * dj
            lhs = term if lhs is None else lhs + term
        rhs = fx[:, margin:-margin]
        res = lhs - rhs
        return res, float(np.max(np.abs(rhs))), {}

    return _run_leveled(grid, [F, dFdx], residual)


def _eq_rmk41(params, grid, ks):
    lam, mu = params["lam"], params["mu"]
    if int(params["m"]) != 2:
        raise DomainError("rmk4.1 is registered for m = 2 (beta = 1/2)")
    beta = 0.5
    t_fine = grid.level_times(grid.refinement_levels - 1)
    R = _pmf_tables(TemperedStable(beta, mu), lam, t_fine, ks)

    def residual(tl, sub, h, finest):
        (r,) = sub
        d2, m = central_difference(r, h, 2, richardson=False)
        d1, _ = central_difference(r, h, 1, richardson=False)
        rhs = lam * shift_power(r, 1, axis=0)[:, m:-m]
        res = d2 - 2.0 * math.sqrt(mu) * d1 - rhs
        return res, float(np.max(np.abs(rhs))), {}

    return _run_leveled(grid, [R], residual)


def _eq_inv_tempered_pde(params, grid, xs):
    mu = params["mu"]
    if int(params["m"]) != 2:
        raise DomainError("inv-tempered-pde is registered for m = 2")
    beta = 0.5
    xs = np.asarray(xs, dtype=float)
    t_fine = grid.level_times(grid.refinement_levels - 1)
    M = np.empty((len(xs), t_fine.size))
    Mx = np.empty_like(M)
    Mxx = np.empty_like(M)
    for j, t in enumerate(t_fine):
        M[:, j] = inverse_tempered_density(xs, float(t), beta, mu)
        Mx[:, j] = _dx_ref(lambda xv: inverse_tempered_density(xv, float(t), beta, mu), xs, 1)
        Mxx[:, j] = _dx_ref(lambda xv: inverse_tempered_density(xv, float(t), beta, mu), xs, 2)

    def residual(tl, sub, h, finest):
        m_tab, mx, mxx = sub
        d1, m = central_difference(m_tab, h, 1, richardson=False)
        lhs = mxx[:, m:-m] - 2.0 * math.sqrt(mu) * mx[:, m:-m]
        res = lhs - d1
        return res, float(np.max(np.abs(lhs))), {}

    return _run_leveled(grid, [M, Mx, Mxx], residual)


def _eq_prop42(params, grid, ks):
    lam, mu = params["lam"], params["mu"]
    if int(params["m"]) != 2:
        raise DomainError("prop4.2 is registered for m = 2")
    beta = 0.5
    t_fine = grid.level_times(grid.refinement_levels - 1)
    R = _pmf_tables(InverseOf(TemperedStable(beta, mu)), lam, t_fine, ks)
    m0 = np.empty(t_fine.size)
    mx0 = np.empty(t_fine.size)
    eps = 2e-4
    for j, t in enumerate(t_fine):
        v = inverse_tempered_density(np.array([eps, 2 * eps, 3 * eps]), float(t), beta, mu)
        m0[j] = 3.0 * v[0] - 3.0 * v[1] + v[2]
        mx0[j] = (-2.5 * v[0] + 4.0 * v[1] - 1.5 * v[2]) / eps
    pk0 = np.where(np.asarray(ks) == 0, 1.0, 0.0)
    dpk0 = np.where(np.asarray(ks) == 0, -lam, np.where(np.asarray(ks) == 1, lam, 0.0))

    def residual(tl, sub, h, finest):
        r, b0, bx0 = sub
        d1, m = central_difference(r, h, 1, richardson=False)
        s1 = shift_power(r, 1, axis=0)
        s2 = shift_power(r, 2, axis=0)
        rhs = -2.0 * math.sqrt(mu) * lam * s1 + lam * lam * s2
        rhs = rhs + (2.0 * math.sqrt(mu) * pk0 + dpk0)[:, None] * b0[None, :]
        rhs = rhs - pk0[:, None] * bx0[None, :]
        res = d1 - rhs[:, m:-m]
        extras = {"boundary_value_at_tmax": float(b0[-1]),
                  "boundary_slope_at_tmax": float(bx0[-1])} if finest else {}
        return res, float(np.max(np.abs(rhs))), extras

    return _run_leveled(grid, [R, m0, mx0], residual)


# -- registry -----------------------------------------------------------------------


@dataclass(frozen=True)
class EquationDef:
    equation_id: str
    runner: object
    default_params: dict
    default_grid: GridSpec
    band: tuple
    default_range: tuple  # counts k or space points x
    range_kind: str = "k"
    statement: str = ""


def _std_ks(n=4):
    return tuple(range(n))


REGISTRY: dict[str, EquationDef] = {}


def _register(eq):
    REGISTRY[eq.equation_id] = eq


_register(EquationDef(
    "prop2.1", _eq_prop21,
    {"lam": 1.0, "delta": 1.0, "gamma": 1.0},
    GridSpec(0.5, 2.0, points=97, refinement_levels=4),
    band=(3.0, 5.0), default_range=_std_ks(5),
    statement="d2/dt2 p - 2 d g d/dt p = 2 d^2 lam (1-shift) p",
))
_register(EquationDef(
    "prop2.2", _eq_prop22,
    {"lam": 1.0, "delta": 1.0, "gamma": 1.0},
    GridSpec(0.5, 2.0, points=17, refinement_levels=4),
    band=(0.8, 2.3), default_range=_std_ks(4),
    statement="d/dt p~ = (2 d^2)^-1 [lam^2(1-shift)^2 - 2 d g lam (1-shift)] p~ + h(0,t) p'(0)/(2 d^2)",
))
_register(EquationDef(
    "ig-density-pde", _eq_ig_density_pde,
    {"delta": 1.0, "gamma": 1.0},
    GridSpec(0.5, 2.0, points=17, refinement_levels=4),
    band=(1.6, 2.4), default_range=(0.4, 0.8, 1.5, 2.5), range_kind="x",
    statement="d2/dt2 g - 2 d g_ d/dt g = 2 d^2 dg/dx",
))
_register(EquationDef(
    "prop3.1(1)", _eq_prop31,
    {"lam": 1.0, "n": 1},
    GridSpec(0.5, 2.5, points=17, refinement_levels=4),
    band=(1.6, 2.4), default_range=_std_ks(4),
    statement="d2/dt2 p~ = lam (1-shift) p~ for the once-iterated 1/2-stable clock",
))
_register(EquationDef(
    "prop3.1(2)", _eq_prop31,
    {"lam": 1.0, "n": 2},
    GridSpec(0.5, 2.5, points=17, refinement_levels=4),
    band=(1.5, 2.5), default_range=_std_ks(4),
    statement="d4/dt4 p~ = lam (1-shift) p~ for the twice-iterated 1/2-stable clock",
))
_register(EquationDef(
    "deblassie(1/2)", _eq_deblassie,
    {"beta": 0.5},
    GridSpec(0.5, 2.5, points=17, refinement_levels=4),
    band=(1.6, 2.4), default_range=(0.5, 1.0, 2.0, 4.0), range_kind="x",
    statement="d2/dt2 f = df/dx for the 1/2-stable density",
))
_register(EquationDef(
    "deblassie(1/3)", _eq_deblassie,
    {"beta": 1.0 / 3.0},
    GridSpec(0.5, 2.5, points=17, refinement_levels=4),
    band=(1.5, 2.5), default_range=(0.4, 0.8, 1.6, 3.2), range_kind="x",
    statement="d3/dt3 f = -df/dx for the 1/3-stable density",
))
_register(EquationDef(
    "thm3.1(2)", _eq_thm31,
    {"lam": 1.0, "m": 2},
    GridSpec(0.25, 4.0, points=31, refinement_levels=5),
    band=(2.5, 4.6), default_range=_std_ks(4),
    statement="d/dt q = lam^2 (1-shift)^2 q + p'(0) t^-1/2/Gamma(1/2)",
))
_register(EquationDef(
    "thm3.1(3)", _eq_thm31,
    {"lam": 1.0, "m": 3},
    GridSpec(0.25, 4.0, points=31, refinement_levels=5),
    band=(2.5, 4.6), default_range=_std_ks(4),
    statement="d/dt q = -lam^3 (1-shift)^3 q + sources, index 1/3",
))
_register(EquationDef(
    "cor3.1(1)", _eq_cor31,
    {"lam": 1.0, "n": 1},
    GridSpec(0.25, 4.0, points=31, refinement_levels=5),
    band=(2.5, 4.6), default_range=_std_ks(4),
    statement="theorem DDE with m = 2^1 (subsumed by thm3.1(2))",
))
_register(EquationDef(
    "cor3.1(2)", _eq_cor31,
    {"lam": 1.0, "n": 2},
    GridSpec(0.5, 4.0, points=29, refinement_levels=4),
    band=(2.5, 4.6), default_range=_std_ks(4),
    statement="d/dt q = lam^4 (1-shift)^4 q + sources, index 1/4",
))
_register(EquationDef(
    "frac-dde(1/2)", _eq_frac_dde,
    {"lam": 1.0, "beta": 0.5},
    GridSpec(0.5, 2.0, points=64, refinement_levels=4),
    band=(1.35, 1.85), default_range=_std_ks(3),
    statement="Caputo^1/2 q = -lam (1-shift) q",
))
_register(EquationDef(
    "frac-dde(1/4)", _eq_frac_dde,
    {"lam": 1.0, "beta": 0.25},
    GridSpec(0.5, 2.0, points=64, refinement_levels=4),
    band=(1.0, 1.8), default_range=_std_ks(3),
    statement="Caputo^1/4 q = -lam (1-shift) q",
))
_register(EquationDef(
    "et-pde(2)", _eq_et_pde,
    {"m": 2},
    GridSpec(0.5, 2.0, points=17, refinement_levels=4),
    band=(1.6, 2.4), default_range=(0.3, 0.6, 1.0, 1.8), range_kind="x",
    statement="dm/dt = d2m/dx2 with boundary system, inverse 1/2-stable density",
))
_register(EquationDef(
    "prop3.2", _eq_prop32,
    {"lam": 1.0, "n": 1, "beta": 0.5},
    GridSpec(0.5, 2.0, points=64, refinement_levels=4),
    band=(0.9, 1.8), default_range=_std_ks(3),
    statement="Caputo^beta q~ = lam^2 (1-shift)^2 q~ + U-weighted sources",
))
_register(EquationDef(
    "prop4.1(2)", _eq_prop41,
    {"mu": 1.0, "m": 2},
    GridSpec(0.5, 2.5, points=17, refinement_levels=4),
    band=(1.6, 2.4), default_range=(0.5, 1.0, 2.0, 4.0), range_kind="x",
    statement="d2/dt2 f - 2 sqrt(mu) d/dt f = df/dx, tempered 1/2-stable",
))
_register(EquationDef(
    "prop4.1(3)", _eq_prop41,
    {"mu": 1.0, "m": 3},
    GridSpec(0.5, 2.5, points=17, refinement_levels=4),
    band=(1.5, 2.5), default_range=(0.4, 0.8, 1.6, 3.2), range_kind="x",
    statement="third-order tempered operator = df/dx, tempered 1/3-stable",
))
_register(EquationDef(
    "rmk4.1(2)", _eq_rmk41,
    {"lam": 1.0, "mu": 1.0, "m": 2},
    GridSpec(0.5, 2.0, points=17, refinement_levels=4),
    band=(1.6, 2.4), default_range=_std_ks(4),
    statement="d2/dt2 r - 2 sqrt(mu) d/dt r = lam (1-shift) r",
))
_register(EquationDef(
    "inv-tempered-pde(2)", _eq_inv_tempered_pde,
    {"mu": 1.0, "m": 2},
    GridSpec(0.5, 2.0, points=17, refinement_levels=4),
    band=(1.5, 2.5), default_range=(0.4, 0.8, 1.5), range_kind="x",
    statement="d2m/dx2 - 2 sqrt(mu) dm/dx = dm/dt, inverse tempered density",
))
_register(EquationDef(
    "prop4.2(2)", _eq_prop42,
    {"lam": 1.0, "mu": 1.0, "m": 2},
    GridSpec(0.5, 2.0, points=17, refinement_levels=4),
    band=(0.8, 2.3), default_range=_std_ks(4),
    statement="d/dt r~ = tempered shift operator + x=0 boundary cross-terms",
))


def registry_ids():
    return list(REGISTRY.keys())


def check_equation(equation_id: str, params: dict | None = None,
                   grid: GridSpec | None = None, k_range=None) -> ResidualReport:
    """Build tables, apply the equation's operators, grade the residuals."""
    if equation_id not in REGISTRY:
        raise UnknownEquationError(
            f"unknown equation '{equation_id}'; known: {sorted(REGISTRY)}"
        )
    eq = REGISTRY[equation_id]
    p = dict(eq.default_params)
    p.update(params or {})
    g = grid or eq.default_grid
    rng = tuple(k_range) if k_range is not None else eq.default_range
    ks = np.asarray(rng, dtype=float if eq.range_kind == "x" else int)
    levels_raw, scale, extras = eq.runner(p, g, ks)
    hs = [lv[0] for lv in levels_raw]
    maxs = [lv[1] for lv in levels_raw]
    floor = max(_FLOOR, 1e-12 * scale)
    est = estimate_order(hs, maxs, floor=floor)
    in_band = (not est.floor_limited) and est.order is not None and (
        eq.band[0] <= est.order <= eq.band[1]
    )
    passed = bool(est.floor_limited or (in_band and est.monotone))
    levels = [LevelResidual(h, mx, l2) for (h, mx, l2) in levels_raw]
    return ResidualReport(
        equation_id=equation_id,
        params=p,
        levels=levels,
        estimated_order=est.order,
        floor_limited=est.floor_limited,
        passed=passed,
        band=eq.band,
        scale=scale,
        extras=extras,
    )
