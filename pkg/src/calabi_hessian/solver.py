"""Construction of the curve ``F(x, y(x)) = 0`` from the singular endpoint to ``x = b``.

The curve starts at ``(0, 0)`` where the polynomial equation degenerates, so
the starting branch is identified twice:

* ``seed_slope`` picks a root of the limiting slope polynomial directly;
* ``seed_chain`` follows the induction over ``F_{m0}, ..., F_0`` at a small
  abscissa, each step taking the least root above the previous one.

The curve is then tracked by a predictor-corrector scheme and independently
integrated as an explicit first-order ODE with classical RK4.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb
from typing import List, Optional

import numpy as np
from scipy.optimize import brentq

from .criteria import CriteriaReport, classify, fmt_real
from .errors import (
    DegenerateClass,
    OracleBreakdown,
    RetryWithSmallerEpsilon,
    SeedNotFound,
)
from .polynomials import BivariatePolynomial, CalabiParams, as_fraction, build_F
from .symmetric import in_admissible_cone, sigma_all, structured_eigenvector

STATUSES = (
    "solved",
    "fold_detected",
    "admissibility_lost",
    "newton_diverged",
    "boundary_mismatch",
)

DEFAULT_TOL = 1e-12
TERMINAL_RTOL = 1e-6
EPSILON_FACTOR = 1e-3
MAX_EPSILON_HALVINGS = 30
MIN_STEP_FACTOR = 2.0**-20


class FloatPoly:
    """Floating evaluation of a polynomial with its first partials."""

    __slots__ = ("terms", "dx", "dy")

    def __init__(self, poly: BivariatePolynomial):
        self.terms = poly.float_terms()
        self.dx = max((i for i, _, _ in self.terms), default=0)
        self.dy = max((j for _, j, _ in self.terms), default=0)

    def __call__(self, x: float, y: float):
        """Return ``(F, F_x, F_y, scale)`` where ``scale`` sums absolute term values."""
        xp = [1.0] * (self.dx + 1)
        for i in range(1, self.dx + 1):
            xp[i] = xp[i - 1] * x
        yp = [1.0] * (self.dy + 1)
        for j in range(1, self.dy + 1):
            yp[j] = yp[j - 1] * y
        f = fx = fy = sc = 0.0
        for i, j, c in self.terms:
            t = c * xp[i] * yp[j]
            f += t
            sc += abs(t)
            if i:
                fx += i * c * xp[i - 1] * yp[j]
            if j:
                fy += j * c * xp[i] * yp[j - 1]
        return f, fx, fy, sc

    def value(self, x: float, y: float) -> float:
        return self(x, y)[0]


def slope_polynomial(params: CalabiParams, mu, i: int = 0) -> List[Fraction]:
    """Coefficients (ascending in ``t``) of ``(sigma_{k-i} - mu sigma_{l-i})(t*(m-i+1), p*n)``.

    The vector is the limit at ``x = 0`` of the eigenvalues along a curve with
    slope ``t`` at the origin, for the polynomial ``F_i``.
    """
    mu = as_fraction(mu)
    block = params.m - i + 1
    n, p = params.n, params.p

    def sigma_coeffs(j):
        out = [Fraction(0)] * (block + 1)
        if j < 0:
            return out
        for a in range(0, min(j, block) + 1):
            if j - a <= n:
                out[a] += comb(block, a) * comb(n, j - a) * p ** (j - a)
        return out

    upper = sigma_coeffs(params.k - i)
    lower = sigma_coeffs(params.l - i)
    coeffs = [u - mu * w for u, w in zip(upper, lower)]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _polyval(coeffs, t):
    v = 0.0
    for c in reversed(coeffs):
        v = v * t + c
    return v


def _polyder(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:] or [0.0]


def _polish(coeffs, t, iters=50):
    d = _polyder(coeffs)
    for _ in range(iters):
        dp = _polyval(d, t)
        if dp == 0:
            break
        step = _polyval(coeffs, t) / dp
        t -= step
        if abs(step) <= 1e-16 * max(1.0, abs(t)):
            break
    return t


def real_roots(coeffs) -> List[float]:
    """Real roots of an ascending-coefficient polynomial, polished and deduplicated."""
    fc = [float(c) for c in coeffs]
    if len(fc) < 2:
        return []
    raw = np.roots(fc[::-1])
    out: List[float] = []
    for r in raw:
        if abs(r.imag) <= 1e-6 * max(1.0, abs(r.real)):
            t = _polish(fc, float(r.real))
            if all(abs(t - u) > 1e-9 * max(1.0, abs(u)) for u in out):
                out.append(t)
    return sorted(out)


@dataclass
class SeedResult:
    slope_candidates: List[float]
    chosen_slope: float
    chain_slopes: List[float] = field(default_factory=list)
    epsilon: float = 0.0
    y_epsilon: Optional[float] = None
    chain_values: List[float] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "slope_candidates": [fmt_real(t) for t in self.slope_candidates],
            "chosen_slope": fmt_real(self.chosen_slope),
            "chain_slopes": [fmt_real(t) for t in self.chain_slopes],
            "epsilon": fmt_real(self.epsilon),
            "y_epsilon": fmt_real(self.y_epsilon),
        }


def _limit_vector(params: CalabiParams, t: float, block: int):
    return (t,) * block + (float(params.p),) * params.n


def seed_slope(params: CalabiParams, mu) -> SeedResult:
    """Largest root of the limiting slope polynomial that is stable and admissible."""
    coeffs = slope_polynomial(params, mu)
    fc = [float(c) for c in coeffs]
    d = _polyder(fc)
    roots = real_roots(coeffs)
    for t in reversed(roots):
        if _polyval(d, t) > 0 and in_admissible_cone(_limit_vector(params, t, params.m + 1), params.k):
            return SeedResult(roots, t)
    raise SeedNotFound(
        f"no root of the slope polynomial with positive derivative and admissible limit "
        f"(candidates {roots})"
    )


def _linear_base_value(params: CalabiParams, mu, x: Fraction) -> Fraction:
    """``y_{k-1}(x)`` from the integrating factor ``x^a (1+x)^n`` with ``a = m-k+1``.

    The integrand ``s^a (1+s)^(n-1) (mu delta (1+s) - n p)`` is a polynomial, so the
    quadrature is an exact antiderivative.
    """
    a = params.m - params.k + 1
    n, p = params.n, params.p
    delta = 1 if params.k - 1 == params.l else 0
    mu = as_fraction(mu)
    # integrand coefficients in powers of s
    poly = {}
    for r in range(n + 1):
        poly[a + r] = poly.get(a + r, 0) + mu * delta * comb(n, r)
    if n >= 1:
        for r in range(n):
            poly[a + r] = poly.get(a + r, 0) - n * p * comb(n - 1, r)
    integral = sum((c * x ** (e + 1) / (e + 1) for e, c in poly.items()), Fraction(0))
    return integral / (x**a * (1 + x) ** n)


def _newton_root(F: FloatPoly, x: float, y: float, tol: float, max_iter: int = 60):
    """Newton on ``y -> F(x, y)`` from ``y``; returns the root or ``None``."""
    f, _, fy, sc = F(x, y)
    for _ in range(max_iter):
        if sc == 0 or abs(f) <= tol * sc:
            return y
        if fy == 0:
            return None
        y_new = y - f / fy
        f_new, _, fy_new, sc_new = F(x, y_new)
        damp = 1.0
        while abs(f_new) > abs(f) and damp > 1e-4:
            damp *= 0.5
            y_new = y - damp * f / fy
            f_new, _, fy_new, sc_new = F(x, y_new)
        if y_new == y:
            return y
        y, f, fy, sc = y_new, f_new, fy_new, sc_new
    return y if sc and abs(f) <= 1e3 * tol * sc else None


def _root_above(F: FloatPoly, x: float, lo: float, scale: float) -> Optional[float]:
    """Least root of ``F(x, .)`` above ``lo``, given ``F(x, lo) < 0``."""
    h = max(abs(lo), scale) * 1e-3
    prev = lo
    for _ in range(200):
        hi = lo + h
        if F.value(x, hi) > 0:
            return brentq(lambda y: F.value(x, y), prev, hi, xtol=1e-17 * max(scale, abs(lo)), rtol=1e-15, maxiter=500)
        prev = hi
        h *= 2.0
    return None


def _zero_branch(F: FloatPoly) -> bool:
    """True when ``y = 0`` solves ``F(x, .) = 0`` for every ``x``."""
    return all(j > 0 for _, j, _ in F.terms)


def _chain_values(params: CalabiParams, mu, chain: List[FloatPoly], x: float):
    """``[y_{m0}(x), ..., y_0(x)]`` following the induction at abscissa ``x``.

    Also returns the positions that sit on a constant zero branch (``p = 0``, or
    the top-degree case where the lower ``F_i`` have no pure-``x`` terms).
    """
    m0 = params.m0
    if params.m + 1 > params.k - 1:
        y = float(_linear_base_value(params, mu, Fraction(x)))
    else:
        coeffs = slope_polynomial(params, mu, m0)
        if len(coeffs) < 2 or coeffs[1] == 0:
            raise SeedNotFound("zero-section base step is singular")
        t = float(-coeffs[0] / coeffs[1])
        y = _newton_root(chain[m0], x, t * x, 1e-15)
        if y is None or chain[m0](x, y)[2] <= 0:
            raise SeedNotFound("no stable base branch for the zero-section step")
    values = [y]
    zero = set()
    if y == 0 and _zero_branch(chain[m0]):
        zero.add(0)
    for i in range(m0, 0, -1):
        y_i = values[-1]
        F = chain[i - 1]
        if params.l - i + 1 < 0 and y_i == 0 and _zero_branch(F):
            zero.add(len(values))
            values.append(0.0)
            continue
        if F.value(x, y_i) >= 0:
            raise RetryWithSmallerEpsilon(f"F_{i - 1} is not negative on the branch y_{i}")
        y_next = _root_above(F, x, y_i, x)
        if y_next is None:
            raise SeedNotFound(f"no root of F_{i - 1} above y_{i}")
        if _zero_branch(F) and abs(y_next) <= 1e-12 * x:
            # the least root above a negative y_i is the constant zero branch
            y_next = 0.0
            zero.add(len(values))
        if not y_next > y_i:
            raise RetryWithSmallerEpsilon("chain is not increasing")
        values.append(y_next)
    return values, zero


CHAIN_LEVELS = 4
CHAIN_RTOL = 1e-7


def _extrapolated_slopes(params: CalabiParams, mu, levels, eps):
    """Richardson limits of ``y_i(h)/h``; ``None`` when two estimates disagree."""
    m0 = params.m0
    slopes = []
    for idx in range(m0 + 1):
        i = m0 - idx
        s = [levels[j][idx] / (eps / 2**j) for j in range(CHAIN_LEVELS)]
        r1 = [2 * s[j + 1] - s[j] for j in range(CHAIN_LEVELS - 1)]
        r2 = [(4 * r1[j + 1] - r1[j]) / 3 for j in range(CHAIN_LEVELS - 2)]
        estimate = r2[-1]
        if abs(r2[-1] - r2[-2]) > CHAIN_RTOL * max(1.0, abs(estimate)):
            return None
        coeffs = [float(c) for c in slope_polynomial(params, mu, i)]
        if len(coeffs) > 1 and estimate != 0:
            polished = _polish(coeffs, estimate)
            if abs(polished - estimate) > 1e3 * CHAIN_RTOL * max(1.0, abs(estimate)):
                return None
            estimate = polished
        slopes.append(estimate)
    return slopes


def seed_chain(params: CalabiParams, mu, epsilon: Optional[float] = None) -> SeedResult:
    """Induction seeding; slopes are Richardson limits polished onto the slope roots.

    The start abscissa is halved until the chain is monotone and the
    extrapolated slopes have settled.
    """
    mu = as_fraction(mu)
    if epsilon is None:
        epsilon = float(params.b) * EPSILON_FACTOR
    chain = [FloatPoly(build_F(params, mu, i)) for i in range(params.m0 + 1)]
    eps = float(epsilon)
    reason = "no attempt"
    for _ in range(MAX_EPSILON_HALVINGS):
        try:
            runs = [_chain_values(params, mu, chain, eps / 2**j) for j in range(CHAIN_LEVELS)]
        except RetryWithSmallerEpsilon as exc:
            reason = str(exc)
            eps /= 2
            continue
        levels = [values for values, _ in runs]
        slopes = _extrapolated_slopes(params, mu, levels, eps)
        if slopes is not None:
            break
        reason = "extrapolated slopes did not settle"
        eps /= 2
    else:
        raise SeedNotFound(f"chain failed for every start abscissa: {reason}")
    zero = runs[0][1]
    strict = [t for idx, t in enumerate(slopes) if idx not in zero]
    for a, b in zip(strict, strict[1:]):
        if not b > a:
            raise SeedNotFound(f"chain slopes are not strictly increasing: {slopes}")
    roots = real_roots(slope_polynomial(params, mu))
    return SeedResult(roots, slopes[-1], slopes, eps, levels[0][-1], levels[0])


@dataclass
class Sample:
    x: float
    y: float
    yprime: float
    residual: float
    admissible: bool


@dataclass
class SolutionCurve:
    grid: List[Sample]
    terminal_residual: Optional[float]
    status: str
    message: str = ""

    @property
    def xs(self):
        return np.array([s.x for s in self.grid])

    @property
    def ys(self):
        return np.array([s.y for s in self.grid])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "y", "yprime", "residual", "admissible"])
        for s in self.grid:
            writer.writerow([fmt_real(s.x), fmt_real(s.y), fmt_real(s.yprime),
                             fmt_real(s.residual), "true" if s.admissible else "false"])
        return buf.getvalue()


def _sample(params: CalabiParams, k: int, x: float, y: float, yp: float, residual: float) -> Sample:
    lam, _ = structured_eigenvector(params.m, params.n, float(params.p), x, y, yp)
    return Sample(x, y, yp, residual, in_admissible_cone(lam, k))


def start_value(params: CalabiParams, mu, seed: SeedResult, epsilon: Optional[float] = None) -> float:
    """Root of ``F_0(eps, .)`` warm-started from the first-order guess ``t* eps``."""
    eps = seed.epsilon if epsilon is None else epsilon
    F = FloatPoly(build_F(params, mu))
    y = _newton_root(F, eps, seed.chosen_slope * eps, 1e-15)
    if y is None:
        raise SeedNotFound("could not refine the start value at epsilon")
    return y


def _terminal_ok(params: CalabiParams, y_end: float) -> bool:
    q = float(params.q)
    return abs(y_end - q) <= max(1.0, abs(q)) * TERMINAL_RTOL


def continue_curve(
    params: CalabiParams,
    mu,
    seed: SeedResult,
    step: Optional[float] = None,
    tol: float = DEFAULT_TOL,
) -> SolutionCurve:
    """Predictor-corrector tracking of ``F_0 = 0`` from ``(eps, y(eps))`` to ``x = b``.

    ``F_residual`` of each sample is ``|F| / sum |terms|``, the residual relative to
    the magnitude of the polynomial's terms at that point.
    """
    F = FloatPoly(build_F(params, mu))
    b = float(params.b)
    eps = seed.epsilon
    if step is None:
        step = (b - eps) / 100
    if not 0 < step <= (b - eps) / 10 * (1 + 1e-12):
        raise ValueError(f"step must lie in (0, (b - eps)/10], got {step}")
    nodes = max(10, int(math.ceil((b - eps) / step - 1e-9)))
    node_x = [eps + (b - eps) * j / nodes for j in range(nodes + 1)]
    node_x[-1] = b
    h_nom = (b - eps) / nodes
    h_min = h_nom * MIN_STEP_FACTOR

    y = seed.y_epsilon if seed.y_epsilon is not None else start_value(params, mu, seed)
    y = _newton_root(F, eps, y, tol) or y
    f, fx, fy, sc = F(eps, y)
    if fy <= 0:
        return SolutionCurve([], None, "fold_detected", "non-positive dF/dy at the start")
    grid = [_sample(params, params.k, eps, y, -fx / fy, abs(f) / sc if sc else 0.0)]
    if not grid[0].admissible:
        return SolutionCurve(grid, None, "admissibility_lost", "start point is not admissible")

    x = eps
    yp = grid[0].yprime
    node = 1
    h = h_nom
    accepted_run = 0
    while node <= nodes:
        target = node_x[node]
        remaining = target - x
        h_try = remaining if h >= remaining * (1 - 1e-9) else h
        x_new = target if h_try == remaining else x + h_try
        y_pred = y + yp * (x_new - x)
        y_new = _correct(F, x_new, y_pred, tol, limit=0.5 * (x_new - x) * (1 + abs(yp)) + 1e-300)
        if y_new is None:
            h = h_try / 2
            accepted_run = 0
            if h < h_min:
                return SolutionCurve(grid, None, "newton_diverged",
                                     f"corrector failed at x={x_new!r}")
            continue
        f, fx, fy, sc = F(x_new, y_new)
        if fy <= 0:
            grid.append(Sample(x_new, y_new, math.inf, abs(f) / sc if sc else 0.0, False))
            return SolutionCurve(grid, None, "fold_detected", f"dF/dy <= 0 at x={x_new!r}")
        yp = -fx / fy
        x, y = x_new, y_new
        sample = _sample(params, params.k, x, y, yp, abs(f) / sc if sc else 0.0)
        grid.append(sample)
        if not sample.admissible:
            return SolutionCurve(grid, None, "admissibility_lost", f"cone exit at x={x!r}")
        if x == target:
            node += 1
        accepted_run += 1
        if h < h_nom and accepted_run >= 2:
            h = min(2 * h, h_nom)
            accepted_run = 0
    terminal = abs(y - float(params.q))
    status = "solved" if _terminal_ok(params, y) else "boundary_mismatch"
    return SolutionCurve(grid, terminal, status)


def _correct(F: FloatPoly, x: float, y: float, tol: float, limit: float, max_iter: int = 30):
    """Damped Newton at fixed ``x``; ``None`` on divergence or a suspected branch jump."""
    y0 = y
    f, _, fy, sc = F(x, y)
    prev_step = math.inf
    for _ in range(max_iter):
        if sc == 0 or abs(f) <= tol * sc:
            return y if abs(y - y0) <= limit else None
        if fy <= 0:
            return None
        step = f / fy
        if abs(step) > 0.5 * prev_step and prev_step < math.inf and abs(step) > 1e-14 * (1 + abs(y)):
            return None
        y_new = y - step
        f_new, _, fy_new, sc_new = F(x, y_new)
        damp = 1.0
        while abs(f_new) > abs(f) and damp > 1e-3:
            damp *= 0.5
            y_new = y - damp * step
            f_new, _, fy_new, sc_new = F(x, y_new)
        if y_new == y:
            return y if abs(y - y0) <= limit and abs(f) <= 1e3 * tol * sc else None
        prev_step = abs(y_new - y)
        y, f, fy, sc = y_new, f_new, fy_new, sc_new
    return None


def explicit_slope(params: CalabiParams, mu: float, x: float, y: float) -> float:
    """``y' = -(sigma_k - mu sigma_l)(chk) / (sigma_{k-1} - mu sigma_{l-1})(chk)``.

    Follows from ``sigma_j((chk, t)) = sigma_j(chk) + t sigma_{j-1}(chk)`` applied to
    ``sigma_k = mu sigma_l``.
    """
    _, check = structured_eigenvector(params.m, params.n, float(params.p), x, y)
    e = sigma_all(check) if check is not None else [1.0]
    e = list(e) + [0.0, 0.0]
    k, l = params.k, params.l

    def s(j):
        return e[j] if 0 <= j < len(e) else 0.0

    num = s(k) - mu * s(l)
    den = s(k - 1) - mu * s(l - 1)
    if den <= 0:
        raise OracleBreakdown(f"non-positive slope denominator at x={x!r}")
    return -num / den


def rk4_oracle(params: CalabiParams, mu, seed: SeedResult, nsteps: int = 400) -> SolutionCurve:
    """Classical fourth-order integration of the explicit slope equation."""
    if nsteps < 100:
        raise ValueError("nsteps must be at least 100")
    muf = float(mu)
    F = FloatPoly(build_F(params, mu))
    b = float(params.b)
    eps = seed.epsilon
    y = seed.y_epsilon if seed.y_epsilon is not None else start_value(params, mu, seed)
    h = (b - eps) / nsteps
    grid: List[Sample] = []

    def record(x, y, yp):
        f, _, _, sc = F(x, y)
        grid.append(_sample(params, params.k, x, y, yp, abs(f) / sc if sc else 0.0))

    try:
        x = eps
        k1 = explicit_slope(params, muf, x, y)
        record(x, y, k1)
        for j in range(1, nsteps + 1):
            x_next = b if j == nsteps else eps + (b - eps) * j / nsteps
            hh = x_next - x
            k2 = explicit_slope(params, muf, x + hh / 2, y + hh * k1 / 2)
            k3 = explicit_slope(params, muf, x + hh / 2, y + hh * k2 / 2)
            k4 = explicit_slope(params, muf, x_next, y + hh * k3)
            y = y + hh * (k1 + 2 * k2 + 2 * k3 + k4) / 6
            x = x_next
            k1 = explicit_slope(params, muf, x, y)
            record(x, y, k1)
    except OracleBreakdown as exc:
        exc.curve = SolutionCurve(grid, None, "fold_detected", str(exc))
        raise
    del h
    if not all(s.admissible for s in grid):
        return SolutionCurve(grid, None, "admissibility_lost", "cone exit along the oracle curve")
    terminal = abs(y - float(params.q))
    status = "solved" if _terminal_ok(params, y) else "boundary_mismatch"
    return SolutionCurve(grid, terminal, status)


@dataclass
class AuditReport:
    certificate: bool
    status: str
    max_residual: float
    terminal_residual: Optional[float]
    first_violation: Optional[int]
    reached_b: bool

    def to_json(self) -> dict:
        d = asdict(self)
        for key in ("max_residual", "terminal_residual"):
            d[key] = fmt_real(d[key])
        return d


def verify_solution(curve: SolutionCurve, params: CalabiParams, mu, residual_tol: float = 1e-9) -> AuditReport:
    """Independent re-check of a curve; the certificate requires every test to pass."""
    F = FloatPoly(build_F(params, mu))
    max_res = 0.0
    first_violation = None
    for idx, s in enumerate(curve.grid):
        f, _, _, sc = F(s.x, s.y)
        max_res = max(max_res, abs(f) / sc if sc else 0.0)
        ok = math.isfinite(s.yprime)
        if ok:
            lam, _ = structured_eigenvector(params.m, params.n, float(params.p), s.x, s.y, s.yprime)
            ok = in_admissible_cone(lam, params.k)
        if not ok or not s.admissible:
            if first_violation is None:
                first_violation = idx
    reached = bool(curve.grid) and curve.grid[-1].x == float(params.b)
    terminal = abs(curve.grid[-1].y - float(params.q)) if reached else None
    if first_violation is not None:
        status = "admissibility_lost"
    elif not reached:
        status = curve.status if curve.status != "solved" else "newton_diverged"
    elif not _terminal_ok(params, curve.grid[-1].y):
        status = "boundary_mismatch"
    else:
        status = "solved"
    certificate = status == "solved" and max_res <= residual_tol
    return AuditReport(certificate, status, max_res, terminal, first_violation, reached)


def sup_distance(a: SolutionCurve, b: SolutionCurve) -> float:
    """Max ``|y_a - y_b|`` over the samples of ``a``, with ``b`` interpolated linearly."""
    xa, ya = a.xs, a.ys
    return float(np.max(np.abs(ya - np.interp(xa, b.xs, b.ys))))


@dataclass
class SolveResult:
    params: CalabiParams
    criteria: CriteriaReport
    status: str
    seed: Optional[SeedResult] = None
    chain: Optional[SeedResult] = None
    curve: Optional[SolutionCurve] = None
    oracle: Optional[SolutionCurve] = None
    audit: Optional[AuditReport] = None
    oracle_distance: Optional[float] = None
    seed_gap: Optional[float] = None
    message: str = ""

    @property
    def solved(self) -> bool:
        return self.status == "solved"

    @property
    def dichotomy_violation(self) -> bool:
        if self.criteria.verdict == "degenerate":
            return False
        return self.criteria.passed != self.solved

    @property
    def terminal_residual(self) -> Optional[float]:
        return self.curve.terminal_residual if self.curve else None

    def to_json(self) -> dict:
        return {
            "criteria": self.criteria.to_json(),
            "status": self.status,
            "seed": self.seed.to_json() if self.seed else None,
            "chain": self.chain.to_json() if self.chain else None,
            "seed_gap": fmt_real(self.seed_gap),
            "oracle_status": self.oracle.status if self.oracle else None,
            "oracle_distance": fmt_real(self.oracle_distance),
            "audit": self.audit.to_json() if self.audit else None,
            "terminal_residual": fmt_real(self.terminal_residual),
            "message": self.message,
        }


def solve(
    params: CalabiParams,
    step: Optional[float] = None,
    tol: float = DEFAULT_TOL,
    epsilon: Optional[float] = None,
    nsteps: Optional[int] = None,
) -> SolveResult:
    """Criteria, both seeds, tracking, the RK4 oracle and the audit for one instance."""
    report = classify(params)
    if report.verdict == "degenerate":
        return SolveResult(params, report, "degenerate", message=report.notes)
    mu = report.mu
    try:
        chain = seed_chain(params, mu, epsilon)
    except SeedNotFound as exc:
        return SolveResult(params, report, "seed_not_found", message=f"chain: {exc}")
    try:
        seed = seed_slope(params, mu)
    except SeedNotFound as exc:
        return SolveResult(params, report, "seed_not_found", chain=chain, message=f"slope: {exc}")
    gap = abs(seed.chosen_slope - chain.chosen_slope)
    seed.epsilon = chain.epsilon
    seed.y_epsilon = start_value(params, mu, seed, chain.epsilon)
    if gap > 1e-8 * max(1.0, abs(seed.chosen_slope)):
        return SolveResult(params, report, "seed_mismatch", seed, chain, seed_gap=gap,
                           message=f"slope selector {seed.chosen_slope!r} vs chain {chain.chosen_slope!r}")
    b_eps = float(params.b) - seed.epsilon
    curve = continue_curve(params, mu, seed, step if step is not None else b_eps / 100, tol)
    try:
        oracle = rk4_oracle(params, mu, seed, nsteps or 400)
    except OracleBreakdown as exc:
        oracle = exc.curve
    distance = None
    if curve.grid and oracle.grid and curve.status == "solved" and oracle.status == "solved":
        distance = sup_distance(curve, oracle)
    audit = verify_solution(curve, params, mu)
    return SolveResult(params, report, curve.status, seed, chain, curve, oracle, audit,
                       distance, gap, curve.message)


def seed_to_json(seed: SeedResult) -> str:
    return json.dumps(seed.to_json(), indent=2)
