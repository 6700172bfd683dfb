"""Independent reference computations used by the self-test and the test suite.

None of these share code paths with the objects they check: the polynomial
oracle differentiates the integral symbolically, the cone sampler works on
integer vectors with exact cross-multiplied comparisons, and the top-degree
oracle solves each abscissa separately.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Dict, Iterable

import numpy as np
from scipy.optimize import brentq

from .polynomials import BivariatePolynomial, CalabiParams, as_fraction
from .symmetric import sigma_table


@lru_cache(maxsize=None)
def _symbolic_G_generic(m: int, n: int, k: int):
    import sympy as sp

    x, y, t, s, p = sp.symbols("x y t s p")
    integrand = sp.expand(s**m * (1 + t * p + s) ** n)
    antiderivative = sp.integrate(integrand, s)
    value = sp.expand(antiderivative.subs(s, x + t * y) - antiderivative.subs(s, 0))
    coeff = sp.diff(value, t, k).subs(t, 0) / sp.factorial(k)
    return sp.Poly(sp.expand(coeff), x, y, p)


def symbolic_G(m: int, n: int, k: int, p) -> BivariatePolynomial:
    """k-th t-Taylor coefficient of the integral, by repeated symbolic differentiation."""
    poly = _symbolic_G_generic(m, n, k)
    p = as_fraction(p)
    coeffs: Dict = {}
    for (i, j, e), c in poly.terms():
        key = (i, j)
        coeffs[key] = coeffs.get(key, 0) + as_fraction(str(c)) * p**e
    return BivariatePolynomial(coeffs)


def _in_cone(e: np.ndarray, k: int) -> np.ndarray:
    return np.all(e[:, 1:k + 1] > 0, axis=1)


def cone_counterexamples(samples: int, dims: Iterable[int] = range(2, 7), seed: int = 0) -> Dict[str, int]:
    """Count violations of the cone properties over ``samples`` draws per property.

    Vectors have small integer entries so every comparison except the
    concavity check (which needs roots) is exact in int64.
    """
    rng = np.random.default_rng(seed)
    dims = list(dims)
    counts = {"newton": 0, "monotone": 0, "quotient_monotone": 0, "inclusion": 0, "concavity": 0}
    checked = dict.fromkeys(counts, 0)
    per_dim = -(-samples // len(dims))
    for N in dims:
        # Newton inequality for arbitrary vectors
        lam = rng.integers(-9, 10, size=(per_dim, N))
        e = sigma_table(lam)
        r = rng.integers(1, N, size=per_dim)
        rows = np.arange(per_dim)
        lhs = e[rows, r] ** 2 * np.array([comb(N, a - 1) * comb(N, a + 1) for a in r])
        rhs = e[rows, r - 1] * e[rows, r + 1] * np.array([comb(N, a) ** 2 for a in r])
        counts["newton"] += int(np.sum(lhs - rhs < 0))
        equal = np.all(lam == lam[:, :1], axis=1)
        counts["newton"] += int(np.sum(equal & (lhs != rhs)))
        checked["newton"] += per_dim

        for k in range(1, N + 1):
            need = -(-per_dim // N)
            lam = _draw_cone(rng, N, k, need)
            d = rng.integers(0, 5, size=lam.shape)
            d[d.sum(axis=1) == 0, 0] = 1
            e0, e1 = sigma_table(lam), sigma_table(lam + d)
            counts["monotone"] += int(np.sum(e1[:, k] <= e0[:, k]))
            checked["monotone"] += need
            for l in range(k):
                counts["quotient_monotone"] += int(np.sum(e1[:, k] * e0[:, l] <= e0[:, k] * e1[:, l]))
            checked["quotient_monotone"] += need
            smallest = np.sort(lam, axis=1)[:, : N - k + 1].sum(axis=1)
            counts["inclusion"] += int(np.sum(smallest <= 0))
            checked["inclusion"] += need
            other = _draw_cone(rng, N, k, need)
            es = sigma_table(lam + other).astype(float)[:, k] ** (1.0 / k) / 2
            ea = e0.astype(float)[:, k] ** (1.0 / k)
            eb = sigma_table(other).astype(float)[:, k] ** (1.0 / k)
            avg = (ea + eb) / 2
            counts["concavity"] += int(np.sum(es < avg * (1 - 1e-12)))
            checked["concavity"] += need
    counts["checked"] = min(checked.values())
    return counts


def _draw_cone(rng, N: int, k: int, count: int) -> np.ndarray:
    out = []
    have = 0
    while have < count:
        lam = rng.integers(-6, 10, size=(4 * count + 16, N))
        lam = lam[_in_cone(sigma_table(lam), k)]
        out.append(lam)
        have += len(lam)
    return np.concatenate(out)[:count]


def top_degree_pointwise(params: CalabiParams, mu, xs) -> np.ndarray:
    """Per-abscissa solution of ``G^{m,n,N}(x, y) = mu G^{m,n,0}(x)`` on ``y > 0``.

    The left side is ``sum_i C(n,i) p^(n-i) y^(m+i+1)/(m+i+1)``, increasing in
    ``y > 0`` for ``p > 0``, so each abscissa has a single positive root.
    """
    m, n, p = params.m, params.n, float(params.p)
    muf = float(mu)

    def lhs(y):
        return sum(comb(n, i) * p ** (n - i) * y ** (m + i + 1) / (m + i + 1) for i in range(n + 1))

    def rhs(x):
        return sum(comb(n, i) * x ** (m + i + 1) / (m + i + 1) for i in range(n + 1))

    out = []
    for x in xs:
        target = muf * rhs(x)
        hi = 1.0
        while lhs(hi) < target:
            hi *= 2
        out.append(brentq(lambda y: lhs(y) - target, 0.0, hi, xtol=1e-18, rtol=1e-15))
    return np.array(out)
