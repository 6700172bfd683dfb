"""Exact bivariate polynomials of the symmetric reduction and the constant mu.

``build_G(m, n, k, p)`` is the k-th Taylor coefficient in ``t`` of

    integral_0^{x + t y} s^m (1 + t p + s)^n ds.

Expanding ``(1 + t p + s)^n = sum_i C(n, i) s^i (1 + t p)^(n - i)``, integrating
``s^(m+i)`` and expanding ``(1 + t p)^(n-i) (x + t y)^(m+i+1)`` gives the double sum

    sum_i C(n,i)/(m+i+1) sum_a C(n-i, k-a) p^(k-a) C(m+i+1, a) x^(m+i+1-a) y^a.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, factorial
from typing import Dict, List, Tuple

from .errors import DegenerateClass, InvalidArgument
from .symmetric import sigma, structured_eigenvector

Term = Tuple[int, int]


def as_fraction(value) -> Fraction:
    """Exact rational view of an int, Fraction, float or ``"num/den"`` string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value)
    return Fraction(value)


class BivariatePolynomial:
    """Polynomial in ``(x, y)`` with exact rational coefficients.

    Instances are treated as immutable; zero coefficients are never stored.
    """

    __slots__ = ("_coeffs", "_float_terms")

    def __init__(self, coeffs: Dict[Term, object] | None = None):
        clean = {}
        for (i, j), c in (coeffs or {}).items():
            if i < 0 or j < 0:
                raise InvalidArgument(f"negative exponent {(i, j)}")
            c = as_fraction(c)
            if c:
                clean[(int(i), int(j))] = c
        self._coeffs = clean
        self._float_terms = None

    @property
    def coeffs(self) -> Dict[Term, Fraction]:
        return dict(self._coeffs)

    def __repr__(self):
        return f"BivariatePolynomial({self.to_string()})"

    def __eq__(self, other):
        if isinstance(other, BivariatePolynomial):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __bool__(self):
        return bool(self._coeffs)

    def __add__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        out = dict(self._coeffs)
        for key, c in other._coeffs.items():
            out[key] = out.get(key, 0) + c
        return BivariatePolynomial(out)

    def __neg__(self):
        return BivariatePolynomial({key: -c for key, c in self._coeffs.items()})

    def __sub__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        return self + (-other)

    def scale(self, factor) -> "BivariatePolynomial":
        factor = as_fraction(factor)
        return BivariatePolynomial({key: factor * c for key, c in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, BivariatePolynomial):
            out: Dict[Term, Fraction] = {}
            for (i1, j1), c1 in self._coeffs.items():
                for (i2, j2), c2 in other._coeffs.items():
                    key = (i1 + i2, j1 + j2)
                    out[key] = out.get(key, 0) + c1 * c2
            return BivariatePolynomial(out)
        return self.scale(other)

    __rmul__ = __mul__

    @property
    def degree_x(self) -> int:
        return max((i for i, _ in self._coeffs), default=-1)

    @property
    def degree_y(self) -> int:
        return max((j for _, j in self._coeffs), default=-1)

    def terms(self) -> List[Tuple[int, int, Fraction]]:
        return [(i, j, c) for (i, j), c in sorted(self._coeffs.items())]

    def partial_x(self) -> "BivariatePolynomial":
        return BivariatePolynomial({(i - 1, j): i * c for (i, j), c in self._coeffs.items() if i})

    def partial_y(self, s: int = 1) -> "BivariatePolynomial":
        if s < 0:
            raise InvalidArgument("derivative order must be non-negative")
        out = {}
        for (i, j), c in self._coeffs.items():
            if j >= s:
                out[(i, j - s)] = c * (factorial(j) // factorial(j - s))
        return BivariatePolynomial(out)

    def __call__(self, x, y):
        """Evaluate; exact for rational arguments, floating otherwise."""
        if isinstance(x, float) or isinstance(y, float):
            return self.evaluate_float(float(x), float(y))
        total = Fraction(0)
        for (i, j), c in self._coeffs.items():
            total += c * x**i * y**j
        return total

    def float_terms(self) -> List[Tuple[int, int, float]]:
        if self._float_terms is None:
            self._float_terms = [(i, j, float(c)) for i, j, c in self.terms()]
        return self._float_terms

    def evaluate_float(self, x: float, y: float) -> float:
        return sum(c * x**i * y**j for i, j, c in self.float_terms())

    def y_coefficients(self, x) -> list:
        """Coefficients ``[a_0, ..., a_d]`` of the univariate polynomial ``y -> P(x, y)``."""
        coeffs = [0] * (self.degree_y + 1)
        for (i, j), c in self._coeffs.items():
            coeffs[j] = coeffs[j] + (c if not isinstance(x, float) else float(c)) * x**i
        return coeffs

    def to_json(self) -> dict:
        return {"terms": [[i, j, str(c)] for i, j, c in self.terms()]}

    @classmethod
    def from_json(cls, data: dict) -> "BivariatePolynomial":
        return cls({(int(i), int(j)): Fraction(c) for i, j, c in data["terms"]})

    def to_string(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for i, j, c in self.terms():
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v for v, e in (("x", i), ("y", j)) if e
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


ZERO = BivariatePolynomial()


def build_G(m: int, n: int, k: int, p) -> BivariatePolynomial:
    """Closed-form Taylor coefficient; the zero polynomial for negative ``k``."""
    if m < 0 or n < 0:
        raise InvalidArgument("m and n must be non-negative")
    if k < 0:
        return ZERO
    if k > m + n + 1:
        raise InvalidArgument(f"k={k} exceeds m+n+1={m + n + 1}")
    p = as_fraction(p)
    coeffs: Dict[Term, Fraction] = {}
    for i in range(n + 1):
        e = m + i + 1
        outer = Fraction(comb(n, i), e)
        for a in range(max(0, k - (n - i)), min(k, e) + 1):
            c = outer * comb(n - i, k - a) * p ** (k - a) * comb(e, a)
            key = (e - a, a)
            coeffs[key] = coeffs.get(key, 0) + c
    return BivariatePolynomial(coeffs)


def eval_and_partials(P: BivariatePolynomial, x, y, s: int):
    """``(P, dP/dx, d^s P/dy^s)`` at ``(x, y)``."""
    return P(x, y), P.partial_x()(x, y), P.partial_y(s)(x, y)


def top_degree_closed_form(m: int, n: int, p, q) -> Fraction:
    """``sum_i C(n,i) q^(m+i+1) p^(n-i) / (m+i+1)``, the top-degree value."""
    p, q = as_fraction(p), as_fraction(q)
    return sum(
        (Fraction(comb(n, i), m + i + 1) * q ** (m + i + 1) * p ** (n - i) for i in range(n + 1)),
        Fraction(0),
    )


@dataclass(frozen=True)
class MuValue:
    mu: Fraction
    numerator: Fraction
    denominator: Fraction


@dataclass(frozen=True)
class CalabiParams:
    """Problem instance on the projective bundle with ``N = m + n + 1``.

    The target class is ``p [pi^* omega_M] + q eta`` and the reference Kähler
    class is ``[pi^* omega_M] + b eta``. ``p``, ``q``, ``b`` are stored as
    exact rationals.
    """

    m: int
    n: int
    k: int
    l: int
    p: Fraction
    q: Fraction
    b: Fraction

    def __post_init__(self):
        for name in ("p", "q", "b"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        for name in ("m", "n", "k", "l"):
            value = getattr(self, name)
            if int(value) != value:
                raise InvalidArgument(f"{name} must be an integer")
            object.__setattr__(self, name, int(value))
        if self.m < 0:
            raise InvalidArgument("m must be non-negative")
        if self.n < 1:
            raise InvalidArgument("n must be positive")
        if not 0 <= self.l < self.k <= self.N:
            raise InvalidArgument(
                f"need 0 <= l < k <= m+n+1={self.N}, got k={self.k}, l={self.l}"
            )
        if self.b <= 0:
            raise InvalidArgument("b must be positive")

    @property
    def N(self) -> int:
        return self.m + self.n + 1

    @property
    def m0(self) -> int:
        return min(self.m, self.k - 1)

    def G(self, j: int, shift: int = 0) -> BivariatePolynomial:
        """``G^{m-shift, n, j-shift}`` for this instance's ``p``."""
        return _cached_G(self.m - shift, self.n, j - shift, self.p)

    @cached_property
    def mu(self) -> MuValue:
        return compute_mu(self)

    def replace(self, **changes) -> "CalabiParams":
        fields = dict(m=self.m, n=self.n, k=self.k, l=self.l, p=self.p, q=self.q, b=self.b)
        fields.update(changes)
        return CalabiParams(**fields)


_G_CACHE: Dict[tuple, BivariatePolynomial] = {}


def _cached_G(m, n, k, p) -> BivariatePolynomial:
    key = (m, n, k, p)
    poly = _G_CACHE.get(key)
    if poly is None:
        poly = build_G(m, n, k, p)
        if len(_G_CACHE) > 4096:
            _G_CACHE.clear()
        _G_CACHE[key] = poly
    return poly


_DG_CACHE: Dict[tuple, BivariatePolynomial] = {}


def _cached_dG(m, n, k, p) -> BivariatePolynomial:
    key = (m, n, k, p)
    poly = _DG_CACHE.get(key)
    if poly is None:
        poly = build_G(m, n, k, p).partial_y()
        if len(_DG_CACHE) > 4096:
            _DG_CACHE.clear()
        _DG_CACHE[key] = poly
    return poly


def compute_mu(params: CalabiParams) -> MuValue:
    numerator = params.G(params.k)(params.b, params.q)
    denominator = params.G(params.l)(params.b, params.q)
    if denominator == 0:
        raise DegenerateClass(
            f"G^{{{params.m},{params.n},{params.l}}}(b, q) vanishes; mu is undefined"
        )
    return MuValue(numerator / denominator, numerator, denominator)


def build_F(params: CalabiParams, mu, i: int = 0) -> BivariatePolynomial:
    """``F_i = G^{m-i,n,k-i} - mu G^{m-i,n,l-i}`` (second term dropped when ``l < i``)."""
    mu = as_fraction(mu)
    return params.G(params.k, i) - params.G(params.l, i).scale(mu)


def build_F_chain(params: CalabiParams, mu) -> List[BivariatePolynomial]:
    return [build_F(params, mu, i) for i in range(params.m0 + 1)]


def intersection_ratio(params: CalabiParams, j: int) -> Fraction:
    """``G^j(b, q) / C(N, j)``: the pairing of the j-th power, up to a positive constant."""
    if not 0 <= j <= params.N:
        raise InvalidArgument(f"j={j} outside 0..{params.N}")
    return params.G(j)(params.b, params.q) / comb(params.N, j)


def verify_dy_identity(m: int, n: int, k: int, p, x, y):
    """Residual of ``dG/dy = x^m (1+x)^n sigma_{k-1}(checked eigenvalues)``."""
    if not x > 0:
        raise InvalidArgument("the identity is stated for x > 0")
    exact_p = as_fraction(p)
    lhs = _cached_dG(m, n, k, exact_p)(x, y)
    p = float(exact_p) if isinstance(x, float) or isinstance(y, float) else exact_p
    _, check = structured_eigenvector(m, n, p, x, y)
    rhs = x**m * (1 + x) ** n * (sigma(k - 1, check) if check is not None else int(k == 1))
    return lhs - rhs
