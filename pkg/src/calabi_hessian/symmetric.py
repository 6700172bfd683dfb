"""Elementary symmetric functions, admissible cones and related pointwise tests.

All functions accept plain sequences, :class:`EigenVector` instances or numbers
of any numeric type; when every entry is an ``int`` or ``Fraction`` the
arithmetic stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Optional, Sequence

import numpy as np

from .errors import ConeViolation, InvalidArgument, SingularInput

__all__ = [
    "EigenVector",
    "sigma",
    "sigma_all",
    "sigma_table",
    "in_admissible_cone",
    "newton_defect",
    "hessian_quotient",
    "structured_eigenvector",
    "uniform_q_positive",
]


@dataclass(frozen=True)
class EigenVector:
    """Eigenvalue ratios of a form with respect to a reference metric.

    ``multiplicity_tag`` is ``(first, second, last)``: the first ``first``
    entries are equal, the next ``second`` entries are equal, and ``last``
    records whether a single trailing derivative entry follows.
    """

    values: tuple
    multiplicity_tag: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) < 1:
            raise InvalidArgument("an eigenvalue vector needs at least one entry")
        if self.multiplicity_tag is None:
            return
        first, second, last = self.multiplicity_tag
        if len(self.values) != first + second + int(bool(last)):
            raise InvalidArgument(
                f"tag {self.multiplicity_tag} does not match length {len(self.values)}"
            )
        blocks = (self.values[:first], self.values[first:first + second])
        for block in blocks:
            if any(v != block[0] for v in block):
                raise InvalidArgument("entries of a multiplicity block must be equal")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def extended(self, t) -> "EigenVector":
        """Return the vector with ``t`` appended as the trailing entry."""
        tag = None
        if self.multiplicity_tag is not None and not self.multiplicity_tag[2]:
            tag = (self.multiplicity_tag[0], self.multiplicity_tag[1], True)
        return EigenVector(self.values + (t,), tag)


def _values(lam) -> tuple:
    if isinstance(lam, EigenVector):
        return lam.values
    return tuple(lam)


def sigma_all(lam) -> list:
    """Return ``[sigma_0, ..., sigma_n]`` of ``lam``.

    Uses the product expansion of ``prod_i (1 + lam_i t)``, one factor at a
    time, so the cost is quadratic in the length.
    """
    vals = _values(lam)
    e = [1] + [0] * len(vals)
    for j, v in enumerate(vals, start=1):
        for r in range(j, 0, -1):
            e[r] = e[r] + v * e[r - 1]
    return e


def sigma_table(arr: np.ndarray) -> np.ndarray:
    """Batched :func:`sigma_all` over the rows of a 2-D array.

    Returns an array of shape ``(rows, n + 1)`` with the dtype of ``arr``
    (integer input stays integer, which keeps sampled checks exact).
    """
    arr = np.asarray(arr)
    rows, n = arr.shape
    e = np.zeros((rows, n + 1), dtype=arr.dtype)
    e[:, 0] = 1
    for j in range(n):
        v = arr[:, j]
        e[:, 1:j + 2] = e[:, 1:j + 2] + v[:, None] * e[:, 0:j + 1]
    return e


def sigma(k: int, lam):
    """k-th elementary symmetric function; ``sigma(0, .) == 1``, zero for k > len."""
    vals = _values(lam)
    if k < 0:
        return 0
    if k > len(vals):
        return 0
    return sigma_all(vals)[k]


def in_admissible_cone(lam, k: int) -> bool:
    """Strict membership of ``lam`` in the cone where sigma_1..sigma_k are positive."""
    vals = _values(lam)
    if not 1 <= k <= len(vals):
        raise InvalidArgument(f"k={k} outside 1..{len(vals)}")
    e = sigma_all(vals)
    return all(e[i] > 0 for i in range(1, k + 1))


def _exact(vals) -> bool:
    return all(isinstance(v, Rational) for v in vals)


def _normalized(e, n, r, exact):
    if exact:
        return Fraction(e[r]) / comb(n, r)
    return e[r] / comb(n, r)


def newton_defect(lam, r: int):
    """Gap in the normalized Newton inequality at index ``r``.

    Non-negative for every real vector and zero exactly on the diagonal.
    """
    vals = _values(lam)
    n = len(vals)
    if not 1 <= r <= n - 1:
        raise InvalidArgument(f"r={r} outside 1..{n - 1}")
    e = sigma_all(vals)
    exact = _exact(vals)
    mid = _normalized(e, n, r, exact)
    return mid * mid - _normalized(e, n, r - 1, exact) * _normalized(e, n, r + 1, exact)


def hessian_quotient(lam, k: int, l: int) -> float:
    """``((sigma_k / C(n,k)) / (sigma_l / C(n,l))) ** (1 / (k - l))`` on the k-cone."""
    vals = _values(lam)
    n = len(vals)
    if not 0 <= l < k <= n:
        raise InvalidArgument(f"need 0 <= l < k <= {n}, got k={k}, l={l}")
    if not in_admissible_cone(vals, k):
        raise ConeViolation(f"vector is not in the admissible cone of order {k}")
    e = sigma_all(vals)
    exact = _exact(vals)
    ratio = _normalized(e, n, k, exact) / _normalized(e, n, l, exact)
    return float(ratio) ** (1.0 / (k - l))


def structured_eigenvector(m: int, n: int, p, x, y, yprime=None):
    """Eigenvalues of the symmetric ansatz at ``(x, y, y')``.

    Returns ``(lam, lam_check)``. For ``x > 0`` these are
    ``(y/x)*m, ((p+y)/(1+x))*n, y'`` and the same without the trailing entry.
    At ``x = 0`` (where ``y`` must vanish) the limiting vector is
    ``y'*(m+1), p*n`` and the checked vector carries one fewer ``y'``.
    """
    if m < 0 or n < 0:
        raise InvalidArgument("multiplicities must be non-negative")
    if x < 0:
        raise InvalidArgument("x must be non-negative")
    if x == 0:
        if y != 0 or yprime is None:
            raise SingularInput("at x = 0 the value y must vanish and y' must be given")
        lam = EigenVector((yprime,) * (m + 1) + (p,) * n, (m + 1, n, False))
        check = EigenVector((yprime,) * m + (p,) * n, (m, n, False)) if m + n else None
        return lam, check
    first = y / x
    second = (p + y) / (1 + x)
    check = None
    if m + n:
        check = EigenVector((first,) * m + (second,) * n, (m, n, False))
    lam = None
    if yprime is not None:
        lam = EigenVector((first,) * m + (second,) * n + (yprime,), (m, n, True))
    return lam, check


def uniform_q_positive(lam, q: int) -> bool:
    """True iff every sum of ``q + 1`` distinct entries is positive."""
    vals = _values(lam)
    if q < 0 or q + 1 > len(vals):
        raise InvalidArgument(f"q={q} needs 0 <= q < {len(vals)}")
    return sum(sorted(vals)[: q + 1]) > 0
