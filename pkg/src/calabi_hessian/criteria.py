"""Numerical positivity criteria on the zero section and the infinity-divisor tower.

Under the symmetric reduction only two families of subvarieties can violate
the positivity conditions: the zero section ``P_0`` and the subvarieties
``D_inf^s`` cut out by ``s`` copies of the class of the infinity divisor. Their
conditions become signs of explicit polynomials evaluated at ``(b, q)``.

All tests are exact: parameters are rational, so every value is a Fraction
and "positive" means strictly positive with no tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import List, Optional

from .errors import DegenerateClass
from .polynomials import CalabiParams, as_fraction, build_F, intersection_ratio

VERDICTS = ("pass", "fail_P0", "fail_Dinf", "fail_total", "degenerate")

NOTES = (
    "Only P_0 and the D_inf^s tower are tested: under the symmetric reduction these are "
    "the only subvarieties that can violate the criteria. Whether the D_inf condition is "
    "redundant is unknown, so it is always evaluated. Intersection values are reported up "
    "to a positive constant (normalization C = 1)."
)


def fmt_real(value) -> Optional[str]:
    """Decimal string with 17 significant digits (``None`` passes through)."""
    if value is None:
        return None
    return format(float(value), ".17g")


@dataclass
class P0Record:
    applicable: bool
    value: Optional[Fraction]
    passed: bool
    rule: str

    def to_json(self) -> dict:
        return {
            "applicable": self.applicable,
            "value": fmt_real(self.value),
            "pass": self.passed,
            "rule": self.rule,
        }


@dataclass
class TowerEntry:
    s: int
    value: Fraction
    passed: bool
    required: bool

    def to_json(self) -> dict:
        return {"s": self.s, "value": fmt_real(self.value), "pass": self.passed,
                "required": self.required}


@dataclass
class CriteriaReport:
    mu: Optional[Fraction]
    p0: Optional[P0Record]
    dinf_tower: List[TowerEntry]
    verdict: str
    notes: str = NOTES
    total: Optional[TowerEntry] = None
    class_p0: Optional[P0Record] = None
    class_tower: List[TowerEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {
            "mu": fmt_real(self.mu),
            "p0": self.p0.to_json() if self.p0 else None,
            "dinf_tower": [e.to_json() for e in self.dinf_tower],
            "verdict": self.verdict,
            "notes": self.notes,
            "total": self.total.to_json() if self.total else None,
            "class_p0": self.class_p0.to_json() if self.class_p0 else None,
            "class_tower": [e.to_json() for e in self.class_tower],
        }


def check_P0(params: CalabiParams, mu) -> P0Record:
    """Condition on the zero section, written out explicitly in terms of ``p`` and ``mu``."""
    m, n, k, l, p = params.m, params.n, params.k, params.l, params.p
    mu = as_fraction(mu)
    if m + 1 > k - 1:
        return P0Record(False, None, True, "vacuous")
    if m + 1 > l:
        return P0Record(True, p, p > 0, "p_positive")
    value = p ** (k - m - 1) * comb(n, k - m - 1) - mu * p ** (l - m - 1) * comb(n, l - m - 1)
    return P0Record(True, value, value > 0, "weighted_binomial")


def check_Dinf(params: CalabiParams, mu) -> List[TowerEntry]:
    """y-derivatives of ``F = G^k - mu G^l`` at ``(b, q)`` for ``s = 1..k``."""
    F = build_F(params, mu)
    tower = []
    for s in range(1, params.k + 1):
        value = F.partial_y(s)(params.b, params.q)
        required = s <= params.k - 1 if params.l == 0 else s == 1
        tower.append(TowerEntry(s, value, value > 0, required))
    return tower


def check_class(params: CalabiParams):
    """Conditions for the class to carry a strictly k-subharmonic representative.

    These are the ``l = 0`` criteria applied to ``G^k`` alone: the whole space,
    the tower ``s = 1..k-1`` and ``p > 0`` when the zero section is tested.
    Returns ``(total, class_p0, class_tower)``.
    """
    value = intersection_ratio(params, params.k)
    total = TowerEntry(0, value, value > 0, True)
    Gk = params.G(params.k)
    tower = []
    if params.l >= 1:
        for s in range(1, params.k):
            v = Gk.partial_y(s)(params.b, params.q)
            tower.append(TowerEntry(s, v, v > 0, True))
    class_p0 = None
    if params.l >= 1 and params.m + 1 <= params.k - 1:
        class_p0 = P0Record(True, params.p, params.p > 0, "p_positive")
    return total, class_p0, tower


def classify(params: CalabiParams) -> CriteriaReport:
    try:
        mu = params.mu.mu
    except DegenerateClass as exc:
        return CriteriaReport(None, None, [], "degenerate", notes=f"{NOTES} {exc}")
    p0 = check_P0(params, mu)
    tower = check_Dinf(params, mu)
    total, class_p0, class_tower = check_class(params)
    if not p0.passed or (class_p0 is not None and not class_p0.passed):
        verdict = "fail_P0"
    elif not all(e.passed for e in tower + class_tower if e.required):
        verdict = "fail_Dinf"
    elif not total.passed:
        verdict = "fail_total"
    else:
        verdict = "pass"
    return CriteriaReport(mu, p0, tower, verdict, total=total, class_p0=class_p0,
                          class_tower=class_tower)
