"""One-command reproduction of the module invariants at reduced sample sizes."""

from __future__ import annotations

import random
import time
from fractions import Fraction

import numpy as np

from .criteria import classify
from .oracles import cone_counterexamples, symbolic_G
from .polynomials import (
    CalabiParams,
    build_F,
    build_G,
    top_degree_closed_form,
    verify_dy_identity,
)
from .solver import solve


def _polynomial_oracle() -> bool:
    return all(
        build_G(m, n, k, p) == symbolic_G(m, n, k, p)
        for m in range(3)
        for n in range(3)
        for k in range(1, m + n + 2)
        for p in (-1, 0, Fraction(1, 2), 2)
    )


def _dy_identity() -> bool:
    rng = random.Random(1)
    for _ in range(200):
        m, n = rng.randint(0, 3), rng.randint(0, 3)
        k = rng.randint(0, m + n + 1)
        p = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        x = Fraction(rng.randint(1, 30), rng.randint(1, 10))
        y = Fraction(rng.randint(-30, 30), rng.randint(1, 10))
        if verify_dy_identity(m, n, k, p, x, y) != 0:
            return False
    return True


def _boundary_identities() -> bool:
    rng = random.Random(2)
    for _ in range(50):
        m, n = rng.randint(0, 3), rng.randint(1, 3)
        N = m + n + 1
        k = rng.randint(1, N)
        l = rng.randint(0, k - 1)
        p, q, b = (Fraction(rng.randint(1, 20), rng.randint(1, 7)) for _ in range(3))
        params = CalabiParams(m, n, k, l, p, q, b)
        if build_G(m, n, N, p)(b, q) != top_degree_closed_form(m, n, p, q):
            return False
        if build_F(params, params.mu.mu)(b, q) != 0:
            return False
    return True


def _cones(samples: int) -> bool:
    counts = cone_counterexamples(samples)
    return all(v == 0 for key, v in counts.items() if key != "checked")


def _trivial_solution() -> bool:
    for m, n, k, l in ((0, 1, 1, 0), (1, 1, 2, 1), (1, 2, 4, 0), (2, 1, 3, 2)):
        r = solve(CalabiParams(m, n, k, l, 1, 1, 1))
        if not r.solved or np.max(np.abs(r.curve.ys - r.curve.xs)) > 1e-9:
            return False
    return True


def _oracle_agreement() -> bool:
    for args in ((1, 1, 2, 1, Fraction(3, 2), Fraction(1, 2), 1),
                 (1, 1, 3, 0, Fraction(1, 2), Fraction(3, 4), 1),
                 (0, 2, 2, 0, 2, Fraction(1, 5), 1)):
        r = solve(CalabiParams(*args))
        if not (r.solved and r.oracle_distance <= 1e-5 and r.seed_gap <= 1e-8):
            return False
    return True


def _dichotomy() -> bool:
    for m, n, k, l in ((1, 1, 2, 1), (0, 2, 2, 0), (1, 1, 3, 0)):
        for p in (Fraction(-1, 2), Fraction(1, 3), Fraction(3, 2)):
            for q in (Fraction(-1, 3), Fraction(1, 2), Fraction(5, 3)):
                params = CalabiParams(m, n, k, l, p, q, 1)
                if classify(params).verdict == "degenerate":
                    continue
                if solve(params).dichotomy_violation:
                    return False
    return True


def run_selftest(samples: int = 20000) -> bool:
    suites = [
        ("polynomial oracle (symbolic t-derivatives)", _polynomial_oracle),
        ("dG/dy identity (exact)", _dy_identity),
        ("boundary identities (exact)", _boundary_identities),
        (f"cone properties ({samples} samples each)", lambda: _cones(samples)),
        ("trivial solution y = x", _trivial_solution),
        ("tracker vs RK4 and seed agreement", _oracle_agreement),
        ("criteria <=> solvability on a small grid", _dichotomy),
    ]
    ok = True
    for name, check in suites:
        start = time.perf_counter()
        passed = bool(check())
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}  ({time.perf_counter() - start:.2f}s)")
    print("selftest:", "all passed" if ok else "FAILED")
    return ok
