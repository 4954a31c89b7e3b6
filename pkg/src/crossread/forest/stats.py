"""Student's t machinery built on the regularized incomplete beta.

Implemented directly (continued fraction, Numerical Recipes style) so
significance values carry no runtime dependency beyond the standard
library.  Two-tailed p for a t statistic with df degrees of freedom is
I_x(df/2, 1/2) at x = df / (df + t^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ..errors import ValidationError

_ITMAX = 200
_EPS = 3.0e-7
_FPMIN = 1.0e-30


class StatsError(ValidationError):
    """Raised for degenerate samples or invalid arguments."""


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _ITMAX + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0.0 or b <= 0.0:
        raise StatsError("invalid-argument", f"a and b must be positive, got {a}, {b}")
    if not 0.0 <= x <= 1.0:
        raise StatsError("invalid-argument", f"x must be in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log(1.0 - x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_two_tailed_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with df degrees of freedom."""
    if df <= 0:
        raise StatsError("invalid-argument", f"df must be positive, got {df}")
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def t_cdf(t: float, df: float) -> float:
    p = t_two_tailed_p(t, df)
    return 1.0 - p / 2.0 if t >= 0 else p / 2.0


@dataclass(frozen=True)
class TTestResult:
    statistic: float
    df: float
    p_value: float
    paired: bool


def paired_t_test(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    """Two-tailed paired t-test on equal-length score sequences.

    The score pairs must show some variance in their differences;
    all-identical differences have no defined statistic and raise.
    """
    if len(a) != len(b):
        raise StatsError("length-mismatch", f"paired samples differ: {len(a)} vs {len(b)}")
    n = len(a)
    if n < 2:
        raise StatsError("too-few-pairs", f"need at least 2 pairs, got {n}")
    diffs = [float(x) - float(y) for x, y in zip(a, b)]
    mean = sum(diffs) / n
    var = sum((d - mean) ** 2 for d in diffs) / (n - 1)
    if var == 0.0:
        raise StatsError(
            "degenerate-variance", "paired differences are constant; t is undefined"
        )
    statistic = mean / math.sqrt(var / n)
    df = n - 1
    return TTestResult(
        statistic=statistic, df=float(df), p_value=t_two_tailed_p(statistic, df), paired=True
    )


def welch_t_test(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    """Two-tailed unpaired t-test with Welch's df correction."""
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise StatsError("too-few-pairs", "each sample needs at least 2 values")
    mean_a = sum(a) / na
    mean_b = sum(b) / nb
    var_a = sum((x - mean_a) ** 2 for x in a) / (na - 1)
    var_b = sum((x - mean_b) ** 2 for x in b) / (nb - 1)
    if var_a == 0.0 and var_b == 0.0:
        raise StatsError(
            "degenerate-variance", "both samples are constant; t is undefined"
        )
    se2 = var_a / na + var_b / nb
    statistic = (mean_a - mean_b) / math.sqrt(se2)
    df = se2**2 / (
        (var_a / na) ** 2 / (na - 1) + (var_b / nb) ** 2 / (nb - 1)
    )
    return TTestResult(
        statistic=statistic, df=df, p_value=t_two_tailed_p(statistic, df), paired=False
    )
