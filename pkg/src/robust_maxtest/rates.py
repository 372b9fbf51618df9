"""Rate functions and theorem side-conditions as shape diagnostics.

Every unspecified multiplicative constant is set to 1, so the values indicate
how far a given (n, d, m, eta_bar) is from the asymptotic regime; they are not
certified error bounds.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .model import DomainError


@dataclass(frozen=True)
class RateReport:
    a: float
    b: float
    c_rate: float
    d_rate: float
    f: float
    e: float
    s_n: float
    cond_contam: float
    cond_dim_winsor: float
    cond_dim_mean: float
    moments_ok: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _check(n, d, m, eta_bar, xi):
    if n < 3:
        raise DomainError(f"n must be at least 3, got {n}")
    if d < 2:
        raise DomainError(f"d must be at least 2, got {d}")
    if not m > 2:
        raise DomainError(f"m must exceed 2, got {m}")
    if not 0 <= eta_bar < 0.5:
        raise DomainError(f"eta_bar must lie in [0, 1/2), got {eta_bar}")
    if not 0 < xi < 1:
        raise DomainError(f"xi must lie in (0, 1), got {xi}")


def rate_a(n, d, m):
    r = math.log(d * n) / n
    return r + math.sqrt(r) + (d * math.log(n)) ** (2 / m) / n ** (1 - 2 / m)


def rate_b(n, d, m):
    ld = math.log(d)
    return (d ** (2 / m) * ld**5 / n) ** 0.25 + (d ** (2 / m) * ld ** (3 - 2 / m) / n ** (1 - 2 / m)) ** 0.5


def rate_c(n, d, m):
    return math.sqrt(math.log(d) * math.log(d * n)) * rate_a(n, d, m) + rate_b(n, d, m)


def rate_d(n, d, m, eta_bar):
    return eta_bar ** (1 - 2 / m) + (math.log(d * n) / n) ** (0.5 - 1 / m)


def rate_f(n, d, m, eta_bar):
    ld, ldn = math.log(d), math.log(d * n)
    r = ldn / n
    first = (ldn ** (5 - 2 / m) / n ** (1 - 2 / m)) ** 0.25
    second = (eta_bar ** (1 - 1 / m) + r ** (1 - 1 / m)) * math.sqrt(n * ld)
    third = (ld**2 * (eta_bar ** (1 - 2 / m) + r ** (1 - 2 / m))) ** 0.5
    return first + second + third


def rate_e(n, d, m, eta_bar):
    return rate_f(n, d, m, eta_bar) + math.sqrt(math.log(d) * math.log(d * n)) * rate_d(n, d, m, eta_bar)


def rate_s(n, d, m, eta_bar):
    return math.log(d) * math.sqrt(rate_d(n, d, m, eta_bar))


def rate_report(n: int, d: int, m: float, eta_bar: float, xi: float) -> RateReport:
    _check(n, d, m, eta_bar, xi)
    return RateReport(
        a=rate_a(n, d, m),
        b=rate_b(n, d, m),
        c_rate=rate_c(n, d, m),
        d_rate=rate_d(n, d, m, eta_bar),
        f=rate_f(n, d, m, eta_bar),
        e=rate_e(n, d, m, eta_bar),
        s_n=rate_s(n, d, m, eta_bar),
        cond_contam=math.sqrt(n * math.log(d)) * eta_bar ** (1 - 1 / m),
        cond_dim_winsor=math.log(d) / n ** ((m - 2) / (5 * m - 2)),
        cond_dim_mean=d / n ** (m / 2 - 1 - xi),
        moments_ok=m > 4,
    )


def traffic_light(value: float) -> str:
    if value < 0.1:
        return "small"
    if value < 1:
        return "moderate"
    return "large"


CONDITIONS = {
    "cond_contam": "sqrt(n log d) * eta_bar^(1 - 1/m)",
    "cond_dim_winsor": "log(d) / n^((m - 2)/(5m - 2))",
    "cond_dim_mean": "d / n^(m/2 - 1 - xi)",
}


def check_theorem_conditions(n: int, d: int, m: float, eta_bar: float, xi: float) -> dict:
    rep = rate_report(n, d, m, eta_bar, xi)
    out = {}
    for name, formula in CONDITIONS.items():
        value = getattr(rep, name)
        out[name] = {"formula": formula, "tag": traffic_light(value), "value": value}
    return out
