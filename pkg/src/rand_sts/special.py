"""Error function, Gaussian CDF and regularized incomplete gamma.

Every P-value in the package passes through one of these. Everything is
plain double precision; no arbitrary-precision fallbacks.
"""

from __future__ import annotations

import math

from .errors import DomainError

__all__ = ["erf", "erfc", "normal_cdf", "lgamma", "igam", "igamc", "probability"]

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 100_000
_SQRT_PI = math.sqrt(math.pi)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# Lanczos approximation, g = 7, nine terms.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _finite(*xs: float) -> None:
    for x in xs:
        if not math.isfinite(x):
            raise DomainError(f"non-finite argument {x!r}")


def probability(value: float) -> float:
    """Clamp `value` into [0, 1], tolerating only rounding-size excursions."""
    if -1e-12 <= value < 0.0:
        return 0.0
    if 1.0 < value <= 1.0 + 1e-12:
        return 1.0
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"probability out of range: {value!r}")
    return value


def _erf_series(x: float) -> float:
    # erf(x) = 2/sqrt(pi) * exp(-x^2) * sum 2^k x^(2k+1) / (1*3*...*(2k+1));
    # all terms positive, so no cancellation.
    x2 = x * x
    term = x
    total = x
    k = 0
    while abs(term) > _EPS * abs(total):
        k += 1
        term *= 2.0 * x2 / (2 * k + 1)
        total += term
    return 2.0 / _SQRT_PI * math.exp(-x2) * total


def _erfc_cf(x: float) -> float:
    # erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x > 0
    f = x
    c = x
    d = 0.0
    for k in range(1, _MAX_ITER):
        a = 0.5 * k
        d = x + a * d
        d = 1.0 / (d if d != 0.0 else _TINY)
        c = x + a / c
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x * x) / (_SQRT_PI * f)


def erf(x: float) -> float:
    _finite(x)
    if x < 0.0:
        return -erf(-x)
    if x < 3.0:
        return _erf_series(x)
    return 1.0 - _erfc_cf(x)


def erfc(x: float) -> float:
    """Complementary error function, accurate in the far tail."""
    _finite(x)
    if x < 0.0:
        return 2.0 - erfc(-x)
    if x < 2.0:
        return 1.0 - _erf_series(x)
    if x > 27.3:
        return 0.0
    return _erfc_cf(x)


def normal_cdf(z: float) -> float:
    _finite(z)
    return probability(0.5 * erfc(-z / math.sqrt(2.0)))


def lgamma(x: float) -> float:
    """log|Gamma(x)| for x > 0 (Lanczos)."""
    _finite(x)
    if x <= 0.0:
        raise DomainError(f"lgamma needs x > 0, got {x!r}")
    if x < 0.5:
        # reflection keeps the Lanczos sum in its accurate range
        return math.log(math.pi / math.sin(math.pi * x)) - lgamma(1.0 - x)
    x -= 1.0
    s = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        s += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (x + 0.5) * math.log(t) - t + math.log(s)


def _log1p_minus(t: float) -> float:
    """log(1 + t) - t without cancellation for small t."""
    if abs(t) >= 0.1:
        return math.log1p(t) - t
    # -t^2/2 + t^3/3 - t^4/4 + ...
    total = 0.0
    power = t
    k = 1
    while True:
        k += 1
        power *= -t
        term = power / k
        total += term
        if abs(term) <= _EPS * abs(total):
            return total


def _log_prefactor(a: float, x: float) -> float:
    """log(x^a e^-x / Gamma(a)), x > 0."""
    if a < 20.0:
        return a * math.log(x) - x - lgamma(a)
    # Stirling form: for large a the naive difference of ~a-sized logs
    # would cost ~log10(a) digits.
    t = (x - a) / a
    if t <= -1.0:
        return -math.inf
    ia = 1.0 / a
    ia2 = ia * ia
    stirling = ia * (1.0 / 12 - ia2 * (1.0 / 360 - ia2 * (1.0 / 1260 - ia2 / 1680)))
    return a * _log1p_minus(t) + 0.5 * math.log(a / (2.0 * math.pi)) - stirling


def _series_lower(a: float, x: float) -> float:
    """Regularized lower gamma P(a, x) by series; good for x < a + 1."""
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(_log_prefactor(a, x))


def _cf_upper(a: float, x: float) -> float:
    """Regularized upper gamma Q(a, x) by continued fraction; x >= a + 1."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(_log_prefactor(a, x)) * h


def _check_gamma_args(a: float, x: float) -> None:
    _finite(a, x)
    if a <= 0.0 or x < 0.0:
        raise DomainError(f"incomplete gamma needs a > 0 and x >= 0, got a={a!r}, x={x!r}")


def igam(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x)."""
    _check_gamma_args(a, x)
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return probability(_series_lower(a, x))
    return probability(1.0 - _cf_upper(a, x))


def igamc(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).

    This is the chi-square tail used for every K-degree-of-freedom test:
    ``igamc(K / 2, chi2 / 2)``.
    """
    _check_gamma_args(a, x)
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return probability(1.0 - _series_lower(a, x))
    return probability(_cf_upper(a, x))
