"""Truncated Dirichlet series with growth certificates and certified real evaluation."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field

from .arithfun import (CoefficientSeq, MultFun, arithmetic_derivative, constant_one,
                       dirichlet_convolve, identity_e)
from .exactnum import LogPoly
from .galois import (GaloisContext, VirtualCharacter, artin_coefficients, cyc_from_json,
                     cyc_to_json)

# log^k n <= (k / (e * delta))^k * n^delta for every n >= 1
DERIVATIVE_EPS_STEP = 0.5


class DomainError(ValueError):
    """Evaluation point outside the half plane of certified convergence."""


@dataclass
class TruncatedSeries:
    """Coefficients a_1..a_N together with a growth certificate |a_n| <= C n^eps."""

    coeffs: CoefficientSeq
    epsilon: float
    C: float
    label: str = ""
    growth_scope: str = "scanned"  # "scanned": n <= N only; "all-n": asserted for all n
    finite_support: bool = False   # every coefficient beyond N is known to vanish
    _floats: list | None = field(default=None, init=False, repr=False, compare=False)

    @property
    def bound(self) -> int:
        return self.coeffs.bound

    @property
    def mode(self) -> str:
        return self.coeffs.mode

    @property
    def derivative_order(self) -> int:
        return self.coeffs.derivative_order

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def floats(self) -> list[complex]:
        if self._floats is None:
            if self.mode == "float":
                self._floats = list(self.coeffs.values)
            else:
                cache: dict = {}
                out = []
                for v in self.coeffs.values:
                    key = frozenset(v.terms.items())
                    if key not in cache:
                        cache[key] = v.evaluate()
                    out.append(cache[key])
                self._floats = out
        return self._floats

    def growth_holds(self) -> bool:
        return all(abs(a) <= self.C * n**self.epsilon * (1 + 1e-12)
                   for n, a in enumerate(self.floats(), 1))


def scan_growth_constant(values: list[complex], epsilon: float) -> float:
    """max |a_n| / n^eps over the stored coefficients."""
    return max((abs(a) / n**epsilon for n, a in enumerate(values, 1)), default=0.0)


def _make(coeffs: CoefficientSeq, epsilon: float, label: str, scope: str = "scanned",
          C: float | None = None) -> TruncatedSeries:
    s = TruncatedSeries(coeffs, epsilon, 0.0, label, scope)
    scanned = scan_growth_constant(s.floats(), epsilon)
    s.C = scanned if C is None else max(C, scanned)
    return s


def default_epsilon(chi: VirtualCharacter) -> float:
    # degree-one characters have |a_n| <= 1 for every n
    return 0.0 if chi.degree <= 1 else 0.1


def from_multfun(f: MultFun, mode: str = "exact", epsilon: float = 0.0,
                 label: str | None = None) -> TruncatedSeries:
    return _make(f.to_sequence(mode), epsilon, label or f.label)


def zeta_series(N: int, mode: str = "exact", level: int = 2) -> TruncatedSeries:
    return from_multfun(constant_one(N, level), mode, 0.0, "zeta")


def e_series(N: int, mode: str = "exact", level: int = 2) -> TruncatedSeries:
    s = from_multfun(identity_e(N, level), mode, 0.0, "e")
    s.growth_scope, s.finite_support = "all-n", True
    return s


def euler_expand(ctx: GaloisContext, chi: VirtualCharacter, N: int, mode: str = "exact",
                 epsilon: float | None = None, coefficients: MultFun | None = None
                 ) -> TruncatedSeries:
    """Truncated Dirichlet series of L(s, chi) from its Euler product.

    ``coefficients`` may carry an already computed ``artin_coefficients`` result.
    """
    if not chi.is_nonnegative():
        raise ValueError("euler_expand needs nonnegative multiplicities")
    eps = default_epsilon(chi) if epsilon is None else epsilon
    f = coefficients if coefficients is not None else artin_coefficients(ctx, chi, N)
    if f.bound != N:
        raise ValueError("precomputed coefficients have the wrong bound")
    scope = "all-n" if eps == 0.0 and chi.degree <= 1 else "scanned"
    return _make(f.to_sequence(mode), eps, f"L({chi.label})", scope)


def series_product(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Dirichlet convolution of coefficients (product of the series)."""
    if a.bound != b.bound or a.mode != b.mode:
        raise ValueError("series_product needs equal bound and mode")
    if a.derivative_order or b.derivative_order:
        raise ValueError("series_product needs underived series")
    eps = max(a.epsilon, b.epsilon)
    return _make(dirichlet_convolve(a.coeffs, b.coeffs), eps, f"{a.label}*{b.label}")


def series_derivative(a: TruncatedSeries, k: int) -> TruncatedSeries:
    """k-th derivative in s: coefficients (-1)^k a_n log^k n."""
    if a.derivative_order:
        raise ValueError("series_derivative needs an underived series")
    if k == 0:
        return a
    delta = DERIVATIVE_EPS_STEP
    transfer = a.C * (k / (math.e * delta)) ** k
    out = _make(arithmetic_derivative(a.coeffs, k), a.epsilon + delta,
                f"{a.label}^({k})", a.growth_scope, C=transfer)
    out.finite_support = a.finite_support
    return out


@dataclass
class EvalResult:
    sigma: float
    value: complex
    tail_bound: float
    epsilon: float

    @property
    def interval(self) -> tuple[float, float]:
        """Enclosure of the real part of the full series."""
        return (self.value.real - self.tail_bound, self.value.real + self.tail_bound)

    def contains(self, x: complex, slack: float = 0.0) -> bool:
        return abs(x - self.value) <= self.tail_bound + slack


def tail_bound(C: float, epsilon: float, N: int, sigma: float) -> float:
    """Integral bound for C * sum_{n>N} n^(eps - sigma)."""
    return C * N ** (1 + epsilon - sigma) / (sigma - epsilon - 1)


def evaluate(a: TruncatedSeries, sigma: float) -> EvalResult:
    if not sigma - a.epsilon > 1:
        raise DomainError(f"sigma={sigma} is outside the half plane of certified "
                          f"convergence (needs sigma > 1 + {a.epsilon})")
    re, im = [], []
    for n, c in enumerate(a.floats(), 1):
        if c:
            w = n ** (-sigma)
            re.append(c.real * w)
            im.append(c.imag * w)
    value = complex(math.fsum(re), math.fsum(im))
    tail = 0.0 if a.finite_support else tail_bound(a.C, a.epsilon, a.bound, sigma)
    return EvalResult(sigma, value, tail, a.epsilon)


@dataclass
class FiniteDifferenceReport:
    sigma: float
    h: float
    central_difference: complex
    derivative_value: complex
    discrepancy: float
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.discrepancy <= self.bound


def finite_difference_check(a: TruncatedSeries, sigma: float, h: float) -> FiniteDifferenceReport:
    """Compare a central difference of the truncated sum with its derivative series."""
    if not sigma - h > 1 + a.epsilon:
        raise DomainError("finite_difference_check needs sigma - h > 1 + eps")
    hi, lo = evaluate(a, sigma + h), evaluate(a, sigma - h)
    central = (hi.value - lo.value) / (2 * h)
    deriv = evaluate(series_derivative(a, 1), sigma).value
    # |F'''| on [sigma-h, sigma+h] is dominated by the absolute sum at sigma-h
    third = math.fsum(abs(c) * math.log(n) ** 3 * n ** (h - sigma)
                      for n, c in enumerate(a.floats(), 1) if c and n > 1)
    absolute = math.fsum(abs(c) * n ** (h - sigma) for n, c in enumerate(a.floats(), 1) if c)
    rounding = 4 * sys.float_info.epsilon * absolute * math.log2(a.bound + 1) / h
    return FiniteDifferenceReport(sigma, h, central, deriv, abs(central - deriv),
                                  h * h / 6 * third + rounding)


# ---------------------------------------------------------------------------
# JSON interchange

def logpoly_to_json(v: LogPoly) -> list:
    return [[{str(p): e for p, e in m}, cyc_to_json(c)]
            for m, c in sorted(v.terms.items())]


def logpoly_from_json(level: int, doc: list) -> LogPoly:
    terms = {}
    for mono, vec in doc:
        m = tuple(sorted((int(p), int(e)) for p, e in mono.items()))
        terms[m] = cyc_from_json(level, vec)
    return LogPoly(terms)


def _float17(x: float) -> str:
    return format(x, ".17g")


def series_to_json(a: TruncatedSeries) -> dict:
    doc = {
        "label": a.label,
        "bound": a.bound,
        "mode": a.mode,
        "derivative_order": a.derivative_order,
        "epsilon": _float17(a.epsilon),
        "C": _float17(a.C),
        "growth_scope": a.growth_scope,
        "finite_support": a.finite_support,
    }
    if a.mode == "exact":
        level = next((v.level for v in a.coeffs.values if v), 2)
        doc["level"] = level
        doc["coefficients"] = [logpoly_to_json(v) for v in a.coeffs.values]
    else:
        doc["coefficients"] = [[_float17(c.real), _float17(c.imag)] for c in a.coeffs.values]
    return doc


def series_from_json(doc: dict) -> TruncatedSeries:
    mode = doc["mode"]
    if mode == "exact":
        level = int(doc["level"])
        vals = [logpoly_from_json(level, e) for e in doc["coefficients"]]
    else:
        vals = [complex(float(re), float(im)) for re, im in doc["coefficients"]]
    coeffs = CoefficientSeq(int(doc["bound"]), vals, int(doc["derivative_order"]), mode)
    return TruncatedSeries(coeffs, float(doc["epsilon"]), float(doc["C"]),
                           doc.get("label", ""), doc.get("growth_scope", "scanned"),
                           bool(doc.get("finite_support", False)))


def series_equal(a: TruncatedSeries, b: TruncatedSeries) -> bool:
    return (a.bound == b.bound and a.mode == b.mode
            and a.derivative_order == b.derivative_order
            and a.epsilon == b.epsilon and a.C == b.C and a.finite_support == b.finite_support
            and a.coeffs.values == b.coeffs.values)


__all__ = [
    "DomainError", "EvalResult", "FiniteDifferenceReport", "TruncatedSeries", "e_series",
    "euler_expand", "evaluate", "finite_difference_check", "from_multfun",
    "scan_growth_constant", "series_derivative", "series_equal", "series_from_json",
    "series_product", "series_to_json", "tail_bound", "zeta_series",
]
