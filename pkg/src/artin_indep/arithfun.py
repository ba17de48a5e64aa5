"""Multiplicative functions, Dirichlet convolution and arithmetic derivatives."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .exactnum import CycNum, LogPoly

RATIONAL_LEVEL = 2


@lru_cache(maxsize=8)
def spf_sieve(N: int) -> tuple[int, ...]:
    """Smallest prime factor of every n <= N (index 0 and 1 map to themselves)."""
    spf = list(range(N + 1))
    for i in range(2, math.isqrt(N) + 1):
        if spf[i] == i:
            for j in range(i * i, N + 1, i):
                if spf[j] == j:
                    spf[j] = i
    return tuple(spf)


def factorize(n: int, spf=None) -> dict[int, int]:
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    if spf is None or n >= len(spf):
        out: dict[int, int] = {}
        p = 2
        while p * p <= n:
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
            p += 1
        if n > 1:
            out[n] = out.get(n, 0) + 1
        return out
    out = {}
    while n > 1:
        p = spf[n]
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out[p] = e
    return out


def primes_up_to(N: int) -> list[int]:
    spf = spf_sieve(max(N, 2))
    return [p for p in range(2, N + 1) if spf[p] == p]


def prime_powers_up_to(N: int) -> list[tuple[int, int]]:
    """All (p, j) with j >= 1 and p**j <= N, ordered by p then j."""
    out = []
    for p in primes_up_to(N):
        q, j = p, 1
        while q <= N:
            out.append((p, j))
            q *= p
            j += 1
    return out


class MultFun:
    """Multiplicative function known on prime powers up to ``bound``.

    The value at 1 is always 1, so the zero function is not representable.
    """

    def __init__(self, bound: int, prime_power_values: dict, level: int, label: str = ""):
        if bound < 1:
            raise ValueError("MultFun bound must be >= 1")
        self.bound = bound
        self.level = level
        self.label = label
        self.prime_power_values = {}
        for (p, j), v in prime_power_values.items():
            if p**j <= bound:
                if v.level != level:
                    raise ValueError(f"value at {p}^{j} has level {v.level}, expected {level}")
                self.prime_power_values[(p, j)] = v
        self._zero = CycNum.zero(level)
        self._one = CycNum.one(level)

    def prime_power(self, p: int, j: int) -> CycNum:
        if j == 0:
            return self._one
        return self.prime_power_values.get((p, j), self._zero)

    def value_at(self, n: int) -> CycNum:
        return value_at(self, n)

    def values(self) -> list[CycNum]:
        """[f(1), ..., f(bound)]."""
        return self._build(self.prime_power, self._one, self._zero)

    def float_values(self) -> list[complex]:
        conv = {pj: v.to_complex() for pj, v in self.prime_power_values.items()}
        return self._build(lambda p, j: conv.get((p, j), 0j), 1 + 0j, 0j)

    def _build(self, prime_power, one, zero):
        # f(n) = f(n / p^j) f(p^j) with p the smallest prime factor of n
        spf = spf_sieve(self.bound)
        out = [zero, one]
        for n in range(2, self.bound + 1):
            p = spf[n]
            m, j = n // p, 1
            while m % p == 0:
                m //= p
                j += 1
            rest = out[m]
            out.append(rest * prime_power(p, j) if rest else zero)
        return out[1:]

    def _value(self, n, spf):
        v = self._one
        for p, j in factorize(n, spf).items():
            pv = self.prime_power(p, j)
            if not pv:
                return self._zero
            v = v * pv
        return v

    def to_sequence(self, mode: str = "exact") -> "CoefficientSeq":
        if mode == "exact":
            return CoefficientSeq(self.bound, [LogPoly.constant(v) for v in self.values()],
                                  0, "exact")
        if mode == "float":
            return CoefficientSeq(self.bound, self.float_values(), 0, "float")
        raise ValueError(f"unknown mode {mode!r}")

    def __repr__(self):
        return f"MultFun({self.label or '?'}, bound={self.bound}, level={self.level})"


def identity_e(bound: int, level: int = RATIONAL_LEVEL) -> MultFun:
    """e(1) = 1 and e(n) = 0 for n >= 2."""
    zero = CycNum.zero(level)
    return MultFun(bound, {pj: zero for pj in prime_powers_up_to(bound)}, level, "e")


def constant_one(bound: int, level: int = RATIONAL_LEVEL) -> MultFun:
    one = CycNum.one(level)
    return MultFun(bound, {pj: one for pj in prime_powers_up_to(bound)}, level, "1")


def value_at(f: MultFun, n: int) -> CycNum:
    if not 1 <= n <= f.bound:
        raise ValueError(f"n={n} outside 1..{f.bound}")
    return f._value(n, spf_sieve(f.bound))


@dataclass
class CoefficientSeq:
    """Coefficients a_1..a_N; ``values[n-1]`` holds a_n."""

    bound: int
    values: list
    derivative_order: int = 0
    mode: str = "exact"

    def __post_init__(self):
        if len(self.values) != self.bound:
            raise ValueError("values length must equal bound")
        if self.mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def __getitem__(self, n: int):
        return self.values[n - 1]

    def __add__(self, other: "CoefficientSeq") -> "CoefficientSeq":
        _check_compatible(self, other)
        if self.derivative_order != other.derivative_order:
            raise ValueError("derivative orders differ")
        return CoefficientSeq(
            self.bound, [a + b for a, b in zip(self.values, other.values)],
            self.derivative_order, self.mode,
        )

    def scale(self, c) -> "CoefficientSeq":
        if self.mode == "exact":
            return CoefficientSeq(self.bound, [v.scale(c) for v in self.values],
                                  self.derivative_order, "exact")
        cf = c.to_complex() if isinstance(c, CycNum) else complex(c)
        return CoefficientSeq(self.bound, [v * cf for v in self.values],
                              self.derivative_order, "float")

    def to_float(self) -> list[complex]:
        if self.mode == "float":
            return list(self.values)
        return [v.evaluate() for v in self.values]


def _check_compatible(f: CoefficientSeq, g: CoefficientSeq):
    if f.bound != g.bound:
        raise ValueError(f"bounds differ: {f.bound} vs {g.bound}")
    if f.mode != g.mode:
        raise ValueError(f"modes differ: {f.mode} vs {g.mode}")


def dirichlet_convolve(f: CoefficientSeq, g: CoefficientSeq) -> CoefficientSeq:
    """(f*g)(n) = sum_{d | n} f(d) g(n/d) for n <= N."""
    _check_compatible(f, g)
    N = f.bound
    fv, gv = f.values, g.values
    if f.mode == "float":
        acc = [0j] * (N + 1)
        for d in range(1, N + 1):
            a = fv[d - 1]
            if a:
                for e in range(1, N // d + 1):
                    b = gv[e - 1]
                    if b:
                        acc[d * e] += a * b
        out = acc[1:]
    elif f.derivative_order == 0 and g.derivative_order == 0:
        fc = [v.terms.get(()) for v in fv]
        gc = [v.terms.get(()) for v in gv]
        acc = [None] * (N + 1)
        for d in range(1, N + 1):
            a = fc[d - 1]
            if a is None:
                continue
            for e in range(1, N // d + 1):
                b = gc[e - 1]
                if b is None:
                    continue
                t = a * b
                acc[d * e] = t if acc[d * e] is None else acc[d * e] + t
        out = [LogPoly.constant(v) if v is not None else LogPoly() for v in acc[1:]]
    else:
        acc = [LogPoly() for _ in range(N + 1)]
        for d in range(1, N + 1):
            a = fv[d - 1]
            if a:
                for e in range(1, N // d + 1):
                    b = gv[e - 1]
                    if b:
                        acc[d * e] = acc[d * e] + a * b
        out = acc[1:]
    return CoefficientSeq(N, out, f.derivative_order + g.derivative_order, f.mode)


def arithmetic_derivative(f: CoefficientSeq, k: int) -> CoefficientSeq:
    """Entry n becomes (-1)^k f(n) log^k n, with log n = sum v_p(n) L_p in exact mode."""
    if k < 0:
        raise ValueError("derivative order must be >= 0")
    if f.derivative_order != 0:
        raise ValueError("arithmetic_derivative expects an underived sequence")
    if k == 0:
        return CoefficientSeq(f.bound, list(f.values), 0, f.mode)
    sign = -1 if k % 2 else 1
    spf = spf_sieve(f.bound)
    if f.mode == "float":
        out = [sign * v * math.log(n) ** k if v else 0j for n, v in enumerate(f.values, 1)]
        return CoefficientSeq(f.bound, out, k, "float")
    out = []
    for n, v in enumerate(f.values, 1):
        if not v or n == 1:
            out.append(LogPoly())
            continue
        lvl = v.level
        log_n = LogPoly.log_of(factorize(n, spf), lvl)
        out.append((log_n**k * v).scale(sign))
    return CoefficientSeq(f.bound, out, k, "exact")


@dataclass
class EquivalenceCheck:
    """Outcome of a bounded search for a prime power where f and g differ."""

    witness: tuple | None
    prime_bound: int
    excluded: tuple = field(default_factory=tuple)
    values: tuple | None = None

    @property
    def verdict(self) -> str:
        return "witness-found" if self.witness else "equivalent-up-to-bound"


def equivalence_witness(f: MultFun, g: MultFun, prime_bound: int,
                        exclude: Iterable[int] = ()) -> EquivalenceCheck:
    """Least (p, j), p not excluded and p^j <= prime_bound, with f(p^j) != g(p^j).

    Agreement on every tested prime power does not prove equivalence; it only
    reports that no witness exists below the bound.
    """
    if prime_bound > min(f.bound, g.bound):
        raise ValueError("prime_bound exceeds the support of f or g")
    excluded = tuple(sorted(set(exclude)))
    for p, j in prime_powers_up_to(prime_bound):
        if p in excluded:
            continue
        a, b = f.prime_power(p, j), g.prime_power(p, j)
        if a != b:
            return EquivalenceCheck((p, j), prime_bound, excluded, (a, b))
    return EquivalenceCheck(None, prime_bound, excluded)
