"""Exact arithmetic in cyclotomic fields and in polynomial rings of log symbols.

A :class:`CycNum` is an element of Q(zeta_M) stored in the power basis
1, zeta, ..., zeta^(phi(M)-1) modulo the cyclotomic polynomial Phi_M.

A :class:`LogPoly` is a sparse polynomial in formal symbols ``L_p`` (one per
prime p, standing for ``log p``) with :class:`CycNum` coefficients.  The
logarithm of an integer n is encoded as the linear form ``sum v_p(n) L_p``.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache


class LevelMismatch(ValueError):
    pass


@lru_cache(maxsize=None)
def cyclotomic_polynomial(M: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_M, lowest degree first."""
    if M < 1:
        raise ValueError("cyclotomic_polynomial needs M >= 1")
    # x^M - 1 divided by Phi_d for every proper divisor d of M
    num = [-1] + [0] * (M - 1) + [1]
    for d in range(1, M):
        if M % d == 0:
            num = _exact_int_div(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _exact_int_div(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c, r = divmod(num[i + len(den) - 1], lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def _reduction_table(M: int) -> tuple[tuple[Fraction, ...], ...]:
    """Power-basis vectors of zeta^i for i = 0 .. 2*phi(M) - 2 (and at least M - 1)."""
    phi_poly = cyclotomic_polynomial(M)
    d = len(phi_poly) - 1
    top = max(2 * d - 1, M)
    rows = []
    cur = [Fraction(0)] * d
    cur[0] = Fraction(1)
    for _ in range(top):
        rows.append(tuple(cur))
        # multiply by x, then reduce x^d = -sum phi_i x^i
        carry = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        if carry:
            for i in range(d):
                cur[i] -= carry * phi_poly[i]
    return tuple(rows)


class CycNum:
    """Exact element of the cyclotomic field Q(zeta_level)."""

    __slots__ = ("level", "coeffs", "_hash")

    def __init__(self, level: int, coeffs):
        d = euler_phi(level)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != d:
            raise ValueError(f"level {level} needs {d} coordinates, got {len(coeffs)}")
        self.level = level
        self.coeffs = coeffs
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def rational(cls, level: int, q) -> "CycNum":
        d = euler_phi(level)
        return cls(level, (Fraction(q),) + (Fraction(0),) * (d - 1))

    @classmethod
    def zero(cls, level: int) -> "CycNum":
        return cls.rational(level, 0)

    @classmethod
    def one(cls, level: int) -> "CycNum":
        return cls.rational(level, 1)

    @classmethod
    def zeta(cls, level: int, k: int = 1) -> "CycNum":
        """zeta_level ** k."""
        return cls(level, _reduction_table(level)[k % level])

    # -- predicates ---------------------------------------------------
    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycNum):
            return NotImplemented
        return self.level == other.level and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.level, self.coeffs))
        return self._hash

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "CycNum":
        if isinstance(other, CycNum):
            if other.level != self.level:
                raise LevelMismatch(f"levels {self.level} and {other.level} differ")
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.rational(self.level, other)
        raise TypeError(f"cannot combine CycNum with {type(other).__name__}")

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return CycNum(self.level, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.level, [-a for a in self.coeffs])

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return CycNum(self.level, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum(self.level, [a * other for a in self.coeffs])
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        d = len(a)
        if d == 1:
            return CycNum(self.level, (a[0] * b[0],))
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        table = _reduction_table(self.level)
        out = prod[:d]
        for i in range(d, 2 * d - 1):
            c = prod[i]
            if c:
                row = table[i]
                for j in range(d):
                    if row[j]:
                        out[j] += c * row[j]
        return CycNum(self.level, out)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        return cyc_inverse(self)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(zeta)")
            return CycNum(self.level, [a / other for a in self.coeffs])
        return self * cyc_inverse(self._coerce(other))

    def __pow__(self, k: int):
        if k < 0:
            return cyc_inverse(self) ** (-k)
        result = CycNum.one(self.level)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "CycNum":
        """Complex conjugate: zeta -> zeta^-1."""
        table = _reduction_table(self.level)
        out = [Fraction(0)] * len(self.coeffs)
        for i, c in enumerate(self.coeffs):
            if c:
                for j, t in enumerate(table[(-i) % self.level]):
                    out[j] += c * t
        return CycNum(self.level, out)

    def to_complex(self) -> complex:
        z = cmath.exp(2j * math.pi / self.level)
        return sum((float(c) * z**i for i, c in enumerate(self.coeffs) if c), 0j)

    def __repr__(self):
        if self.is_rational():
            return f"CycNum({self.level}, {self.coeffs[0]})"
        parts = [f"{c}*z^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"CycNum({self.level}, {' + '.join(parts)})"


def cyc_arith(a: CycNum, b: CycNum, op: str) -> CycNum:
    if a.level != b.level:
        raise LevelMismatch(f"levels {a.level} and {b.level} differ")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def cyc_inverse(a: CycNum) -> CycNum:
    """Solve a*x = 1 in the power basis by Gaussian elimination over Q."""
    if not a:
        raise ZeroDivisionError("inverse of zero in Q(zeta)")
    d = len(a.coeffs)
    if d == 1:
        return CycNum(a.level, (1 / a.coeffs[0],))
    # column j of the multiplication matrix is a * zeta^j
    cols = [(a * CycNum.zeta(a.level, j)).coeffs for j in range(d)]
    aug = [[cols[j][i] for j in range(d)] + [Fraction(int(i == 0))] for i in range(d)]
    for c in range(d):
        piv = next(r for r in range(c, d) if aug[r][c])
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(d):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return CycNum(a.level, [aug[i][d] for i in range(d)])


# ---------------------------------------------------------------------------
# LogPoly

def _mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for p, e in b:
        exps[p] = exps.get(p, 0) + e
    return tuple(sorted(exps.items()))


def _mono_div(a: tuple, b: tuple):
    """a / b as a monomial, or None when b does not divide a."""
    exps = dict(a)
    for p, e in b:
        r = exps.get(p, 0) - e
        if r < 0:
            return None
        if r:
            exps[p] = r
        else:
            del exps[p]
    return tuple(sorted(exps.items()))


def mono_degree(m: tuple) -> int:
    return sum(e for _, e in m)


def mono_order_key(m: tuple):
    """Graded-lex order with L_2 > L_3 > L_5 > ..."""
    return (mono_degree(m), tuple((-p, e) for p, e in m))


class LogPoly:
    """Sparse polynomial in the symbols L_p with CycNum coefficients.

    ``terms`` maps monomials (sorted tuples of ``(p, exponent)``) to nonzero
    coefficients.  The empty map is the zero polynomial.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def constant(cls, c: CycNum) -> "LogPoly":
        return cls({(): c})

    @classmethod
    def symbol(cls, p: int, level: int) -> "LogPoly":
        return cls({((p, 1),): CycNum.one(level)})

    @classmethod
    def log_of(cls, factorization: dict, level: int) -> "LogPoly":
        """The linear form sum v_p(n) L_p for n = prod p^v_p."""
        return cls({((p, 1),): CycNum.rational(level, v) for p, v in factorization.items()})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def level(self):
        for c in self.terms.values():
            return c.level
        return None

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((mono_degree(m) for m in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_term(self, level: int) -> CycNum:
        return self.terms.get((), CycNum.zero(level))

    def symbols(self) -> set:
        return {p for m in self.terms for p, _ in m}

    def __eq__(self, other):
        if not isinstance(other, LogPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, LogPoly):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                s = out[m] + c
                if s:
                    out[m] = s
                else:
                    del out[m]
            else:
                out[m] = c
        return LogPoly(out)

    def __neg__(self):
        return LogPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LogPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "LogPoly":
        if not c:
            return LogPoly()
        return LogPoly({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (CycNum, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LogPoly):
            return NotImplemented
        if len(other.terms) == 1 and () in other.terms:
            return self.scale(other.terms[()])
        if len(self.terms) == 1 and () in self.terms:
            return other.scale(self.terms[()])
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = c1 * c2
                if m in out:
                    out[m] = out[m] + v
                else:
                    out[m] = v
        return LogPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a LogPoly")
        result = None
        for _ in range(k):
            result = self if result is None else result * self
        if result is None:
            lvl = self.level
            if lvl is None:
                raise ValueError("zeroth power of the zero polynomial has no level")
            return LogPoly.constant(CycNum.one(lvl))
        return result

    def leading(self):
        m = max(self.terms, key=mono_order_key)
        return m, self.terms[m]

    def exact_div(self, other: "LogPoly") -> "LogPoly":
        """Quotient of an exact division; raises ArithmeticError otherwise."""
        if not other:
            raise ZeroDivisionError("division by the zero LogPoly")
        if len(other.terms) == 1:
            (m, c), = other.terms.items()
            inv = cyc_inverse(c)
            out = {}
            for mm, v in self.terms.items():
                q = _mono_div(mm, m)
                if q is None:
                    raise ArithmeticError("inexact LogPoly division")
                out[q] = v * inv
            return LogPoly(out)
        lm, lc = other.leading()
        inv = cyc_inverse(lc)
        rem = LogPoly(self.terms)
        quot: dict = {}
        while rem:
            m, c = rem.leading()
            q = _mono_div(m, lm)
            if q is None:
                raise ArithmeticError("inexact LogPoly division")
            qc = c * inv
            quot[q] = qc
            rem = rem - LogPoly({_mono_mul(q, mm): qc * v for mm, v in other.terms.items()})
        return LogPoly(quot)

    def substitute(self, values: dict) -> CycNum:
        """Specialize L_p -> values[p] (exact rationals); a ring homomorphism."""
        total = None
        for m, c in self.terms.items():
            w = Fraction(1)
            for p, e in m:
                w *= Fraction(values[p]) ** e
            t = c * w
            total = t if total is None else total + t
        return total

    def evaluate(self) -> complex:
        """Float value with L_p = log p."""
        return logpoly_eval(self)

    def sort_key(self):
        """Deterministic pivot key: (degree, lexicographically-least monomial).

        Monomials compare as sorted ``(p, e)`` tuples, so terms in small primes
        come first.
        """
        if not self.terms:
            return (-1, ())
        return (self.degree(), min(self.terms))

    def __repr__(self):
        if not self.terms:
            return "LogPoly(0)"
        parts = []
        for m in sorted(self.terms, key=mono_order_key, reverse=True):
            mono = "*".join(f"L{p}" + (f"^{e}" if e > 1 else "") for p, e in m)
            c = self.terms[m]
            cs = str(c.coeffs[0]) if c.is_rational() else repr(c)
            parts.append(f"{cs}*{mono}" if mono else cs)
        return "LogPoly(" + " + ".join(parts) + ")"


def logpoly_arith(a: LogPoly, b: LogPoly, op: str) -> LogPoly:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def logpoly_eval(a: LogPoly) -> complex:
    total = 0j
    for m, c in a.terms.items():
        w = 1.0
        for p, e in m:
            w *= math.log(p) ** e
        total += c.to_complex() * w
    return total
