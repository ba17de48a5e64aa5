"""Concrete Galois data: character tables, Frobenius rules and Artin Euler factors.

Three families of contexts are built in:

* ``cyclotomic:q``  Gal(Q(zeta_q)/Q) = (Z/qZ)^*, characters are Dirichlet
  characters mod q; ramified Euler factors come from the primitive character.
* ``quadratic:d``   Gal(Q(sqrt d)/Q) for a fundamental discriminant d.
* ``s3_x3_minus_2`` the splitting field of x^3 - 2, Galois group S3.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np

from .arithfun import MultFun, factorize, prime_powers_up_to, primes_up_to
from .exactnum import CycNum


class RamifiedPrime(ValueError):
    pass


@dataclass(frozen=True)
class ConjClass:
    id: str
    size: int
    order: int
    powers: tuple  # powers[k] is the class of g^k, k = 0 .. order-1


@dataclass(frozen=True)
class Character:
    label: str
    values: tuple  # CycNum per class, in context class order

    @property
    def degree(self) -> int:
        return int(self.values[0].as_fraction())


@dataclass(frozen=True)
class FrobeniusRule:
    """Data-driven rule p -> class id.

    ``kind == "residue"``: ``table`` maps str(p mod modulus) to a class id.
    ``kind == "root_count"``: ``table`` maps the number of roots of
    ``polynomial`` (integer coefficients, lowest degree first) mod p to a class id.
    """

    kind: str
    table: dict
    modulus: int = 0
    polynomial: tuple = ()

    def __call__(self, p: int) -> str:
        if self.kind == "residue":
            return self.table[str(p % self.modulus)]
        if self.kind == "root_count":
            return self.table[str(count_roots_mod_p(self.polynomial, p))]
        raise ValueError(f"unknown Frobenius rule kind {self.kind!r}")

    def to_json(self) -> dict:
        out = {"kind": self.kind, "classes": dict(self.table)}
        if self.kind == "residue":
            out["modulus"] = self.modulus
        else:
            out["polynomial"] = list(self.polynomial)
        return out

    @classmethod
    def from_json(cls, doc: dict) -> "FrobeniusRule":
        return cls(doc["kind"], dict(doc["classes"]), doc.get("modulus", 0),
                   tuple(doc.get("polynomial", ())))


def count_roots_mod_p(poly, p: int) -> int:
    """Number of roots in F_p by exhaustive search (vectorized Horner)."""
    x = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(poly):
        acc = (acc * x + c) % p
    return int(np.count_nonzero(acc == 0))


@dataclass
class GaloisContext:
    name: str
    group_label: str
    level: int
    classes: list
    characters: list
    frobenius_rule: FrobeniusRule
    ramified: dict  # p -> list (per character) of factor coefficient lists [1, c1, ...]
    provenance: str = "derived"
    notes: str = ""
    _class_pos: dict = field(init=False, repr=False)

    def __post_init__(self):
        self._class_pos = {c.id: i for i, c in enumerate(self.classes)}

    @property
    def order(self) -> int:
        return sum(c.size for c in self.classes)

    @property
    def h(self) -> int:
        return len(self.characters)

    @property
    def discriminant_support(self) -> tuple:
        return tuple(sorted(self.ramified))

    def class_index(self, cid: str) -> int:
        return self._class_pos[cid]

    def power_map(self, cid: str, k: int) -> str:
        c = self.classes[self._class_pos[cid]]
        return c.powers[k % c.order]

    def irreducible(self, i: int) -> "VirtualCharacter":
        return virtual_sum(self, [(i, 1)])

    def irreducibles(self) -> list:
        return [self.irreducible(i) for i in range(self.h)]

    def zero(self) -> CycNum:
        return CycNum.zero(self.level)

    def one(self) -> CycNum:
        return CycNum.one(self.level)


@dataclass(frozen=True)
class VirtualCharacter:
    """Integer combination sum n_i chi_i of irreducible characters."""

    context: GaloisContext = field(compare=False, hash=False, repr=False)
    multiplicities: tuple
    values: tuple  # class function values, one CycNum per class

    @property
    def degree(self) -> int:
        return int(self.values[0].as_fraction())

    @property
    def label(self) -> str:
        parts = []
        for i, n in enumerate(self.multiplicities):
            if n:
                lab = self.context.characters[i].label
                parts.append(lab if n == 1 else f"{n}*{lab}")
        return " + ".join(parts) or "0"

    def is_nonnegative(self) -> bool:
        return all(n >= 0 for n in self.multiplicities)

    def is_irreducible(self) -> bool:
        return sorted(self.multiplicities) == [0] * (len(self.multiplicities) - 1) + [1]

    def value(self, cid: str) -> CycNum:
        return self.values[self.context.class_index(cid)]


def virtual_sum(ctx: GaloisContext, chis) -> VirtualCharacter:
    """Class function sum n_i chi_i from (irreducible index, multiplicity) pairs.

    ``chis`` may also be a full multiplicity vector of length h.
    """
    chis = list(chis)
    if chis and not isinstance(chis[0], tuple):
        if len(chis) != ctx.h:
            raise ValueError(f"multiplicity vector needs {ctx.h} entries")
        chis = list(enumerate(chis))
    mult = [0] * ctx.h
    for i, n in chis:
        if not 0 <= i < ctx.h:
            raise ValueError(f"no irreducible character with index {i}")
        mult[i] += int(n)
    vals = []
    for c in range(len(ctx.classes)):
        v = ctx.zero()
        for i, n in enumerate(mult):
            if n:
                v = v + ctx.characters[i].values[c] * n
        vals.append(v)
    return VirtualCharacter(ctx, tuple(mult), tuple(vals))


# ---------------------------------------------------------------------------
# Frobenius and local factors

def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def frobenius_class(ctx: GaloisContext, p: int) -> str:
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p in ctx.ramified:
        raise RamifiedPrime(f"{p} is ramified in {ctx.name}; use its local data")
    return ctx.frobenius_rule(p)


def poly_mul(a: list, b: list) -> list:
    out = [a[0] * 0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return out


def newton_factor(power_sums: list, one: CycNum) -> list:
    """Coefficients of det(1 - gT) from power sums p_k = tr(g^k), k = 1..d."""
    e = [one]
    for k in range(1, len(power_sums) + 1):
        s = one * 0
        for i in range(1, k + 1):
            term = e[k - i] * power_sums[i - 1]
            s = s + term if i % 2 else s - term
        e.append(s / k)
    return [ek if k % 2 == 0 else -ek for k, ek in enumerate(e)]


def local_euler_factor(ctx: GaloisContext, chi: VirtualCharacter, p: int) -> list:
    """det(1 - Frob_p T | V), as a coefficient list with constant term 1."""
    if not chi.is_nonnegative():
        raise ValueError("local factor of a virtual character with negative multiplicity "
                         "is not a polynomial")
    one = ctx.one()
    if p in ctx.ramified:
        factor = [one]
        for i, n in enumerate(chi.multiplicities):
            for _ in range(n):
                factor = poly_mul(factor, ctx.ramified[p][i])
        return _trim(factor)
    cid = frobenius_class(ctx, p)
    d = chi.degree
    sums = [chi.value(ctx.power_map(cid, k)) for k in range(1, d + 1)]
    return _trim(newton_factor(sums, one))


def _trim(poly: list) -> list:
    while len(poly) > 1 and not poly[-1]:
        poly = poly[:-1]
    return poly


def inverse_series(factor: list, terms: int) -> list:
    """First ``terms`` coefficients of 1 / factor(T)."""
    out = [factor[0] ** 0]
    for j in range(1, terms):
        s = out[0] * 0
        for i in range(1, min(j, len(factor) - 1) + 1):
            s = s - factor[i] * out[j - i]
        out.append(s)
    return out


def artin_coefficients(ctx: GaloisContext, chi: VirtualCharacter, N: int) -> MultFun:
    """Dirichlet coefficients of L(s, chi) on prime powers up to N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if not (chi.is_nonnegative() and any(chi.multiplicities)):
        raise ValueError("artin_coefficients needs nonnegative, not-all-zero multiplicities")
    values = {}
    per_class: dict = {}
    for p in primes_up_to(N):
        jmax = int(math.log(N, p)) + 2
        while p**jmax > N:
            jmax -= 1
        if p in ctx.ramified:
            series = inverse_series(local_euler_factor(ctx, chi, p), jmax + 1)
        else:
            cid = ctx.frobenius_rule(p)
            cached = per_class.get(cid)
            if cached is None or len(cached) < jmax + 1:
                cached = inverse_series(local_euler_factor(ctx, chi, p), max(jmax + 1, 2))
                per_class[cid] = cached
            series = cached
        for j in range(1, jmax + 1):
            values[(p, j)] = series[j]
    return MultFun(N, values, ctx.level, label=f"L({chi.label})")


# ---------------------------------------------------------------------------
# Dirichlet characters

def multiplicative_order(a: int, q: int) -> int:
    k, x = 1, a % q
    while x != 1 % q:
        x = x * a % q
        k += 1
    return k


def _unit_group_generators(q: int) -> list[tuple[int, int]]:
    """Generators (mod q) and orders of a cyclic decomposition of (Z/qZ)^*."""
    gens = []
    for p, e in sorted(factorize(q).items()):
        pe = p**e
        rest = q // pe
        local = []
        if p == 2:
            if e >= 2:
                local.append((pe - 1, 2))
            if e >= 3:
                local.append((5, 2 ** (e - 2)))
        else:
            phi = pe - pe // p
            g = next(g for g in range(2, pe) if math.gcd(g, p) == 1
                     and multiplicative_order(g, pe) == phi)
            local.append((g, phi))
        for g, o in local:
            # lift to g mod p^e, 1 mod the rest
            lifted = (g * rest * pow(rest, -1, pe) + pe * pow(pe, -1, rest)) % q if rest > 1 else g
            gens.append((lifted, o))
    return gens


def dirichlet_characters(q: int) -> tuple[int, list[dict]]:
    """All characters mod q as dicts residue -> CycNum, trivial first.

    Returns (level, characters) with level the exponent of (Z/qZ)^* (made even).
    """
    gens = _unit_group_generators(q)
    lam = reduce(math.lcm, (o for _, o in gens), 1)
    level = lam if lam % 2 == 0 else 2 * lam
    dlog = {}
    for exps in itertools.product(*(range(o) for _, o in gens)):
        a = 1
        for (g, _), k in zip(gens, exps):
            a = a * pow(g, k, q) % q
        dlog[a % q] = exps
    chars = []
    for t in itertools.product(*(range(o) for _, o in gens)):
        vals = {}
        for a, exps in dlog.items():
            k = sum(ti * ei * (level // o) for ti, ei, (_, o) in zip(t, exps, gens))
            vals[a] = CycNum.zeta(level, k)
        chars.append(vals)
    return level, chars


def conductor_and_primitivize(q: int, values: dict) -> tuple[int, dict]:
    """Conductor f | q of a character mod q and its primitive version mod f.

    ``values`` maps every unit residue mod q to its CycNum value.
    """
    units = [a for a in range(q) if math.gcd(a, q) == 1]
    if set(values) != set(units):
        raise ValueError("values must cover exactly the units mod q")
    if values[1 % q] != 1:
        raise ValueError("not a character: chi(1) != 1")
    for a in units:
        for b in units:
            if values[a * b % q] != values[a] * values[b]:
                raise ValueError(f"not a character: multiplicativity fails at {a}, {b}")
    for f in sorted(d for d in range(1, q + 1) if q % d == 0):
        if all(values[a] == 1 for a in units if a % f == 1 % f):
            prim = {}
            for a in units:
                prim.setdefault(a % f, values[a])
            return f, prim
    raise AssertionError("unreachable: q itself is always a valid modulus")


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n) for n >= 1."""
    result = 1
    for p, e in factorize(n).items() if n > 1 else ():
        if p == 2:
            if d % 2 == 0:
                return 0
            s = 1 if d % 8 in (1, 7) else -1
        else:
            r = pow(d % p, (p - 1) // 2, p)
            if r == 0:
                return 0
            s = 1 if r == 1 else -1
        result *= s**e
    return result


def is_fundamental_discriminant(d: int) -> bool:
    def squarefree(m):
        return all(m % (p * p) for p in range(2, math.isqrt(abs(m)) + 1))
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree(m)
    return False


# ---------------------------------------------------------------------------
# builtin contexts

def cyclotomic_context(q: int) -> GaloisContext:
    if not 3 <= q <= 60:
        raise ValueError("cyclotomic contexts need 3 <= q <= 60")
    level, chars = dirichlet_characters(q)
    units = sorted(chars[0])
    classes = []
    for a in units:
        o = multiplicative_order(a, q)
        classes.append(ConjClass(str(a), 1, o, tuple(str(pow(a, k, q)) for k in range(o))))
    characters = []
    ramified_primes = sorted(factorize(q))
    ramified = {p: [] for p in ramified_primes}
    one = CycNum.one(level)
    for idx, vals in enumerate(chars):
        f, prim = conductor_and_primitivize(q, vals)
        characters.append(Character(f"chi{q}.{idx}", tuple(vals[a] for a in units)))
        for p in ramified_primes:
            if f % p == 0:
                ramified[p].append([one])
            else:
                ramified[p].append([one, -prim[p % f]])
    rule = FrobeniusRule("residue", {str(a): str(a) for a in units}, modulus=q)
    return GaloisContext(f"cyclotomic:{q}", f"(Z/{q}Z)^*", level, classes, characters,
                         rule, ramified, "derived",
                         "ramified factors from primitive Dirichlet characters")


def quadratic_context(d: int) -> GaloisContext:
    if abs(d) > 100 or not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a fundamental discriminant with |d| <= 100")
    level = 2
    one, mone = CycNum.one(level), -CycNum.one(level)
    classes = [ConjClass("id", 1, 1, ("id",)), ConjClass("sigma", 1, 2, ("id", "sigma"))]
    characters = [Character("1", (one, one)), Character(f"chi_{d}", (one, mone))]
    m = abs(d)
    table = {str(a): ("id" if kronecker(d, a) == 1 else "sigma")
             for a in range(1, m) if math.gcd(a, m) == 1}
    ramified = {p: [[one, mone], [one]] for p in sorted(factorize(m))}
    return GaloisContext(f"quadratic:{d}", "C2", level, classes, characters,
                         FrobeniusRule("residue", table, modulus=m), ramified, "derived",
                         "Kronecker symbol; chi_d vanishes at ramified primes")


def s3_context() -> GaloisContext:
    level = 2
    one = CycNum.one(level)

    def c(v):
        return CycNum.rational(level, v)

    classes = [
        ConjClass("1", 1, 1, ("1",)),
        ConjClass("(12)", 3, 2, ("1", "(12)")),
        ConjClass("(123)", 2, 3, ("1", "(123)", "(123)")),
    ]
    characters = [
        Character("1", (c(1), c(1), c(1))),
        Character("sgn", (c(1), c(-1), c(1))),
        Character("std", (c(2), c(0), c(-1))),
    ]
    rule = FrobeniusRule("root_count", {"3": "1", "1": "(12)", "0": "(123)"},
                         polynomial=(-2, 0, 0, 1))
    # Hand-coded inertia-invariant factors for K = Q(2^(1/3), zeta_3):
    #   p = 2: e = 3, f = 2, inertia A3, Frobenius a transposition
    #   p = 3: e = 6, inertia all of S3
    ramified = {
        2: [[one, c(-1)], [one, c(1)], [one]],
        3: [[one, c(-1)], [one], [one]],
    }
    return GaloisContext("s3_x3_minus_2", "S3", level, classes, characters, rule, ramified,
                         "external", "splitting field of x^3 - 2; ramified factors shipped as data")


BUILTIN_NAMES = ("cyclotomic:q (3 <= q <= 60)", "quadratic:d (fundamental, |d| <= 100)",
                 "s3_x3_minus_2")


def builtin_context(name: str) -> GaloisContext:
    """Parse ``cyclotomic:q``, ``quadratic:d`` or ``s3_x3_minus_2``."""
    name = name.strip()
    if name == "s3_x3_minus_2":
        return s3_context()
    kind, _, arg = name.partition(":")
    try:
        val = int(arg)
    except ValueError:
        raise ValueError(f"unsupported context {name!r}") from None
    if kind == "cyclotomic":
        return cyclotomic_context(val)
    if kind == "quadratic":
        return quadratic_context(val)
    raise ValueError(f"unsupported context {name!r}")


def orthogonality_defects(ctx: GaloisContext) -> list:
    """Pairs (i, j) where sum_g chi_i(g) conj(chi_j(g)) != |G| delta_ij."""
    bad = []
    G = ctx.order
    for i, a in enumerate(ctx.characters):
        for j, b in enumerate(ctx.characters):
            s = ctx.zero()
            for cl, x, y in zip(ctx.classes, a.values, b.values):
                s = s + x * y.conjugate() * cl.size
            if s != (G if i == j else 0):
                bad.append((i, j))
    return bad


def catalog_line(ctx: GaloisContext) -> str:
    degrees = ",".join(str(ch.degree) for ch in ctx.characters)
    ram = "{" + ",".join(str(p) for p in ctx.discriminant_support) + "}"
    line = (f"{ctx.name}: {len(ctx.classes)} classes, degrees {degrees}, ramified {ram}")
    if ctx.provenance == "external":
        line += f" [provenance: external; {ctx.notes}]"
    return line


# ---------------------------------------------------------------------------
# JSON interchange

def fraction_to_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def cyc_to_json(c: CycNum) -> list:
    return [fraction_to_str(x) for x in c.coeffs]


def cyc_from_json(level: int, doc: list) -> CycNum:
    return CycNum(level, [Fraction(s) for s in doc])


def context_to_json(ctx: GaloisContext) -> dict:
    return {
        "name": ctx.name,
        "group": ctx.group_label,
        "level": ctx.level,
        "classes": [{"id": c.id, "size": c.size, "order": c.order, "powers": list(c.powers)}
                    for c in ctx.classes],
        "characters": [{"label": ch.label, "values": [cyc_to_json(v) for v in ch.values]}
                       for ch in ctx.characters],
        "frobenius": ctx.frobenius_rule.to_json(),
        "ramified": {
            str(p): {"provenance": ctx.provenance,
                     "factors": [[cyc_to_json(c) for c in f] for f in facs]}
            for p, facs in sorted(ctx.ramified.items())
        },
        "notes": ctx.notes,
    }


def context_from_json(doc: dict) -> GaloisContext:
    level = int(doc["level"])
    classes = [ConjClass(c["id"], int(c["size"]), int(c["order"]), tuple(c["powers"]))
               for c in doc["classes"]]
    characters = [Character(ch["label"], tuple(cyc_from_json(level, v) for v in ch["values"]))
                  for ch in doc["characters"]]
    ramified = {}
    provenance = "derived"
    for p, entry in doc["ramified"].items():
        ramified[int(p)] = [[cyc_from_json(level, c) for c in f] for f in entry["factors"]]
        provenance = entry.get("provenance", provenance)
    return GaloisContext(doc.get("name", "imported"), doc["group"], level, classes, characters,
                         FrobeniusRule.from_json(doc["frobenius"]), ramified, provenance,
                         doc.get("notes", ""))


__all__ = [
    "BUILTIN_NAMES", "Character", "ConjClass", "FrobeniusRule", "GaloisContext",
    "RamifiedPrime", "VirtualCharacter", "artin_coefficients", "builtin_context",
    "catalog_line", "conductor_and_primitivize", "context_from_json", "context_to_json",
    "count_roots_mod_p", "dirichlet_characters", "frobenius_class", "kronecker",
    "local_euler_factor", "newton_factor", "orthogonality_defects", "prime_powers_up_to",
    "virtual_sum",
]
