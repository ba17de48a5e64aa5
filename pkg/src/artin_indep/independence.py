"""Verification engine: derivative-family matrices, rank certificates and probes.

Verdicts are one-sided.  A nonsingular minor certifies independence; failing
to find one at the given bounds only yields ``undetermined-at-bound``.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg

from . import config
from .arithfun import equivalence_witness, identity_e, prime_powers_up_to
from .dseries import (euler_expand, evaluate, logpoly_to_json, series_derivative,
                      series_product)
from .exactnum import CycNum, LogPoly
from .galois import (GaloisContext, VirtualCharacter, artin_coefficients, cyc_to_json,
                     virtual_sum)

INDEPENDENT = "independent-certified"
UNDETERMINED = "undetermined-at-bound"

SYMBOL_INDEPENDENCE_NOTE = (
    "certified under symbol independence: some pivot has degree >= 2 in the L_p symbols, "
    "so nonvanishing as a number assumes algebraic independence of the log p; "
    "float cross-check of the witness minor recorded in 'determinant'"
)


class DuplicateCharacterError(ValueError):
    pass


# ---------------------------------------------------------------------------
# matrices

@dataclass
class DerivativeMatrix:
    """Rows are indices n, columns are pairs (j, k) with j 1-based and k the order."""

    rows: list
    columns: list
    entries: list  # entries[i][c]
    mode: str = "exact"
    provenance: dict = field(default_factory=dict)

    @classmethod
    def from_rows(cls, entries, rows=None, columns=None, mode=None) -> "DerivativeMatrix":
        """Wrap a raw matrix (LogPoly or numbers) for direct rank queries."""
        entries = [list(r) for r in entries]
        ncol = len(entries[0]) if entries else 0
        if mode is None:
            mode = "exact" if entries and isinstance(entries[0][0], LogPoly) else "float"
        return cls(list(rows or range(1, len(entries) + 1)),
                   list(columns or [(c + 1, 0) for c in range(ncol)]), entries, mode)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.columns)

    def entry(self, n: int, col: tuple):
        return self.entries[self.rows.index(n)][self.columns.index(col)]

    def to_float(self) -> np.ndarray:
        if self.mode == "float":
            return np.array(self.entries, dtype=complex).reshape(self.shape)
        cache: dict = {}
        out = np.zeros(self.shape, dtype=complex)
        for i, row in enumerate(self.entries):
            for c, v in enumerate(row):
                if v:
                    key = frozenset(v.terms.items())
                    if key not in cache:
                        cache[key] = v.evaluate()
                    out[i, c] = cache[key]
        return out


def resolve_rows(policy, N: int) -> list[int]:
    """Row indices for "all", "prime-powers", "list:1,2,..." or an explicit list."""
    if isinstance(policy, str):
        if policy == "all":
            return list(range(1, N + 1))
        if policy == "prime-powers":
            return sorted([1] + [p**j for p, j in prime_powers_up_to(N)])
        if policy.startswith("list:"):
            policy = [int(x) for x in policy[5:].split(",") if x.strip()]
        else:
            raise ValueError(f"unknown row policy {policy!r}")
    rows = sorted(set(int(n) for n in policy))
    if not rows or rows[0] < 1 or rows[-1] > N:
        raise ValueError(f"explicit rows must lie in 1..{N}")
    return rows


def build_matrix(series: list, m: int, row_policy="prime-powers",
                 provenance: dict | None = None) -> DerivativeMatrix:
    """Entries (-1)^k f_j(n) log^k n for the sampled rows n and columns (j, k)."""
    if not series:
        raise ValueError("build_matrix needs at least one series")
    if m < 0:
        raise ValueError("m must be >= 0")
    N, mode = series[0].bound, series[0].mode
    for s in series:
        if s.bound != N or s.mode != mode:
            raise ValueError("all series must share bound and mode")
        if s.derivative_order:
            raise ValueError("build_matrix expects underived series")
    rows = resolve_rows(row_policy, N)
    columns, cols = [], []
    for j, s in enumerate(series, 1):
        for k in range(m + 1):
            columns.append((j, k))
            cols.append(series_derivative(s, k).coeffs)
    entries = [[c[n] for c in cols] for n in rows]
    prov = {"series": [s.label for s in series], "bound": N}
    prov.update(provenance or {})
    return DerivativeMatrix(rows, columns, entries, mode, prov)


# ---------------------------------------------------------------------------
# exact rank

@dataclass
class RankCertificate:
    rank: int
    witness_rows: list          # ascending
    pivot_rows: list            # in pivot order
    pivot_columns: list
    pivot_degrees: list         # total degree of each Bareiss pivot (None when unknown)
    specialization: dict        # p -> integer substituted for L_p
    specialized_determinant: CycNum | None
    determinant: LogPoly | None = None
    method: str = "specialized-bareiss"

    @property
    def max_pivot_degree(self) -> int:
        return max((d if d is not None else 2 for d in self.pivot_degrees), default=0)


def _specialization(symbols: list, seed) -> dict:
    if seed is None:
        return {p: p for p in symbols}
    rng = random.Random(seed)
    lo, hi = config.SPECIALIZATION_RANGE
    return {p: rng.randint(lo, hi) for p in symbols}


def _matrix_level(M: DerivativeMatrix) -> int:
    for row in M.entries:
        for v in row:
            if v:
                return v.level
    return 2


def _column_degrees(M: DerivativeMatrix) -> list:
    """Homogeneous degree of each column, or None when mixed."""
    out = []
    for c in range(len(M.columns)):
        degs = {sum(e for _, e in mono) for row in M.entries for mono in row[c].terms}
        out.append(degs.pop() if len(degs) == 1 else (None if degs else 0))
    return out


def _bareiss_field(A: list, keys: list, zero: CycNum):
    """Fraction-free elimination over Q(zeta).

    Returns (pivot row indices, pivot columns, pivots).  The t-th pivot is the
    determinant of the minor on the first t pivot rows (in pivot order) and
    pivot columns.
    """
    A = [row[:] for row in A]
    nrow, ncol = len(A), len(A[0]) if A else 0
    active = list(range(nrow))
    prev_inv = None
    prows, pcols, pivots = [], [], []
    for c in range(ncol):
        cands = [i for i in active if A[i][c]]
        if not cands:
            continue
        piv = min(cands, key=lambda i: keys[i][c])
        active.remove(piv)
        P = A[piv][c]
        prow = A[piv]
        for i in active:
            row = A[i]
            a_ic = row[c]
            for j in range(c + 1, ncol):
                v = P * row[j]
                if a_ic and prow[j]:
                    v = v - a_ic * prow[j]
                if prev_inv is not None and v:
                    v = v * prev_inv
                row[j] = v
            row[c] = zero
        prev_inv = P.inverse()
        prows.append(piv)
        pcols.append(c)
        pivots.append(P)
    return prows, pcols, pivots


def _permutation_sign(perm: list) -> int:
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def symbolic_determinant(entries: list) -> tuple[LogPoly, list]:
    """Bareiss determinant over the L_p polynomial ring.

    Pivot choice: lowest (degree, lexicographically-least monomial), then the
    earliest row.  Returns (determinant, pivots).
    """
    n = len(entries)
    A = [row[:] for row in entries]
    perm = list(range(n))
    prev = None
    pivots = []
    sign = 1
    for c in range(n):
        cands = [i for i in range(c, n) if A[i][c]]
        if not cands:
            return LogPoly(), pivots
        piv = min(cands, key=lambda i: (A[i][c].sort_key(), i))
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            perm[c], perm[piv] = perm[piv], perm[c]
            sign = -sign
        P = A[c][c]
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                v = P * A[i][j] - A[i][c] * A[c][j]
                A[i][j] = v.exact_div(prev) if prev is not None else v
            A[i][c] = LogPoly()
        prev = P
        pivots.append(P)
    det = pivots[-1] if pivots else LogPoly()
    return (det if sign > 0 else -det), pivots


def exact_rank(M: DerivativeMatrix, symbolic_limit: int | None = None) -> RankCertificate:
    """Certified rank of a LogPoly matrix.

    Elimination runs over Q(zeta) after substituting integers for the L_p
    symbols.  Substitution is a ring homomorphism, so every nonzero specialized
    minor is a nonzero polynomial: the returned rank is a certified lower bound
    and equals the symbolic rank whenever it is full.  Witness minors with at
    most ``symbolic_limit`` columns also get their determinant computed
    symbolically.
    """
    if M.mode != "exact":
        raise ValueError("exact_rank needs an exact-mode matrix")
    if symbolic_limit is None:
        symbolic_limit = config.SYMBOLIC_DETERMINANT_MAX_COLUMNS
    level = _matrix_level(M)
    zero = CycNum.zero(level)
    nrow, ncol = M.shape
    symbols = sorted({p for row in M.entries for v in row for p in v.symbols()})
    keys = [[(v.sort_key(), M.rows[i]) for v in row] for i, row in enumerate(M.entries)]
    col_deg = _column_degrees(M)

    best = None
    for seed in config.SPECIALIZATION_SEEDS:
        subst = _specialization(symbols, seed)
        A = [[v.substitute(subst) if v else zero for v in row] for row in M.entries]
        prows, pcols, pivots = _bareiss_field(A, keys, zero)
        if best is None or len(prows) > len(best[1]):
            best = (subst, prows, pcols, pivots)
        if len(prows) == ncol:
            break
    subst, prows, pcols, pivots = best
    rank = len(prows)

    degrees, acc = [], 0
    for c in pcols:
        acc = None if acc is None or col_deg[c] is None else acc + col_deg[c]
        degrees.append(acc)

    witness = sorted(prows)
    subst_det = None
    if rank:
        order = [witness.index(i) for i in prows]
        subst_det = pivots[-1] if _permutation_sign(order) > 0 else -pivots[-1]
    cert = RankCertificate(rank, [M.rows[i] for i in witness], [M.rows[i] for i in prows],
                           [M.columns[c] for c in pcols], degrees, subst, subst_det)

    if rank and rank <= symbolic_limit:
        minor = [[M.entries[i][c] for c in pcols] for i in witness]
        det, sym_pivots = symbolic_determinant(minor)
        if det.substitute(subst) != subst_det:
            raise AssertionError("symbolic and specialized determinants disagree")
        cert.determinant = det
        cert.pivot_degrees = [p.degree() for p in sym_pivots]
        cert.method = "symbolic-bareiss"
    return cert


# ---------------------------------------------------------------------------
# float rank

def _normalized(A: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(A, axis=0)
    norms[norms == 0] = 1.0
    return A / norms


def float_rank(M: DerivativeMatrix, tolerance: float = config.FLOAT_RANK_TOLERANCE) -> int:
    """Rank by QR with column pivoting on column-normalized entries."""
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    A = _normalized(M.to_float())
    if A.size == 0:
        return 0
    R = scipy.linalg.qr(A, mode="r", pivoting=True)[0]
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0:
        return 0
    return int(np.count_nonzero(diag > tolerance * diag[0]))


def float_witness_rows(M: DerivativeMatrix, rank: int) -> list[int]:
    """Rows of a well-conditioned minor, from pivoted QR of the transpose."""
    A = _normalized(M.to_float())
    _, _, piv = scipy.linalg.qr(A.T, mode="economic", pivoting=True)
    return sorted(M.rows[i] for i in piv[:rank])


def minor_float_determinant(M: DerivativeMatrix, rows: list, normalize: bool = False) -> float:
    """|det| of the minor on ``rows`` (all columns), evaluated in floating point."""
    A = M.to_float()
    if normalize:
        A = _normalized(A)
    idx = [M.rows.index(n) for n in rows]
    sign, logabs = np.linalg.slogdet(A[idx, :])
    return 0.0 if sign == 0 else float(math.exp(logabs))


# ---------------------------------------------------------------------------
# derivative-family verification

@dataclass
class IndependenceReport:
    scenario: str
    verdict: str
    expected_rank: int
    certified_rank: int
    witness_rows: list
    equivalence_witnesses: list
    mode: str
    bounds: dict
    excluded_primes: list
    timing_ms: float
    float_rank: int | None = None
    missing_witnesses: list = field(default_factory=list)
    determinant: dict = field(default_factory=dict)
    symbol_independence_note: str | None = None
    characters: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.verdict == INDEPENDENT

    def to_json(self, timing: bool = True) -> dict:
        doc = {
            "scenario": self.scenario,
            "verdict": self.verdict,
            "expected_rank": self.expected_rank,
            "certified_rank": self.certified_rank,
            "witness_rows": self.witness_rows,
            "equivalence_witnesses": self.equivalence_witnesses,
            "missing_witnesses": self.missing_witnesses,
            "mode": self.mode,
            "bounds": self.bounds,
            "excluded_primes": self.excluded_primes,
            "characters": self.characters,
            "float_rank": self.float_rank,
            "determinant": self.determinant,
        }
        if self.symbol_independence_note is not None:
            doc["symbol_independence_note"] = self.symbol_independence_note
        doc.update(self.extra)
        if timing:
            doc["timing_ms"] = self.timing_ms
        return doc


def _check_characters(chars: list):
    if not chars:
        raise ValueError("at least one character is required")
    for chi in chars:
        if not chi.is_nonnegative() or not any(chi.multiplicities):
            raise ValueError(f"{chi.label}: characters must be nonzero with nonnegative "
                             "multiplicities")
    seen = {}
    for chi in chars:
        if chi.values in seen:
            raise DuplicateCharacterError(
                f"{seen[chi.values]} and {chi.label} coincide; the independence theorem "
                "is stated for distinct characters")
        seen[chi.values] = chi.label


def scenario_name(ctx: GaloisContext, chars: list, m: int, N: int, mode: str, rows) -> str:
    labels = ";".join(chi.label for chi in chars)
    rows_s = rows if isinstance(rows, str) else "list:" + ",".join(map(str, rows))
    return f"theorem7|{ctx.name}|{labels}|m={m}|N={N}|{mode}|{rows_s}"


def verify_theorem7(ctx: GaloisContext, characters: list | None = None, m: int = 0,
                    N: int = 200, mode: str = "exact", row_policy="prime-powers",
                    prime_bound: int | None = None, exclude=None,
                    tolerance: float = config.FLOAT_RANK_TOLERANCE,
                    scenario: str | None = None) -> IndependenceReport:
    """Non-equivalence screening plus a rank certificate for the derivative family."""
    t0 = time.perf_counter()
    chars = list(characters) if characters is not None else ctx.irreducibles()
    _check_characters(chars)
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    P = N if prime_bound is None else prime_bound
    if P > N:
        raise ValueError("prime bound cannot exceed N")
    excluded = sorted(ctx.discriminant_support if exclude is None else set(exclude))

    funcs = config.parallel_map(lambda chi: artin_coefficients(ctx, chi, N), chars)
    named = [("e", identity_e(N, ctx.level))] + [(chi.label, f) for chi, f in zip(chars, funcs)]
    witnesses, missing = [], []
    for (la, fa), (lb, fb) in itertools.combinations(named, 2):
        chk = equivalence_witness(fa, fb, P, excluded)
        if chk.witness:
            witnesses.append({"pair": [la, lb], "p": chk.witness[0], "j": chk.witness[1]})
        else:
            missing.append([la, lb])

    series = [euler_expand(ctx, chi, N, mode, coefficients=f) for chi, f in zip(chars, funcs)]
    M = build_matrix(series, m, row_policy, {"context": ctx.name})
    expected = len(chars) * (m + 1)
    note = None
    if mode == "exact":
        cert = exact_rank(M)
        rank, rows = cert.rank, cert.witness_rows
        frank = float_rank(M, tolerance)
        fdet = minor_float_determinant(M, rows) if rank == expected else 0.0
        det = {
            "method": cert.method,
            "pivot_degrees": cert.pivot_degrees,
            "specialization": {str(p): v for p, v in sorted(cert.specialization.items())},
            "specialized_value": cyc_to_json(cert.specialized_determinant)
            if cert.specialized_determinant is not None else None,
            "float_magnitude": fdet,
        }
        if cert.determinant is not None:
            det["symbolic"] = logpoly_to_json(cert.determinant)
        nonzero = cert.specialized_determinant is not None and bool(cert.specialized_determinant)
        if cert.max_pivot_degree >= 2:
            note = SYMBOL_INDEPENDENCE_NOTE
    else:
        frank = rank = float_rank(M, tolerance)
        rows = float_witness_rows(M, rank) if rank else []
        fdet = minor_float_determinant(M, rows, normalize=True) if rank == expected else 0.0
        det = {"method": "pivoted-qr", "float_magnitude": fdet}
        nonzero = fdet > tolerance
    ok = rank == expected and nonzero and not missing
    rows_desc = row_policy if isinstance(row_policy, str) else list(row_policy)
    return IndependenceReport(
        scenario=scenario or scenario_name(ctx, chars, m, N, mode, rows_desc),
        verdict=INDEPENDENT if ok else UNDETERMINED,
        expected_rank=expected,
        certified_rank=rank,
        witness_rows=rows,
        equivalence_witnesses=witnesses,
        mode=mode,
        bounds={"N": N, "prime_bound": P, "m": m, "rows": rows_desc, "tolerance": tolerance},
        excluded_primes=excluded,
        timing_ms=round((time.perf_counter() - t0) * 1000, 3),
        float_rank=frank,
        missing_witnesses=missing,
        determinant=det,
        symbol_independence_note=note,
        characters=[chi.label for chi in chars],
    )


# ---------------------------------------------------------------------------
# formalism and algebraic independence

@dataclass
class FormalismReport:
    context: str
    bound: int
    verdict: str  # "identical" or "mismatch"
    entries: list
    restricted_to_coprime: list
    timing_ms: float = 0.0

    def to_json(self, timing: bool = True) -> dict:
        doc = {"scenario": f"formalism|{self.context}|N={self.bound}",
               "verdict": self.verdict, "bounds": {"N": self.bound},
               "restricted_to_coprime": self.restricted_to_coprime, "entries": self.entries}
        if timing:
            doc["timing_ms"] = self.timing_ms
        return doc


def formalism_indices(ctx: GaloisContext, N: int) -> list[int]:
    """Indices compared by the formalism check; coprime to hand-coded ramified data."""
    if ctx.provenance == "external":
        bad = ctx.discriminant_support
        return [n for n in range(1, N + 1) if all(n % p for p in bad)]
    return list(range(1, N + 1))


def verify_formalism(ctx: GaloisContext, powers: list, N: int = 500) -> FormalismReport:
    """Compare prod L(chi_i)^{n_i} (by convolution) with L(sum n_i chi_i) exactly."""
    t0 = time.perf_counter()
    irr: dict = {}
    indices = formalism_indices(ctx, N)
    entries = []
    for vec in powers:
        vec = tuple(int(x) for x in vec)
        if len(vec) != ctx.h or min(vec) < 0 or sum(vec) < 1:
            raise ValueError(f"multiplicity vector {vec} must have {ctx.h} nonnegative "
                             "entries summing to at least 1")
        prod = None
        for i, n in enumerate(vec):
            for _ in range(n):
                if i not in irr:
                    irr[i] = euler_expand(ctx, ctx.irreducible(i), N, "exact")
                prod = irr[i] if prod is None else series_product(prod, irr[i])
        direct = euler_expand(ctx, virtual_sum(ctx, vec), N, "exact")
        mismatch = next((n for n in indices if prod[n] != direct[n]), None)
        entries.append({"powers": list(vec),
                        "verdict": "identical-up-to-N" if mismatch is None else "mismatch",
                        "first_mismatch": mismatch, "compared": len(indices)})
    verdict = "identical" if all(e["first_mismatch"] is None for e in entries) else "mismatch"
    restricted = list(ctx.discriminant_support) if ctx.provenance == "external" else []
    return FormalismReport(ctx.name, N, verdict, entries, restricted,
                           round((time.perf_counter() - t0) * 1000, 3))


def monomial_exponents(h: int, D: int) -> list[tuple]:
    """All alpha in N^h with 1 <= |alpha| <= D, by degree then reverse-lex."""
    out = [a for a in itertools.product(range(D + 1), repeat=h) if 1 <= sum(a) <= D]
    return sorted(out, key=lambda a: (sum(a), tuple(-x for x in a)))


def verify_algebraic_independence(ctx: GaloisContext, degree: int, m: int = 0, N: int = 200,
                                  mode: str = "exact", row_policy="prime-powers"
                                  ) -> IndependenceReport:
    """No polynomial relation of degree <= D among L(s, chi_1..chi_h).

    Each monomial prod L(chi_i)^alpha_i is L(sum alpha_i chi_i); the monomials
    are therefore the L-functions of pairwise distinct characters and the
    rank certificate of ``verify_theorem7`` applies to them.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    alphas = monomial_exponents(ctx.h, degree)
    if len(alphas) > config.MAX_MONOMIALS:
        raise ValueError(f"{len(alphas)} monomials exceed the limit of {config.MAX_MONOMIALS}; "
                         "lower the degree or pick a context with fewer characters")
    if degree == 1:
        return verify_theorem7(ctx, ctx.irreducibles(), m, N, mode, row_policy)
    t0 = time.perf_counter()
    formal = verify_formalism(ctx, [a for a in alphas if sum(a) > 1], N)
    chars = [virtual_sum(ctx, a) for a in alphas]
    report = verify_theorem7(ctx, chars, m, N, mode, row_policy,
                             scenario=f"algebraic|{ctx.name}|D={degree}|m={m}|N={N}|{mode}|"
                                      f"{row_policy if isinstance(row_policy, str) else 'list'}")
    report.extra = {"degree": degree, "monomials": [list(a) for a in alphas],
                    "formalism_verdict": formal.verdict}
    if formal.verdict != "identical":
        report.verdict = UNDETERMINED
    report.timing_ms = round((time.perf_counter() - t0) * 1000, 3)
    return report


# ---------------------------------------------------------------------------
# residual probe

def _poly_value(coeffs, x: float) -> float:
    return float(sum(Fraction(c) * Fraction(x) ** i for i, c in enumerate(coeffs)))


@dataclass
class ResidualReport:
    scenario: str
    verdict: str
    points: list
    witness_sigma: float | None
    best_margin: float
    certificate_verdict: str | None
    timing_ms: float = 0.0

    def to_json(self, timing: bool = True) -> dict:
        doc = {"scenario": self.scenario, "verdict": self.verdict, "points": self.points,
               "witness_sigma": self.witness_sigma, "best_margin": self.best_margin,
               "certificate_verdict": self.certificate_verdict}
        if timing:
            doc["timing_ms"] = self.timing_ms
        return doc


def residual_probe(ctx: GaloisContext, characters: list | None, m: int, Q: list,
                   sigma_grid: list, N: int = config.RESIDUAL_SERIES_BOUND,
                   certificate_N: int = 200) -> ResidualReport:
    """Evaluate R(sigma) = sum_jk Q_jk(sigma) L^(k)(sigma, chi_j) with propagated bounds.

    ``Q[j][k]`` is a list of rational polynomial coefficients in sigma, lowest
    degree first.
    """
    t0 = time.perf_counter()
    chars = list(characters) if characters is not None else ctx.irreducibles()
    if len(Q) != len(chars) or any(len(row) != m + 1 for row in Q):
        raise ValueError(f"Q must be {len(chars)} x {m + 1}")
    derivs = []
    for chi in chars:
        s = euler_expand(ctx, chi, N, "float")
        derivs.append([series_derivative(s, k) for k in range(m + 1)])
    q_zero = all(Fraction(c) == 0 for row in Q for poly in row for c in poly)
    points = []
    for sigma in sigma_grid:
        total, bound, scale = 0j, 0.0, 0.0
        for j, row in enumerate(Q):
            for k, poly in enumerate(row):
                ev = evaluate(derivs[j][k], sigma)
                q = _poly_value(poly, sigma)
                total += q * ev.value
                bound += abs(q) * ev.tail_bound
                scale += abs(q * ev.value)
        bound += 1e-12 * scale  # float summation slack
        points.append({"sigma": sigma, "value": [total.real, total.imag], "abs": abs(total),
                       "bound": bound, "exceeds": abs(total) > bound})
    hits = [p for p in points if p["exceeds"]]
    margin = max(p["abs"] - p["bound"] for p in points) if points else 0.0
    cert_verdict = None
    if q_zero:
        verdict = "zero"
    elif hits:
        verdict = "nonzero-exhibited"
    else:
        cert_verdict = verify_theorem7(ctx, chars, m, certificate_N, "exact").verdict
        verdict = ("zero-on-grid-nonzero-by-certificate" if cert_verdict == INDEPENDENT
                   else "undetermined")
    return ResidualReport(f"residual|{ctx.name}|m={m}|N={N}", verdict, points,
                          hits[0]["sigma"] if hits else None, margin, cert_verdict,
                          round((time.perf_counter() - t0) * 1000, 3))


# ---------------------------------------------------------------------------
# decay probe

@dataclass
class DecayReport:
    sigma_grid: list
    epsilon: float
    per_a: list
    classification: str
    note: str = "trend statistics on a finite grid; no limit is claimed"

    @property
    def in_B(self) -> bool:
        return self.classification in ("consistent-with-B_eps", "consistent-with-V_eps")

    @property
    def in_V(self) -> bool:
        return self.classification == "consistent-with-V_eps"

    def to_json(self, timing: bool = True) -> dict:
        return {"scenario": "decay", "verdict": self.classification, "sigma_grid": self.sigma_grid,
                "epsilon": self.epsilon, "per_a": self.per_a, "note": self.note}


def _non_increasing(xs) -> bool:
    return all(b <= a for a, b in zip(xs, xs[1:]))


def _non_decreasing(xs) -> bool:
    return all(b >= a for a, b in zip(xs, xs[1:]))


def decay_probe(f, sigma_grid: list, a_grid=config.DEFAULT_A_GRID,
                epsilon: float = 0.0) -> DecayReport:
    """Classify samples of f against the decay classes B_eps and V_eps.

    ``f`` is a callable or a sequence of samples aligned with ``sigma_grid``.
    For each a the tail (last third of the grid) of e^{-a sigma}|f| and
    e^{a sigma}|f| is tested for monotone decay by a factor DECAY_RATIO.
    """
    grid = [float(s) for s in sigma_grid]
    if len(grid) < config.DECAY_MIN_POINTS:
        raise ValueError(f"sigma grid needs at least {config.DECAY_MIN_POINTS} points")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("sigma grid must be strictly increasing")
    if grid[-1] < config.DECAY_MIN_SIGMA_MAX:
        raise ValueError(f"sigma grid must reach {config.DECAY_MIN_SIGMA_MAX}")
    if grid[0] <= 1 + epsilon:
        raise ValueError("sigma grid must lie in (1 + eps, inf)")
    samples = [f(s) for s in grid] if callable(f) else list(f)
    if len(samples) != len(grid):
        raise ValueError("samples and grid differ in length")
    logs = [math.log(abs(v)) if v else -math.inf for v in samples]
    start = int(len(grid) * (1 - config.DECAY_TAIL_FRACTION))
    log_ratio = math.log(config.DECAY_RATIO)
    per_a = []
    for a in a_grid:
        minus = [-a * s + lv for s, lv in zip(grid, logs)]
        plus = [a * s + lv for s, lv in zip(grid, logs)]
        tail_m, tail_p = minus[start:], plus[start:]
        m_drop = minus[-1] - minus[0]
        p_drop = plus[-1] - plus[0]
        per_a.append({
            "a": a,
            "decay_monotone": _non_increasing(tail_m),
            "decay_log_ratio": m_drop,
            "in_B_test": _non_increasing(tail_m) and m_drop < log_ratio,
            "growth_monotone": _non_decreasing(tail_p),
            "growth_log_ratio": p_drop,
            "in_V_test": _non_increasing(tail_p) and p_drop < log_ratio,
            "diverges_test": _non_decreasing(tail_p) and p_drop > -log_ratio,
        })
    if any(r["in_V_test"] for r in per_a):
        cls = "consistent-with-V_eps"
    elif all(r["in_B_test"] and r["diverges_test"] for r in per_a):
        cls = "consistent-with-B_eps"
    else:
        cls = "inconclusive"
    for r in per_a:
        for key in ("decay_log_ratio", "growth_log_ratio"):
            if math.isinf(r[key]):
                r[key] = "-inf" if r[key] < 0 else "inf"
    return DecayReport(grid, epsilon, per_a, cls)


__all__ = [
    "DecayReport", "DerivativeMatrix", "DuplicateCharacterError", "FormalismReport",
    "INDEPENDENT", "IndependenceReport", "RankCertificate", "ResidualReport", "UNDETERMINED",
    "build_matrix", "decay_probe", "exact_rank", "float_rank", "float_witness_rows",
    "formalism_indices", "minor_float_determinant", "monomial_exponents", "residual_probe",
    "resolve_rows", "symbolic_determinant", "verify_algebraic_independence",
    "verify_formalism", "verify_theorem7",
]

