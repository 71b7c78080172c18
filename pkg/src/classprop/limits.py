"""Rigorous enclosures for the limiting no-small-factor proportions.

Each family limit is an infinite product of atoms of the shape

    prod_{i>=1} (1 + s_i q^{-(step*i + offset)})^m,   s_i = sign or sign*(-1)^i.

Everything is evaluated in log space with exact rational interval arithmetic:
log(1+y) via bracketed alternating series, the i > I tail via

    |log prod_{i>I}| <= 2|m| q^{-e(I+1)} / (1 - q^{-step}),

valid because every q^{-e(i)} here is <= 1/2, and exp via Taylor sums with a
geometric remainder cap.  The returned interval provably contains the exact
infinite product and has width at most the requested tolerance.

q only needs to be an integer >= 2 (the irreducible-count formulas are
polynomial in q), so the large-q sanity checks can use round numbers that are
not prime powers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import exp as _fexp, factorial

from .gf import count_irreducibles

DEFAULT_TOL = Fraction(1, 10**9)

FAMILY_TAGS = ("GL", "SU", "Sp_odd", "Sp_even", "O_half")


@dataclass(frozen=True)
class Enclosure:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty enclosure")

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def midpoint(self):
        return (self.lo + self.hi) / 2

    def contains(self, x):
        return self.lo <= x <= self.hi

    def overlaps(self, other):
        return self.lo <= other.hi and other.lo <= self.hi

    def scale(self, c):
        c = Fraction(c)
        if c < 0:
            raise ValueError("scale factor must be nonnegative")
        return Enclosure(self.lo * c, self.hi * c)

    def __add__(self, other):
        return Enclosure(self.lo + other.lo, self.hi + other.hi)


@dataclass(frozen=True)
class LimitFamily:
    """One of the limit products, with its parameters.

    Tags: GL, SU, Sp_odd, Sp_even, O_half.  "Sp" and "O" are accepted and
    resolve parity from q.  O_half is half the parity-matched Sp value.
    """

    tag: str
    q: int
    t: int

    def __post_init__(self):
        tag = self.tag
        if tag in ("Sp", "O"):
            resolved = ("Sp_odd" if self.q % 2 else "Sp_even") if tag == "Sp" else "O_half"
            object.__setattr__(self, "tag", resolved)
            tag = resolved
        if tag not in FAMILY_TAGS:
            raise ValueError(f"unknown family tag {self.tag!r}")
        if self.q < 2:
            raise ValueError("q must be >= 2")
        if self.t < 1:
            raise ValueError("t must be >= 1")
        if tag == "Sp_odd" and self.q % 2 == 0:
            raise ValueError("Sp_odd needs odd q")
        if tag == "Sp_even" and self.q % 2 == 1:
            raise ValueError("Sp_even needs even q")


@dataclass(frozen=True)
class ProductAtom:
    """prod_{i>=1} (1 + s_i q^{-(step*i + offset)})^m with s_i = sign, or
    sign*(-1)^i when alternating."""

    step: int
    offset: int = 0
    sign: int = -1
    alternating: bool = False
    m: int = 1


def _sp_atoms(q, t, edge_power):
    atoms = [ProductAtom(step=2, offset=-1, sign=-1, m=edge_power)]
    for j in range(1, t // 2 + 1):
        m = count_irreducibles("Nstar", q, 2 * j)
        if m:
            atoms.append(ProductAtom(step=j, sign=1, alternating=True, m=m))
    for j in range(1, t + 1):
        m = count_irreducibles("Mstar", q, j)
        if m:
            atoms.append(ProductAtom(step=j, sign=-1, m=m))
    return atoms


def family_atoms(fam: LimitFamily):
    q, t = fam.q, fam.t
    if fam.tag == "GL":
        return [
            ProductAtom(step=j, sign=-1, m=count_irreducibles("N", q, j))
            for j in range(1, t + 1)
        ]
    if fam.tag == "SU":
        atoms = []
        for j in range(1, t + 1):
            m = count_irreducibles("Ntilde", q, j)
            if m:
                atoms.append(ProductAtom(step=j, sign=1, alternating=True, m=m))
            m = count_irreducibles("Mtilde", q, j)
            if m:
                atoms.append(ProductAtom(step=2 * j, sign=-1, m=m))
        return atoms
    if fam.tag == "Sp_odd":
        return _sp_atoms(q, t, 2)
    if fam.tag == "Sp_even":
        return _sp_atoms(q, t, 1)
    # O_half: same atoms as the parity-matched symplectic family; the final
    # value is halved by the caller.
    return _sp_atoms(q, t, 2 if q % 2 else 1)


# ---------------------------------------------------------------------------
# Rational interval building blocks.

def log1p_enclosure(y, budget):
    """Interval containing log(1+y) for rational |y| < 1, width <= 2*budget."""
    y = Fraction(y)
    if not -1 < y < 1:
        raise ValueError("need |y| < 1")
    if y == 0:
        return Enclosure(Fraction(0), Fraction(0))
    ay = abs(y)
    s = Fraction(0)
    term = Fraction(1)
    k = 0
    while True:
        k += 1
        term *= y
        s += term / k if k % 2 else -term / k
        rem = ay ** (k + 1) / ((k + 1) * (1 - ay))
        if rem <= budget:
            return Enclosure(s - rem, s + rem)


def _exp_lower(x, terms):
    if x < 0:
        return 1 / _exp_upper(-x, terms)
    s = Fraction(0)
    term = Fraction(1)
    for k in range(terms + 1):
        s += term
        term = term * x / (k + 1)
    return s


def _exp_upper(x, terms):
    if x < 0:
        return 1 / _exp_lower(-x, terms)
    if x >= terms + 2:
        raise ValueError("too few Taylor terms for this argument")
    s = Fraction(0)
    term = Fraction(1)
    for k in range(terms + 1):
        s += term
        term = term * x / (k + 1)
    # remaining terms are dominated by a geometric series with ratio x/(terms+2)
    rem = x ** (terms + 1) / factorial(terms + 1)
    rem = rem * (terms + 2) / (terms + 2 - x)
    return s + rem


def exp_enclosure(z, terms=48):
    """Interval containing {e^x : x in z} for an Enclosure (or rational) z."""
    if not isinstance(z, Enclosure):
        z = Enclosure(Fraction(z), Fraction(z))
    return Enclosure(_exp_lower(z.lo, terms), _exp_upper(z.hi, terms))


def atom_log_enclosure(atom: ProductAtom, q, budget):
    """Interval containing m * sum_{i>=1} log(1 + s_i q^{-e(i)}), width <= budget."""
    if atom.m == 0:
        return Enclosure(Fraction(0), Fraction(0))
    am = abs(atom.m)
    step, offset = atom.step, atom.offset

    def expo(i):
        return step * i + offset

    # truncation depth from the geometric tail bound
    tail_budget = budget / 2
    ratio = 1 - Fraction(1, q**step)
    I = 1
    while 2 * am * Fraction(1, q ** expo(I + 1)) / ratio > tail_budget:
        I += 1
    tail = 2 * am * Fraction(1, q ** expo(I + 1)) / ratio

    per_term = budget / (4 * am * I)
    lo = hi = Fraction(0)
    for i in range(1, I + 1):
        s = atom.sign * ((-1) ** i if atom.alternating else 1)
        enc = log1p_enclosure(Fraction(s, q ** expo(i)), per_term)
        lo += enc.lo
        hi += enc.hi
    lo, hi = lo * atom.m, hi * atom.m
    if atom.m < 0:
        lo, hi = hi, lo
    return Enclosure(lo - tail, hi + tail)


def limit_value(fam: LimitFamily, tol=DEFAULT_TOL):
    """Enclosure of the family's limiting proportion, width <= tol."""
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    atoms = family_atoms(fam)
    half = fam.tag == "O_half"
    log_budget = tol / 2  # value <= ~1, so log-space width carries through exp
    while True:
        total = Enclosure(Fraction(0), Fraction(0))
        for atom in atoms:
            total = total + atom_log_enclosure(atom, fam.q, log_budget / len(atoms))
        enc = exp_enclosure(total)
        if half:
            enc = enc.scale(Fraction(1, 2))
        if enc.width <= tol:
            return enc
        log_budget /= 4


@dataclass(frozen=True)
class SeriesLimit:
    """Non-rigorous limit read off a truncated series tail."""

    estimate: Fraction
    gap: Fraction
    rigorous: bool = False


def limit_from_series(s):
    """Last coefficient of a no-small-factor series, with |c_N - c_{N-1}| as a
    heuristic convergence gap.  Not an enclosure."""
    if s.order < 2:
        raise ValueError("series order must be >= 2")
    c = s.coeff(s.order)
    return SeriesLimit(estimate=c, gap=abs(c - s.coeff(s.order - 1)))


def q_infinity_limit(family, t):
    """Closed-form q -> infinity limit, as a float."""
    if t < 1:
        raise ValueError("t must be >= 1")
    base = family.split("_")[0]
    harm = lambda k: sum(Fraction(1, j) for j in range(1, k + 1))
    if base == "GL":
        return _fexp(-harm(t))
    if base == "SU":
        odd = sum(Fraction(1, j) for j in range(1, t + 1, 2))
        return _fexp(-(odd + harm(t) / 2))
    if base in ("Sp", "O"):
        val = _fexp(-(harm(t // 2) + harm(t)) / 2)
        return val / 2 if base == "O" else val
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# Bound suite.

def bound_suite(q_range, t_range, tol=DEFAULT_TOL):
    """Check, with rigorous enclosures, that every family limit over the grid
    lies strictly in (0,1), that GL values stay below 1/sqrt(e), and that each
    GL per-degree factor stays above e^(-8/3).  Returns a report dict."""
    sqrt_e_inv = exp_enclosure(Fraction(-1, 2))
    floor83 = exp_enclosure(Fraction(-8, 3))
    entries = []
    failures = []
    for q in q_range:
        for t in t_range:
            fams = ["GL", "SU", "Sp_odd" if q % 2 else "Sp_even", "O_half"]
            for tag in fams:
                fam = LimitFamily(tag, q, t)
                enc = limit_value(fam, tol)
                checks = {"in_unit_interval": 0 < enc.lo and enc.hi < 1}
                if tag == "GL":
                    # enc.hi <= lower bound of 1/sqrt(e) proves the bound
                    checks["le_inv_sqrt_e"] = enc.hi <= sqrt_e_inv.lo
                    per_j_ok = True
                    for j in range(1, t + 1):
                        atom = ProductAtom(step=j, sign=-1, m=count_irreducibles("N", q, j))
                        f_enc = exp_enclosure(atom_log_enclosure(atom, q, Fraction(tol)))
                        if not f_enc.lo >= floor83.hi:
                            per_j_ok = False
                    checks["per_degree_floor"] = per_j_ok
                ok = all(checks.values())
                entry = {
                    "family": fam.tag,
                    "q": q,
                    "t": t,
                    "lo": enc.lo,
                    "hi": enc.hi,
                    "margin_to_1": 1 - enc.hi,
                    "margin_to_0": enc.lo,
                    "checks": checks,
                    "ok": ok,
                }
                entries.append(entry)
                if not ok:
                    failures.append((fam.tag, q, t))
    return {"entries": entries, "failures": failures, "all_pass": not failures}
