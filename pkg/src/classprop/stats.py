"""Statistics over the enumerated groups and their relatives.

Proportions of elements with no small invariant subspace (exact, series, or
Monte Carlo), fixed-point expectations over cosets and conjugation-stable
subsets, fixed-point-ratio bound checks, symmetric-group analogues, the
signed-permutation parity statistic, and a generation probe for small simple
groups.
"""

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .matgroup import (
    ActionSpec,
    ActionTable,
    DEFAULT_ACTION_CAP,
    DEFAULT_GROUP_CAP,
    GroupTable,
    MatSpace,
    ResourceCapExceeded,
    build_group,
    enumerate_action,
    fixed_point_indices,
    fixed_points,
    membership_sets,
    point_permutation,
    random_coset_gl,
    random_gl,
    sieve_free,
    tau_membership,
    tau_sieve_free,
)
from .series import gl_no_small_factor_series, sl_coset_series

Z99 = 2.5758293035489004  # two-sided 99% normal quantile


def wilson_interval(hits, trials, z=Z99):
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= hits <= trials:
        raise ValueError("hit count out of range")
    phat = hits / trials
    zz = z * z
    denom = 1.0 + zz / trials
    center = (phat + zz / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + zz / (4 * trials * trials))
    half /= denom
    return max(0.0, center - half), min(1.0, center + half)


# ---------------------------------------------------------------------------
# Proportions.

@dataclass(frozen=True)
class ProportionReport:
    family: str
    n: int
    q: int
    t: int
    coset: object
    method: str
    value: object  # Fraction for exact methods, float for montecarlo
    sample_size: int = None
    ci_low: float = None
    ci_high: float = None

    def __post_init__(self):
        if isinstance(self.value, Fraction) and not 0 <= self.value <= 1:
            raise ValueError("exact proportion out of [0, 1]")

    @property
    def ci(self):
        return (self.ci_low, self.ci_high)


def proportion(spec, t, coset=None, method="enumeration", trials=None, seed=None,
               cap=DEFAULT_GROUP_CAP):
    """Proportion of elements with no invariant subspace of dimension <= t.

    spec is a GroupTable or a (family, n, q) triple.  coset selects a label
    class (integer), an orthogonal variant ("S" or "O"), or the
    inverse-transpose coset ("tau"); None means the whole group.  The
    enumeration and series methods return exact Fractions and agree where
    both apply; montecarlo returns a float with a 99% Wilson interval.
    """
    if isinstance(spec, GroupTable):
        table, family, n, q = spec, spec.family, spec.n, spec.q
    else:
        table = None
        family, n, q = spec
    if method == "enumeration":
        if table is None:
            table = build_group(family, n, q, cap=cap)
        if coset == "tau":
            members = tau_membership(table, t)
            denom = table.order()
        elif coset in ("S", "O"):
            members = membership_sets(table, t, coset)
            denom = table.order() // 2
        elif coset is None:
            members = membership_sets(table, t)
            denom = table.order()
        else:
            members = membership_sets(table, t, coset)
            denom = len(table.coset_indices(coset))
            if denom == 0:
                raise ValueError(f"empty coset label {coset!r}")
        value = Fraction(len(members), denom)
        return ProportionReport(family, n, q, t, coset, method, value)
    if method == "series":
        if family not in ("GL", "SL") or coset in ("tau", "S", "O"):
            raise ValueError("series proportions cover GL and its determinant cosets")
        if family == "GL" and coset is None:
            s = gl_no_small_factor_series(q, t, n)
        else:
            mu = 0 if coset is None else coset
            s = sl_coset_series(q, t, mu, n)
        return ProportionReport(family, n, q, t, coset, method, s.coeff(n))
    if method == "montecarlo":
        if family != "GL" or coset in ("S", "O"):
            raise ValueError("montecarlo covers GL, its determinant cosets, and tau")
        if not isinstance(trials, int) or trials <= 0:
            raise ValueError("montecarlo needs a positive trials count")
        if seed is None:
            raise ValueError("montecarlo needs an explicit seed")
        if q == 2 and t == 1 and coset is None:
            hits = _mc_gl2_t1(n, trials, seed)
        else:
            hits = _mc_scan(n, q, t, coset, trials, seed)
        lo, hi = wilson_interval(hits, trials)
        return ProportionReport(family, n, q, t, coset, method,
                                hits / trials, trials, lo, hi)
    raise ValueError(f"unknown method {method!r}")


def _mc_scan(n, q, t, coset, trials, seed):
    rng = random.Random(seed)
    space = MatSpace(n, q)
    hits = 0
    for _ in range(trials):
        if coset == "tau":
            hits += tau_sieve_free(space, random_gl(n, q, rng), t)
        elif coset is None:
            hits += sieve_free(space, random_gl(n, q, rng), t)
        else:
            hits += sieve_free(space, random_coset_gl(n, q, coset, rng), t)
    return hits


def gf2_nonsingular_batch(rows):
    """Invertibility mask for a batch of bit-packed GF(2) matrices.

    rows has shape (batch, n); bit j of rows[b, i] is entry (i, j) of matrix
    b.  Gaussian elimination runs on all matrices in lockstep.
    """
    a = rows.copy()
    batch, n = a.shape
    zero = a.dtype.type(0)
    singular = np.zeros(batch, dtype=bool)
    ar = np.arange(batch)
    for j in range(n):
        bits = (a >> j) & 1
        bits[:, :j] = 0
        singular |= ~bits.any(axis=1)
        piv = np.argmax(bits, axis=1)
        tmp = a[ar, piv]
        a[ar, piv] = a[ar, j]
        a[ar, j] = tmp
        below = ((a >> j) & 1).astype(bool)
        below[:, : j + 1] = False
        a ^= np.where(below, a[:, j : j + 1], zero)
    return ~singular


def _mc_gl2_t1(n, trials, seed):
    """Hits for the q=2, t=1 sampler: uniform GL draws with g - 1 invertible.

    Over GF(2) the only admissible linear factor of the characteristic
    polynomial is z - 1, so the sieve reduces to a second invertibility test,
    run only on the draws that land in GL.  Rejection sampling on packed
    random matrices keeps the draw exactly uniform over GL.
    """
    if n > 62:
        raise ValueError("packed sampler supports n <= 62")
    dtype = np.uint32 if n <= 32 else np.uint64
    rng = np.random.Generator(np.random.PCG64(seed))
    eye = np.array([1 << i for i in range(n)], dtype=dtype)
    accepted = hits = 0
    while accepted < trials:
        need = trials - accepted
        # |GL|/q^(n^2) is about 0.289 at q=2; oversample slightly
        chunk = min(1 << 16, max(1 << 12, 4 * need))
        raw = rng.integers(0, 1 << n, size=(chunk, n), dtype=dtype)
        in_gl = gf2_nonsingular_batch(raw)
        if int(in_gl.sum()) > need:
            in_gl &= np.cumsum(in_gl) <= need
        accepted += int(in_gl.sum())
        hits += int(gf2_nonsingular_batch(raw[in_gl] ^ eye).sum())
    return hits


# ---------------------------------------------------------------------------
# Fixed-point expectations.

@dataclass(frozen=True)
class ExpectationReport:
    action: object  # ActionSpec for group actions, a plain label otherwise
    subset: str
    value: Fraction
    comparator: object = None  # predicted leading constant, never asserted
    orbit_values: tuple = None  # per-orbit averages when intransitive

    @property
    def transitive(self):
        return self.orbit_values is None


def _as_action(table, action, cap):
    if isinstance(action, ActionTable):
        return action
    return enumerate_action(table, action, cap=cap)


def orbits(table, action, cap=DEFAULT_ACTION_CAP):
    """Orbits of the full table group on the action points."""
    act = _as_action(table, action, cap)
    perms = [
        point_permutation(table.space, g, act, cache={}) for g in table.gens
    ]
    seen = [False] * len(act)
    out = []
    for p0 in range(len(act)):
        if seen[p0]:
            continue
        seen[p0] = True
        stack, orb = [p0], []
        while stack:
            p = stack.pop()
            orb.append(p)
            for pm in perms:
                pi = pm[p]
                if not seen[pi]:
                    seen[pi] = True
                    stack.append(pi)
        out.append(sorted(orb))
    return out


def coset_average_fixed_points(table, action, coset=None, cap=DEFAULT_ACTION_CAP):
    """Average number of fixed points of a coset on an action.

    On a transitive action the average is exactly 1 for every label coset.
    On an intransitive action the report carries per-orbit averages (each
    again 1 when the group is transitive on the orbit) and the overall sum.
    """
    act = _as_action(table, action, cap)
    if coset is None:
        indices = range(len(table.elements))
        name = "whole group"
    else:
        indices = table.coset_indices(coset)
        if not indices:
            raise ValueError(f"empty coset label {coset!r}")
        name = f"label {coset} coset"
    orbs = orbits(table, act, cap)
    if len(orbs) == 1:
        total = 0
        for i in indices:
            total += fixed_points(table.space, table.elements[i], act, cache={})
        return ExpectationReport(act.spec, name, Fraction(total, len(indices)))
    orbit_of = [0] * len(act)
    for oi, orb in enumerate(orbs):
        for p in orb:
            orbit_of[p] = oi
    sums = [0] * len(orbs)
    for i in indices:
        g = table.elements[i]
        for p in fixed_point_indices(table.space, g, act, cache={}):
            sums[orbit_of[p]] += 1
    per = tuple(Fraction(s, len(indices)) for s in sums)
    return ExpectationReport(act.spec, name, sum(per), orbit_values=per)


def _check_conjugation_stable(table, members):
    space = table.space
    mset = set(members)
    for s in table.gens:
        sinv = space.inv(s)
        for i in members:
            conj = space.mul(sinv, space.mul(table.elements[i], s))
            if table.index[conj] not in mset:
                raise ValueError("subset is not stable under conjugation")


def subset_expectation(table, members, action, comparator=None,
                       cap=DEFAULT_ACTION_CAP):
    """Average number of fixed points over an explicit element subset.

    members are element indices; the subset must be nonempty and stable under
    conjugation by the group generators, which is verified.  comparator rides
    along in the report for display next to a predicted constant; it is not
    asserted.
    """
    if not members:
        raise ValueError("empty element subset")
    _check_conjugation_stable(table, members)
    act = _as_action(table, action, cap)
    total = 0
    for i in members:
        total += fixed_points(table.space, table.elements[i], act, cache={})
    value = Fraction(total, len(members))
    return ExpectationReport(act.spec, f"{len(members)} elements", value, comparator)


def fixed_sets(table, indices, action, cap=DEFAULT_ACTION_CAP):
    """Fixed-point index sets for a batch of elements, one frozenset each."""
    act = _as_action(table, action, cap)
    return [
        frozenset(fixed_point_indices(table.space, table.elements[i], act, cache={}))
        for i in indices
    ]


def expectation_inequality(table, x, members, action, x_tau=False,
                           member_fixed=None, cap=DEFAULT_ACTION_CAP):
    """Sharing a fixed point with a random subset element, versus the bound.

    The probability that x and a uniformly random member of the subset have a
    common fixed point is at most fpr(x) times the subset's fixed-point
    expectation.  Returns a dict with both sides, exactly.  member_fixed may
    carry precomputed fixed_sets output; when it is absent the subset's
    conjugation stability is verified here.
    """
    if not members:
        raise ValueError("empty element subset")
    act = _as_action(table, action, cap)
    if member_fixed is None:
        _check_conjugation_stable(table, members)
        member_fixed = fixed_sets(table, members, act)
    xfix = frozenset(
        fixed_point_indices(table.space, table.elements[x], act, tau=x_tau, cache={})
    )
    hits = sum(1 for s in member_fixed if xfix & s)
    lhs = Fraction(hits, len(members))
    fpr = Fraction(len(xfix), len(act))
    expect = Fraction(sum(len(s) for s in member_fixed), len(members))
    rhs = fpr * expect
    return {
        "lhs": lhs,
        "fpr": fpr,
        "expectation": expect,
        "rhs": rhs,
        "ok": lhs <= rhs,
    }


# ---------------------------------------------------------------------------
# Fixed-point-ratio bounds.

@dataclass(frozen=True)
class FprReport:
    action: ActionSpec
    tau: bool
    bound_id: str
    bound: Fraction
    element: int  # index of the extremal element
    fpr: Fraction  # its ratio, the maximum over the scan
    margin: Fraction  # bound - fpr at the extremal element
    checked: int
    violations: int


def _fpr_bounds(n, q, spec):
    """Applicable strict upper bounds for one subspace-type action."""
    k = spec.k
    out = [("two_over_qk", Fraction(2, q**k))]
    if k == 1:
        out.append(("point_refined", Fraction(1, q) + Fraction(1, q ** (n - 1))))
        if spec.kind in ("flag", "antiflag") and n >= 4:
            out.append(("flag_refined", Fraction(1, q * q) + Fraction(4, q ** (n - 1))))
    return out


def _tau_acts(spec, n):
    if spec.kind == "subspace":
        return 2 * spec.k == n
    return spec.kind in ("flag", "antiflag")


def _scalar_indices(table):
    space = table.space
    out = set()
    for c in range(1, table.q):
        idx = table.index.get(space.scalar(c))
        if idx is not None:
            out.add(idx)
    return out


def fpr_bound_check(table, kmax=None, include_tau=None, cap=DEFAULT_ACTION_CAP):
    """Scan every nontrivial element against the subspace-action fpr bounds.

    Actions are the k-subspace, k-flag, and k-antiflag actions for k up to
    n/2.  Elements acting trivially (scalars) are excluded; the
    inverse-transpose coset is included for GL on the actions it permutes.
    Returns one summary report per (action, bound, coset side) carrying the
    extremal element and the violation count, which must be zero.
    """
    if table.family not in ("GL", "SL"):
        raise ValueError("the fpr bounds are stated for linear groups")
    n, q = table.n, table.q
    if kmax is None:
        kmax = n // 2
    if not 1 <= kmax <= n // 2:
        raise ValueError("need 1 <= kmax <= n/2")
    actions = []
    for k in range(1, kmax + 1):
        actions.append(enumerate_action(table, ActionSpec("subspace", k), cap=cap))
        if k < n - k:
            actions.append(enumerate_action(table, ActionSpec("flag", k), cap=cap))
        actions.append(enumerate_action(table, ActionSpec("antiflag", k), cap=cap))
    if include_tau is None:
        include_tau = table.family == "GL"
    bounds = [_fpr_bounds(n, q, act.spec) for act in actions]
    rows = {}
    for ai, act in enumerate(actions):
        for bid, _ in bounds[ai]:
            rows[(ai, bid, False)] = [-1, -1, 0, 0]  # max fp, argmax, checked, violations
            if include_tau and _tau_acts(act.spec, n):
                rows[(ai, bid, True)] = [-1, -1, 0, 0]
    scalars = _scalar_indices(table)
    for i, g in enumerate(table.elements):
        cache = {}
        if i not in scalars:
            for ai, act in enumerate(actions):
                fp = fixed_points(table.space, g, act, cache=cache)
                npts = len(act)
                for bid, bound in bounds[ai]:
                    row = rows[(ai, bid, False)]
                    row[2] += 1
                    if fp > row[0]:
                        row[0], row[1] = fp, i
                    if fp * bound.denominator >= bound.numerator * npts:
                        row[3] += 1
        if include_tau:
            for ai, act in enumerate(actions):
                if not _tau_acts(act.spec, n):
                    continue
                fp = fixed_points(table.space, g, act, tau=True, cache=cache)
                npts = len(act)
                for bid, bound in bounds[ai]:
                    row = rows[(ai, bid, True)]
                    row[2] += 1
                    if fp > row[0]:
                        row[0], row[1] = fp, i
                    if fp * bound.denominator >= bound.numerator * npts:
                        row[3] += 1
    reports = []
    for (ai, bid, tau) in sorted(rows, key=lambda key: (key[0], key[1], key[2])):
        mfp, arg, checked, viol = rows[(ai, bid, tau)]
        act = actions[ai]
        bound = dict(bounds[ai])[bid]
        ratio = Fraction(max(mfp, 0), len(act))
        reports.append(
            FprReport(act.spec, tau, bid, bound, arg, ratio, bound - ratio,
                      checked, viol)
        )
    return reports


# ---------------------------------------------------------------------------
# Symmetric-group analogues.

def no_short_cycle_counts(n, t):
    """counts[m] = permutations of m points with every cycle longer than t."""
    if n < 0 or t < 0:
        raise ValueError("n and t must be nonnegative")
    counts = [0] * (n + 1)
    counts[0] = 1
    for m in range(1, n + 1):
        total = 0
        falling = 1  # (m-1)! / (m-l)!, updated as l grows
        for length in range(1, m + 1):
            if length > t:
                total += falling * counts[m - length]
            falling *= m - length
        counts[m] = total
    return counts


def symmetric_a(n, t):
    """Proportion of permutations of n points with all cycles longer than t."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return Fraction(no_short_cycle_counts(n, t)[n], math.factorial(n))


def symmetric_expectation(n, k, t):
    """Expected number of fixed k-sets over the all-cycles-long subset.

    A permutation fixes a k-set exactly when it splits into independent
    permutations of the set and its complement, so the count is a product of
    the two cycle-length-restricted counts.  Requires 1 <= t <= k < n/2.
    """
    if not (1 <= t <= k and 2 * k < n):
        raise ValueError("need 1 <= t <= k < n/2")
    counts = no_short_cycle_counts(n, t)
    value = Fraction(math.comb(n, k) * counts[k] * counts[n - k], counts[n])
    return ExpectationReport(f"{k}-sets", f"A_{n}({t})", value, symmetric_a(k, t))


# ---------------------------------------------------------------------------
# Identity checks between enumerated families.

def inverse_transpose_identity_check(n, q, t, cap=DEFAULT_GROUP_CAP):
    """Inverse-transpose coset statistic of GL_n against Sp of even degree.

    Both sides are enumerated exactly; the symplectic degree is n rounded
    down to even.
    """
    gl = build_group("GL", n, q, cap=cap)
    lhs = Fraction(len(tau_membership(gl, t)), gl.order())
    m = n - (n % 2)
    if m == 0:
        raise ValueError("n must be >= 2")
    sp = build_group("Sp", m, q, cap=cap)
    rhs = Fraction(len(membership_sets(sp, t)), sp.order())
    return lhs == rhs


def orthogonal_reflection_identity_check(n, q, t, cap=DEFAULT_GROUP_CAP):
    """Reflection-coset statistic against the average of smaller plain sets.

    For n >= 5 the O-variant proportion in dimension n equals the average of
    the two S-variant proportions in dimension n - gcd(2, n), for either type
    in even dimension.  All sides are enumerated exactly.
    """
    if n < 5:
        raise ValueError("the identity needs n >= 5")
    delta = 2 if n % 2 == 0 else 1
    m = n - delta
    rhs_terms = []
    for eps in ("+", "-"):
        sub = build_group("O" + eps, m, q, cap=cap)
        rhs_terms.append(
            Fraction(len(membership_sets(sub, t, "S")), sub.order() // 2)
        )
    rhs = sum(rhs_terms) / 2
    if n % 2 == 0:
        families = ("O+", "O-")
    else:
        families = ("O",)
    for fam in families:
        big = build_group(fam, n, q, cap=cap)
        lhs = Fraction(len(membership_sets(big, t, "O")), big.order() // 2)
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# Signed permutations.

@dataclass(frozen=True)
class WeylReport:
    m: int
    value: object  # Fraction for exact, float for montecarlo
    method: str
    trials: int = None
    ci_low: float = None
    ci_high: float = None


def _even_negative_cycles_paired(perm, signs):
    """True when negative cycles of every even length come in an even count."""
    odd_parity = 0  # bitmask over cycle lengths with an odd negative count
    seen = 0
    for i in range(len(perm)):
        if seen >> i & 1:
            continue
        length = 0
        neg = 0
        j = i
        while not seen >> j & 1:
            seen |= 1 << j
            neg ^= signs >> j & 1
            j = perm[j]
            length += 1
        if length % 2 == 0 and neg:
            odd_parity ^= 1 << length
    return odd_parity == 0


def weyl_negative_cycle_statistic(m, trials=None, seed=None):
    """Proportion of signed permutations whose even-length negative cycles
    all come in pairs.

    With trials=None the hyperoctahedral group of rank m is enumerated
    exactly (feasible for m <= 7); otherwise uniform samples give a float
    estimate with a 99% Wilson interval.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if trials is None:
        total = math.factorial(m) << m
        if total > 2_000_000:
            raise ValueError("exact enumeration is limited to m <= 7")
        hits = 0
        for perm in itertools.permutations(range(m)):
            for signs in range(1 << m):
                hits += _even_negative_cycles_paired(perm, signs)
        return WeylReport(m, Fraction(hits, total), "exact")
    if not isinstance(trials, int) or trials <= 0:
        raise ValueError("trials must be None or a positive integer")
    if seed is None:
        raise ValueError("montecarlo needs an explicit seed")
    rng = random.Random(seed)
    base = list(range(m))
    hits = 0
    for _ in range(trials):
        rng.shuffle(base)
        hits += _even_negative_cycles_paired(base, rng.getrandbits(m))
    lo, hi = wilson_interval(hits, trials)
    return WeylReport(m, hits / trials, "montecarlo", trials, lo, hi)


# ---------------------------------------------------------------------------
# Generation probe.

class PermGroup:
    """A finite permutation group enumerated from generators."""

    def __init__(self, degree, gens, name="", cap=2_000_000):
        self.degree = degree
        self.name = name
        ident = tuple(range(degree))
        self.identity = ident
        self.gens = [tuple(g) for g in gens]
        for g in self.gens:
            if sorted(g) != list(ident):
                raise ValueError("generator is not a permutation")
        elements = {ident}
        frontier = [ident]
        while frontier:
            new = []
            for a in frontier:
                for g in self.gens:
                    b = tuple(map(a.__getitem__, g))
                    if b not in elements:
                        elements.add(b)
                        if len(elements) > cap:
                            raise ResourceCapExceeded("closure exceeds cap")
                        new.append(b)
            frontier = new
        self.elements = sorted(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}

    def order(self):
        return len(self.elements)

    def mul(self, a, b):
        return tuple(map(a.__getitem__, b))

    def inv(self, a):
        out = [0] * self.degree
        for i, ai in enumerate(a):
            out[ai] = i
        return tuple(out)

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def conjugacy_classes(self):
        """Element indices grouped by conjugacy, ordered by smallest member."""
        pairs = [(g, self.inv(g)) for g in self.elements]
        seen = [False] * len(self.elements)
        classes = []
        for i, e in enumerate(self.elements):
            if seen[i]:
                continue
            orb = set()
            for g, gi in pairs:
                orb.add(self.index[self.mul(gi, self.mul(e, g))])
            for j in orb:
                seen[j] = True
            classes.append(sorted(orb))
        return classes


def psl2(p):
    """PSL_2(p) for a prime p >= 5, acting on the projective line.

    Points 0..p-1 are the field elements and point p is infinity; the
    generators are z -> z+1 and z -> -1/z.  The closure order is checked
    against p(p^2-1)/2.
    """
    if p < 5 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise ValueError("p must be a prime >= 5")
    inf = p
    shift = tuple((z + 1) % p for z in range(p)) + (inf,)
    flip = [0] * (p + 1)
    flip[0] = inf
    flip[inf] = 0
    for z in range(1, p):
        flip[z] = -pow(z, -1, p) % p
    group = PermGroup(p + 1, [shift, tuple(flip)], name=f"PSL(2,{p})")
    if group.order() != p * (p * p - 1) // 2:
        raise AssertionError("projective line closure has the wrong order")
    return group


def permutation_group(table, action, cap=DEFAULT_ACTION_CAP):
    """Faithful permutation copy of an enumerated matrix group action."""
    act = _as_action(table, action, cap)
    gens = [
        tuple(point_permutation(table.space, g, act, cache={}))
        for g in table.gens
    ]
    name = f"{table.family}_{table.n}({table.q})"
    group = PermGroup(len(act), gens, name=name)
    if group.order() != table.order():
        raise ValueError("the action is not faithful")
    return group


def _generates(group, x, s):
    """True when x and s generate the whole group.

    The closure breaks off as soon as it exceeds half the order: a proper
    subgroup has index at least 2.
    """
    half = group.order() // 2
    have = {group.identity}
    frontier = [group.identity]
    pair = (x, s)
    while frontier:
        new = []
        for a in frontier:
            for g in pair:
                b = tuple(map(a.__getitem__, g))
                if b not in have:
                    have.add(b)
                    if len(have) > half:
                        return True
                    new.append(b)
        frontier = new
    return False


@dataclass(frozen=True)
class GenerationReport:
    group: str
    x_index: int
    x_order: int
    pool_size: int
    method: str
    trials: int
    hits: int
    value: object  # Fraction for exhaustive, float for montecarlo
    ci_low: float = None
    ci_high: float = None
    witness: int = None  # index of one generating partner, if any


def generation_probe(group, x, coset=None, trials="exhaustive", seed=None):
    """Probability that x and a random partner generate the group.

    x is an element tuple or index; the partner pool is the whole group
    unless an explicit element list is given.  trials="exhaustive" scans the
    pool and returns an exact Fraction; an integer samples uniformly and
    returns a float with a 99% Wilson interval.  The identity is rejected.
    """
    if isinstance(x, int):
        xi = x
        x = group.elements[xi]
    else:
        x = tuple(x)
        xi = group.index[x]
    if x == group.identity:
        raise ValueError("x must be nontrivial")
    pool = list(group.elements) if coset is None else [tuple(s) for s in coset]
    if not pool:
        raise ValueError("empty partner pool")
    xo = group.element_order(x)
    if trials == "exhaustive":
        hits = 0
        witness = None
        for s in pool:
            if _generates(group, x, s):
                hits += 1
                if witness is None:
                    witness = group.index[s]
        return GenerationReport(group.name, xi, xo, len(pool), "exhaustive",
                                len(pool), hits, Fraction(hits, len(pool)),
                                witness=witness)
    if not isinstance(trials, int) or trials <= 0:
        raise ValueError("trials must be 'exhaustive' or a positive integer")
    if seed is None:
        raise ValueError("montecarlo needs an explicit seed")
    rng = random.Random(seed)
    hits = 0
    witness = None
    for _ in range(trials):
        s = pool[rng.randrange(len(pool))]
        if _generates(group, x, s):
            hits += 1
            if witness is None:
                witness = group.index[s]
    lo, hi = wilson_interval(hits, trials)
    return GenerationReport(group.name, xi, xo, len(pool), "montecarlo",
                            trials, hits, hits / trials, lo, hi, witness)


def three_halves_generation(group):
    """Exact generation proportion for one representative per nontrivial class.

    Generation is conjugation invariant, so a representative per class covers
    every nontrivial element.  Returns one record per class; 3/2-generation
    holds exactly when every proportion is positive.
    """
    out = []
    for cls in group.conjugacy_classes():
        rep = group.elements[cls[0]]
        if rep == group.identity:
            continue
        report = generation_probe(group, rep)
        out.append({
            "representative": cls[0],
            "class_size": len(cls),
            "element_order": report.x_order,
            "proportion": report.value,
        })
    return out
