"""Tests for proportions, expectations, fpr bounds, and the probe layers."""

import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from classprop.matgroup import (
    ActionSpec,
    MatSpace,
    ResourceCapExceeded,
    build_group,
    enumerate_action,
    fixed_points_by_type,
    membership_sets,
)
from classprop.stats import (
    ExpectationReport,
    PermGroup,
    coset_average_fixed_points,
    expectation_inequality,
    fixed_sets,
    fpr_bound_check,
    generation_probe,
    gf2_nonsingular_batch,
    inverse_transpose_identity_check,
    no_short_cycle_counts,
    orbits,
    orthogonal_reflection_identity_check,
    permutation_group,
    proportion,
    psl2,
    subset_expectation,
    symmetric_a,
    symmetric_expectation,
    three_halves_generation,
    weyl_negative_cycle_statistic,
    wilson_interval,
    _mc_gl2_t1,
)


# ---------------------------------------------------------------------------
# Wilson intervals.

def test_wilson_contains_phat_and_shrinks():
    lo, hi = wilson_interval(289, 1000)
    assert lo < 0.289 < hi
    lo2, hi2 = wilson_interval(2890, 10000)
    assert hi2 - lo2 < hi - lo
    assert wilson_interval(0, 50)[0] == 0.0
    assert wilson_interval(50, 50)[1] == 1.0


def test_wilson_frozen_value():
    # hand-evaluated Wilson score at z = 2.5758..., p-hat = 1/2, n = 100
    lo, hi = wilson_interval(50, 100)
    assert abs(lo - 0.37528) < 5e-5
    assert abs(hi - 0.62472) < 5e-5
    assert abs((lo + hi) / 2 - 0.5) < 1e-12


def test_wilson_argument_errors():
    with pytest.raises(ValueError):
        wilson_interval(1, 0)
    with pytest.raises(ValueError):
        wilson_interval(5, 4)


# ---------------------------------------------------------------------------
# Proportions.

def test_proportion_enumeration_examples():
    assert proportion(("GL", 2, 2), 1).value == Fraction(1, 3)
    assert proportion(("GL", 3, 2), 1, coset="tau").value == Fraction(1, 3)
    assert proportion(("O+", 4, 2), 1, coset="S").value == Fraction(4, 9)
    assert proportion(("O+", 4, 2), 1, coset="O").value == Fraction(1, 3)


def test_proportion_accepts_a_table():
    tb = build_group("GL", 3, 2)
    rep = proportion(tb, 2)
    assert rep.value == Fraction(48, 168)
    assert rep.family == "GL" and rep.n == 3 and rep.q == 2


def test_proportion_series_matches_enumeration():
    for coset in (None, 0, 1):
        enum = proportion(("GL", 3, 3), 1, coset=coset)
        ser = proportion(("GL", 3, 3), 1, coset=coset, method="series")
        assert enum.value == ser.value


def test_proportion_coset_denominator():
    # per-coset proportions over GL_2(3): label classes have 24 elements each
    reps = [proportion(("GL", 2, 3), 1, coset=mu) for mu in (0, 1)]
    assert reps[0].value == Fraction(6, 24)
    assert reps[1].value == Fraction(12, 24)


def test_proportion_method_errors():
    with pytest.raises(ValueError):
        proportion(("Sp", 4, 2), 1, method="series")
    with pytest.raises(ValueError):
        proportion(("GL", 3, 2), 1, coset="tau", method="series")
    with pytest.raises(ValueError):
        proportion(("GL", 3, 2), 1, method="montecarlo", trials=10)
    with pytest.raises(ValueError):
        proportion(("GL", 3, 2), 1, method="montecarlo", seed=1)
    with pytest.raises(ValueError):
        proportion(("GU", 3, 2), 1, method="montecarlo", trials=10, seed=1)
    with pytest.raises(ValueError):
        proportion(("GL", 3, 2), 1, method="bogus")
    with pytest.raises(ValueError):
        proportion(("GL", 2, 3), 1, coset=7)


def test_proportion_montecarlo_general_path():
    exact = proportion(("GL", 2, 3), 1).value
    rep = proportion(("GL", 2, 3), 1, method="montecarlo", trials=4000, seed=5)
    assert rep.sample_size == 4000
    assert rep.ci_low <= float(exact) <= rep.ci_high
    again = proportion(("GL", 2, 3), 1, method="montecarlo", trials=4000, seed=5)
    assert rep.value == again.value


def test_proportion_montecarlo_tau_and_coset():
    exact_tau = proportion(("GL", 3, 2), 1, coset="tau").value
    rep = proportion(("GL", 3, 2), 1, coset="tau", method="montecarlo",
                     trials=4000, seed=9)
    assert rep.ci_low <= float(exact_tau) <= rep.ci_high
    exact_coset = proportion(("GL", 2, 3), 1, coset=1).value
    rep = proportion(("GL", 2, 3), 1, coset=1, method="montecarlo",
                     trials=4000, seed=9)
    assert rep.ci_low <= float(exact_coset) <= rep.ci_high


# ---------------------------------------------------------------------------
# The packed GF(2) sampler.

def test_gf2_batch_matches_determinant_exhaustively():
    sp = MatSpace(2, 2)
    rows = np.array([[a, b] for a in range(4) for b in range(4)], dtype=np.uint32)
    mask = gf2_nonsingular_batch(rows)
    for (r0, r1), m in zip(rows.tolist(), mask.tolist()):
        g = (r0 & 1, r0 >> 1, r1 & 1, r1 >> 1)
        assert (sp.det(g) != 0) == m
    assert int(mask.sum()) == 6  # |GL_2(2)|


@pytest.mark.parametrize("n,dtype", [(4, np.uint32), (5, np.uint64)])
def test_gf2_batch_matches_determinant_random(n, dtype):
    sp = MatSpace(n, 2)
    rng = random.Random(13)
    rows = np.array(
        [[rng.getrandbits(n) for _ in range(n)] for _ in range(300)], dtype=dtype
    )
    mask = gf2_nonsingular_batch(rows)
    for packed, m in zip(rows.tolist(), mask.tolist()):
        g = tuple((r >> j) & 1 for r in packed for j in range(n))
        assert (sp.det(g) != 0) == m


def test_packed_sampler_agrees_with_scan_sampler():
    # both code paths estimate a_4(2, 1) = 13/45
    exact = float(Fraction(13, 45))
    fast = proportion(("GL", 4, 2), 1, method="montecarlo", trials=20000, seed=2)
    slow = proportion(("GL", 4, 3), 1, method="montecarlo", trials=2000, seed=2)
    assert fast.ci_low <= exact <= fast.ci_high
    ex3 = float(proportion(("GL", 4, 3), 1, method="series").value)
    assert slow.ci_low <= ex3 <= slow.ci_high


def test_packed_sampler_deterministic_and_bounded():
    h1 = _mc_gl2_t1(6, 5000, 42)
    h2 = _mc_gl2_t1(6, 5000, 42)
    assert h1 == h2
    assert 0 <= h1 <= 5000
    with pytest.raises(ValueError):
        _mc_gl2_t1(70, 10, 1)


# ---------------------------------------------------------------------------
# Coset averages and orbits.

def test_orbit_decomposition_orthogonal_points():
    tb = build_group("O+", 4, 2)
    orbs = orbits(tb, ActionSpec("subspace", 1))
    assert sorted(len(o) for o in orbs) == [6, 9]


def test_coset_average_transitive_cases():
    cases = [
        (build_group("GL", 3, 2), ActionSpec("subspace", 1), None),
        (build_group("GL", 3, 2), ActionSpec("flag", 1), None),
        (build_group("GL", 2, 3), ActionSpec("subspace", 1), 0),
        (build_group("GL", 2, 3), ActionSpec("subspace", 1), 1),
        (build_group("Sp", 4, 2), ActionSpec("subspace", 1, restrict="totally_singular"), None),
    ]
    for tb, spec, coset in cases:
        rep = coset_average_fixed_points(tb, spec, coset=coset)
        assert rep.transitive
        assert rep.value == 1


def test_coset_average_intransitive_reports_orbits():
    tb = build_group("O+", 4, 2)
    rep = coset_average_fixed_points(tb, ActionSpec("subspace", 1))
    assert not rep.transitive
    assert rep.orbit_values == (Fraction(1), Fraction(1))
    assert rep.value == 2


def test_coset_average_empty_coset_label():
    tb = build_group("GL", 2, 3)
    with pytest.raises(ValueError):
        coset_average_fixed_points(tb, ActionSpec("subspace", 1), coset=9)


# ---------------------------------------------------------------------------
# Subset expectations and the sharing inequality.

def test_subset_expectation_sieved_set_fixes_nothing_small():
    tb = build_group("GL", 4, 2)
    members = membership_sets(tb, 1)
    rep = subset_expectation(tb, members, ActionSpec("subspace", 1))
    assert rep.value == 0
    rep2 = subset_expectation(tb, members, ActionSpec("subspace", 2))
    assert rep2.value > 0


def test_subset_expectation_full_group_is_burnside():
    tb = build_group("GL", 3, 2)
    rep = subset_expectation(tb, list(range(168)), ActionSpec("subspace", 1))
    assert rep.value == 1


def test_subset_expectation_quadratic_forms_split():
    # the t=2 symplectic set fixes exactly one form each
    tb = build_group("Sp", 4, 2)
    members = membership_sets(tb, 2)
    act = enumerate_action(tb, ActionSpec("quadratic_forms"))
    rep = subset_expectation(tb, members, act)
    assert rep.value == 1
    plus = sum(fixed_points_by_type(tb.space, tb.elements[i], act)["+"] for i in members)
    minus = sum(fixed_points_by_type(tb.space, tb.elements[i], act)["-"] for i in members)
    assert Fraction(plus, len(members)) + Fraction(minus, len(members)) == 1
    assert plus == 0  # every one fixes a minus-type form


def test_subset_expectation_rejects_bad_subsets():
    tb = build_group("GL", 3, 2)
    with pytest.raises(ValueError):
        subset_expectation(tb, [], ActionSpec("subspace", 1))
    # a single non-central element is not conjugation stable
    members = membership_sets(tb, 1)
    with pytest.raises(ValueError):
        subset_expectation(tb, members[:1], ActionSpec("subspace", 1))


def test_subset_expectation_carries_comparator():
    tb = build_group("GL", 3, 2)
    rep = subset_expectation(tb, membership_sets(tb, 1),
                             ActionSpec("subspace", 1), comparator=Fraction(1, 3))
    assert rep.comparator == Fraction(1, 3)
    assert isinstance(rep, ExpectationReport)


def test_expectation_inequality_holds_on_samples():
    tb = build_group("GL", 3, 2)
    members = membership_sets(tb, 1)
    spec = ActionSpec("subspace", 1)
    mf = fixed_sets(tb, members, enumerate_action(tb, spec))
    rng = random.Random(4)
    for _ in range(8):
        x = rng.randrange(len(tb.elements))
        rec = expectation_inequality(tb, x, members, spec, member_fixed=mf)
        assert rec["ok"] and rec["lhs"] <= rec["rhs"]
    # without precomputed fixed sets the stability check runs and agrees
    rec2 = expectation_inequality(tb, 3, members, spec)
    rec3 = expectation_inequality(tb, 3, members, spec, member_fixed=mf)
    assert rec2 == rec3


def test_expectation_inequality_nonzero_case():
    tb = build_group("GL", 4, 2)
    members = membership_sets(tb, 1)
    spec = ActionSpec("subspace", 2)
    mf = fixed_sets(tb, members, enumerate_action(tb, spec))
    rec = expectation_inequality(tb, 2, members, spec, member_fixed=mf)
    assert rec["expectation"] > 0
    assert rec["ok"]


# ---------------------------------------------------------------------------
# fpr bounds.

def test_fpr_bound_check_linear_only():
    with pytest.raises(ValueError):
        fpr_bound_check(build_group("Sp", 2, 3))


def test_fpr_bound_check_gl32():
    tb = build_group("GL", 3, 2)
    reports = fpr_bound_check(tb)
    assert all(r.violations == 0 for r in reports)
    assert all(r.margin > 0 for r in reports)
    # transvections fix 3 of the 7 points, the scan maximum
    points = [r for r in reports
              if r.action.kind == "subspace" and not r.tau][0]
    assert points.fpr == Fraction(3, 7)
    assert points.checked == 167  # identity excluded
    tau_rows = [r for r in reports if r.tau]
    assert tau_rows and all(r.checked == 168 for r in tau_rows)
    # n = 3 is below the flag-refinement threshold
    assert not any(r.bound_id == "flag_refined" for r in reports)


def test_fpr_bound_check_excludes_scalars():
    tb = build_group("GL", 2, 3)
    reports = fpr_bound_check(tb, include_tau=False)
    assert all(r.checked == 46 for r in reports)  # 48 minus two scalars
    assert all(r.violations == 0 for r in reports)


def test_fpr_bound_check_flag_refinement_present_at_n4():
    tb = build_group("GL", 4, 2)
    reports = fpr_bound_check(tb, kmax=1, include_tau=False)
    ids = {(r.action.kind, r.bound_id) for r in reports}
    assert ("flag", "flag_refined") in ids
    assert ("antiflag", "flag_refined") in ids
    assert all(r.violations == 0 for r in reports)


# ---------------------------------------------------------------------------
# Symmetric groups.

def _brute_long_cycle_perms(n, t):
    count = 0
    for p in itertools.permutations(range(n)):
        seen = 0
        ok = True
        for i in range(n):
            if seen >> i & 1:
                continue
            ln, j = 0, i
            while not seen >> j & 1:
                seen |= 1 << j
                j = p[j]
                ln += 1
            if ln <= t:
                ok = False
                break
        count += ok
    return count


@pytest.mark.parametrize("t", [1, 2, 3])
def test_symmetric_counts_match_brute_force(t):
    counts = no_short_cycle_counts(7, t)
    for n in range(8):
        assert counts[n] == _brute_long_cycle_perms(n, t)


def test_symmetric_a_values():
    assert symmetric_a(4, 1) == Fraction(9, 24)
    for n in range(1, 4):
        assert symmetric_a(n, 3) == 0
    # derangement recurrence D_n = (n-1)(D_{n-1} + D_{n-2})
    d = [1, 0]
    for n in range(2, 9):
        d.append((n - 1) * (d[-1] + d[-2]))
    for n in range(9):
        assert symmetric_a(n, 1) == Fraction(d[n], math.factorial(n))


def test_symmetric_expectation_matches_brute_force():
    n, k, t = 8, 3, 1
    total = members = 0
    for p in itertools.permutations(range(n)):
        seen = 0
        lengths = []
        for i in range(n):
            if seen >> i & 1:
                continue
            ln, j = 0, i
            while not seen >> j & 1:
                seen |= 1 << j
                j = p[j]
                ln += 1
            lengths.append(ln)
        if min(lengths) <= t:
            continue
        members += 1
        # fixed k-sets are unions of whole cycles
        for r in range(1, len(lengths) + 1):
            for combo in itertools.combinations(lengths, r):
                if sum(combo) == k:
                    total += 1
    rep = symmetric_expectation(n, k, t)
    assert rep.value == Fraction(total, members)
    assert rep.comparator == symmetric_a(k, t)


def test_symmetric_expectation_preconditions():
    for bad in [(6, 3, 0), (6, 2, 3), (6, 3, 1), (5, 1, 1)]:
        n, k, t = bad
        if bad == (5, 1, 1):
            symmetric_expectation(n, k, t)  # 1 <= 1 < 5/2 is fine
        else:
            with pytest.raises(ValueError):
                symmetric_expectation(n, k, t)


# ---------------------------------------------------------------------------
# Identity wrappers.

def test_inverse_transpose_identity_small():
    assert inverse_transpose_identity_check(3, 2, 1)
    assert inverse_transpose_identity_check(2, 2, 1)
    with pytest.raises(ValueError):
        inverse_transpose_identity_check(1, 2, 1)


def test_orthogonal_identity_rejects_small_n():
    with pytest.raises(ValueError):
        orthogonal_reflection_identity_check(4, 2, 1)


# ---------------------------------------------------------------------------
# Signed permutations.

def _brute_weyl(m):
    hits = total = 0
    for perm in itertools.permutations(range(m)):
        for signs in itertools.product((0, 1), repeat=m):
            total += 1
            neg_even = {}
            seen = set()
            for i in range(m):
                if i in seen:
                    continue
                cyc = []
                j = i
                while j not in seen:
                    seen.add(j)
                    cyc.append(j)
                    j = perm[j]
                if sum(signs[c] for c in cyc) % 2 and len(cyc) % 2 == 0:
                    neg_even[len(cyc)] = neg_even.get(len(cyc), 0) + 1
            if all(v % 2 == 0 for v in neg_even.values()):
                hits += 1
    return Fraction(hits, total)


def test_weyl_exact_small_cases():
    assert weyl_negative_cycle_statistic(1).value == 1
    assert weyl_negative_cycle_statistic(2).value == Fraction(3, 4)
    for m in (3, 4):
        assert weyl_negative_cycle_statistic(m).value == _brute_weyl(m)


def test_weyl_montecarlo_covers_exact():
    exact = float(weyl_negative_cycle_statistic(4).value)
    rep = weyl_negative_cycle_statistic(4, trials=4000, seed=21)
    assert rep.ci_low <= exact <= rep.ci_high
    again = weyl_negative_cycle_statistic(4, trials=4000, seed=21)
    assert rep.value == again.value


def test_weyl_argument_errors():
    with pytest.raises(ValueError):
        weyl_negative_cycle_statistic(0)
    with pytest.raises(ValueError):
        weyl_negative_cycle_statistic(8)  # exact cap
    with pytest.raises(ValueError):
        weyl_negative_cycle_statistic(4, trials=100)  # seed missing


# ---------------------------------------------------------------------------
# Permutation groups and the generation probe.

def test_psl2_structure():
    g7 = psl2(7)
    assert g7.order() == 168
    sizes = sorted(len(c) for c in g7.conjugacy_classes())
    assert sizes == [1, 21, 24, 24, 42, 56]
    with pytest.raises(ValueError):
        psl2(9)
    with pytest.raises(ValueError):
        psl2(3)


def test_perm_group_basics():
    g = PermGroup(3, [(1, 2, 0)])
    assert g.order() == 3
    a = (1, 2, 0)
    assert g.mul(a, g.inv(a)) == g.identity
    assert g.element_order(a) == 3
    with pytest.raises(ValueError):
        PermGroup(3, [(0, 0, 1)])
    with pytest.raises(ResourceCapExceeded):
        PermGroup(5, [(1, 2, 3, 4, 0)], cap=3)


def test_permutation_group_conversion_and_faithfulness():
    tb = build_group("GL", 3, 2)
    pg = permutation_group(tb, ActionSpec("subspace", 1))
    assert pg.order() == 168
    assert len(pg.conjugacy_classes()) == 6  # it is PSL(2,7) again
    # scalars act trivially on projective points, so GL_2(3) is not faithful
    with pytest.raises(ValueError):
        permutation_group(build_group("GL", 2, 3), ActionSpec("subspace", 1))


def test_generation_probe_exhaustive_order7():
    g7 = psl2(7)
    rep7 = next(
        c[0] for c in g7.conjugacy_classes()
        if g7.element_order(g7.elements[c[0]]) == 7
    )
    rec = generation_probe(g7, rep7)
    assert rec.value == Fraction(7, 8)
    assert rec.witness is not None
    # coset pools and element tuples are accepted too
    rec2 = generation_probe(g7, g7.elements[rep7], coset=g7.elements)
    assert rec2.value == rec.value


def test_generation_probe_montecarlo():
    g7 = psl2(7)
    rec = generation_probe(g7, 1, trials=400, seed=23)
    assert rec.method == "montecarlo"
    assert 0 < rec.value <= 1
    assert rec.ci_low < rec.value < rec.ci_high
    again = generation_probe(g7, 1, trials=400, seed=23)
    assert rec.hits == again.hits


def test_generation_probe_rejects_identity_and_bad_trials():
    g7 = psl2(7)
    with pytest.raises(ValueError):
        generation_probe(g7, 0)
    with pytest.raises(ValueError):
        generation_probe(g7, 1, trials=0)
    with pytest.raises(ValueError):
        generation_probe(g7, 1, trials=10)  # seed missing
    with pytest.raises(ValueError):
        generation_probe(g7, 1, coset=[])


def test_three_halves_generation_psl27():
    recs = three_halves_generation(psl2(7))
    assert len(recs) == 5
    assert all(rec["proportion"] > 0 for rec in recs)
    by_order = {rec["element_order"]: rec["proportion"] for rec in recs}
    assert by_order[7] == Fraction(7, 8)
    assert by_order[2] == Fraction(10, 21)
    assert by_order[3] == Fraction(15, 28)
    assert by_order[4] == Fraction(16, 21)
