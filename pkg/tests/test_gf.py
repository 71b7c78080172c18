import random

import pytest

from classprop import gf
from classprop.gf import (
    Field,
    conjugate_star,
    conjugate_tilde,
    count_enumerated,
    count_formula,
    count_irreducibles,
    count_monic_irreducible,
    det_residue,
    has_small_degree_factor,
    irreducibles,
    is_irreducible,
    pdeg,
    pdivmod,
    pgcd,
    pmod,
    pmonic,
    pmul,
    pnorm,
    residue_class_counts,
    unitary_residue,
)


def rand_poly(rng, F, deg, monic=True, nonzero_const=False):
    coeffs = [rng.randrange(F.q) for _ in range(deg)]
    if nonzero_const:
        coeffs[0] = rng.randrange(1, F.q)
    return tuple(coeffs) + ((1,) if monic else (rng.randrange(1, F.q),))


# ---------------------------------------------------------------------------
# fields

def test_prime_power_validation():
    assert gf.prime_power(8) == (2, 3)
    assert gf.prime_power(81) == (3, 4)
    with pytest.raises(ValueError):
        gf.prime_power(6)
    with pytest.raises(ValueError):
        Field(12)
    with pytest.raises(ValueError):
        Field(128)  # over the table cap


def test_gf4_structure():
    F = Field(4)
    assert F.modulus == (1, 1, 1)
    assert F.zeta == 2
    # zeta^2 = zeta + 1 under the modulus z^2 + z + 1
    assert F.mul(2, 2) == 3


def test_field_is_interned():
    assert Field(9) is Field(9)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 64, 81])
def test_field_axioms_sampled(q):
    F = Field(q)
    rng = random.Random(q)
    for _ in range(40):
        a, b, c = (rng.randrange(q) for _ in range(3))
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
        # Frobenius is an additive and multiplicative map
        assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
        assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))
        assert F.frobenius(a, F.e) == a


@pytest.mark.parametrize("q,zeta", [(2, 1), (3, 2), (5, 2), (7, 3)])
def test_least_primitive_prime_fields(q, zeta):
    assert Field(q).zeta == zeta


def test_zeta_order_and_dlog():
    for q in (4, 5, 8, 9, 27):
        F = Field(q)
        powers = set()
        x = 1
        for _ in range(q - 1):
            powers.add(x)
            x = F.mul(x, F.zeta)
        assert len(powers) == q - 1
        assert F.dlog[4 if q == 5 else F.zeta] == (2 if q == 5 else 1)


def test_inversion_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        Field(5).inv(0)


# ---------------------------------------------------------------------------
# polynomials

@pytest.mark.parametrize("q", [2, 3, 4, 9])
def test_pdivmod_roundtrip(q):
    F = Field(q)
    rng = random.Random(100 + q)
    for _ in range(60):
        a = pnorm(tuple(rng.randrange(q) for _ in range(rng.randrange(1, 8))))
        b = pnorm(tuple(rng.randrange(q) for _ in range(rng.randrange(1, 5))))
        if not b:
            continue
        quot, rem = pdivmod(F, a, b)
        assert pnorm(gf.padd(F, pmul(F, quot, b), rem)) == pnorm(a)
        assert pdeg(rem) < pdeg(b)


def test_gcd_divides_both():
    F = Field(3)
    rng = random.Random(7)
    for _ in range(40):
        a = rand_poly(rng, F, rng.randrange(1, 5))
        b = rand_poly(rng, F, rng.randrange(1, 5))
        g = pgcd(F, a, b)
        assert not pmod(F, a, g) and not pmod(F, b, g)
        assert g[-1] == 1  # monic


def test_irreducible_cubics_over_gf2():
    F = Field(2)
    assert irreducibles(F, 3) == ((1, 0, 1, 1), (1, 1, 0, 1))
    assert count_irreducibles("N", 2, 3) == 2


def test_is_irreducible_degree4_gf2():
    F = Field(2)
    assert is_irreducible(F, (1, 1, 0, 0, 1))  # z^4 + z + 1
    assert not is_irreducible(F, (1, 0, 0, 0, 1))  # (z+1)^4


# ---------------------------------------------------------------------------
# small-degree factor sieve

def test_sieve_known_cases():
    F2 = Field(2)
    f = pmul(F2, (1, 1, 1), (1, 1, 0, 1))  # (z^2+z+1)(z^3+z+1)
    assert not has_small_degree_factor(F2, f, 1)
    assert has_small_degree_factor(F2, f, 2)
    assert has_small_degree_factor(F2, f, 3)
    assert not has_small_degree_factor(F2, (1, 1, 0, 0, 1), 3)  # irreducible quartic
    F5 = Field(5)
    g = pmul(F5, (3, 1), (2, 1))  # (z-2)(z-3)
    assert has_small_degree_factor(F5, g, 1)
    with pytest.raises(ValueError):
        has_small_degree_factor(F5, g, 0)


def test_sieve_agrees_with_trial_division():
    # 10^4 random samples drawn across q <= 5, deg <= 12, t <= 4.
    rng = random.Random(2024)
    fields = [Field(q) for q in (2, 3, 4, 5)]
    for _ in range(10_000):
        F = rng.choice(fields)
        deg = rng.randrange(1, 13)
        t = rng.randrange(1, 5)
        f = rand_poly(rng, F, deg)
        oracle = any(
            not pmod(F, f, g)
            for d in range(1, min(t, deg) + 1)
            for g in irreducibles(F, d)
        ) or t >= deg
        assert has_small_degree_factor(F, f, t) == oracle


# ---------------------------------------------------------------------------
# conjugations

def test_star_example_gf5():
    F = Field(5)
    assert conjugate_star(F, (3, 1)) == (2, 1)  # z - 2  ->  z - 3


@pytest.mark.parametrize("q", [3, 4, 5, 9])
def test_star_involution_and_irreducibility(q):
    F = Field(q)
    rng = random.Random(q * 11)
    for _ in range(40):
        f = rand_poly(rng, F, rng.randrange(1, 5), nonzero_const=True)
        assert conjugate_star(F, conjugate_star(F, f)) == pmonic(F, f)
    for f in irreducibles(F, 2):
        if f[0]:
            assert is_irreducible(F, conjugate_star(F, f))


def test_star_needs_nonzero_constant():
    with pytest.raises(ValueError):
        conjugate_star(Field(2), (0, 1))


def test_tilde_fixes_all_linears_over_gf4():
    # Every monic linear z - a with a != 0 satisfies phi = tilde(phi) here,
    # consistent with the q + 1 count of degree-1 fixed polynomials.
    F = Field(4)
    for a in F.units():
        f = (F.neg(a), 1)
        assert conjugate_tilde(F, 2, f) == f


def test_tilde_involution_gf9():
    F = Field(9)
    rng = random.Random(5)
    for _ in range(60):
        f = rand_poly(rng, F, rng.randrange(1, 5), nonzero_const=True)
        assert conjugate_tilde(F, 3, conjugate_tilde(F, 3, f)) == pmonic(F, f)


def test_tilde_root_map():
    # Roots of tilde(f) are the (-q0)-th powers of the roots of f.
    F = Field(9)
    for f in irreducibles(F, 1):
        if not f[0]:
            continue
        root = F.neg(f[0])
        troot = F.pow(F.inv(root), 3)
        g = conjugate_tilde(F, 3, f)
        assert gf.peval(F, g, troot) == 0


# ---------------------------------------------------------------------------
# residues

def test_det_residue_linear():
    F = Field(5)
    # r(z - a) = dlog(a): the sign (-1)^1 cancels the negated constant.
    for a in F.units():
        assert det_residue(F, (F.neg(a), 1)) == F.dlog[a]
    with pytest.raises(ValueError):
        det_residue(F, (0, 1))


def test_residue_class_counts_gf4_gf5():
    assert residue_class_counts(Field(4), 1) == {(1, 0): 1, (1, 1): 1, (1, 2): 1}
    counts5 = residue_class_counts(Field(5), 2)
    assert counts5[(2, 0)] == 2 and counts5[(2, 2)] == 2
    assert counts5[(2, 1)] == 3 and counts5[(2, 3)] == 3
    assert sum(v for (j, _), v in counts5.items() if j == 2) == 10


def test_unitary_residue_in_subgroup():
    F = Field(9)
    for d in (1, 2):
        for f in irreducibles(F, d):
            if f[0]:
                assert 0 <= unitary_residue(F, 3, f) <= 3


# ---------------------------------------------------------------------------
# counting

def test_small_degree_count_formulas():
    assert count_irreducibles("N", 5, 1) == 4  # q - 1
    assert count_irreducibles("Mstar", 5, 1) == 1  # (q-3)/2 at q = 5
    assert count_irreducibles("Ntilde", 2, 1) == 3  # q + 1 at q = 2
    assert count_irreducibles("Mtilde", 2, 1) == 0  # (q^2-q-2)/2 at q = 2
    assert count_irreducibles("Mtilde", 3, 1) == 2


def test_nstar_odd_degrees_vanish():
    for q in (2, 3, 4, 5):
        for j in (3, 5):
            assert count_irreducibles("Nstar", q, j) == 0
        assert count_irreducibles("Nstar", q, 1) == (2 if q % 2 else 1)


def test_ntilde_even_degrees_vanish():
    for q in (2, 3):
        for j in (2, 4, 6):
            assert count_formula("Ntilde", q, j) == 0
            if (q * q) ** j <= gf.DEFAULT_ENUM_CAP:
                assert count_enumerated("Ntilde", q, j) == 0


def test_self_conjugate_quadratic_over_gf3():
    F = Field(3)
    fixed = [f for f in irreducibles(F, 2) if conjugate_star(F, f) == f]
    assert fixed == [(1, 0, 1)]  # z^2 + 1


FORMULA_VS_ENUM = [
    ("N", q, j)
    for q in (2, 3, 4, 5, 7, 8, 9, 16, 25, 27)
    for j in range(1, 7)
    if q**j <= gf.DEFAULT_ENUM_CAP
] + [
    (fam, q, j)
    for fam in ("Nstar", "Mstar")
    for q in (2, 3, 4, 5, 7, 8, 9)
    for j in range(1, 7)
    if q**j <= gf.DEFAULT_ENUM_CAP
] + [
    (fam, q, j)
    for fam in ("Ntilde", "Mtilde")
    for q in (2, 3, 4, 5, 7)
    for j in range(1, 5)
    if (q * q) ** j <= gf.DEFAULT_ENUM_CAP
]


@pytest.mark.parametrize("family,q,j", FORMULA_VS_ENUM)
def test_count_formula_matches_enumeration(family, q, j):
    assert count_formula(family, q, j) == count_enumerated(family, q, j)


def test_pair_counts_consistent():
    for q in (2, 3, 4, 5):
        for j in range(1, 5):
            n = count_formula("N", q, j)
            assert n == count_formula("Nstar", q, j) + 2 * count_formula("Mstar", q, j)
            n2 = count_formula("N", q * q, j)
            assert n2 == count_formula("Ntilde", q, j) + 2 * count_formula("Mtilde", q, j)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_degree_partition_identity(q):
    # sum over d | J of d * (number of monic irreducibles of degree d,
    # z included) recovers q^J.
    for J in range(1, 7):
        total = sum(
            d * count_monic_irreducible(q, d) for d in range(1, J + 1) if J % d == 0
        )
        assert total == q**J


def test_count_table_provenance():
    table = gf.CountTable.build("Ntilde", 9, 3)
    assert table.provenance[1] == "enumeration"
    assert table.provenance[3] == "formula"
    assert table[1] == count_formula("Ntilde", 9, 1) == 10


def test_enumeration_cap_enforced():
    with pytest.raises(ValueError):
        count_enumerated("Ntilde", 9, 3)
