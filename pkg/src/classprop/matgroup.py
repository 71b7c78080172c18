"""Matrix groups over small finite fields by explicit enumeration.

Matrices are flat row-major tuples of field codes, so they hash and compare
cheaply.  Groups are built by breadth-first closure from hard-coded generator
seeds; the element count is checked against the classical order formula, and
when a seed undergenerates (a real phenomenon: the 4-dimensional plus-type
orthogonal group over GF(2) is not generated by its reflections) the builder
deterministically completes the seed from a pool of form-preserving candidates
until the order matches.

Everything downstream (actions, fixed points, the element subsets defined by
characteristic-polynomial conditions) works on the enumerated tables.
"""

from __future__ import annotations

import itertools
import os
import pickle
from dataclasses import dataclass

from .gf import (
    Field,
    has_small_degree_factor,
    is_irreducible,
    pdivmod,
    pmul,
    pnorm,
)

DEFAULT_GROUP_CAP = 20_000_000
DEFAULT_ACTION_CAP = 2_000_000

CACHE_ENV = "CLASSPROP_CACHE"
_CACHE_LAYOUT = "matgroup-cache-1"


class ResourceCapExceeded(Exception):
    """An enumeration grew past its configured cap."""


# ---------------------------------------------------------------------------
# Matrix spaces.

_SPACE_CACHE = {}


class MatSpace:
    """Square matrices of size n over GF(q), as flat row-major code tuples."""

    def __new__(cls, n, q):
        key = (n, q)
        sp = _SPACE_CACHE.get(key)
        if sp is None:
            sp = super().__new__(cls)
            sp._init(n, q)
            _SPACE_CACHE[key] = sp
        return sp

    def _init(self, n, q):
        self.n = n
        self.F = Field(q)
        self.q = q
        self.identity = tuple(
            1 if i == j else 0 for i in range(n) for j in range(n)
        )

    def from_rows(self, rows):
        return tuple(x for row in rows for x in row)

    def rows(self, a):
        n = self.n
        return [list(a[i * n : (i + 1) * n]) for i in range(n)]

    def entry(self, a, i, j):
        return a[i * self.n + j]

    def mul(self, a, b):
        n, F = self.n, self.F
        add_t, mul_t = F.add_t, F.mul_t
        out = []
        for i in range(n):
            arow = a[i * n : (i + 1) * n]
            for j in range(n):
                acc = 0
                for k in range(n):
                    x = arow[k]
                    if x:
                        acc = add_t[acc][mul_t[x][b[k * n + j]]]
                out.append(acc)
        return tuple(out)

    def mat_vec(self, a, v):
        n, F = self.n, self.F
        add_t, mul_t = F.add_t, F.mul_t
        out = []
        for i in range(n):
            acc = 0
            base = i * n
            for k in range(n):
                x = a[base + k]
                if x:
                    acc = add_t[acc][mul_t[x][v[k]]]
            out.append(acc)
        return tuple(out)

    def add(self, a, b):
        add_t = self.F.add_t
        return tuple(add_t[x][y] for x, y in zip(a, b))

    def sub(self, a, b):
        F = self.F
        return tuple(F.add_t[x][F.neg_t[y]] for x, y in zip(a, b))

    def scalar(self, c):
        return tuple(
            c if i == j else 0 for i in range(self.n) for j in range(self.n)
        )

    def transpose(self, a):
        n = self.n
        return tuple(a[j * n + i] for i in range(n) for j in range(n))

    def conj_transpose(self, a, q0):
        """Transpose with entries raised to the q0-th power."""
        n, F = self.n, self.F
        return tuple(F.pow(a[j * n + i], q0) for i in range(n) for j in range(n))

    def pow(self, a, k):
        if k < 0:
            return self.pow(self.inv(a), -k)
        result = self.identity
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def _elim(self, rows, ncols, *, reduced=True):
        """In-place row echelon over the first ncols columns; returns pivots."""
        F = self.F
        pivots = []
        r = 0
        for c in range(ncols):
            pr = None
            for i in range(r, len(rows)):
                if rows[i][c]:
                    pr = i
                    break
            if pr is None:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            inv = F.inv_t[rows[r][c]]
            if inv != 1:
                mrow = F.mul_t[inv]
                rows[r] = [mrow[x] for x in rows[r]]
            row_r = rows[r]
            rng = range(len(rows)) if reduced else range(r + 1, len(rows))
            for i in rng:
                if i != r and rows[i][c]:
                    mrow = F.mul_t[rows[i][c]]
                    neg = F.neg_t
                    add = F.add_t
                    rows[i] = [
                        add[x][neg[mrow[y]]] for x, y in zip(rows[i], row_r)
                    ]
            pivots.append(c)
            r += 1
            if r == len(rows):
                break
        return pivots

    def rank(self, a):
        rows = self.rows(a)
        return len(self._elim(rows, self.n, reduced=False))

    def det(self, a):
        n, F = self.n, self.F
        rows = self.rows(a)
        det = 1
        for c in range(n):
            pr = None
            for i in range(c, n):
                if rows[i][c]:
                    pr = i
                    break
            if pr is None:
                return 0
            if pr != c:
                rows[c], rows[pr] = rows[pr], rows[c]
                det = F.neg_t[det]
            piv = rows[c][c]
            det = F.mul(det, piv)
            mrow = F.mul_t[F.inv_t[piv]]
            rowc = [mrow[x] for x in rows[c]]
            rows[c] = rowc
            for i in range(c + 1, n):
                if rows[i][c]:
                    mf = F.mul_t[rows[i][c]]
                    neg = F.neg_t
                    add = F.add_t
                    rows[i] = [add[x][neg[mf[y]]] for x, y in zip(rows[i], rowc)]
        return det

    def inv(self, a):
        n = self.n
        rows = [
            list(a[i * n : (i + 1) * n])
            + [1 if j == i else 0 for j in range(n)]
            for i in range(n)
        ]
        pivots = self._elim(rows, n)
        if len(pivots) < n:
            raise ZeroDivisionError("matrix is singular")
        return tuple(rows[i][n + j] for i in range(n) for j in range(n))

    def kernel_basis(self, a):
        """Basis of the right null space, as vectors."""
        n, F = self.n, self.F
        rows = self.rows(a)
        pivots = self._elim(rows, n)
        free = [c for c in range(n) if c not in pivots]
        basis = []
        for fc in free:
            v = [0] * n
            v[fc] = 1
            for r, pc in enumerate(pivots):
                v[pc] = F.neg_t[rows[r][fc]]
            basis.append(tuple(v))
        return basis

    def solve(self, a, b):
        """One solution x of a x = b, or None."""
        n = self.n
        rows = [list(a[i * n : (i + 1) * n]) + [b[i]] for i in range(n)]
        pivots = self._elim(rows, n)
        for r in range(len(pivots), n):
            if rows[r][n]:
                return None
        x = [0] * n
        for r, pc in enumerate(pivots):
            x[pc] = rows[r][n]
        return tuple(x)

    def charpoly(self, a):
        """Monic characteristic polynomial, constant term first.

        Similarity reduction to upper Hessenberg form (each row operation is
        balanced by the inverse column operation), then the leading-minor
        recurrence on the Hessenberg matrix.
        """
        n, F = self.n, self.F
        H = self.rows(a)
        for c in range(n - 2):
            pr = None
            for i in range(c + 1, n):
                if H[i][c]:
                    pr = i
                    break
            if pr is None:
                continue
            if pr != c + 1:
                H[c + 1], H[pr] = H[pr], H[c + 1]
                for row in H:
                    row[c + 1], row[pr] = row[pr], row[c + 1]
            inv = F.inv_t[H[c + 1][c]]
            for i in range(c + 2, n):
                if H[i][c]:
                    f = F.mul(H[i][c], inv)
                    mf = F.mul_t[f]
                    neg, add = F.neg_t, F.add_t
                    H[i] = [add[x][neg[mf[y]]] for x, y in zip(H[i], H[c + 1])]
                    for row in H:
                        row[c + 1] = add[row[c + 1]][mf[row[i]]]
        polys = [(1,)]
        for k in range(1, n + 1):
            zpoly = (F.neg_t[H[k - 1][k - 1]], 1)
            p = list(pmul(F, zpoly, polys[k - 1]))
            coef = 1
            for m in range(1, k):
                coef = F.mul(coef, H[k - m][k - m - 1])
                if coef == 0:
                    break
                term = F.mul(coef, H[k - 1 - m][k - 1])
                if term:
                    neg_term = F.neg_t[term]
                    for i, x in enumerate(polys[k - 1 - m]):
                        p[i] = F.add(p[i], F.mul(neg_term, x))
            polys.append(tuple(p))
        out = polys[n]
        if len(out) < n + 1:
            out = out + (0,) * (n + 1 - len(out))
        return out

    def charpoly_minors(self, a):
        """Characteristic polynomial via sums of principal minors (oracle)."""
        n, F = self.n, self.F
        coeffs = [0] * (n + 1)
        coeffs[n] = 1
        for k in range(1, n + 1):
            total = 0
            for sel in itertools.combinations(range(n), k):
                sub = tuple(a[i * n + j] for i in sel for j in sel)
                total = F.add(total, MatSpace(k, self.q).det(sub))
            coeffs[n - k] = F.mul(F.minus_one_to(k), total)
        return tuple(coeffs)

    def vec_code(self, v):
        code = 0
        for x in reversed(v):
            code = code * self.q + x
        return code

    def code_vec(self, code):
        v = []
        for _ in range(self.n):
            v.append(code % self.q)
            code //= self.q
        return tuple(v)

    def code_add(self, c1, c2):
        if self.q == 2:
            return c1 ^ c2
        add = self.F.add_t
        q = self.q
        out = 0
        mult = 1
        while c1 or c2:
            out += add[c1 % q][c2 % q] * mult
            c1 //= q
            c2 //= q
            mult *= q
        return out

    def all_vector_images(self, g):
        """List L with L[code(v)] = code(g v), built digit by digit."""
        n, q, F = self.n, self.q, self.F
        cols = []
        for j in range(n):
            col = tuple(g[i * n + j] for i in range(n))
            cols.append(
                [self.vec_code(tuple(F.mul(c, x) for x in col)) for c in range(q)]
            )
        images = [0] * (q**n)
        stride = 1
        count = 1
        for j in range(n):
            colj = cols[j]
            for c in range(1, q):
                inc = colj[c]
                base = c * stride
                for idx in range(count):
                    images[base + idx] = self.code_add(images[idx], inc)
            stride *= q
            count *= q
        return images


# ---------------------------------------------------------------------------
# Forms.

@dataclass(frozen=True)
class FormSpec:
    kind: str  # none | symplectic | unitary | quadratic
    n: int
    q: int  # field the matrix entries live in
    gram: tuple | None = None
    quad: tuple | None = None  # upper-triangular flat coefficients
    eps: str | None = None  # + | - | o
    q0: int | None = None  # unitary only: q = q0^2

    def bilinear(self, space, u, v):
        """u^T Gram v, conjugating v entrywise in the unitary case."""
        F = space.F
        if self.kind == "unitary":
            v = tuple(F.pow(x, self.q0) for x in v)
        w = space.mat_vec(self.gram, v)
        acc = 0
        for x, y in zip(u, w):
            acc = F.add(acc, F.mul(x, y))
        return acc

    def quad_value(self, space, v):
        if self.kind != "quadratic":
            raise ValueError("not a quadratic form")
        F = space.F
        n = self.n
        acc = 0
        for i in range(n):
            if not v[i]:
                continue
            for j in range(i, n):
                c = self.quad[i * n + j]
                if c and v[j]:
                    acc = F.add(acc, F.mul(c, F.mul(v[i], v[j])))
        return acc


def _quad_to_gram(space, quad):
    """Polarized bilinear form B(x,y) = Q(x+y) - Q(x) - Q(y)."""
    n, F = space.n, space.F
    gram = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                c = quad[i * n + i]
                gram[i][j] = F.add(c, c)
            else:
                c = quad[i * n + j] if i < j else quad[j * n + i]
                gram[i][j] = c
    return space.from_rows(gram)


def _char2_irreducible_const(F):
    for d in range(1, F.q):
        if is_irreducible(F, (d, 1, 1)):
            return d
    raise AssertionError("no irreducible z^2+z+d found")


def standard_form(family, n, q):
    """The fixed reference form for each classical family."""
    if family in ("GL", "SL"):
        return FormSpec("none", n, q)
    if family in ("GU", "SU"):
        space = MatSpace(n, q * q)
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            rows[i][n - 1 - i] = 1
        return FormSpec("unitary", n, q * q, gram=space.from_rows(rows), q0=q)
    space = MatSpace(n, q)
    F = space.F
    if family == "Sp":
        if n % 2:
            raise ValueError("symplectic groups need even dimension")
        rows = [[0] * n for _ in range(n)]
        for i in range(0, n, 2):
            rows[i][i + 1] = 1
            rows[i + 1][i] = F.neg_t[1]
        return FormSpec("symplectic", n, q, gram=space.from_rows(rows))
    if family.startswith(("O", "SO", "Omega")):
        eps = "+" if family.endswith("+") else "-" if family.endswith("-") else "o"
        if eps != "o" and n % 2:
            raise ValueError("signed orthogonal types need even dimension")
        if eps == "o" and n % 2 == 0:
            raise ValueError("odd-dimensional orthogonal groups need odd n")
        if eps == "o" and q % 2 == 0:
            raise ValueError("odd-dimensional orthogonal groups here need odd q")
        quad = [[0] * n for _ in range(n)]
        pairs = n // 2 if eps == "+" else n // 2 - 1 if eps == "-" else (n - 1) // 2
        for i in range(pairs):
            quad[2 * i][2 * i + 1] = 1
        if eps == "-":
            i = n - 2
            if q % 2 == 0:
                d = _char2_irreducible_const(F)
                quad[i][i] = 1
                quad[i][i + 1] = 1
                quad[i + 1][i + 1] = d
            else:
                # x^2 - nu y^2 with nu a non-square is anisotropic
                nu = next(c for c in range(1, q) if F.dlog[c] % 2 == 1)
                quad[i][i] = 1
                quad[i + 1][i + 1] = F.neg_t[nu]
        if eps == "o":
            quad[n - 1][n - 1] = 1
        quadt = space.from_rows(quad)
        form = FormSpec(
            "quadratic", n, q, gram=_quad_to_gram(space, quadt), quad=quadt,
            eps=eps,
        )
        _validate_quadratic_type(space, form)
        return form
    raise ValueError(f"unknown family {family!r}")


def singular_vector_count(space, form):
    return sum(
        1
        for code in range(1, space.q**space.n)
        if form.quad_value(space, space.code_vec(code)) == 0
    )


def _validate_quadratic_type(space, form):
    n, q = form.n, form.q
    if n % 2 == 0:
        m = n // 2
        want = (
            (q ** (m - 1) + 1) * (q**m - 1)
            if form.eps == "+"
            else (q ** (m - 1) - 1) * (q**m + 1)
        )
        have = singular_vector_count(space, form)
        if have != want:
            raise AssertionError(
                f"type {form.eps} form has {have} singular vectors, wanted {want}"
            )
    if q % 2 and space.rank(form.gram) != n:
        raise AssertionError("polarized form is degenerate")


def preserves_form(space, form, g):
    if form.kind == "none":
        return space.det(g) != 0
    if form.kind == "symplectic":
        gt = space.transpose(g)
        return space.mul(space.mul(gt, form.gram), g) == form.gram
    if form.kind == "unitary":
        gstar = space.conj_transpose(g, form.q0)
        return space.mul(space.mul(gstar, form.gram), g) == form.gram
    # quadratic: the bilinear check plus Q on basis vectors suffices, since
    # Q(u+v) = Q(u) + Q(v) + B(u,v)
    gt = space.transpose(g)
    if space.mul(space.mul(gt, form.gram), g) != form.gram:
        return False
    n = space.n
    for i in range(n):
        e = tuple(1 if k == i else 0 for k in range(n))
        if form.quad_value(space, space.mat_vec(g, e)) != form.quad_value(space, e):
            return False
    return True


# ---------------------------------------------------------------------------
# Orders.

def _prod(it):
    out = 1
    for x in it:
        out *= x
    return out


def _ambient_of(family):
    if family.startswith("SO"):
        return "O" + family[2:]
    if family.startswith("Omega"):
        return "O" + family[5:]
    return family


def group_order(family, n, q):
    if family == "GL":
        return _prod(q**n - q**i for i in range(n))
    if family == "SL":
        return group_order("GL", n, q) // (q - 1)
    if family == "Sp":
        m = n // 2
        return q ** (m * m) * _prod(q ** (2 * i) - 1 for i in range(1, m + 1))
    if family == "GU":
        return q ** (n * (n - 1) // 2) * _prod(
            q**i - (-1) ** i for i in range(1, n + 1)
        )
    if family == "SU":
        return group_order("GU", n, q) // (q + 1)
    if family in ("O+", "O-"):
        m = n // 2
        e = 1 if family == "O+" else -1
        return (
            2
            * q ** (m * (m - 1))
            * (q**m - e)
            * _prod(q ** (2 * i) - 1 for i in range(1, m))
        )
    if family == "O":
        m = (n - 1) // 2
        return 2 * q ** (m * m) * _prod(q ** (2 * i) - 1 for i in range(1, m + 1))
    if family in ("SO+", "SO-", "SO", "Omega+", "Omega-"):
        return group_order(_ambient_of(family), n, q) // 2
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# Generators and candidate pools.

def _gl_generators(space):
    n, F = space.n, space.F
    if n == 1:
        return [(F.zeta,)] if space.q > 2 else [(1,)]
    gens = []
    cyc = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        cyc[i + 1][i] = 1
    cyc[0][n - 1] = 1
    gens.append(space.from_rows(cyc))
    t = space.rows(space.identity)
    t[0][1] = 1
    gens.append(space.from_rows(t))
    if space.q > 2:
        d = space.rows(space.identity)
        d[0][0] = F.zeta
        gens.append(space.from_rows(d))
    return gens


def _sl_generators(space):
    n, F = space.n, space.F
    if n == 1:
        return [space.identity]
    gens = []
    lams = [1] if space.q <= 3 else [1, F.zeta]
    for c in lams:
        t = space.rows(space.identity)
        t[0][1] = c
        gens.append(space.from_rows(t))
        t = space.rows(space.identity)
        t[1][0] = c
        gens.append(space.from_rows(t))
    if n > 2:
        cyc = [[0] * n for _ in range(n)]
        for i in range(n - 1):
            cyc[i + 1][i] = 1
        cyc[0][n - 1] = F.minus_one_to(n - 1)
        gens.append(space.from_rows(cyc))
    return gens


def _cols_to_mat(n, cols):
    return tuple(cols[j][i] for i in range(n) for j in range(n))


def _symplectic_transvection(space, form, v, lam):
    """x -> x + lam B(x, v) v."""
    n, F = space.n, space.F
    cols = []
    for j in range(n):
        e = tuple(1 if k == j else 0 for k in range(n))
        c = F.mul(lam, form.bilinear(space, e, v))
        cols.append(tuple(F.add(e[i], F.mul(c, v[i])) for i in range(n)))
    return _cols_to_mat(n, cols)


def _sp_candidates(space, form):
    n, q = space.n, space.q
    lams = [1] if q == 2 else [1, space.F.zeta]
    for code in range(1, q**n):
        v = space.code_vec(code)
        for lam in lams:
            yield _symplectic_transvection(space, form, v, lam)


def _reflection(space, form, v):
    """x -> x - (B(x,v)/Q(v)) v, the reflection fixing the perp of v."""
    n, F = space.n, space.F
    inv = F.inv_t[form.quad_value(space, v)]
    cols = []
    for j in range(n):
        e = tuple(1 if k == j else 0 for k in range(n))
        c = F.mul(form.bilinear(space, e, v), inv)
        cols.append(tuple(F.sub(e[i], F.mul(c, v[i])) for i in range(n)))
    return _cols_to_mat(n, cols)


def _orth_candidates(space, form):
    seen = set()
    for code in range(1, space.q**space.n):
        v = space.code_vec(code)
        if form.quad_value(space, v) == 0:
            continue
        r = _reflection(space, form, v)
        if r not in seen:
            seen.add(r)
            yield r


def _unitary_candidates(space, form):
    """Unitary transvections, torus elements, the antidiagonal flip."""
    n, F = space.n, space.F
    q0 = form.q0
    trace_zero = [c for c in range(1, F.q) if F.add(c, F.pow(c, q0)) == 0]
    for code in range(1, F.q**n):
        v = space.code_vec(code)
        if form.bilinear(space, v, v) != 0:
            continue
        for c in trace_zero:
            cols = []
            for j in range(n):
                e = tuple(1 if k == j else 0 for k in range(n))
                b = F.mul(c, form.bilinear(space, e, v))
                cols.append(tuple(F.add(e[i], F.mul(b, v[i])) for i in range(n)))
            yield _cols_to_mat(n, cols)
    if n >= 2:
        for a in range(2, F.q):
            d = space.rows(space.identity)
            d[0][0] = a
            d[n - 1][n - 1] = F.inv(F.pow(a, q0))
            yield space.from_rows(d)
        flip = [[0] * n for _ in range(n)]
        for i in range(n):
            flip[i][n - 1 - i] = 1
        yield space.from_rows(flip)
    for c in range(1, F.q):
        if F.mul(c, F.pow(c, q0)) == 1:
            yield space.scalar(c)


def _full_scan_candidates(space, form):
    n, q = space.n, space.F.q
    total = q ** (n * n)
    if total > 500_000:
        return
    for code in range(total):
        g = []
        c = code
        for _ in range(n * n):
            g.append(c % q)
            c //= q
        g = tuple(g)
        if preserves_form(space, form, g):
            yield g


def _seed_and_pool(family, space, form):
    if family == "GL":
        return _gl_generators(space), iter(())
    if family == "SL":
        return _sl_generators(space), iter(())
    if family == "Sp":
        pool = _sp_candidates(space, form)
        return list(itertools.islice(pool, min(4, 2 * space.n))), pool
    if family in ("GU", "SU"):
        return [], _unitary_candidates(space, form)
    if family in ("O+", "O-", "O"):
        pool = _orth_candidates(space, form)
        return [next(pool)], pool
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# Closure and group tables.

def bfs_closure(space, gens, cap=DEFAULT_GROUP_CAP):
    """All products of the generators, breadth first from the identity."""
    seen = {space.identity: 0}
    elements = [space.identity]
    frontier = [space.identity]
    mul = space.mul
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                p = mul(g, h)
                if p not in seen:
                    if len(elements) >= cap:
                        raise ResourceCapExceeded(
                            f"group closure exceeded cap {cap}"
                        )
                    seen[p] = len(elements)
                    elements.append(p)
                    nxt.append(p)
        frontier = nxt
    return elements, seen


@dataclass
class GroupTable:
    family: str
    n: int
    q: int  # defining q of the family label (entries in GF(q^2) for GU/SU)
    space: MatSpace
    form: FormSpec
    elements: tuple
    index: dict
    labels: tuple
    gens: tuple
    label_kind: str  # det | dickson | trivial

    def __len__(self):
        return len(self.elements)

    def order(self):
        return len(self.elements)

    def coset_indices(self, label):
        return [i for i, l in enumerate(self.labels) if l == label]

    def label_values(self):
        return sorted(set(self.labels))

    def label_of(self, g):
        return self.labels[self.index[g]]


def _det_label(space, g, q):
    F = space.F
    return F.dlog[space.det(g)] % (q - 1) if q > 2 else 0


def _gu_label(space, g, q0):
    F = space.F
    k = F.dlog[space.det(g)]
    step = q0 - 1
    if step and k % step:
        raise AssertionError("unitary determinant outside the norm-one subgroup")
    return (k // step) % (q0 + 1) if step else k % (q0 + 1)


def _dickson_label(space, g):
    return space.rank(space.sub(g, space.identity)) % 2


def _make_labels(family, space, elements, q):
    if family in ("GL", "SL"):
        return tuple(_det_label(space, g, q) for g in elements), "det"
    if family in ("GU", "SU"):
        return tuple(_gu_label(space, g, q) for g in elements), "det"
    if family == "Sp":
        return tuple(0 for _ in elements), "trivial"
    if q % 2 == 0:
        return tuple(_dickson_label(space, g) for g in elements), "dickson"
    return tuple(0 if space.det(g) == 1 else 1 for g in elements), "det"


_TABLE_MEMO = {}


def _cache_path(family, n, q):
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    os.makedirs(root, exist_ok=True)
    safe = family.replace("+", "p").replace("-", "m")
    return os.path.join(root, f"{_CACHE_LAYOUT}-{safe}{n}q{q}.pkl")


def build_group(family, n, q, cap=DEFAULT_GROUP_CAP):
    """Enumerate a classical group, validated against its order formula.

    family: GL, SL, Sp, GU, SU, O+, O-, O (odd dimension, odd q), SO+, SO-,
    SO (odd q), Omega+, Omega- (even q).  SO and Omega variants are the
    label-0 halves of their ambient orthogonal group.  For GU/SU the field
    argument is q0; matrices live over GF(q0^2).
    """
    if family.startswith("SO") and q % 2 == 0:
        raise ValueError("at even q use the Omega labels")
    if family.startswith("Omega") and q % 2 == 1:
        raise ValueError("the odd-q Omega split is not computed here")
    ambient = _ambient_of(family)
    sub_select = family != ambient
    target = group_order(ambient, n, q)
    if target > cap:
        raise ResourceCapExceeded(
            f"{ambient}_{n}({q}) has order {target}, beyond cap {cap}"
        )
    memo_key = (family, n, q)
    if memo_key in _TABLE_MEMO:
        return _TABLE_MEMO[memo_key]

    path = _cache_path(ambient, n, q)
    if path and os.path.exists(path):
        with open(path, "rb") as fh:
            payload = pickle.load(fh)
        if payload.get("layout") == _CACHE_LAYOUT and payload["order"] == target:
            table = _table_from_payload(ambient, n, q, payload)
            if sub_select:
                table = _subtable(table, family)
            _TABLE_MEMO[memo_key] = table
            return table

    form = standard_form(ambient, n, q)
    space = MatSpace(n, q * q if ambient in ("GU", "SU") else q)

    def admissible(g):
        return ambient != "SU" or _gu_label(space, g, q) == 0

    seed, pool = _seed_and_pool(ambient, space, form)
    gens = [g for g in seed if admissible(g)]
    if gens:
        elements, index = bfs_closure(space, gens, cap)
    else:
        elements, index = [space.identity], {space.identity: 0}
    exhausted = False
    rounds = 0
    while len(elements) != target:
        nxt = None
        for cand in pool:
            if admissible(cand) and cand not in index:
                nxt = cand
                break
        if nxt is None:
            if exhausted:
                raise AssertionError(
                    f"generator completion failed for {ambient}_{n}({q}): "
                    f"got {len(elements)}, wanted {target}"
                )
            pool = _full_scan_candidates(space, form)
            exhausted = True
            continue
        gens.append(nxt)
        elements, index = bfs_closure(space, gens, cap)
        rounds += 1
        if rounds > 64:
            raise AssertionError("generator completion did not converge")
    for g in gens:
        if not preserves_form(space, form, g):
            raise AssertionError("generator does not preserve the form")
    labels, label_kind = _make_labels(ambient, space, elements, q)
    table = GroupTable(
        family=ambient,
        n=n,
        q=q,
        space=space,
        form=form,
        elements=tuple(elements),
        index=index,
        labels=labels,
        gens=tuple(gens),
        label_kind=label_kind,
    )
    if path:
        payload = {
            "layout": _CACHE_LAYOUT,
            "order": target,
            "elements": table.elements,
            "labels": table.labels,
            "gens": table.gens,
            "label_kind": label_kind,
        }
        tmp = path + ".tmp"
        with open(tmp, "wb") as fh:
            pickle.dump(payload, fh)
        os.replace(tmp, path)
    if sub_select:
        table = _subtable(table, family)
    _TABLE_MEMO[memo_key] = table
    return table


def _table_from_payload(family, n, q, payload):
    form = standard_form(family, n, q)
    space = MatSpace(n, q * q if family in ("GU", "SU") else q)
    elements = payload["elements"]
    return GroupTable(
        family=family,
        n=n,
        q=q,
        space=space,
        form=form,
        elements=elements,
        index={g: i for i, g in enumerate(elements)},
        labels=payload["labels"],
        gens=payload["gens"],
        label_kind=payload["label_kind"],
    )


def _subtable(table, family):
    keep = [i for i, l in enumerate(table.labels) if l == 0]
    elements = tuple(table.elements[i] for i in keep)
    want = group_order(family, table.n, table.q)
    if len(elements) != want:
        raise AssertionError(
            f"{family}: label-0 part has {len(elements)} elements, wanted {want}"
        )
    return GroupTable(
        family=family,
        n=table.n,
        q=table.q,
        space=table.space,
        form=table.form,
        elements=elements,
        index={g: i for i, g in enumerate(elements)},
        labels=tuple(0 for _ in elements),
        gens=table.gens,
        label_kind=table.label_kind,
    )


def subgroup_closure(space, gens, cap=DEFAULT_GROUP_CAP, stop_over=None):
    """Closure of arbitrary invertible generators.

    stop_over: if the closure exceeds this size, return None early.  The
    early exit is a cheap "generates something large" signal.
    """
    for g in gens:
        if space.det(g) == 0:
            raise ValueError("generators must be invertible")
    seen = {space.identity: 0}
    elements = [space.identity]
    frontier = [space.identity]
    mul = space.mul
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                p = mul(g, h)
                if p not in seen:
                    if stop_over is not None and len(elements) >= stop_over:
                        return None
                    if len(elements) >= cap:
                        raise ResourceCapExceeded(
                            f"subgroup closure exceeded cap {cap}"
                        )
                    seen[p] = len(elements)
                    elements.append(p)
                    nxt.append(p)
        frontier = nxt
    return elements


# ---------------------------------------------------------------------------
# Samplers.

def random_gl(n, q, rng):
    """Uniform element of GL_n(q) by rejection sampling."""
    space = MatSpace(n, q)
    while True:
        g = tuple(rng.randrange(q) for _ in range(n * n))
        if space.det(g) != 0:
            return g


def random_coset_gl(n, q, det_class, rng):
    """Uniform element of the det = zeta^det_class coset of SL_n(q).

    A uniform GL element lands in some coset; a fixed diagonal correction
    depending only on that coset moves it bijectively into the requested one,
    so the result stays uniform.
    """
    space = MatSpace(n, q)
    F = space.F
    g = random_gl(n, q, rng)
    if q == 2:
        return g
    have = F.dlog[space.det(g)] % (q - 1)
    shift = (det_class - have) % (q - 1)
    if shift:
        d = space.rows(space.identity)
        d[0][0] = F.exp[shift]
        g = space.mul(g, space.from_rows(d))
    return g


# ---------------------------------------------------------------------------
# Subspaces.

def gaussian_binomial(n, k, q):
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_vectors(space, basis):
    """Codes of every vector in the span of the basis."""
    F = space.F
    vecs = [(0,) * space.n]
    for b in basis:
        new = []
        for c in range(1, space.q):
            cb = tuple(F.mul(c, x) for x in b)
            for v in vecs:
                new.append(tuple(F.add(x, y) for x, y in zip(v, cb)))
        vecs.extend(new)
    return frozenset(space.vec_code(v) for v in vecs)


def rref_basis(space, vectors):
    """Canonical reduced-echelon basis for the span of the given vectors."""
    rows = [list(v) for v in vectors]
    space._elim(rows, space.n)
    return tuple(tuple(r) for r in rows if any(r))


def all_subspaces(space, k):
    """All k-dimensional subspaces as canonical echelon bases."""
    n, q = space.n, space.q
    out = []
    for pivots in itertools.combinations(range(n), k):
        free_positions = [
            (r, c)
            for r, p in enumerate(pivots)
            for c in range(p + 1, n)
            if c not in pivots
        ]
        for code in range(q ** len(free_positions)):
            rows = [[0] * n for _ in range(k)]
            for r, p in enumerate(pivots):
                rows[r][p] = 1
            c = code
            for r, cpos in free_positions:
                rows[r][cpos] = c % q
                c //= q
            out.append(tuple(tuple(r) for r in rows))
    assert len(out) == gaussian_binomial(n, k, q)
    return out


def perp_basis_dot(space, basis):
    """Perp of the span under the plain dot product, as a canonical basis."""
    n, F = space.n, space.F
    rows = [list(b) for b in basis]
    pivots = space._elim(rows, n)
    free = [c for c in range(n) if c not in pivots]
    out = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = F.neg_t[rows[r][fc]]
        out.append(tuple(v))
    return rref_basis(space, out)


def perp_basis_form(space, form, basis):
    """Perp of the span with respect to the form's bilinear part."""
    F = space.F
    rows = []
    for b in basis:
        if form.kind == "unitary":
            b = tuple(F.pow(x, form.q0) for x in b)
        rows.append(tuple(space.mat_vec(space.transpose(form.gram), b)))
    return perp_basis_dot(space, rows)


# ---------------------------------------------------------------------------
# Actions.

@dataclass(frozen=True)
class ActionSpec:
    kind: str  # subspace | flag | antiflag | quadratic_forms
    k: int = 1
    restrict: str = "any"  # any | totally_singular | nondegenerate | nonsingular


class _SubspaceClass:
    """All k-subspaces with their vector sets, indexed canonically."""

    def __init__(self, space, k):
        self.k = k
        self.bases = all_subspaces(space, k)
        self.vecsets = [subspace_vectors(space, b) for b in self.bases]
        self.index = {b: i for i, b in enumerate(self.bases)}

    def __len__(self):
        return len(self.bases)


class ActionTable:
    """Enumerated point set of one action.

    Subspace-like points are stored as indices into dimension classes, so a
    fixed-point scan reduces to per-class image computations plus one pass
    over the incidence pairs.
    """

    def __init__(self, space, form, spec, cap=DEFAULT_ACTION_CAP):
        self.space = space
        self.form = form
        self.spec = spec
        self.classes = {}
        self.points = []
        self._build()
        if len(self.points) > cap:
            raise ResourceCapExceeded("action point set exceeds cap")

    def _class(self, k):
        if k not in self.classes:
            self.classes[k] = _SubspaceClass(self.space, k)
        return self.classes[k]

    def _build(self):
        spec = self.spec
        n = self.space.n
        k = spec.k
        if spec.kind == "quadratic_forms":
            self._build_quadratic_forms()
            return
        if not 1 <= k <= n - 1:
            raise ValueError("need 1 <= k < n")
        if spec.kind == "subspace" and 2 * k > n:
            raise ValueError("subspace actions are for k <= n/2")
        small = self._class(k)
        keep = [
            i
            for i, b in enumerate(small.bases)
            if spec.restrict == "any" or self._classify(b) == spec.restrict
        ]
        if spec.kind == "subspace":
            self.points = keep
        elif spec.kind == "flag":
            big = self._class(n - k)
            for i in keep:
                ubasis = small.bases[i]
                for j, wv in enumerate(big.vecsets):
                    if all(self.space.vec_code(b) in wv for b in ubasis):
                        self.points.append((i, j))
        elif spec.kind == "antiflag":
            if 2 * k == n:
                vecsets = small.vecsets
                keepset = set(keep)
                for i in range(len(small.bases)):
                    if i not in keepset:
                        continue
                    for j in range(i + 1, len(small.bases)):
                        if len(vecsets[i] & vecsets[j]) == 1:
                            self.points.append((i, j))
            else:
                big = self._class(n - k)
                for i in keep:
                    uv = small.vecsets[i]
                    for j, wv in enumerate(big.vecsets):
                        if len(uv & wv) == 1:
                            self.points.append((i, j))
        else:
            raise ValueError(f"unknown action kind {spec.kind!r}")
        self._check_counts()

    def _classify(self, basis):
        space, form = self.space, self.form
        if form.kind == "none":
            return "any"
        k = len(basis)
        gram = tuple(form.bilinear(space, u, v) for u in basis for v in basis)
        r = MatSpace(k, space.q).rank(gram)
        if form.kind == "quadratic":
            basis_singular = all(form.quad_value(space, v) == 0 for v in basis)
            if k == 1:
                return "totally_singular" if basis_singular else "nonsingular"
            if basis_singular and r == 0:
                return "totally_singular"
        elif r == 0:
            return "totally_singular"
        if r == k:
            return "nondegenerate"
        return "degenerate"

    def _check_counts(self):
        spec = self.spec
        n, q, k = self.space.n, self.space.q, spec.k
        if spec.restrict != "any":
            return
        if spec.kind == "subspace":
            want = gaussian_binomial(n, k, q)
        elif spec.kind == "flag":
            want = gaussian_binomial(n, n - k, q) * gaussian_binomial(n - k, k, q)
        else:
            want = gaussian_binomial(n, k, q) * q ** (k * (n - k))
            if 2 * k == n:
                want //= 2
        assert len(self.points) == want, (spec, len(self.points), want)

    # -- quadratic forms under a symplectic group over GF(2) ----------------

    def _build_quadratic_forms(self):
        space, form = self.space, self.form
        if form.kind != "symplectic" or space.q != 2:
            raise ValueError(
                "quadratic-form points need a symplectic space over GF(2)"
            )
        n = space.n
        base_quad = [[0] * n for _ in range(n)]
        for i in range(0, n, 2):
            base_quad[i][i + 1] = 1
        self.base_quad = space.from_rows(base_quad)
        m = n // 2
        plus_count = 2 ** (n - 1) + 2 ** (m - 1)
        for code in range(2**n):
            v = space.code_vec(code)
            sing = self._translated_singulars(v)
            self.points.append((code, "+" if sing == plus_count else "-"))
        plus = sum(1 for _, e in self.points if e == "+")
        assert plus == plus_count

    def _translated_singulars(self, v):
        """Singular vectors of Q_v = Q_0 + B(., v), zero vector included."""
        space, form = self.space, self.form
        count = 0
        for code in range(2**space.n):
            x = space.code_vec(code)
            if _eval_quad(space, self.base_quad, x) == form.bilinear(space, x, v):
                count += 1
        return count

    def type_of_point(self, idx):
        if self.spec.kind != "quadratic_forms":
            raise ValueError("only quadratic-form points carry a type")
        return self.points[idx][1]

    def __len__(self):
        return len(self.points)


def enumerate_action(table_or_space, spec, form=None, cap=DEFAULT_ACTION_CAP):
    if isinstance(table_or_space, GroupTable):
        return ActionTable(table_or_space.space, table_or_space.form, spec, cap)
    if form is None:
        form = FormSpec("none", table_or_space.n, table_or_space.q)
    return ActionTable(table_or_space, form, spec, cap)


# ---------------------------------------------------------------------------
# Fixed points.

def _eval_quad(space, quad, v):
    n, F = space.n, space.F
    acc = 0
    for i in range(n):
        if v[i]:
            for j in range(i, n):
                c = quad[i * n + j]
                if c and v[j]:
                    acc = F.add(acc, F.mul(c, F.mul(v[i], v[j])))
    return acc


def _element_lut(space, g, cache):
    lut = cache.get("lut")
    if lut is None:
        lut = cache["lut"] = space.all_vector_images(g)
    return lut


def _class_fixed(space, g, cls, cache):
    key = ("fixed", cls.k)
    out = cache.get(key)
    if out is None:
        lut = _element_lut(space, g, cache)
        out = [
            all(lut[space.vec_code(b)] in vs for b in basis)
            for basis, vs in zip(cls.bases, cls.vecsets)
        ]
        cache[key] = out
    return out


def _class_images(space, g, cls, cache, tau):
    """Image subspace per class member: basis of g U, or of g perp(U)."""
    key = ("img", cls.k, tau)
    out = cache.get(key)
    if out is None:
        lut = _element_lut(space, g, cache)
        out = []
        for basis in cls.bases:
            src = perp_basis_dot(space, basis) if tau else basis
            out.append(
                rref_basis(
                    space,
                    [space.code_vec(lut[space.vec_code(v)]) for v in src],
                )
            )
        cache[key] = out
    return out


def fixed_point_indices(space, g, action: ActionTable, tau=False, cache=None):
    """Indices of the action points fixed by g (or by g tau).

    tau composes U -> perp(U) under the plain dot product with g; it acts on
    flags and antiflags for every k, and on k-subspaces only when 2k = n.
    A cache dict may be shared across actions for one element.
    """
    if cache is None:
        cache = {}
    spec = action.spec
    if spec.kind == "quadratic_forms":
        if tau:
            raise ValueError("tau does not act on quadratic-form points")
        return _fixed_form_indices(space, g, action)
    n = space.n
    k = spec.k
    if not tau:
        if spec.kind == "subspace":
            fixed = _class_fixed(space, g, action._class(k), cache)
            return [p for p, i in enumerate(action.points) if fixed[i]]
        if spec.kind == "antiflag" and 2 * k == n:
            cls = action._class(k)
            imgs = _class_images(space, g, cls, cache, tau=False)
            idx = cls.index
            out = []
            for p, (i, j) in enumerate(action.points):
                ii, jj = idx[imgs[i]], idx[imgs[j]]
                if (ii == i and jj == j) or (ii == j and jj == i):
                    out.append(p)
            return out
        fsmall = _class_fixed(space, g, action._class(k), cache)
        fbig = _class_fixed(space, g, action._class(n - k), cache)
        return [
            p for p, (i, j) in enumerate(action.points) if fsmall[i] and fbig[j]
        ]
    if spec.kind == "subspace":
        if 2 * k != n:
            raise ValueError("tau moves k-spaces to (n-k)-spaces")
        cls = action._class(k)
        imgs = _class_images(space, g, cls, cache, tau=True)
        idx = cls.index
        return [p for p, i in enumerate(action.points) if idx[imgs[i]] == i]
    if spec.kind == "antiflag" and 2 * k == n:
        cls = action._class(k)
        imgs = _class_images(space, g, cls, cache, tau=True)
        idx = cls.index
        out = []
        for p, (i, j) in enumerate(action.points):
            if {idx[imgs[i]], idx[imgs[j]]} == {i, j}:
                out.append(p)
        return out
    # flags and off-middle antiflags: (U, W) maps to (g perp W, g perp U)
    small, big = action._class(k), action._class(n - k)
    img_to_small = _class_images(space, g, big, cache, tau=True)
    img_to_big = _class_images(space, g, small, cache, tau=True)
    sidx, bidx = small.index, big.index
    out = []
    for p, (i, j) in enumerate(action.points):
        if sidx[img_to_small[j]] == i and bidx[img_to_big[i]] == j:
            out.append(p)
    return out


def fixed_points(space, g, action, tau=False, cache=None):
    """Number of action points fixed by g (or by g tau)."""
    return len(fixed_point_indices(space, g, action, tau=tau, cache=cache))


def _form_translation(space, g, action):
    """Vector c with g . Q_v = Q_{g v + c} in the quadratic-forms action."""
    n, F = space.n, space.F
    ginv = space.inv(g)
    vals = []
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        ge = space.mat_vec(ginv, e)
        vals.append(
            F.sub(
                _eval_quad(space, action.base_quad, ge),
                _eval_quad(space, action.base_quad, e),
            )
        )
    # x -> Q0(g^-1 x) - Q0(x) is linear over GF(2); write it as B(x, c)
    giv = space.inv(space.transpose(action.form.gram))
    return space.mat_vec(giv, tuple(vals))


def _fixed_form_indices(space, g, action):
    c = _form_translation(space, g, action)
    gm1 = space.sub(g, space.identity)
    x0 = space.solve(gm1, c)
    if x0 is None:
        return []
    out = []
    for kv in _span(space, space.kernel_basis(gm1)):
        v = tuple(space.F.add(x, y) for x, y in zip(x0, kv))
        out.append(space.vec_code(v))
    return sorted(out)


def fixed_points_by_type(space, g, action):
    """Fixed quadratic-form points, split by plus and minus type."""
    out = {"+": 0, "-": 0}
    for idx in _fixed_form_indices(space, g, action):
        out[action.points[idx][1]] += 1
    return out


def _span(space, basis):
    F = space.F
    vecs = [(0,) * space.n]
    for b in basis:
        new = []
        for c in range(1, space.q):
            cb = tuple(F.mul(c, x) for x in b)
            for v in vecs:
                new.append(tuple(F.add(x, y) for x, y in zip(v, cb)))
        vecs.extend(new)
    return vecs


# ---------------------------------------------------------------------------
# Element subsets defined by small invariant subspaces.

def _restrict(space, g, basis):
    """Matrix of g on the span of basis; the span must be invariant."""
    k = len(basis)
    F = space.F
    rowsp = [list(b) for b in basis]
    pivots = space._elim(rowsp, space.n)
    cols = []
    for b in basis:
        gb = space.mat_vec(g, b)
        coeff = [0] * k
        v = list(gb)
        for r, pc in enumerate(pivots):
            c = v[pc]
            if c:
                coeff[r] = c
                mrow = F.mul_t[c]
                v = [F.sub(x, mrow[y]) for x, y in zip(v, rowsp[r])]
        if any(v):
            raise ValueError("subspace is not invariant")
        cols.append(coeff)
    return MatSpace(k, space.q), _cols_to_mat(k, cols)


def sieve_free(space, g, t):
    """True when charpoly(g) has no irreducible factor of degree <= t."""
    return not has_small_degree_factor(space.F, space.charpoly(g), t)


def fixes_some_small_subspace(space, g, t):
    """Direct scan over all subspaces of dimension <= t (duality oracle)."""
    lut = space.all_vector_images(g)
    for k in range(1, t + 1):
        for basis in all_subspaces(space, k):
            vecs = subspace_vectors(space, basis)
            if all(lut[space.vec_code(b)] in vecs for b in basis):
                return True
    return False


def membership_sets(table: GroupTable, t, coset=None):
    """Indices of table elements in the no-small-invariant-subspace set.

    coset: None for the whole group, an integer label for one label class,
    or "S" / "O" for the two orthogonal variants: the S set has no invariant
    subspace of dimension <= t at all, the O set acts as a reflection on a
    small nondegenerate complement and has no small invariant subspace on
    its perp.  For the inverse-transpose coset of GL use tau_membership.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    fam = table.family
    if fam in ("GL", "SL", "Sp", "GU", "SU"):
        if coset in ("S", "O"):
            raise ValueError("S/O sets are for orthogonal families")
        return [
            i
            for i, g in enumerate(table.elements)
            if (coset is None or table.labels[i] == coset)
            and sieve_free(table.space, g, t)
        ]
    if not fam.startswith(("O", "SO", "Omega")):
        raise ValueError(f"no membership sets for family {fam!r}")
    if coset not in ("S", "O"):
        raise ValueError("orthogonal membership needs coset 'S' or 'O'")
    if table.n % 2 == 0:
        if coset == "S":
            return [
                i
                for i, g in enumerate(table.elements)
                if sieve_free(table.space, g, t)
            ]
        return _orth_O_set_even(table, t)
    if table.q % 2 == 0:
        raise ValueError("odd-dimensional sets need odd q")
    eigen = 1 if coset == "S" else table.space.F.neg_t[1]
    return _orth_set_odd(table, t, eigen)


def _orth_O_set_even(table, t):
    """Reflection on a nondegenerate 2-space, sieve-free on its perp.

    In odd characteristic the 2-space is the sum of the eigenlines for 1 and
    -1.  In characteristic 2 it is ker (g-1)^2, where g must fix exactly a
    line; such an involution of a 2-dimensional orthogonal space is always a
    reflection because the rotation subgroup has odd order.
    """
    space, form = table.space, table.form
    q = space.q
    out = []
    for i, g in enumerate(table.elements):
        if q % 2 == 0:
            gm1 = space.sub(g, space.identity)
            if len(space.kernel_basis(gm1)) != 1:
                continue
            k2 = space.kernel_basis(space.mul(gm1, gm1))
            if len(k2) != 2:
                continue
            w = rref_basis(space, k2)
        else:
            e1 = space.kernel_basis(space.sub(g, space.identity))
            em = space.kernel_basis(space.add(g, space.identity))
            if len(e1) != 1 or len(em) != 1:
                continue
            w = rref_basis(space, e1 + em)
        gram = tuple(form.bilinear(space, u, v) for u in w for v in w)
        if MatSpace(2, q).rank(gram) != 2:
            continue
        perp = perp_basis_form(space, form, w)
        sub, gw = _restrict(space, g, perp)
        if not has_small_degree_factor(sub.F, sub.charpoly(gw), t):
            out.append(i)
    return out


def _orth_set_odd(table, t, eigen):
    """Scalar eigen on an anisotropic line, sieve-free on its perp."""
    space, form = table.space, table.form
    out = []
    for i, g in enumerate(table.elements):
        ker = space.kernel_basis(space.sub(g, space.scalar(eigen)))
        if len(ker) != 1:
            continue
        v = ker[0]
        if form.bilinear(space, v, v) == 0:
            continue
        perp = perp_basis_form(space, form, (v,))
        sub, gw = _restrict(space, g, perp)
        if not has_small_degree_factor(sub.F, sub.charpoly(gw), t):
            out.append(i)
    return out


def tau_sieve_free(space, g, t):
    """Membership test for the single coset element g tau.

    The square of g tau acts as x = g g^-T; membership asks that x fix no
    subspace of dimension at most t (n even), or that x fix a unique line and
    no other subspace of dimension at most t (n odd).
    """
    F = space.F
    x = space.mul(g, space.transpose(space.inv(g)))
    f = space.charpoly(x)
    if space.n % 2 == 0:
        return not has_small_degree_factor(F, f, t)
    lin = (F.neg_t[1], 1)  # z - 1
    quo, rem = pdivmod(F, f, lin)
    if rem != ():
        return False
    h = pnorm(quo)
    _, rem2 = pdivmod(F, h, lin)
    if rem2 == ():
        return False
    return not has_small_degree_factor(F, h, t)


def tau_membership(table: GroupTable, t):
    """Indices g of a GL table whose coset element g tau avoids small subspaces."""
    if table.family != "GL":
        raise ValueError("the inverse-transpose coset lives over GL")
    if t < 1:
        raise ValueError("t must be >= 1")
    space = table.space
    return [
        i for i, g in enumerate(table.elements) if tau_sieve_free(space, g, t)
    ]


def point_permutation(space, g, action: ActionTable, tau=False, cache=None):
    """Positions of the images of all action points under g (or g tau).

    Applicability of tau matches fixed_point_indices.  The result is a list
    mapping point positions to point positions; elements that preserve the
    relevant structure always permute the point set.
    """
    if cache is None:
        cache = {}
    spec = action.spec
    if spec.kind == "quadratic_forms":
        if tau:
            raise ValueError("tau does not act on quadratic-form points")
        c = _form_translation(space, g, action)
        out = []
        for code, _eps in action.points:
            gv = space.mat_vec(g, space.code_vec(code))
            out.append(space.vec_code(tuple(space.F.add(x, y) for x, y in zip(gv, c))))
        return out
    n, k = space.n, spec.k
    if spec.kind == "subspace":
        if tau and 2 * k != n:
            raise ValueError("tau moves k-spaces to (n-k)-spaces")
        cls = action._class(k)
        imgs = _class_images(space, g, cls, cache, tau=tau)
        idx = cls.index
        pos = {i: p for p, i in enumerate(action.points)}
        return [pos[idx[imgs[i]]] for i in action.points]
    if spec.kind == "antiflag" and 2 * k == n:
        cls = action._class(k)
        imgs = _class_images(space, g, cls, cache, tau=tau)
        idx = cls.index
        pos = {pair: p for p, pair in enumerate(action.points)}
        out = []
        for i, j in action.points:
            ii, jj = idx[imgs[i]], idx[imgs[j]]
            out.append(pos[(ii, jj) if ii < jj else (jj, ii)])
        return out
    small, big = action._class(k), action._class(n - k)
    pos = {pair: p for p, pair in enumerate(action.points)}
    sidx, bidx = small.index, big.index
    if tau:
        img_to_small = _class_images(space, g, big, cache, tau=True)
        img_to_big = _class_images(space, g, small, cache, tau=True)
        return [
            pos[(sidx[img_to_small[j]], bidx[img_to_big[i]])]
            for i, j in action.points
        ]
    simgs = _class_images(space, g, small, cache, tau=False)
    bimgs = _class_images(space, g, big, cache, tau=False)
    return [pos[(sidx[simgs[i]], bidx[bimgs[j]])] for i, j in action.points]
