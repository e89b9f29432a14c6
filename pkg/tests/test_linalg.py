import itertools
import random

import pytest

from modinv.fields import GF, ExtField, PrimeField
from modinv.linalg import (DimensionError, Mat, PolyMat, Subspace,
                           chart_minor_gcd_degree_r2, full_minor_gcd_degree_r2,
                           generic_rank_of, hermite_minor_gcd,
                           max_specialized_rank, minor, pairing_gram,
                           pluecker_vector, rref_rank_kernel_image,
                           smith_diagonal, split_components, theta,
                           theta_power)
from modinv.modrep import (heisenberg3, mn_module, regular_module,
                           socle_width_module, v_module)
from modinv.mpoly import MPoly, poly_gcd, variables

from oracles import jordan_block_sizes, wedge_coordinates


def F3():
    return GF(3)


def jordan_block(field, n):
    rows = [[field.one if j == i + 1 else field.zero for j in range(n)]
            for i in range(n)]
    return Mat(field, rows)


def test_rref_identity():
    rank, ker, im = rref_rank_kernel_image(Mat.identity(F3(), 3))
    assert rank == 3
    assert ker.dim == 0
    assert im == Subspace.full(F3(), 3)


def test_rref_zero_matrix():
    rank, ker, im = rref_rank_kernel_image(Mat.zeros(F3(), 2, 5))
    assert rank == 0
    assert ker.dim == 5
    assert im.dim == 0


def test_jordan_block_power_ranks():
    J = jordan_block(F3(), 3)
    assert J.rank() == 2
    assert J.matmul(J).rank() == 1
    assert J.matmul(J).matmul(J).rank() == 0


def test_rank_kernel_dimension_identity():
    rng = random.Random(0)
    f = GF(5)
    for _ in range(30):
        m = Mat(f, [[rng.randrange(5) for _ in range(6)] for _ in range(4)])
        rank, ker, im = rref_rank_kernel_image(m)
        assert rank + ker.dim == m.ncols
        assert im.dim == rank
        for v in ker.basis:
            assert all(x == 0 for x in m.apply(list(v)))


def test_minor_identity():
    I3 = Mat.identity(F3(), 3)
    assert minor(I3, (0, 1), (0, 1)) == 1
    assert minor(I3, (0, 1), (0, 2)) == 0


def test_minor_heisenberg_theta():
    th = theta(heisenberg3(3))
    t1, t2, t3 = variables(3, 3)
    assert minor(th, (0, 1), (1, 2)) == t1 * t2


def test_minor_index_errors():
    I3 = Mat.identity(F3(), 3)
    with pytest.raises(IndexError):
        minor(I3, (0, 3), (0, 1))
    with pytest.raises(DimensionError):
        minor(I3, (0, 1), (0,))


def test_theta_power_heisenberg():
    th2 = theta_power(heisenberg3(3), 2)
    t1, t2, t3 = variables(3, 3)
    for i in range(3):
        for j in range(3):
            expect = t1 * t2 if (i, j) == (0, 2) else MPoly.zero(3, 3)
            assert th2.rows[i][j] == expect


def test_theta_power_one_is_sum():
    m = v_module(3, 2)
    th = theta_power(m, 1)
    t1, t2 = variables(3, 2)
    assert th.rows[2][0] == t1
    assert th.rows[2][1] == t2


def test_theta_power_range_enforced():
    m = regular_module(3, 1)
    th2 = theta_power(m, 2)
    t1 = MPoly.variable(0, 3, 1)
    # X^2 sends 1 -> x^2, x -> 0, x^2 -> 0 in the 3-dimensional algebra
    assert th2.rows[2][0] == t1 * t1
    with pytest.raises(ValueError):
        theta_power(m, 3)


def test_theta_power_entries_homogeneous():
    for m in (regular_module(3, 2), heisenberg3(5), socle_width_module(5, 2)):
        for j in range(1, min(m.p, 4)):
            pm = m.theta_power(j)
            for row in pm.rows:
                for e in row:
                    assert e.is_zero or e.homogeneous_degree() == j


def test_pluecker_first_column():
    th = theta(v_module(3, 2))
    t1, _ = variables(3, 2)
    vec = pluecker_vector(th, 1, [0])
    assert vec == [MPoly.zero(3, 2), MPoly.zero(3, 2), t1]


def test_pluecker_identity_top():
    pm = PolyMat(3, 2, [[MPoly.constant(1, 3, 2), MPoly.zero(3, 2)],
                        [MPoly.zero(3, 2), MPoly.constant(1, 3, 2)]])
    assert pluecker_vector(pm, 2, [0, 1]) == [MPoly.constant(1, 3, 2)]


def test_pluecker_quadric_tuple():
    m = mn_module(3, 3)
    pm = m.theta_power(2)
    vec = pluecker_vector(pm, 1, [0])
    s, t = variables(3, 2)
    assert vec == [MPoly.zero(3, 2)] * 3 + [s * s, 2 * (s * t), t * t]


def test_generic_rank_regular():
    assert generic_rank_of(theta(regular_module(3, 2))) == 6


def test_generic_rank_heisenberg():
    assert generic_rank_of(theta(heisenberg3(3))) == 2


def test_generic_rank_zero():
    assert generic_rank_of(PolyMat.zeros(3, 2, 4, 4)) == 0


def test_specialize_at_basis_points():
    m = regular_module(3, 2)
    th = theta(m)
    for i in range(2):
        pt = [1 if k == i else 0 for k in range(2)]
        assert th.specialize(pt) == m.generators[i]


def test_specialize_kills_square_image():
    m = socle_width_module(5, 2)
    th2 = m.theta_power(2)
    spec = th2.specialize([1, 2])     # 1 + 4 = 5 = 0
    assert spec.is_zero()


def test_specialized_rank_is_semicontinuous():
    rng = random.Random(1)
    ext = ExtField(3, 2)
    for m in (regular_module(3, 2), heisenberg3(3), v_module(3, 3)):
        for j in range(1, 3):
            pm = m.theta_power(j)
            d = generic_rank_of(pm)
            for _ in range(100):
                pt = [ext.random(rng) for _ in range(m.r)]
                if all(ext.is_zero(x) for x in pt):
                    continue
                assert pm.specialize(pt, ext).rank() <= d


def test_generic_rank_matches_sampling_on_small_frames():
    rng = random.Random(2)
    ext = ExtField(3, 3)
    frames = [regular_module(3, 2), heisenberg3(3), v_module(3, 2),
              v_module(3, 3), mn_module(3, 2), mn_module(3, 4),
              socle_width_module(3, 2)]
    for m in frames:
        assert m.n <= 10
        for j in range(1, m.p):
            pm = m.theta_power(j)
            assert generic_rank_of(pm) == max_specialized_rank(pm, ext, 200, rng)


def test_exterior_power_consistency():
    """Pluecker tuples match multilinear wedge expansion of random maps."""
    rng = random.Random(3)
    f = GF(5)
    for _ in range(25):
        n, d = 4, 2
        A = Mat(f, [[rng.randrange(5) for _ in range(n)] for _ in range(n)])
        pm = PolyMat(5, 1, [[MPoly.constant(x, 5, 1) for x in row]
                            for row in A.rows])
        J = sorted(rng.sample(range(n), d))
        tup = [g.eval((1,)) for g in pluecker_vector(pm, d, J)]
        assert tup == wedge_coordinates(A, d, J)


def test_pairing_dual_basis():
    f = F3()
    full = Subspace.full(f, 4)
    sub = Subspace.from_vectors(f, 4, [[1, 0, 0, 0], [0, 1, 0, 0]])
    gram = pairing_gram(sub, sub)
    assert gram == Mat.identity(f, 2)


def test_pairing_orthogonal():
    f = F3()
    a = Subspace.from_vectors(f, 4, [[1, 0, 0, 0]])
    b = Subspace.from_vectors(f, 4, [[0, 1, 0, 0]])
    assert pairing_gram(a, b) == Mat.zeros(f, 1, 1)


def test_pairing_one_dimensional():
    f = F3()
    a = Subspace.from_vectors(f, 3, [[1, 0, 0]])
    assert pairing_gram(a, a).rows == [[1]]


def test_pairing_dimension_mismatch():
    f = F3()
    a = Subspace.from_vectors(f, 3, [[1, 0, 0]])
    b = Subspace.from_vectors(f, 4, [[1, 0, 0, 0]])
    with pytest.raises(DimensionError):
        pairing_gram(a, b)


def test_wedge_pairing_sign_law():
    """(wedge^d dual-op)(a) paired with m picks up the sign (-1)^(jd)."""
    rng = random.Random(4)
    f = GF(5)
    for _ in range(20):
        for d in (1, 2, 3):
            for j in (1, 2):
                m = regular_module(5, 2)
                pt = [rng.randrange(5), rng.randrange(1, 5)]
                A = m.point_operator(pt).power(j)
                Astar = A.transpose().smul((5 - 1) ** j % 5)
                n = m.n
                I = tuple(sorted(rng.sample(range(n), d)))
                J = tuple(sorted(rng.sample(range(n), d)))
                lhs = minor(Astar, J, I)
                sign = 1 if (j * d) % 2 == 0 else -1
                rhs = minor(A, I, J)
                assert lhs == (rhs * sign) % 5


def rand_unipoly(rng, p, deg):
    return MPoly(p, 1, {(k,): rng.randrange(p) for k in range(deg + 1)})


def test_hermite_minor_gcd_matches_enumeration():
    rng = random.Random(5)
    p = 5
    for _ in range(20):
        n, d = 5, 3
        while True:
            rows = [[rand_unipoly(rng, p, 2) for _ in range(d)]
                    for _ in range(n)]
            pm = PolyMat(p, 1, rows)
            if generic_rank_of(pm) == d:
                break
        minors = [minor(pm, I, range(d))
                  for I in itertools.combinations(range(n), d)]
        live = [g for g in minors if not g.is_zero]
        expect = poly_gcd(live)
        got = hermite_minor_gcd(
            [[_dense(e) for e in row] for row in rows], p, d)
        assert MPoly(p, 1, {(k,): c for k, c in enumerate(got) if c}) == expect


def _dense(e: MPoly):
    if e.is_zero:
        return []
    deg = max(k for (k,) in e.terms)
    out = [0] * (deg + 1)
    for (k,), c in e.terms.items():
        out[k] = c
    return out


def test_smith_diagonal_matches_minor_gcds():
    rng = random.Random(6)
    p = 3
    for _ in range(15):
        n = 4
        rows = [[rand_unipoly(rng, p, 2) for _ in range(n)] for _ in range(n)]
        pm = PolyMat(p, 1, rows)
        r = generic_rank_of(pm)
        if r == 0:
            continue
        diag = smith_diagonal([[_dense(e) for e in row] for row in rows], p)
        for d in range(1, r + 1):
            minors = []
            for I in itertools.combinations(range(n), d):
                for J in itertools.combinations(range(n), d):
                    g = minor(pm, I, J)
                    if not g.is_zero:
                        minors.append(g)
            expect = poly_gcd(minors)
            prod = [1]
            from modinv.fields import _u_mul
            for f in diag[:d]:
                prod = _u_mul(prod, f, p)
            inv = pow(prod[-1], -1, p)
            prod = [(c * inv) % p for c in prod]
            got = MPoly(p, 1, {(k,): c for k, c in enumerate(prod) if c})
            assert got == expect


def test_chart_minor_gcd_degree_r2_against_enumeration():
    rng = random.Random(7)
    for m in (regular_module(3, 2), mn_module(3, 4)):
        for j in (1, 2):
            pm = m.theta_power(j)
            d = generic_rank_of(pm)
            if d == 0:
                continue
            chart = None
            for J in itertools.combinations(range(pm.ncols), d):
                sub = pm.submatrix(range(pm.nrows), list(J))
                if generic_rank_of(sub) == d:
                    chart = list(J)
                    break
            tup = [g for g in pluecker_vector(pm, d, chart) if not g.is_zero]
            expect = poly_gcd(tup).total_degree()
            assert chart_minor_gcd_degree_r2(pm, chart, d) == expect


def test_full_minor_gcd_degree_r2_nonconstant_case():
    m = socle_width_module(5, 2)
    pm = m.theta_power(2)
    # the only nonzero entry is t1^2 + t2^2, so the 1x1 minor gcd has degree 2
    assert full_minor_gcd_degree_r2(pm, 1) == 2


def test_split_components_cover_and_separate():
    pm = theta(regular_module(3, 2))
    comps = split_components(pm)
    seen_rows = set()
    seen_cols = set()
    for rows, cols in comps:
        assert not (set(rows) & seen_rows)
        assert not (set(cols) & seen_cols)
        seen_rows.update(rows)
        seen_cols.update(cols)
    for i, row in enumerate(pm.rows):
        for j, e in enumerate(row):
            if not e.is_zero:
                assert any(i in r and j in c for r, c in comps)
    assert sum(generic_rank_of(pm.submatrix(r, c)) for r, c in comps) \
        == generic_rank_of(pm)


def test_jordan_chain_oracle_agrees_with_rank_sequence():
    rng = random.Random(8)
    f = GF(3)
    m = regular_module(3, 2)
    N = m.point_operator([1, 2]).power(1)
    sizes = jordan_block_sizes(N)
    assert sizes == [3, 3, 3]
