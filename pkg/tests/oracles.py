"""Independent reference computations used to check the library.

Everything here is deliberately naive: Jordan block sizes come from an
explicit chain basis that is verified to put the operator in literal block
form, and wedge powers are expanded multilinearly with insertion signs,
never through determinant formulas.
"""

import itertools

from modinv.linalg import Mat, Subspace


def jordan_block_sizes(N: Mat) -> list[int]:
    """Block sizes of a nilpotent operator via an explicit chain basis."""
    f = N.field
    n = N.nrows
    kers = [Subspace.from_vectors(f, n, [])]
    P = Mat.identity(f, n)
    while kers[-1].dim < n:
        P = P.matmul(N)
        kers.append(P.kernel())
    s = len(kers) - 1
    tops = []
    for h in range(s, 0, -1):
        span_vecs = [list(v) for v in kers[h - 1].basis]
        for v, hh in tops:
            w = list(v)
            for _ in range(hh - h):
                w = N.apply(w)
            span_vecs.append(w)
        marked = Subspace.from_vectors(f, n, span_vecs)
        for cand in kers[h].basis:
            if not marked.contains(cand):
                tops.append((list(cand), h))
                marked = marked.sum(Subspace.from_vectors(f, n, [list(cand)]))
    cols = []
    sizes = []
    for v, h in tops:
        chain = []
        w = list(v)
        for _ in range(h):
            chain.append(w)
            w = N.apply(w)
        cols.extend(reversed(chain))
        sizes.append(h)
    B = Mat(f, cols).transpose()
    Np = B.inverse().matmul(N).matmul(B)
    expected = Mat.zeros(f, n, n)
    offset = 0
    for v, h in tops:
        for k in range(h - 1):
            expected.rows[offset + k][offset + k + 1] = f.one
        offset += h
    assert Np == expected, "chain basis failed to reach block form"
    return sorted(sizes)


def wedge_vector(field, vectors):
    """v_1 ^ .. ^ v_d expanded multilinearly: dict {index tuple: coeff}."""
    acc = {(): field.one}
    for v in vectors:
        nxt = {}
        for tup, c in acc.items():
            for i, x in enumerate(v):
                if field.is_zero(x) or i in tup:
                    continue
                pos = sum(1 for t in tup if t < i)
                sign = -1 if (len(tup) - pos) % 2 else 1
                new = tuple(sorted(tup + (i,)))
                coeff = field.mul(c, x)
                if sign < 0:
                    coeff = field.neg(coeff)
                cur = nxt.get(new, field.zero)
                cur = field.add(cur, coeff)
                if field.is_zero(cur):
                    nxt.pop(new, None)
                else:
                    nxt[new] = cur
        acc = nxt
    return acc


def wedge_power_apply(A: Mat, d: int, colset) -> dict:
    """Coordinates of (wedge^d A)(e_{colset}) via multilinear expansion."""
    cols = [[A.rows[i][j] for i in range(A.nrows)] for j in sorted(colset)]
    return wedge_vector(A.field, cols)


def wedge_coordinates(A: Mat, d: int, colset):
    """Same, as a list over all row sets in lexicographic order."""
    w = wedge_power_apply(A, d, colset)
    return [w.get(I, A.field.zero)
            for I in itertools.combinations(range(A.nrows), d)]
