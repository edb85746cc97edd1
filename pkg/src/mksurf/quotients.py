"""Exhaustive computations in SL2(Z/q): enumeration, a commutator test that
solves a linear system for the second matrix, and the set of commutator
traces."""

import math

import numpy as np

from .mat2 import Mat2
from .rings import ModInt


class BudgetExceeded(RuntimeError):
    pass


DEFAULT_MODULUS_CAP = 64


def _check_budget(q, cap):
    if q > cap:
        raise BudgetExceeded("modulus %d exceeds the configured cap %d" % (q, cap))


def sl2_tuples(q):
    """All (a, b, c, d) with a*d - b*c = 1 (mod q)."""
    out = []
    for a in range(q):
        g = math.gcd(a, q)
        for b in range(q):
            for c in range(q):
                rhs = (1 + b * c) % q
                if g == 1:
                    out.append((a, b, c, rhs * pow(a, -1, q) % q))
                elif rhs % g == 0:
                    step = q // g
                    d0 = (rhs // g) * pow(a // g, -1, step) % step
                    out.extend((a, b, c, d0 + k * step) for k in range(g))
    return out


def sl2_order(q):
    """|SL2(Z/q)| = q^3 * prod_{p | q} (1 - p^-2)."""
    order = q**3
    left = q
    p = 2
    while p * p <= left:
        if left % p == 0:
            order = order // (p * p) * (p * p - 1)
            while left % p == 0:
                left //= p
        p += 1
    if left > 1:
        order = order // (left * left) * (left * left - 1)
    return order


def _diagonalize_int(mat):
    """Unimodular row/column reduction of an integer matrix to diagonal
    form; returns (diagonal, V) with the column operations collected in V,
    so kernels mod q are read off the diagonal."""
    a = [row[:] for row in mat]
    nrows = len(a)
    ncols = len(a[0])
    v = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    for t in range(min(nrows, ncols)):
        while True:
            piv = None
            for i in range(t, nrows):
                for j in range(t, ncols):
                    if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                break
            pi, pj = piv
            if pi != t:
                a[t], a[pi] = a[pi], a[t]
            if pj != t:
                for row in a:
                    row[t], row[pj] = row[pj], row[t]
                for row in v:
                    row[t], row[pj] = row[pj], row[t]
            clean = True
            for i in range(t + 1, nrows):
                if a[i][t]:
                    f = a[i][t] // a[t][t]
                    for j in range(t, ncols):
                        a[i][j] -= f * a[t][j]
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, ncols):
                if a[t][j]:
                    f = a[t][j] // a[t][t]
                    for i in range(nrows):
                        a[i][j] -= f * a[i][t]
                    for i in range(ncols):
                        v[i][j] -= f * v[i][t]
                    if a[t][j]:
                        clean = False
            if clean:
                break
    return [a[i][i] for i in range(min(nrows, ncols))], v


def _kernel_mod(mat, q):
    """All vectors y (mod q) with mat @ y = 0 (mod q)."""
    diag, v = _diagonalize_int(mat)
    ncols = len(mat[0])
    diag = diag + [0] * (ncols - len(diag))
    choices = []
    for d in diag:
        g = math.gcd(d, q)
        step = q // g
        choices.append(range(0, q, step) if g > 1 else (0,))
    out = []
    idx = [0] * ncols
    stack = [(0, [])]
    while stack:
        pos, z = stack.pop()
        if pos == ncols:
            y = [sum(v[i][j] * z[j] for j in range(ncols)) % q for i in range(ncols)]
            out.append(tuple(y))
            continue
        for val in choices[pos]:
            stack.append((pos + 1, z + [val]))
    return out


def _as_tuple_mod(z, q):
    if isinstance(z, Mat2):
        vals = [e.v if isinstance(e, ModInt) else e for e in z.entries()]
        return tuple(val % q for val in vals)
    return tuple(v % q for v in z)


def commutator_test_modq(z, q, cap=DEFAULT_MODULUS_CAP):
    """Is Z a commutator in SL2(Z/q)?  Returns (bool, witness or None).

    For each X the equation X Y = Z Y X is linear in the entries of Y, so
    the q^4-size Y loop collapses to a kernel computation; determinant-1
    kernel vectors are the witnesses.
    """
    _check_budget(q, cap)
    z1, z2, z3, z4 = _as_tuple_mod(z, q)
    if (z1 * z4 - z2 * z3) % q != 1:
        raise ValueError("Z must have determinant 1 mod %d" % q)
    ident = Mat2(ModInt(1, q), ModInt(0, q), ModInt(0, q), ModInt(1, q))
    if (z1 % q, z2 % q, z3 % q, z4 % q) == (1 % q, 0, 0, 1 % q):
        return True, (ident, ident)
    for (a, b, c, d) in sl2_tuples(q):
        mat = _commutation_system(a, b, c, d, z1, z2, z3, z4)
        for y in _kernel_mod(mat, q):
            y1, y2, y3, y4 = y
            if (y1 * y4 - y2 * y3) % q == 1:
                x = Mat2(ModInt(a, q), ModInt(b, q), ModInt(c, q), ModInt(d, q))
                ym = Mat2(ModInt(y1, q), ModInt(y2, q), ModInt(y3, q), ModInt(y4, q))
                return True, (x, ym)
    return False, None


def _commutation_system(a, b, c, d, z1, z2, z3, z4):
    """Coefficient matrix of X*Y - Z*Y*X = 0 in the entries of Y."""
    rows = []
    for (i, j) in ((0, 0), (0, 1), (1, 0), (1, 1)):
        coeff = [0, 0, 0, 0]
        x = ((a, b), (c, d))
        z = ((z1, z2), (z3, z4))
        # (X Y)_{ij} = sum_k X_{ik} Y_{kj}
        for k in range(2):
            coeff[2 * k + j] += x[i][k]
        # (Z Y X)_{ij} = sum_{k,l} Z_{ik} Y_{kl} X_{lj}
        for k in range(2):
            for l in range(2):
                coeff[2 * k + l] -= z[i][k] * x[l][j]
        rows.append(coeff)
    return rows


def trace_commutator_image(q, cap=DEFAULT_MODULUS_CAP):
    """The set { Tr W(X, Y) mod q : X, Y in SL2(Z/q) }.

    Uses the trace identity Tr W = M(Tr X, Tr Y, Tr XY) - 2, so only the
    three traces are needed; the Y side is vectorized.
    """
    _check_budget(q, cap)
    tuples = np.array(sl2_tuples(q), dtype=np.int64)
    ya, yb, yc, yd = tuples[:, 0], tuples[:, 1], tuples[:, 2], tuples[:, 3]
    x2 = (ya + yd) % q
    image = set()
    full = set(range(q))
    for (a, b, c, d) in tuples.tolist():
        x1 = (a + d) % q
        x3 = (a * ya + b * yc + c * yb + d * yd) % q
        tr = (x1 * x1 + x2 * x2 + x3 * x3 - x1 * x2 * x3 - 2) % q
        image.update(np.unique(tr).tolist())
        if len(image) == q:
            return full
    return image
