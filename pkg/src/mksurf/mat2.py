"""2x2 matrix algebra over the supported rings, adjugate/trace identities,
trace sets, conjugacy in SL2 over prime fields, and conic point counts."""

from dataclasses import dataclass

from .rings import (
    ModInt,
    is_unit,
    legendre,
    is_probable_prime,
    one_like,
    unit_inverse,
    zero_like,
)


@dataclass(frozen=True)
class Mat2:
    """Row-major [[a, b], [c, d]] with entries in a common ring."""

    a: object
    b: object
    c: object
    d: object

    @staticmethod
    def from_rows(rows):
        (a, b), (c, d) = rows
        return Mat2(a, b, c, d)

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def identity_like(self):
        one = one_like(self.a)
        zero = zero_like(self.a)
        return Mat2(one, zero, zero, one)

    def __mul__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __add__(self, other):
        return Mat2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other):
        return Mat2(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def scale(self, s):
        return Mat2(s * self.a, s * self.b, s * self.c, s * self.d)

    def trace(self):
        return self.a + self.d

    def det(self):
        return self.a * self.d - self.b * self.c

    def adjugate(self):
        return Mat2(self.d, -self.b, -self.c, self.a)

    def transpose(self):
        return Mat2(self.a, self.c, self.b, self.d)

    def inverse(self):
        det = self.det()
        if not is_unit(det):
            raise ValueError("matrix with non-unit determinant %r" % (det,))
        return self.adjugate().scale(unit_inverse(det))

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.identity_like()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def map(self, f):
        return Mat2(f(self.a), f(self.b), f(self.c), f(self.d))

    def __repr__(self):
        return "[[%r, %r], [%r, %r]]" % (self.a, self.b, self.c, self.d)


def mat_z(a, b, c, d):
    return Mat2(a, b, c, d)


def mat_mod(m, q):
    """Reduce an integer (or ModInt) matrix modulo q."""
    def red(x):
        if isinstance(x, ModInt):
            return ModInt(x.v, q)
        return ModInt(x, q)

    return m.map(red)


def commutator(x, y):
    """W(X, Y) = X Y X^-1 Y^-1."""
    return x * y * x.inverse() * y.inverse()


def fricke_level(x, y):
    """M(Tr X, Tr Y, Tr XY); equals Tr W(X,Y) + 2 when det X = det Y = 1."""
    one = one_like(x.a)
    if x.det() != one or y.det() != one:
        raise ValueError("fricke_level needs determinant-1 matrices")
    x1 = x.trace()
    x2 = y.trace()
    x3 = (x * y).trace()
    return x1 * x1 + x2 * x2 + x3 * x3 - x1 * x2 * x3


def in_trace_set(z, x):
    """X in S(Z): det X = 1 and Tr(ZX) = Tr(X)."""
    one = one_like(x.a)
    return x.det() == one and (z * x).trace() == x.trace()


def count_conic_modp(delta, n, p):
    """Number of (x, y) mod p with x^2 - delta*y^2 = n, by the closed form.

    Three cases by divisibility; cross-checked elsewhere against exhaustive
    counting.
    """
    if p == 2 or not is_probable_prime(p):
        raise ValueError("p must be an odd prime")
    delta %= p
    n %= p
    if n != 0 and delta == 0:
        return (1 + legendre(n, p)) * p
    if n != 0:
        return p - legendre(delta, p)
    chi = legendre(delta, p) if delta else 0
    return p * (1 + chi) - chi


def sl2_elements_modp(p):
    """All of SL2(Z/p) as integer 4-tuples (a, b, c, d)."""
    out = []
    for a in range(p):
        for b in range(p):
            for c in range(p):
                bc1 = (1 + b * c) % p
                if a == 0:
                    if bc1 == 0:
                        out.extend((0, b, c, d) for d in range(p))
                else:
                    out.append((a, b, c, bc1 * pow(a, -1, p) % p))
    return out


def _tuple_mat(t, p):
    return Mat2(*(ModInt(v, p) for v in t))


def _canonical_conjugator(a, p):
    """gamma in SL2(Z/p) with gamma^-1 * A * gamma = [[0,1],[-1,t]].

    Exists whenever Tr A is not +-2 (single conjugacy class); found by
    scanning for a column vector v with det [v, -A v] = 1.
    """
    for v1 in range(p):
        for v2 in range(p):
            if v1 == 0 and v2 == 0:
                continue
            w1 = -(a.a.v * v1 + a.b.v * v2) % p
            w2 = -(a.c.v * v1 + a.d.v * v2) % p
            if (v1 * w2 - v2 * w1) % p == 1:
                return Mat2(ModInt(v1, p), ModInt(w1, p), ModInt(v2, p), ModInt(w2, p))
    return None


def sl2_conjugacy_test_modp(a, b, p):
    """Decide SL2(Z/p)-conjugacy of A and B; returns (bool, gamma or None).

    For trace != +-2 both sides are compared through the canonical
    companion form; the exceptional traces fall back to exhaustive search.
    """
    if p == 2 or not is_probable_prime(p):
        raise ValueError("p must be an odd prime")
    a = mat_mod(a, p) if not isinstance(a.a, ModInt) else a
    b = mat_mod(b, p) if not isinstance(b.a, ModInt) else b
    one = ModInt(1, p)
    if a.det() != one or b.det() != one:
        raise ValueError("inputs must have determinant 1 mod p")
    if a == b:
        return True, a.identity_like()
    ta, tb = a.trace(), b.trace()
    if ta != tb:
        return False, None
    if ta.v not in (2 % p, (p - 2) % p):
        ga = _canonical_conjugator(a, p)
        gb = _canonical_conjugator(b, p)
        gamma = gb * ga.inverse()
        assert gamma * a * gamma.inverse() == b
        return True, gamma
    for t in sl2_elements_modp(p):
        g = _tuple_mat(t, p)
        if g * a * g.inverse() == b:
            return True, g
    return False, None


def random_sl2z(rng, length=8, entry=3):
    """Random SL2(Z) element: a word in elementary matrices (test helper)."""
    m = Mat2(1, 0, 0, 1)
    for _ in range(length):
        e = rng.randint(-entry, entry)
        if rng.random() < 0.5:
            m = m * Mat2(1, e, 0, 1)
        else:
            m = m * Mat2(1, 0, e, 1)
    if rng.random() < 0.5:
        m = -m
    return m
