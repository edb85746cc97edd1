"""Exact arithmetic substrate: big integers, S-integers Z[1/l], residue rings,
and the quadratic-symbol calculus (Legendre/Jacobi/Hilbert)."""

import math
from dataclasses import dataclass
from fractions import Fraction

INF = float("inf")

# Witnesses making Miller-Rabin deterministic for n < 3.317e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_LIMIT = 3317044064679887385961981


def jacobi(a, n):
    """Jacobi symbol (a|n) for odd n >= 1; 0 iff gcd(a, n) > 1."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi symbol needs odd positive n, got %r" % (n,))
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a, p):
    """Legendre symbol modulo an odd prime p."""
    return jacobi(a % p, p)


def is_probable_prime(n):
    """Miller-Rabin; deterministic below 3.3e24 with the fixed base set."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    if n >= _MR_LIMIT:
        # Desk-scale inputs never get here; extra fixed bases keep the answer
        # overwhelmingly reliable anyway.
        for a in (41, 43, 47, 53, 59, 61, 67, 71):
            x = pow(a, d, n)
            if x in (1, n - 1):
                continue
            for _ in range(s - 1):
                x = x * x % n
                if x == n - 1:
                    break
            else:
                return False
    return True


def _pollard_rho(n):
    """One nontrivial factor of composite odd n (Brent's cycle method).

    Parameters are cycled deterministically so factorizations are
    reproducible run to run.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        x = y = 2
        d = 1
        power = lam = 1
        while d == 1:
            if power == lam:
                y = x
                power *= 2
                lam = 0
            x = (x * x + c) % n
            lam += 1
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise RuntimeError("rho failed on %d" % n)


def factorize(n, trial_bound=10**6):
    """Complete factorization of |n| as a sorted list of (prime, multiplicity).

    Trial division up to trial_bound, Pollard rho on what remains.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    factors = {}

    def add(p, e=1):
        factors[p] = factors.get(p, 0) + e

    for p in (2, 3):
        while n % p == 0:
            add(p)
            n //= p
    f = 5
    while f <= trial_bound and f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                add(p)
                n //= p
        f += 6
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            add(m)
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return sorted(factors.items())


def squarefree_part(n):
    """The squarefree m with n = m * s**2, sign preserved."""
    if n == 0:
        raise ValueError("0 has no squarefree part")
    m = -1 if n < 0 else 1
    for p, e in factorize(n):
        if e % 2:
            m *= p
    return m


def square_class_int(x):
    """Integer representative of the square class of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no square class")
    return x.numerator * x.denominator


def _split_prime(m, p):
    """m = p**a * u with p coprime to u; returns (a, u)."""
    a = 0
    while m % p == 0:
        m //= p
        a += 1
    return a, m


def hilbert(a, b, p):
    """Hilbert symbol (a,b)_p in {-1,+1} for nonzero rationals a, b.

    p is a prime or INF.  Computed from the closed formulas: the odd-prime
    and dyadic product expansions in Jacobi symbols, and the sign rule at
    the infinite place.  Depends only on square classes.
    """
    a = square_class_int(a)
    b = square_class_int(b)
    if p == INF:
        return -1 if (a < 0 and b < 0) else 1
    if p == 2:
        al, m = _split_prime(a, 2)
        be, n = _split_prime(b, 2)
        s = ((m - 1) // 2) * ((n - 1) // 2)
        if al % 2:
            s += (n * n - 1) // 8
        if be % 2:
            s += (m * m - 1) // 8
        return -1 if s % 2 else 1
    if p < 3 or not is_probable_prime(p):
        raise ValueError("not a prime: %r" % (p,))
    al, m = _split_prime(a, p)
    be, n = _split_prime(b, p)
    s = 1
    if (al * be) % 2:
        s *= legendre(-1, p)
    if be % 2:
        s *= legendre(m, p)
    if al % 2:
        s *= legendre(n, p)
    return s


def hilbert_product_places(a, b):
    """The finite set of places where (a,b)_p can be -1: 2, INF and the odd
    primes dividing either square class."""
    places = {2, INF}
    for v in (square_class_int(a), square_class_int(b)):
        for q, _ in factorize(v):
            if q > 2:
                places.add(q)
    return places


def is_square_mod(r, m):
    """True iff x**2 = r (mod m) is solvable, for squarefree m >= 1."""
    if m < 0:
        m = -m
    if m <= 2:
        return True
    for p, _ in factorize(m):
        if p == 2:
            continue
        if jacobi(r % p, p) == -1:
            return False
    return True


@dataclass(frozen=True)
class LocalizedInt:
    """Element num / ell**exp of Z[1/ell], kept in normalized form
    (exp == 0 or ell does not divide num)."""

    num: int
    exp: int
    ell: int

    def __post_init__(self):
        num, exp = self.num, self.exp
        if exp < 0:
            num *= self.ell ** (-exp)
            exp = 0
        if num == 0:
            exp = 0
        while exp > 0 and num % self.ell == 0:
            num //= self.ell
            exp -= 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    @staticmethod
    def from_int(n, ell):
        return LocalizedInt(n, 0, ell)

    @staticmethod
    def from_fraction(x, ell):
        x = Fraction(x)
        e, d = _split_prime(x.denominator, ell)
        if d != 1:
            raise ValueError("%s is not in Z[1/%d]" % (x, ell))
        return LocalizedInt(x.numerator, e, ell)

    def to_fraction(self):
        return Fraction(self.num, self.ell**self.exp)

    def _coerce(self, other):
        if isinstance(other, LocalizedInt):
            if other.ell != self.ell:
                raise ValueError("mixed localizations")
            return other
        if isinstance(other, int):
            return LocalizedInt(other, 0, self.ell)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        e = max(self.exp, o.exp)
        num = self.num * self.ell ** (e - self.exp) + o.num * self.ell ** (e - o.exp)
        return LocalizedInt(num, e, self.ell)

    __radd__ = __add__

    def __neg__(self):
        return LocalizedInt(-self.num, self.exp, self.ell)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return LocalizedInt(self.num * o.num, self.exp + o.exp, self.ell)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            return self.exp == 0 and self.num == other
        if isinstance(other, LocalizedInt):
            return (self.num, self.exp, self.ell) == (other.num, other.exp, other.ell)
        if isinstance(other, Fraction):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash(self.to_fraction())

    def __bool__(self):
        return self.num != 0

    def __repr__(self):
        if self.exp == 0:
            return "%d" % self.num
        return "%d/%d^%d" % (self.num, self.ell, self.exp)


@dataclass(frozen=True)
class ModInt:
    """Canonical residue in Z/qZ."""

    v: int
    q: int

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("modulus must be >= 2")
        object.__setattr__(self, "v", self.v % self.q)

    def _coerce(self, other):
        if isinstance(other, ModInt):
            if other.q != self.q:
                raise ValueError("mixed moduli %d and %d" % (self.q, other.q))
            return other
        if isinstance(other, int):
            return ModInt(other, self.q)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(self.v + o.v, self.q)

    __radd__ = __add__

    def __neg__(self):
        return ModInt(-self.v, self.q)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(self.v - o.v, self.q)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(self.v * o.v, self.q)

    __rmul__ = __mul__

    def inverse(self):
        return ModInt(pow(self.v, -1, self.q), self.q)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.v == other % self.q
        if isinstance(other, ModInt):
            return self.q == other.q and self.v == other.v
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.q))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return "%d(mod %d)" % (self.v, self.q)


# --- generic element helpers -------------------------------------------------

def one_like(x):
    if isinstance(x, int):
        return 1
    if isinstance(x, Fraction):
        return Fraction(1)
    if isinstance(x, LocalizedInt):
        return LocalizedInt(1, 0, x.ell)
    if isinstance(x, ModInt):
        return ModInt(1, x.q)
    raise TypeError("unsupported ring element %r" % (x,))


def zero_like(x):
    if isinstance(x, int):
        return 0
    if isinstance(x, Fraction):
        return Fraction(0)
    if isinstance(x, LocalizedInt):
        return LocalizedInt(0, 0, x.ell)
    if isinstance(x, ModInt):
        return ModInt(0, x.q)
    raise TypeError("unsupported ring element %r" % (x,))


def is_unit(x):
    if isinstance(x, int):
        return x in (1, -1)
    if isinstance(x, Fraction):
        return x != 0
    if isinstance(x, LocalizedInt):
        if x.num == 0:
            return False
        n = abs(x.num)
        while n % x.ell == 0:
            n //= x.ell
        return n == 1
    if isinstance(x, ModInt):
        return math.gcd(x.v, x.q) == 1
    raise TypeError("unsupported ring element %r" % (x,))


def unit_inverse(x):
    if isinstance(x, int):
        if x in (1, -1):
            return x
    elif isinstance(x, Fraction):
        if x != 0:
            return 1 / x
    elif isinstance(x, LocalizedInt):
        if is_unit(x):
            sign = 1 if x.num > 0 else -1
            j = 0
            n = abs(x.num)
            while n % x.ell == 0:
                n //= x.ell
                j += 1
            return LocalizedInt(sign * x.ell**x.exp, j, x.ell)
    elif isinstance(x, ModInt):
        if is_unit(x):
            return x.inverse()
    else:
        raise TypeError("unsupported ring element %r" % (x,))
    raise ValueError("%r is not a unit" % (x,))


def exact_div(x, d):
    """x / d when the quotient stays in the ring of x; ValueError otherwise."""
    if isinstance(x, int) and isinstance(d, int):
        if d == 0:
            raise ValueError("division by zero")
        q, r = divmod(x, d)
        if r:
            raise ValueError("%d not divisible by %d" % (x, d))
        return q
    if isinstance(x, Fraction) or isinstance(d, Fraction):
        return Fraction(x) / Fraction(d)
    if isinstance(x, LocalizedInt):
        d = x._coerce(d)
        if not d.num:
            raise ValueError("division by zero")
        val = x.to_fraction() / d.to_fraction()
        return LocalizedInt.from_fraction(val, x.ell)
    if isinstance(x, ModInt):
        d = x._coerce(d)
        return x * unit_inverse(d)
    raise TypeError("unsupported operands %r / %r" % (x, d))


def ring_gcd(a, b):
    """gcd in Z, Z[1/l] (up to units), or a residue field."""
    if isinstance(a, int) and isinstance(b, int):
        return math.gcd(a, b)
    if isinstance(a, LocalizedInt) or isinstance(b, LocalizedInt):
        ref = a if isinstance(a, LocalizedInt) else b
        na = _unit_free_part(a, ref.ell)
        nb = _unit_free_part(b, ref.ell)
        return LocalizedInt(math.gcd(na, nb), 0, ref.ell)
    if isinstance(a, Fraction) or isinstance(b, Fraction):
        # field: any nonzero element is a gcd
        a = Fraction(a)
        return a if a != 0 else Fraction(b)
    if isinstance(a, ModInt):
        return a if is_unit(a) else a._coerce(b)
    raise TypeError("no gcd for %r, %r" % (a, b))


def _unit_free_part(x, ell):
    if isinstance(x, int):
        x = LocalizedInt(x, 0, ell)
    n = abs(x.num)
    while n and n % ell == 0:
        n //= ell
    return n


# --- ring descriptors (used by the CLI and the universality constructions) ---

def _egcd(a, b):
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class Ring:
    """Base descriptor; concrete subclasses convert/query elements.

    bezout(a, b) returns (u, v) with a*u - b*v = 1 when it exists.
    """

    name = "?"
    char_two = False

    def __repr__(self):
        return self.name


class IntegerRing(Ring):
    name = "Z"

    def elem(self, x):
        f = Fraction(x)
        if f.denominator != 1:
            raise ValueError("%s is not an integer" % (x,))
        return f.numerator

    def is_unit(self, e):
        return e in (1, -1)

    def inv(self, e):
        if e in (1, -1):
            return e
        raise ValueError("%r is not a unit in Z" % (e,))

    def gcd(self, a, b):
        return math.gcd(a, b)

    def div(self, a, b):
        return exact_div(a, b)

    def bezout(self, a, b):
        g, x, y = _egcd(a, b)
        if g != 1:
            raise ValueError("gcd(%r, %r) != 1: no Bezout pair" % (a, b))
        return x, -y


class RationalField(Ring):
    name = "Q"

    def elem(self, x):
        return Fraction(x)

    def is_unit(self, e):
        return e != 0

    def inv(self, e):
        if e == 0:
            raise ValueError("0 is not a unit")
        return 1 / Fraction(e)

    def gcd(self, a, b):
        return Fraction(a) if a != 0 else Fraction(b)

    def div(self, a, b):
        return Fraction(a) / Fraction(b)

    def bezout(self, a, b):
        if a != 0:
            return 1 / Fraction(a), Fraction(0)
        if b == 0:
            raise ValueError("no Bezout pair for (0, 0)")
        return Fraction(0), -1 / Fraction(b)


class SIntegerRing(Ring):
    """Z localized away from a finite set of primes, e.g. Z[1/6] = Z[1/2,1/3].

    Elements are Fractions whose denominators factor over the inverted set;
    membership is enforced on conversion.
    """

    def __init__(self, primes):
        self.primes = frozenset(primes)
        for p in self.primes:
            if not is_probable_prime(p):
                raise ValueError("%d is not prime" % p)
        self.name = "Z[1/%d]" % math.prod(sorted(self.primes))

    def elem(self, x):
        f = Fraction(x)
        d = f.denominator
        for p in self.primes:
            while d % p == 0:
                d //= p
        if d != 1:
            raise ValueError("%s is not in %s" % (x, self.name))
        return f

    def contains(self, x):
        try:
            self.elem(x)
            return True
        except ValueError:
            return False

    def _unit_free(self, e):
        n = abs(Fraction(e).numerator)
        for p in self.primes:
            while n and n % p == 0:
                n //= p
        return n

    def is_unit(self, e):
        return Fraction(e) != 0 and self._unit_free(e) == 1

    def inv(self, e):
        if not self.is_unit(e):
            raise ValueError("%r is not a unit in %s" % (e, self.name))
        return 1 / Fraction(e)

    def gcd(self, a, b):
        return Fraction(math.gcd(self._unit_free(a), self._unit_free(b)))

    def div(self, a, b):
        return self.elem(Fraction(a) / Fraction(b))

    def bezout(self, a, b):
        na, nb = self._unit_free(a), self._unit_free(b)
        if na == 0:
            return Fraction(0), -self.inv(b)
        if nb == 0:
            return self.inv(a), Fraction(0)
        g, x, y = _egcd(na, nb)
        if g != 1:
            raise ValueError("no Bezout pair for %r, %r" % (a, b))
        ua = Fraction(a) / na  # unit
        ub = Fraction(b) / nb
        return Fraction(x) / ua, -Fraction(y) / ub


class ResidueRing(Ring):
    """Z/qZ with canonical residues; gcd/div/bezout assume q prime."""

    def __init__(self, q):
        if q < 2:
            raise ValueError("modulus must be >= 2")
        self.q = q
        self.name = "Z/%d" % q
        self.char_two = q % 2 == 0

    def elem(self, x):
        if isinstance(x, ModInt):
            if x.q != self.q:
                raise ValueError("wrong modulus")
            return x
        f = Fraction(x)
        inv = pow(f.denominator, -1, self.q)
        return ModInt(f.numerator * inv, self.q)

    def is_unit(self, e):
        return math.gcd(e.v, self.q) == 1

    def inv(self, e):
        return e.inverse()

    def gcd(self, a, b):
        return a if a.v else b

    def div(self, a, b):
        return a * b.inverse()

    def bezout(self, a, b):
        g, x, y = _egcd(a.v, b.v)
        if g == 0 or math.gcd(g, self.q) != 1:
            raise ValueError("no Bezout pair for %r, %r mod %d" % (a, b, self.q))
        ginv = pow(g, -1, self.q)
        return ModInt(x * ginv, self.q), ModInt(-y * ginv, self.q)


def parse_ring(spec):
    """Ring descriptor from a CLI spelling: z, q, z1/6, mod97."""
    s = spec.strip().lower()
    if s == "z":
        return IntegerRing()
    if s == "q":
        return RationalField()
    if s.startswith("z1/"):
        n = int(s[3:])
        return SIntegerRing([p for p, _ in factorize(n)])
    if s.startswith("mod"):
        return ResidueRing(int(s[3:]))
    raise ValueError("unknown ring %r" % (spec,))
