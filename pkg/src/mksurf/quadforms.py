"""Ternary quadratic forms attached to Markoff points, their local invariant
profiles, isotropy via Legendre's theorem, and the unimodular 3x3 matrices
realizing the Markoff moves on Gram matrices."""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .markoff import MarkoffPoint
from .rings import (
    INF,
    LocalizedInt,
    factorize,
    hilbert,
    is_square_mod,
    jacobi,
    square_class_int,
    squarefree_part,
)


def _as_rational(x):
    if isinstance(x, LocalizedInt):
        return x.to_fraction()
    return Fraction(x)


@dataclass(frozen=True)
class TernaryForm:
    """u1^2 + u2^2 + u3^2 + x1*u1*u2 + x2*u1*u3 + x3*u2*u3 with level k."""

    x1: int
    x2: int
    x3: int
    k: int

    @staticmethod
    def from_point(p):
        x1, x2, x3 = p.coords()
        return TernaryForm(x1, x2, x3, p.k)

    def gram(self):
        return [[2, self.x1, self.x2], [self.x1, 2, self.x3], [self.x2, self.x3, 2]]

    def gram_det(self):
        return mat3_det(self.gram())

    def evaluate(self, u1, u2, u3):
        return (u1 * u1 + u2 * u2 + u3 * u3
                + self.x1 * u1 * u2 + self.x2 * u1 * u3 + self.x3 * u2 * u3)


@dataclass(frozen=True)
class HasseProfile:
    """Map place -> +-1 for the places where the invariant can be nontrivial."""

    entries: tuple  # sorted tuple of (place, value) with INF last

    def as_dict(self):
        return dict(self.entries)

    def product(self):
        out = 1
        for _, v in self.entries:
            out *= v
        return out

    def value_at(self, p):
        return self.as_dict().get(p, 1)

    def nontrivial(self):
        return {p: v for p, v in self.entries if v == -1}


def _place_sort_key(p):
    return (1, 0) if p == INF else (0, p)


def hasse_profile(point):
    """Invariant profile c_p = (x^2-4, k-4)_p of the form attached to a
    Markoff point, computed from a coordinate with x^2 != 4 and
    cross-checked against every other usable coordinate."""
    k = _as_rational(point.k)
    if k <= 4:
        raise ValueError("profiles need k > 4, got %s" % k)
    coords = [_as_rational(c) for c in point.coords()]
    usable = [c for c in coords if c * c != 4]
    if not usable:
        raise ValueError("all coordinates are +-2: corrupt data for k > 4")
    km4 = k - 4
    km4_primes = {q for q, _ in factorize(square_class_int(km4)) if q > 2}

    def places_for(c):
        out = {2, INF} | km4_primes
        for q, _ in factorize(square_class_int(c * c - 4)):
            if q > 2:
                out.add(q)
        return out

    all_places = set()
    for c in usable:
        all_places |= places_for(c)
    profiles = []
    for c in usable:
        profiles.append({p: hilbert(c * c - 4, km4, p) for p in sorted(all_places, key=_place_sort_key)})
    for other in profiles[1:]:
        if other != profiles[0]:
            raise ValueError("coordinate profiles disagree: %r" % (profiles,))
    keep = places_for(usable[0])
    entries = tuple((p, profiles[0][p]) for p in sorted(keep, key=_place_sort_key))
    return HasseProfile(entries)


def legendre_isotropic(a, b, c):
    """Legendre's criterion for a*x^2 + b*y^2 + c*z^2 with a > 0 > b, c and
    abc squarefree."""
    if not (a > 0 and b < 0 and c < 0):
        raise ValueError("need a > 0 and b, c < 0")
    if abs(squarefree_part(a * b * c)) != abs(a * b * c):
        raise ValueError("abc must be squarefree")
    return (is_square_mod(-a * b, abs(c))
            and is_square_mod(-a * c, abs(b))
            and is_square_mod(-b * c, abs(a)))


def _witness_search(form, bound):
    """Nontrivial integer zero of the form with |u_i| <= bound, or None.

    Scans |u1| outward from 0 and returns the first hit, reduced to a
    primitive vector, so small witnesses come out small.
    """
    x1, x2, x3 = form.x1, form.x2, form.x3
    u2s = np.arange(-bound, bound + 1, dtype=np.int64)
    order = [0]
    for v in range(1, bound + 1):
        order.extend((v, -v))
    for u1 in order:
        bq = x2 * u1 + x3 * u2s
        cq = u1 * u1 + u2s * u2s + x1 * u1 * u2s
        disc = bq * bq - 4 * cq
        ok = disc >= 0
        if not ok.any():
            continue
        d = disc[ok]
        u2v = u2s[ok]
        bv = bq[ok]
        s = np.sqrt(d.astype(np.float64)).astype(np.int64)
        row = []
        for ds in (-1, 0, 1):
            ss = s + ds
            hit = (ss >= 0) & (ss * ss == d)
            for u2, bb, sv in zip(u2v[hit].tolist(), bv[hit].tolist(), ss[hit].tolist()):
                if (sv - bb) % 2:
                    continue
                for u3 in ((-bb + sv) // 2, (-bb - sv) // 2):
                    if abs(u3) <= bound and (u1, u2, u3) != (0, 0, 0):
                        if form.evaluate(u1, u2, u3) == 0:
                            row.append((abs(u2), abs(u3), (u1, u2, u3)))
        if row:
            w = min(row)[2]
            g = math.gcd(math.gcd(abs(w[0]), abs(w[1])), abs(w[2]))
            return (w[0] // g, w[1] // g, w[2] // g)
    return None


def form_isotropic(point, witness_bound=600):
    """Isotropy of the attached form over Q, decided through the squarefree
    reduction to Legendre's theorem.

    Returns (verdict, data) with verdict in {"Isotropic", "Anisotropic",
    "Inapplicable"}.  Isotropic verdicts carry a verified integer zero when
    one exists within witness_bound (None and flagged otherwise).
    """
    k = point.k
    if not isinstance(k, int) or k <= 4:
        raise ValueError("form_isotropic needs integral k > 4")
    n = squarefree_part(k - 4)
    for j, x in enumerate(point.coords()):
        if x * x <= 4:
            continue
        m = squarefree_part(x * x - 4)
        if math.gcd(m, n) != 1:
            continue
        iso = is_square_mod(m, n) and is_square_mod(n, m)
        data = {"coordinate": j + 1, "m": m, "n": n}
        if iso:
            form = TernaryForm.from_point(point)
            w = _witness_search(form, witness_bound)
            data["witness"] = w
            data["witness_bound"] = witness_bound
            if w is None:
                data["flag"] = "criterion only: no zero within bound"
            return "Isotropic", data
        data["anisotropy_prime"] = _anisotropy_prime(point, n)
        return "Anisotropic", data
    return "Inapplicable", {"reason": "no coordinate with squarefree part coprime to k-4"}


def _anisotropy_prime(point, n):
    """An odd p with p || k-4 and some x_j^2-4 a nonresidue mod p, if any."""
    for p, e in factorize(point.k - 4):
        if p == 2 or e != 1:
            continue
        for x in point.coords():
            if (x * x - 4) % p != 0 and jacobi(x * x - 4, p) == -1:
                return (p, x)
    return None


# --- 3x3 integer matrix helpers ----------------------------------------------

def mat3_mul(a, b):
    return [[sum(a[i][t] * b[t][j] for t in range(3)) for j in range(3)] for i in range(3)]


def mat3_transpose(a):
    return [[a[j][i] for j in range(3)] for i in range(3)]


def mat3_det(a):
    return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))


_COMPLEMENT = {1: 3, 2: 2, 3: 1}


def mtype_matrix(move, point):
    """The unimodular gamma with gamma^T X(p) gamma = X(move applied to p).

    Sign changes and permutations are coordinate-free; the Vieta matrices
    depend on the point's coordinates.
    """
    x1, x2, x3 = point.coords()
    if move.tag == "sign":
        i, j = move.data
        missing = ({1, 2, 3} - {i, j}).pop()
        pos = _COMPLEMENT[missing]
        g = [[1 if r == c else 0 for c in range(3)] for r in range(3)]
        g[pos - 1][pos - 1] = -1
        return g
    if move.tag == "perm":
        sigma = move.data

        def pi(i):
            return _COMPLEMENT[sigma[_COMPLEMENT[i] - 1]]

        return [[1 if r + 1 == pi(c + 1) else 0 for c in range(3)] for r in range(3)]
    j = move.data[0]
    if j == 1:
        return [[1, 0, 0], [0, -1, 0], [0, x3, 1]]
    if j == 2:
        return [[-1, 0, 0], [x1, 1, 0], [0, 0, 1]]
    return [[1, 0, x2], [0, 1, 0], [0, 0, -1]]


def mtype_conjugate(gamma, point):
    """gamma^T X(point) gamma, returned as the Markoff point it represents."""
    x = TernaryForm.from_point(point).gram()
    y = mat3_mul(mat3_transpose(gamma), mat3_mul(x, gamma))
    if [y[i][i] for i in range(3)] != [2, 2, 2] or y[0][1] != y[1][0] \
            or y[0][2] != y[2][0] or y[1][2] != y[2][1]:
        raise ValueError("conjugate is not a Markoff Gram matrix")
    return MarkoffPoint.make(y[0][1], y[0][2], y[1][2])
