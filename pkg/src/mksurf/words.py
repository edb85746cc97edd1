"""Words in free products of two cyclic groups, their embeddings into the
modular group, conjugacy-class representatives of a given trace, and the
metabelian quotient with its unit classification."""

from dataclasses import dataclass
from functools import lru_cache

from .mat2 import Mat2, commutator

SUPPORTED = ((2, 3), (2, None), (3, 3), (3, None))  # None encodes infinite order


def _check_mn(m, n):
    if (m, n) not in SUPPORTED:
        raise ValueError("unsupported orders (%r, %r)" % (m, n))


@dataclass(frozen=True)
class Word:
    """Reduced word in <a> * <b> with a of order m and b of order n.

    Stored run-length encoded as ((letter, exponent), ...); finite-order
    exponents are normalized into 1..order-1, infinite-order exponents are
    any nonzero integer.
    """

    runs: tuple
    m: object
    n: object

    @staticmethod
    def make(runs, m, n):
        # a/u carry the first order, b/v the second
        return Word(_normalize(runs, {"a": m, "b": n, "u": m, "v": n}), m, n)

    @staticmethod
    def identity(m, n):
        return Word((), m, n)

    @staticmethod
    def gen(letter, m, n, exp=1):
        return Word.make(((letter, exp),), m, n)

    def orders(self):
        return {"a": self.m, "b": self.n}

    def __mul__(self, other):
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError("words from different groups")
        return Word.make(self.runs + other.runs, self.m, self.n)

    def inverse(self):
        return Word.make(tuple((g, -e) for g, e in reversed(self.runs)), self.m, self.n)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = Word.identity(self.m, self.n)
        for _ in range(k):
            out = out * self
        return out

    def letters(self):
        """Flat tuple of (letter, +-1); finite-order letters are positive."""
        out = []
        for g, e in self.runs:
            step = 1 if e > 0 else -1
            out.extend((g, step) for _ in range(abs(e)))
        return tuple(out)

    def length(self):
        return sum(abs(e) for _, e in self.runs)

    def exponent_sums(self):
        sums = {"a": 0, "b": 0}
        for g, e in self.runs:
            sums[g] += e
        return sums["a"], sums["b"]

    def is_cyclically_reduced(self):
        if len(self.runs) <= 1:
            return True
        return self.runs[0][0] != self.runs[-1][0]

    def cyclic_reduction(self):
        """A cyclically reduced conjugate."""
        w = self
        while not w.is_cyclically_reduced():
            (g, e) = w.runs[0]
            conj = Word.make(((g, -e),), w.m, w.n)
            w = conj * w * conj.inverse()
            if w.length() == 0:
                break
        return w

    def rotations(self):
        """All letter-granularity rotations (requires cyclically reduced)."""
        if not self.is_cyclically_reduced():
            raise ValueError("rotations need a cyclically reduced word")
        letters = self.letters()
        out = []
        for i in range(max(1, len(letters))):
            rot = letters[i:] + letters[:i]
            out.append(Word.make(tuple(rot), self.m, self.n))
        return out

    def __str__(self):
        if not self.runs:
            return "1"
        parts = []
        for g, e in self.runs:
            parts.append(g if e == 1 else "%s%d" % (g, e))
        return " ".join(parts)

    def __repr__(self):
        return "<%s | %r,%r>" % (self, self.m, self.n)


def _normalize(runs, orders):
    stack = []
    for g, e in runs:
        if g not in orders:
            raise ValueError("unknown letter %r" % (g,))
        if stack and stack[-1][0] == g:
            e += stack.pop()[1]
        o = orders[g]
        if o is not None:
            e %= o
        if e != 0:
            stack.append((g, e))
    return tuple(stack)


def word(m, n, text):
    """Parse CLI syntax like "a b3 a-1 b-2" into a reduced Word."""
    runs = []
    for tok in text.replace(",", " ").split():
        g = tok[0]
        e = int(tok[1:]) if len(tok) > 1 else 1
        runs.append((g, e))
    return Word.make(tuple(runs), m, n)


def reduce_word(w):
    """Words normalize on construction; exposed for the module surface."""
    return Word.make(w.runs, w.m, w.n)


def cyclic_conjugacy_equal(w1, w2):
    """True iff the cyclically reduced words are rotations of one another."""
    for w in (w1, w2):
        if not w.is_cyclically_reduced():
            raise ValueError("%r is not cyclically reduced" % (w,))
    if (w1.m, w1.n) != (w2.m, w2.n):
        return False
    return any(w2.runs == r.runs for r in w1.rotations())


def conjugacy_class_key(w):
    """Canonical key of the cyclic class of a cyclically reduced word."""
    return min(r.runs for r in w.rotations())


# --- the modular-group embeddings --------------------------------------------

U_MAT = Mat2(0, -1, 1, 0)
V_MAT = Mat2(0, -1, 1, 1)

_EMBED_MATS = {
    (2, 3): {"a": U_MAT, "b": V_MAT},
    (2, None): {"a": U_MAT, "b": V_MAT * U_MAT * V_MAT},
    (3, 3): {"a": V_MAT, "b": U_MAT * V_MAT * U_MAT**3},
    (3, None): {"a": V_MAT, "b": (U_MAT * V_MAT) ** 3 * U_MAT},
}

# images of a and b as reduced u,v-words (u of order 2, v of order 3)
_EMBED_WORDS = {
    (2, 3): {"a": (("u", 1),), "b": (("v", 1),)},
    (2, None): {"a": (("u", 1),), "b": (("v", 1), ("u", 1), ("v", 1))},
    (3, 3): {"a": (("v", 1),), "b": (("u", 1), ("v", 1), ("u", 1))},
    (3, None): {"a": (("v", 1),),
                "b": (("u", 1), ("v", 1)) * 3 + (("u", 1),)},
}


def embedding_matrix(m, n, gen):
    """The defining matrix of a generator ("a", "b") or the commutator "c"."""
    _check_mn(m, n)
    if gen in ("a", "b"):
        return _EMBED_MATS[(m, n)][gen]
    if gen == "c":
        a = _EMBED_MATS[(m, n)]["a"]
        b = _EMBED_MATS[(m, n)]["b"]
        return commutator(a, b)
    raise ValueError("generator must be a, b or c")


def modular_word(m, n, w):
    """The u,v-word of an element of the embedded free product."""
    uv = Word.identity(2, 3)
    uv_gens = {g: Word.make(r, 2, 3) for g, r in _EMBED_WORDS[(m, n)].items()}
    for g, e in w.runs:
        uv = uv * uv_gens[g] ** e
    return uv


def uv_matrix(w):
    """Evaluate a u,v-word in SL2(Z)."""
    out = Mat2(1, 0, 0, 1)
    for g, e in w.runs:
        base = U_MAT if g == "u" else V_MAT
        out = out * base**e
    return out


def word_trace(m, n, w):
    """Absolute trace of a word's image in the modular group.

    Accepts a,b-words over supported (m, n) and u,v-words directly.
    """
    if w.runs and w.runs[0][0] in ("u", "v"):
        return abs(uv_matrix(w).trace())
    _check_mn(m, n)
    out = Mat2(1, 0, 0, 1)
    for g, e in w.runs:
        out = out * _EMBED_MATS[(m, n)][g] ** e
    return abs(out.trace())


# --- conjugacy representatives of a given trace ------------------------------

_R = Mat2(1, 1, 0, 1)   # -UV
_S = Mat2(1, 0, 1, 1)   # -UV^2


def _min_rotation(seq):
    return min(tuple(seq[i:] + seq[:i]) for i in range(len(seq)))


@lru_cache(maxsize=None)
def psl2_class_reps(t):
    """One cyclically reduced word u v^{s_1} ... u v^{s_k} per conjugacy
    class of trace t >= 3 in the modular group.

    Every class of trace >= 3 has such a representative, the syllable
    length is bounded by the trace, and appending syllables only grows the
    trace of the positivized product, which prunes the search.
    """
    if t < 3:
        raise ValueError("use psl2_small_trace_classes for |trace| <= 2")
    reps = []
    seen = set()

    def dfs(seq, mat):
        tr = mat.a + mat.d
        if tr > t or len(seq) > t:
            return
        if tr == t and seq:
            key = _min_rotation(seq)
            if key not in seen:
                seen.add(key)
                runs = []
                for s in seq:
                    runs.extend((("u", 1), ("v", s)))
                reps.append(Word.make(tuple(runs), 2, 3))
        for s, f in ((1, _R), (2, _S)):
            dfs(seq + (s,), mat * f)

    dfs((), Mat2(1, 0, 0, 1))
    return sorted(reps, key=lambda w: (w.length(), w.runs))


def psl2_small_trace_classes(t):
    """Class data for |trace| <= 2: trace 0 is the order-2 class, trace 1
    splits in two order-3 classes, trace 2 is the parabolic family."""
    if t == 0:
        return [Word.gen("u", 2, 3)]
    if t == 1:
        return [Word.gen("v", 2, 3), Word.gen("v", 2, 3, 2)]
    if t == 2:
        raise ValueError("trace 2 is the infinite parabolic family (uv)^r")
    raise ValueError("no class of trace %r" % (t,))


# --- membership filtering (factorization through the embedding) --------------

def _syllable_images(m, n, max_len):
    """(letter, exponent, image-letter-tuple) for all generator powers whose
    embedded length can fit in max_len, longest image first."""
    out = {"a": [], "b": []}
    for g in ("a", "b"):
        o = (m if g == "a" else n)
        exps = range(1, o) if o is not None else \
            [e for k in range(1, max_len + 1) for e in (k, -k)]
        base = Word.make(_EMBED_WORDS[(m, n)][g], 2, 3)
        for e in exps:
            img = (base ** e).letters()
            if 0 < len(img) <= max_len:
                out[g].append((e, img))
        out[g].sort(key=lambda p: -len(p[1]))
    return out


def factor_through_embedding(m, n, uv_word):
    """Express a u,v-word as an alternating product of a- and b-powers of
    the embedded free product, or None.

    Longest-prefix matching with backtracking; junction letters make the
    factorization unique, so backtracking rarely fires.
    """
    _check_mn(m, n)
    letters = uv_word.letters()
    if not letters:
        return Word.identity(m, n)
    syll = _syllable_images(m, n, len(letters))

    def dfs(pos, expect, acc):
        if pos == len(letters):
            return acc
        for g in expect:
            for e, img in syll[g]:
                if letters[pos:pos + len(img)] == img:
                    res = dfs(pos + len(img), ("b",) if g == "a" else ("a",),
                              acc + [(g, e)])
                    if res is not None:
                        return res
        return None

    runs = dfs(0, ("a", "b"), [])
    if runs is None:
        return None
    w = Word.make(tuple(runs), m, n)
    if modular_word(m, n, w).runs != uv_word.runs:
        return None
    return w


def alg1_representatives(m, n, t):
    """A finite set of words meeting every conjugacy class of trace t in the
    embedded free product: modular-group class representatives, rotated,
    and filtered through the embedding."""
    _check_mn(m, n)
    found = {}
    for rep in psl2_class_reps(t):
        for rot in rep.rotations():
            g = factor_through_embedding(m, n, rot)
            if g is None or g.length() == 0:
                continue
            g = g.cyclic_reduction()
            found.setdefault(conjugacy_class_key(g), g)
    return [found[k] for k in sorted(found)]


def in_derived_subgroup(m, n, w):
    """Exponent-sum test against the abelianization Z_m x Z_n."""
    _check_mn(m, n)
    sa, sb = w.exponent_sums()
    ok_a = sa % m == 0 if m is not None else sa == 0
    ok_b = sb % n == 0 if n is not None else sb == 0
    return ok_a and ok_b


# --- the metabelian quotient --------------------------------------------------

class SRingElem:
    """Element of Z[x, x^-1, y, y^-1] / (psi_m(x), psi_n(y)) with
    psi_k = 1 + X + ... + X^(k-1) and psi_infinity = 0.

    Coefficients live on monomials x^i y^j with 0 <= i <= m-2 and, for
    finite n, 0 <= j <= n-2; infinite n leaves j free over Z.
    """

    __slots__ = ("m", "n", "coeffs")

    def __init__(self, m, n, coeffs=None):
        _check_mn(m, n)
        self.m = m
        self.n = n
        self.coeffs = {}
        if coeffs:
            for (i, j), c in coeffs.items():
                self._add(i, j, c)

    def _add(self, i, j, c):
        if c == 0:
            return
        work = [(i, j, c)]
        while work:
            i, j, c = work.pop()
            i %= self.m
            if i == self.m - 1:
                work.extend((r, j, -c) for r in range(self.m - 1))
                continue
            if self.n is not None:
                j %= self.n
                if j == self.n - 1:
                    work.extend((i, r, -c) for r in range(self.n - 1))
                    continue
            key = (i, j)
            v = self.coeffs.get(key, 0) + c
            if v:
                self.coeffs[key] = v
            else:
                self.coeffs.pop(key, None)

    def copy(self):
        out = SRingElem(self.m, self.n)
        out.coeffs = dict(self.coeffs)
        return out

    @staticmethod
    def monomial(m, n, i=0, j=0, c=1):
        out = SRingElem(m, n)
        out._add(i, j, c)
        return out

    @staticmethod
    def zero(m, n):
        return SRingElem(m, n)

    def __add__(self, other):
        out = self.copy()
        for (i, j), c in other.coeffs.items():
            out._add(i, j, c)
        return out

    def __neg__(self):
        out = SRingElem(self.m, self.n)
        out.coeffs = {k: -c for k, c in self.coeffs.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = SRingElem(self.m, self.n)
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                out._add(i1 + i2, j1 + j2, c1 * c2)
        return out

    def mul_monomial(self, i, j, c=1):
        out = SRingElem(self.m, self.n)
        for (i1, j1), c1 in self.coeffs.items():
            out._add(i1 + i, j1 + j, c1 * c)
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = SRingElem.monomial(self.m, self.n, 0, 0, other)
        return (self.m, self.n) == (other.m, other.n) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.m, self.n, tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for (i, j), c in sorted(self.coeffs.items()):
            mono = "".join((["x" if i == 1 else "x^%d" % i] if i else [])
                           + (["y" if j == 1 else "y^%d" % j] if j else []))
            parts.append("%+d%s" % (c, mono) if mono else "%+d" % c)
        return " ".join(parts)


def _geometric_y(m, n, j):
    """1 + y + ... + y^(j-1) for j >= 0, and -(y^j + ... + y^-1) below."""
    out = SRingElem.zero(m, n)
    if j >= 0:
        for r in range(j):
            out._add(0, r, 1)
    else:
        for r in range(j, 0):
            out._add(0, r, -1)
    return out


def metabelian_image(m, n, w):
    """Image of a derived-subgroup word in the metabelian quotient module.

    Scans left to right tracking the abelianized prefix (i, j); moving an
    a^(+-1) letter across the b-prefix emits a conjugated commutator whose
    image is a monomial multiple of a geometric sum in y.
    """
    _check_mn(m, n)
    if not in_derived_subgroup(m, n, w):
        raise ValueError("%r is not in the derived subgroup" % (w,))
    acc = SRingElem.zero(m, n)
    i = j = 0
    for g, e in w.letters():
        if g == "a":
            if e == 1:
                acc = acc - _geometric_y(m, n, j).mul_monomial(i, 0)
                i += 1
            else:
                i -= 1
                acc = acc + _geometric_y(m, n, j).mul_monomial(i, 0)
        else:
            j += e
    return acc


def is_unit_in_S(m, n, s):
    """True iff s is +-x^i y^j, the only invertible elements."""
    _check_mn(m, n)
    if not s.coeffs:
        return False
    if n is not None:
        for sign in (1, -1):
            for i in range(m):
                for j in range(n):
                    if s == SRingElem.monomial(m, n, i, j, sign):
                        return True
        return False
    js = {j for (_, j) in s.coeffs}
    if len(js) != 1:
        return False
    j = js.pop()
    for sign in (1, -1):
        for i in range(m):
            if s == SRingElem.monomial(m, n, i, j, sign):
                return True
    return False


# --- the trace table ----------------------------------------------------------

def _scalar_class_mod(mat, modulus):
    """lam with mat = lam * I (mod modulus), or None."""
    if mat.b % modulus or mat.c % modulus or (mat.a - mat.d) % modulus:
        return None
    return mat.a % modulus


def second_derived_congruence(m, n):
    """(modulus, scalar classes) pinning the second derived subgroup of the
    embedded group: its elements are scalar lam*I mod the modulus."""
    _check_mn(m, n)
    a = _EMBED_MATS[(m, n)]["a"]
    b = _EMBED_MATS[(m, n)]["b"]
    if (m, n) == (2, 3):
        return 2, frozenset({1})
    if (m, n) == (2, None):
        modulus = 8
        gen = commutator(a * a * b * a.inverse(), a * b)
    elif (m, n) == (3, 3):
        modulus = 8
        gen = commutator(b * a, a * (b * a) * a.inverse())
    else:
        modulus = 32
        gen = commutator(b * a, a * (b * a) * a.inverse())
    lam = _scalar_class_mod(gen, modulus)
    if lam is None:
        raise AssertionError("second-derived generator is not scalar mod %d" % modulus)
    lams = {1}
    x = lam
    while x not in lams:
        lams.add(x)
        x = x * lam % modulus
    return modulus, frozenset(lams)


def table1_trace_filter(m, n):
    """Admissible traces for a commutator of topological generators: the
    2 +- 2^k trace form intersected with the scalar congruence classes of
    the second derived subgroup."""
    _check_mn(m, n)
    modulus, lams = second_derived_congruence(m, n)
    trc = embedding_matrix(m, n, "c").trace()
    allowed = {lam * trc % modulus for lam in lams}
    if 2 % modulus in allowed:
        raise ArithmeticError("trace filter would be unbounded")
    out = set()
    k = 0
    while (1 << k) < modulus:
        for cand in (2 + (1 << k), 2 - (1 << k)):
            if cand % modulus in allowed:
                out.add(cand)
        k += 1
    return sorted(out)
