"""Free monoid words, the degree-lexicographic order, and noncommutative
polynomials together with their tensor powers.

Words are plain tuples of generator ids.  Every generator has degree 1,
formal inverses included, so "degree" is just word length.
"""

from fractions import Fraction
from typing import NamedTuple

from .coeffs import FieldMismatch


class GenSymbol(NamedTuple):
    id: int
    name: str
    precedence: int


class AlphabetMismatch(ValueError):
    pass


class Alphabet:
    """Generator names with a precedence; order is degree first, then lex on precedence."""

    def __init__(self, names, precedence=None):
        names = list(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        self.names = tuple(names)
        self._index = {n: i for i, n in enumerate(names)}
        if precedence is None:
            precedence = names
        precedence = list(precedence)
        if sorted(precedence) != sorted(names):
            raise ValueError("precedence must list every generator exactly once")
        self.precedence = tuple(precedence)
        rank = [0] * len(names)
        for r, n in enumerate(precedence):
            rank[self._index[n]] = r
        self.rank = tuple(rank)
        self._identity = all(r == i for i, r in enumerate(rank))
        self.symbols = tuple(GenSymbol(i, n, rank[i]) for i, n in enumerate(names))

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, Alphabet)
            and other.names == self.names
            and other.precedence == self.precedence
        )

    def __hash__(self):
        return hash((self.names, self.precedence))

    def __repr__(self):
        return f"Alphabet({' < '.join(self.precedence)})"

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def __contains__(self, name):
        return name in self._index

    def key(self, word):
        if self._identity:
            return (len(word), word)
        r = self.rank
        return (len(word), tuple(r[i] for i in word))

    def fmt_word(self, word):
        if not word:
            return "1"
        return "*".join(self.names[i] for i in word)

    def words(self, degree):
        """All words of exactly the given length, in increasing order."""
        gens = sorted(range(len(self.names)), key=lambda i: self.rank[i])
        out = [()]
        for _ in range(degree):
            out = [w + (g,) for w in out for g in gens]
        return out


def word_compare(u, v, alphabet):
    ku, kv = alphabet.key(u), alphabet.key(v)
    return (ku > kv) - (ku < kv)


class NCPoly:
    """Finite linear combination of words with nonzero exact coefficients.

    `terms` maps word tuples to raw field values.  Instances are treated as
    immutable; the sorted view is cached on first use.
    """

    __slots__ = ("alphabet", "field", "terms", "_sorted")

    def __init__(self, alphabet, field, terms=None, _clean=False):
        self.alphabet = alphabet
        self.field = field
        if terms is None:
            terms = {}
        elif not _clean:
            terms = {w: c for w, c in terms.items() if c}
        self.terms = terms
        self._sorted = None

    # constructors

    @classmethod
    def zero(cls, alphabet, field):
        return cls(alphabet, field, {}, _clean=True)

    @classmethod
    def const(cls, alphabet, field, c=1):
        c = field.canonical(c)
        return cls(alphabet, field, {(): c} if c else {}, _clean=True)

    @classmethod
    def one(cls, alphabet, field):
        return cls.const(alphabet, field, 1)

    @classmethod
    def monomial(cls, alphabet, field, word, c=1):
        c = field.canonical(c)
        return cls(alphabet, field, {tuple(word): c} if c else {}, _clean=True)

    @classmethod
    def gen(cls, alphabet, field, name):
        return cls.monomial(alphabet, field, (alphabet.index(name),))

    # views

    def items(self):
        """Terms in descending monomial order."""
        if self._sorted is None:
            key = self.alphabet.key
            self._sorted = sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)
        return self._sorted

    def leading(self):
        its = self.items()
        if not its:
            raise ValueError("zero polynomial has no leading term")
        return its[0]

    def degree(self):
        if not self.terms:
            return -1
        return max(len(w) for w in self.terms)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coeff(self, word):
        return self.terms.get(tuple(word), self.field.zero)

    def constant(self):
        return self.terms.get((), self.field.zero)

    # arithmetic

    def _same(self, other):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field.name} vs {other.field.name}")
        if other.alphabet is not self.alphabet and other.alphabet != self.alphabet:
            raise AlphabetMismatch(f"{self.alphabet} vs {other.alphabet}")

    def _lift(self, other):
        if isinstance(other, NCPoly):
            self._same(other)
            return other
        return NCPoly.const(self.alphabet, self.field, other)

    def __add__(self, other):
        other = self._lift(other)
        F = self.field
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = F.add(out.get(w, F.zero), c)
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return NCPoly(self.alphabet, F, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return NCPoly(self.alphabet, F, {w: F.neg(c) for w, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        F = self.field
        c = F.canonical(c)
        if not c:
            return NCPoly.zero(self.alphabet, F)
        return NCPoly(self.alphabet, F, {w: F.mul(c, v) for w, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            return self.scale(other)
        self._same(other)
        F = self.field
        out = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u + v
                s = F.add(out.get(w, F.zero), F.mul(a, b))
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        return NCPoly(self.alphabet, F, out, _clean=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = NCPoly.one(self.alphabet, self.field)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self.field == other.field and self.alphabet == other.alphabet and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == NCPoly.const(self.alphabet, self.field, other).terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.items()))

    def fmt(self):
        if not self.terms:
            return "0"
        F = self.field
        parts = []
        for w, c in self.items():
            parts.append(_fmt_term(F, c, self.alphabet.fmt_word(w) if w else ""))
        return _join_terms(parts)

    __str__ = fmt

    def __repr__(self):
        return f"NCPoly({self.fmt()})"


def _fmt_term(F, c, body):
    """Render one term as (sign, magnitude text)."""
    if F.characteristic == 0:
        neg = c < 0
        mag = -c if neg else c
    else:
        neg = False
        mag = c
    cs = F.fmt(mag)
    if not body:
        return neg, cs
    if cs == "1":
        return neg, body
    return neg, f"{cs}*{body}"


def _join_terms(parts):
    out = []
    for k, (neg, s) in enumerate(parts):
        if k == 0:
            out.append(f"-{s}" if neg else s)
        else:
            out.append(f" - {s}" if neg else f" + {s}")
    return "".join(out)


def poly_mul(p, q):
    return p * q


class TensorPoly:
    """Element of A_1 (x) ... (x) A_n spanned by tuples of words.

    Each leg carries its own alphabet, so mixed tensors such as A (x) H are
    allowed.
    """

    __slots__ = ("alphabets", "field", "terms", "_sorted")

    def __init__(self, alphabets, field, terms=None, _clean=False):
        self.alphabets = tuple(alphabets)
        if not self.alphabets:
            raise ValueError("a tensor needs at least one leg")
        self.field = field
        if terms is None:
            terms = {}
        elif not _clean:
            terms = {k: c for k, c in terms.items() if c}
        n = len(self.alphabets)
        for k in terms:
            if len(k) != n:
                raise ValueError(f"tensor term {k} does not have {n} legs")
        self.terms = terms
        self._sorted = None

    @property
    def legs(self):
        return len(self.alphabets)

    @classmethod
    def zero(cls, alphabets, field):
        return cls(alphabets, field, {}, _clean=True)

    @classmethod
    def pure(cls, *polys):
        """Outer product p1 (x) p2 (x) ... of polynomials."""
        field = polys[0].field
        terms = {(): field.one}
        for p in polys:
            if p.field != field:
                raise FieldMismatch("mixed fields in tensor")
            new = {}
            for k, a in terms.items():
                for w, b in p.terms.items():
                    new[k + (w,)] = field.mul(a, b)
            terms = new
        return cls(tuple(p.alphabet for p in polys), field, terms)

    @classmethod
    def unit(cls, alphabets, field):
        return cls(alphabets, field, {tuple(() for _ in alphabets): field.one}, _clean=True)

    def items(self):
        if self._sorted is None:
            keys = [a.key for a in self.alphabets]

            def k(t):
                return tuple(f(w) for f, w in zip(keys, t[0]))

            self._sorted = sorted(self.terms.items(), key=k, reverse=True)
        return self._sorted

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _same(self, other):
        if not isinstance(other, TensorPoly):
            raise TypeError("expected TensorPoly")
        if other.legs != self.legs:
            raise ValueError(f"leg-count mismatch: {self.legs} vs {other.legs}")
        if other.field != self.field:
            raise FieldMismatch("tensor field mismatch")

    def __add__(self, other):
        self._same(other)
        F = self.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = F.add(out.get(k, F.zero), c)
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return TensorPoly(self.alphabets, F, out, _clean=True)

    def __neg__(self):
        F = self.field
        return TensorPoly(self.alphabets, F, {k: F.neg(c) for k, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        F = self.field
        c = F.canonical(c)
        if not c:
            return TensorPoly.zero(self.alphabets, F)
        return TensorPoly(self.alphabets, F, {k: F.mul(c, v) for k, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if not isinstance(other, TensorPoly):
            return self.scale(other)
        self._same(other)
        F = self.field
        out = {}
        for k1, a in self.terms.items():
            for k2, b in other.terms.items():
                k = tuple(u + v for u, v in zip(k1, k2))
                s = F.add(out.get(k, F.zero), F.mul(a, b))
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return TensorPoly(self.alphabets, F, out, _clean=True)

    def __eq__(self, other):
        if not isinstance(other, TensorPoly):
            return NotImplemented
        return self.legs == other.legs and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.items()))

    def fmt(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.items():
            body = " (x) ".join(a.fmt_word(w) for a, w in zip(self.alphabets, k))
            parts.append(_fmt_tensor_term(self.field, c, body))
        return _join_terms(parts)

    __str__ = fmt

    def __repr__(self):
        return f"TensorPoly({self.fmt()})"


def _fmt_tensor_term(F, c, body):
    neg, cs = _fmt_term(F, c, "")
    if cs == "1":
        return neg, body
    return neg, f"{cs}*({body})"


def tensor_mul(s, t):
    return s * t


def tensor_apply_leg(t, leg, f):
    """Apply a linear map f (NCPoly -> NCPoly) to leg `leg` (1-based) of t."""
    if not 1 <= leg <= t.legs:
        raise IndexError(f"leg {leg} out of range 1..{t.legs}")
    i = leg - 1
    F = t.field
    cache = {}
    out = {}
    alph = t.alphabets[i]
    new_alph = None
    for k, c in t.terms.items():
        w = k[i]
        img = cache.get(w)
        if img is None:
            img = f(NCPoly.monomial(alph, F, w))
            cache[w] = img
        new_alph = img.alphabet
        for w2, c2 in img.terms.items():
            k2 = k[:i] + (w2,) + k[i + 1:]
            s = F.add(out.get(k2, F.zero), F.mul(c, c2))
            if s:
                out[k2] = s
            else:
                out.pop(k2, None)
    if new_alph is None:
        new_alph = f(NCPoly.zero(alph, F)).alphabet
    alphabets = list(t.alphabets)
    alphabets[i] = new_alph
    return TensorPoly(alphabets, F, out, _clean=True)


def tensor_collapse(t, legs, alphabet):
    """Multiply a block of consecutive legs together (the algebra product m)."""
    lo, hi = legs
    F = t.field
    out = {}
    for k, c in t.terms.items():
        w = ()
        for part in k[lo - 1:hi]:
            w = w + part
        k2 = k[:lo - 1] + (w,) + k[hi:]
        s = F.add(out.get(k2, F.zero), c)
        if s:
            out[k2] = s
        else:
            out.pop(k2, None)
    alphabets = t.alphabets[:lo - 1] + (alphabet,) + t.alphabets[hi:]
    return TensorPoly(alphabets, F, out, _clean=True)
