"""Exact sparse row echelon forms.

Vectors are dicts from integer coordinates to field values; coordinate
order is chosen by the caller so that the largest index is the leading
term (we always index window bases in increasing monomial order).  Over Q
the rows are kept as primitive integer vectors (fraction-free
elimination); over F_p rows are normalized to pivot 1.
"""

import heapq
from fractions import Fraction
from math import gcd, lcm


def _content(vec, combo):
    g = 0
    for v in vec.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    for v in combo.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


class Echelon:
    """Incrementally built echelon basis with optional tag tracking.

    Every stored row r satisfies r = sum(combo[t] * original[t]) over the
    tagged vectors passed to `add`, which is what kernels and solves need.
    """

    def __init__(self, field, track=False):
        self.field = field
        self.p = field.characteristic
        self.track = track
        self.rows = {}
        self.combos = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self):
        return len(self.rows)

    def pivots(self):
        return sorted(self.rows)

    def _to_internal(self, vec):
        p = self.p
        if p:
            out = {k: v % p for k, v in vec.items() if v % p}
            return out, 1
        m = 1
        for v in vec.values():
            if isinstance(v, Fraction):
                m = lcm(m, v.denominator)
        out = {}
        for k, v in vec.items():
            if v:
                out[k] = int(v * m)
        return out, m

    def _reduce(self, vec, combo, scale):
        rows = self.rows
        if not rows or not vec:
            return vec, combo, scale
        p = self.p
        track = self.track
        heap = [-k for k in vec if k in rows]
        heapq.heapify(heap)
        while heap:
            k = -heapq.heappop(heap)
            a = vec.get(k)
            if not a:
                continue
            row = rows[k]
            if p:
                for j, r in row.items():
                    nv = (vec.get(j, 0) - a * r) % p
                    if nv:
                        if j not in vec and j in rows:
                            heapq.heappush(heap, -j)
                        vec[j] = nv
                    else:
                        vec.pop(j, None)
                if track:
                    for t, r in self.combos[k].items():
                        nv = (combo.get(t, 0) - a * r) % p
                        if nv:
                            combo[t] = nv
                        else:
                            combo.pop(t, None)
            else:
                b = row[k]
                g = gcd(a, b)
                a, b = a // g, b // g
                if b != 1:
                    for j in vec:
                        vec[j] *= b
                    if track:
                        for t in combo:
                            combo[t] *= b
                    scale *= b
                for j, r in row.items():
                    nv = vec.get(j, 0) - a * r
                    if nv:
                        if j not in vec and j in rows:
                            heapq.heappush(heap, -j)
                        vec[j] = nv
                    else:
                        vec.pop(j, None)
                if track:
                    for t, r in self.combos[k].items():
                        nv = combo.get(t, 0) - a * r
                        if nv:
                            combo[t] = nv
                        else:
                            combo.pop(t, None)
        if not p and vec:
            g = gcd(_content(vec, combo), scale)
            if g > 1:
                vec = {j: v // g for j, v in vec.items()}
                combo = {t: v // g for t, v in combo.items()}
                scale //= g
        return vec, combo, scale

    def add(self, vec, tag=None):
        """Insert a vector.  Returns (True, None) if it enlarged the span,
        otherwise (False, relation) where relation expresses a linear
        dependency among tagged inputs (only when tracking)."""
        v, scale = self._to_internal(vec)
        combo = {}
        v, combo, scale = self._reduce(v, combo, scale)
        if self.track and tag is not None:
            combo = dict(combo)
            combo[tag] = (combo.get(tag, 0) + scale) % self.p if self.p else combo.get(tag, 0) + scale
            if not combo[tag]:
                del combo[tag]
        if not v:
            if self.track:
                return False, self._export(combo)
            return False, None
        piv = max(v)
        if self.p:
            inv = pow(v[piv], -1, self.p)
            v = {j: x * inv % self.p for j, x in v.items()}
            combo = {t: x * inv % self.p for t, x in combo.items()}
        else:
            if v[piv] < 0:
                v = {j: -x for j, x in v.items()}
                combo = {t: -x for t, x in combo.items()}
            g = _content(v, combo) if self.track else _content(v, {})
            if g > 1:
                v = {j: x // g for j, x in v.items()}
                combo = {t: x // g for t, x in combo.items()}
        self.rows[piv] = v
        if self.track:
            self.combos[piv] = combo
        return True, None

    def _export(self, d):
        if self.p:
            return dict(d)
        return {k: Fraction(v) for k, v in d.items()}

    def reduce(self, vec):
        """Exact remainder of vec modulo the span (in field values)."""
        v, scale = self._to_internal(vec)
        saved = self.track
        self.track = False
        try:
            v, _, scale = self._reduce(v, {}, scale)
        finally:
            self.track = saved
        if self.p:
            return v
        return {j: Fraction(x, scale) for j, x in v.items()}

    def contains(self, vec):
        return not self.reduce(vec)

    def solve(self, vec):
        """Coefficients c with vec = sum c[tag] * original[tag], or None."""
        if not self.track:
            raise ValueError("solve needs a tracking echelon")
        v, scale = self._to_internal(vec)
        v, combo, scale = self._reduce(v, {}, scale)
        if v:
            return None
        # 0 = scale*vec + sum combo*orig  =>  vec = -combo/scale
        if self.p:
            inv = pow(scale, -1, self.p)
            return {t: (-x * inv) % self.p for t, x in combo.items() if x % self.p}
        return {t: Fraction(-x, scale) for t, x in combo.items() if x}

    def row(self, piv):
        r = self.rows[piv]
        if self.p:
            return dict(r)
        return {j: Fraction(x) for j, x in r.items()}


def rank(field, vectors):
    e = Echelon(field)
    for v in vectors:
        e.add(v)
    return e.rank


def nullspace(field, images):
    """Kernel of the map sending basis vector i to images[i]."""
    e = Echelon(field, track=True)
    kernel = []
    for i, v in enumerate(images):
        ok, rel = e.add(v, tag=i)
        if not ok:
            kernel.append(rel)
    return kernel, e


class KeyIndex:
    """Bijection between arbitrary sortable keys and echelon coordinates.

    Coordinates increase with the supplied sort key, so echelon pivots are
    leading terms.
    """

    def __init__(self, keys, sortkey):
        ks = sorted(set(keys), key=sortkey)
        self.keys = ks
        self.index = {k: i for i, k in enumerate(ks)}

    def __len__(self):
        return len(self.keys)

    def vec(self, d):
        idx = self.index
        return {idx[k]: c for k, c in d.items() if c}

    def unvec(self, v):
        ks = self.keys
        return {ks[i]: c for i, c in v.items()}


class WordCode:
    """Order-preserving integer codes for words under deglex.

    code(u) < code(v) exactly when u < v, so a vector keyed by codes has
    its leading monomial at the largest coordinate.  `slots` > 1 interleaves
    several copies (free module components): code * slots + component.
    """

    def __init__(self, alphabet, slots=1):
        self.alphabet = alphabet
        self.n = len(alphabet)
        self.slots = slots
        self._offsets = [0]

    def _offset(self, length):
        offs = self._offsets
        n = self.n
        while len(offs) <= length:
            offs.append(offs[-1] + n ** (len(offs) - 1))
        return offs[length]

    def code(self, word, slot=0):
        rank = self.alphabet.rank
        v = 0
        for i in word:
            v = v * self.n + rank[i]
        return (self._offset(len(word)) + v) * self.slots + slot

    def decode(self, c):
        c, slot = divmod(c, self.slots)
        length = 0
        while self._offset(length + 1) <= c:
            length += 1
        v = c - self._offset(length)
        ranks = []
        for _ in range(length):
            v, r = divmod(v, self.n)
            ranks.append(r)
        ranks.reverse()
        prec = self.alphabet.precedence
        idx = self.alphabet.index
        return tuple(idx(prec[r]) for r in ranks), slot

    def degree(self, c):
        return len(self.decode(c)[0])

    def bound(self, D):
        """Smallest code of degree D + 1 (exclusive upper bound of the window)."""
        return self._offset(D + 1) * self.slots
