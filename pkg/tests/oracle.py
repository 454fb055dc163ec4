"""Independent oracles used to freeze derived values.

Nothing here touches the package's rewriting or echelon code: the dense
quotient oracle spans the truncated two-sided ideal directly and
eliminates modulo a prime with its own word order.
"""

from fractions import Fraction
from itertools import product

BIG_PRIME = 2147483629  # largest prime below 2^31


def _mod(c, p):
    c = Fraction(c)
    return c.numerator * pow(c.denominator, -1, p) % p


def relation_rows(A, p):
    """Relations of A as {word: coefficient mod p}."""
    out = []
    for r in A.relations:
        row = {w: _mod(c, p) for w, c in r.terms.items()}
        row = {w: c for w, c in row.items() if c}
        if row:
            out.append(row)
    return out


def _key(w):
    # degree first, then plain lexicographic on generator ids
    return (len(w), w)


def dense_quotient_dims(A, D, slack=2, p=None):
    """dim of the filtered quotient F_{<=n} / (I_{<=D+slack} cap F_{<=n}) for n = 0..D.

    The ideal is spanned by u r v with deg(u r v) <= D + slack, eliminated
    so that words of degree above D are cleared first.
    """
    if p is None:
        p = A.field.characteristic or BIG_PRIME
    rels = relation_rows(A, p)
    k = len(A.alphabet)
    N = D + slack
    words_by_len = [list(product(range(k), repeat=n)) for n in range(N + 1)]
    pivots = {}

    def reduce(row):
        while row:
            lead = max(row, key=_key)
            piv = pivots.get(lead)
            if piv is None:
                inv = pow(row[lead], -1, p)
                row = {w: c * inv % p for w, c in row.items()}
                pivots[lead] = row
                return
            f = row[lead]
            for w, c in piv.items():
                v = (row.get(w, 0) - f * c) % p
                if v:
                    row[w] = v
                else:
                    row.pop(w, None)

    for r in rels:
        deg = max(len(w) for w in r)
        for a in range(N - deg + 1):
            for b in range(N - deg - a + 1):
                for u in words_by_len[a]:
                    for v in words_by_len[b]:
                        reduce({u + w + v: c for w, c in r.items()})
    dims = []
    for n in range(D + 1):
        killed = sum(1 for w in pivots if len(w) == n)
        dims.append(k ** n - killed)
    return dims


def _eliminate(rows, p, key):
    """Pivot leading terms of the span of sparse rows under `key`."""
    pivots = {}
    for row in rows:
        row = {t: c % p for t, c in row.items() if c % p}
        while row:
            lead = max(row, key=key)
            piv = pivots.get(lead)
            if piv is None:
                inv = pow(row[lead], -1, p)
                pivots[lead] = {t: c * inv % p for t, c in row.items()}
                break
            f = row[lead]
            for t, c in piv.items():
                v = (row.get(t, 0) - f * c) % p
                if v:
                    row[t] = v
                else:
                    row.pop(t, None)
    return pivots


def h1_reduce(word):
    """H1 = k<x> * k[g, g^-1]: cancel adjacent g ginv pairs (letters 'x', 'g', 'G')."""
    out = []
    for c in word:
        if out and {out[-1], c} == {"g", "G"}:
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def h1_words(n):
    return [w for w in ("".join(t) for t in product("xgG", repeat=n)) if h1_reduce(w) == w]


def h1_ext1_window(D, top, p=BIG_PRIME):
    """Per-degree dims of A^2 / d1*(A_{<=D}) for d1* : a -> ((g - 1) a, x a), degrees <= top."""
    rows = []
    for n in range(D + 1):
        for w in h1_words(n):
            row = {}
            gw = h1_reduce("g" + w)
            row[(0, gw)] = row.get((0, gw), 0) + 1
            row[(0, w)] = row.get((0, w), 0) - 1
            row[(1, "x" + w)] = 1
            rows.append(row)
    pivots = _eliminate(rows, p, key=lambda t: (len(t[1]), t[1], t[0]))
    return [2 * len(h1_words(n)) - sum(1 for t in pivots if len(t[1]) == n) for n in range(top + 1)]
