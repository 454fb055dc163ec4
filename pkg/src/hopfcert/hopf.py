"""Hopf presentations and the Sweedler evaluator.

Delta, epsilon and S are given on generators and extended to words: Delta
and epsilon multiplicatively, S anti-multiplicatively (reverse the word,
map the letters).  Every tensor leg is kept in normal form.  The identity
checks here are randomized with fixed seeds on top of exhaustive coverage
of all normal monomials of degree <= 2.
"""

import random
from fractions import Fraction

from .freealg import NCPoly, TensorPoly
from .report import Refusal, Report
from .rewrite import complete


class PresentationError(ValueError):
    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(self.issues))


KINDS = ("tilde", "bar", "prime", "doubleprime")
RIGHT_KINDS = ("tilde", "doubleprime")


def _acc(F, out, k, c):
    s = F.add(out.get(k, F.zero), c)
    if s:
        out[k] = s
    else:
        out.pop(k, None)


class HopfPresentation:
    """Generators, relations and the structure maps on generators.

    comul maps generator names to 2-leg TensorPolys, counit to scalars,
    antipode (and optionally antipode_inv) to NCPolys.  With strict=False
    compatibility failures are kept in `issues` instead of raising; this is
    how deliberately broken fixtures are loaded.
    """

    def __init__(self, name, alphabet, field, relations, comul, counit, antipode,
                 antipode_inv=None, rewrite=None, cap=6, strict=True):
        self.name = name
        self.alphabet = alphabet
        self.field = field
        self.relations = list(relations)
        issues = []
        for what, table in (("comul", comul), ("counit", counit), ("antipode", antipode)):
            for g in alphabet.names:
                if g not in table:
                    issues.append(f"{what} missing for generator {g}")
        if antipode_inv is not None:
            for g in alphabet.names:
                if g not in antipode_inv:
                    issues.append(f"antipode_inv missing for generator {g}")
        if issues:
            raise PresentationError(issues)
        self.rewrite = rewrite if rewrite is not None else complete(self.relations, alphabet, field, cap)
        self.comul_table = dict(comul)
        self.counit_table = {g: field.canonical(c) for g, c in counit.items()}
        self.antipode_table = dict(antipode)
        self.antipode_inv_table = dict(antipode_inv) if antipode_inv is not None else None
        ids = range(len(alphabet))
        names = alphabet.names
        self._dgen = {i: self.tensor_nf(comul[names[i]]).terms for i in ids}
        self._egen = {i: self.counit_table[names[i]] for i in ids}
        self._sgen = {i: self.nf(antipode[names[i]]).terms for i in ids}
        self._sigen = None
        if antipode_inv is not None:
            self._sigen = {i: self.nf(antipode_inv[names[i]]).terms for i in ids}
        self._dmemo = {(): {((), ()): field.one}}
        self._smemo = {(): {(): field.one}}
        self._simemo = {(): {(): field.one}}
        self.issues = self._validate()
        if self.issues and strict:
            raise PresentationError(self.issues)

    def __repr__(self):
        return f"HopfPresentation({self.name}, {len(self.alphabet)} gens, {len(self.relations)} rels)"

    # plumbing

    def gen(self, name):
        return NCPoly.gen(self.alphabet, self.field, name)

    def gens(self):
        return [self.gen(n) for n in self.alphabet.names]

    def const(self, c=1):
        return NCPoly.const(self.alphabet, self.field, c)

    def mono(self, word, c=1):
        return NCPoly.monomial(self.alphabet, self.field, word, c)

    def poly(self, terms):
        return NCPoly(self.alphabet, self.field, terms)

    def nf(self, p):
        return self.rewrite.normal_form(p)

    def mul(self, *ps):
        out = ps[0]
        for p in ps[1:]:
            out = self.nf(out * p)
        return self.nf(out) if len(ps) == 1 else out

    def normal_words(self, D):
        from .rewrite import normal_words
        self.rewrite.require(D, f"{self.name} normal words")
        return normal_words(self.rewrite, D)

    def tensor_nf(self, t):
        """Normal form in every leg; all legs must be over this algebra."""
        F = self.field
        nfw = self.rewrite.nf_word
        out = {}
        for k, c in t.terms.items():
            partial = {(): c}
            for w in k:
                img = nfw(w)
                nxt = {}
                for pre, a in partial.items():
                    for u, b in img.items():
                        _acc(F, nxt, pre + (u,), F.mul(a, b))
                partial = nxt
            for kk, v in partial.items():
                _acc(F, out, kk, v)
        return TensorPoly(t.alphabets, F, out, _clean=True)

    @property
    def has_antipode_inv(self):
        return self._sigen is not None

    def antipode_growth(self):
        """Largest degree of S (or S^-1) on a generator."""
        g = max((max((len(w) for w in t), default=0) for t in self._sgen.values()), default=0)
        if self._sigen is not None:
            g = max(g, max((max((len(w) for w in t), default=0) for t in self._sigen.values()), default=0))
        return max(g, 1)

    # structure maps on words

    def _comul_word(self, w):
        hit = self._dmemo.get(w)
        if hit is not None:
            return hit
        F = self.field
        nfw = self.rewrite.nf_word
        head = self._comul_word(w[:-1])
        tail = self._dgen[w[-1]]
        raw = {}
        for (a1, a2), c in head.items():
            for (b1, b2), d in tail.items():
                _acc(F, raw, (a1 + b1, a2 + b2), F.mul(c, d))
        out = {}
        for (u1, u2), c in raw.items():
            n1 = nfw(u1)
            n2 = nfw(u2)
            for v1, a in n1.items():
                for v2, b in n2.items():
                    _acc(F, out, (v1, v2), F.mul(c, F.mul(a, b)))
        self._dmemo[w] = out
        return out

    def _anti_word(self, w, gens, memo):
        hit = memo.get(w)
        if hit is not None:
            return hit
        F = self.field
        rest = self._anti_word(w[1:], gens, memo)
        first = gens[w[0]]
        raw = {}
        for u, c in rest.items():
            for v, d in first.items():
                _acc(F, raw, u + v, F.mul(c, d))
        out = self.rewrite.nf_terms(raw)
        memo[w] = out
        return out

    # public extensions

    def comul(self, p):
        F = self.field
        out = {}
        for w, c in p.terms.items():
            for k, d in self._comul_word(w).items():
                _acc(F, out, k, F.mul(c, d))
        return TensorPoly((self.alphabet, self.alphabet), F, out, _clean=True)

    def counit(self, p):
        F = self.field
        total = F.zero
        for w, c in p.terms.items():
            v = c
            for i in w:
                v = F.mul(v, self._egen[i])
                if not v:
                    break
            total = F.add(total, v)
        return total

    def antipode(self, p):
        F = self.field
        out = {}
        for w, c in p.terms.items():
            for u, d in self._anti_word(w, self._sgen, self._smemo).items():
                _acc(F, out, u, F.mul(c, d))
        return NCPoly(self.alphabet, F, out, _clean=True)

    def antipode_inv(self, p):
        if self._sigen is None:
            raise Refusal(f"{self.name} has no antipode_inv (bijective antipode not attested)")
        F = self.field
        out = {}
        for w, c in p.terms.items():
            for u, d in self._anti_word(w, self._sigen, self._simemo).items():
                _acc(F, out, u, F.mul(c, d))
        return NCPoly(self.alphabet, F, out, _clean=True)

    def comul_leg(self, t, leg):
        """Apply Delta to one leg of a tensor over this algebra (1-based)."""
        F = self.field
        i = leg - 1
        out = {}
        for k, c in t.terms.items():
            for (u1, u2), d in self._comul_word(k[i]).items():
                _acc(F, out, k[:i] + (u1, u2) + k[i + 1:], F.mul(c, d))
        alph = t.alphabets[:i] + (self.alphabet, self.alphabet) + t.alphabets[i + 1:]
        return TensorPoly(alph, F, out, _clean=True)

    def iterated_comul(self, p, n, placement="left"):
        """Delta^(n)(p) with n+1 legs; `placement` picks which leg is split each time."""
        if n < 1:
            raise ValueError("n must be >= 1")
        t = self.comul(p)
        for _ in range(n - 1):
            t = self.comul_leg(t, 1 if placement == "left" else t.legs)
        return t

    def sweedler(self, p, n, f):
        """Sum over the terms of Delta^(n-1)(p) of f(word polys...) for n legs."""
        out = NCPoly.zero(self.alphabet, self.field)
        if n == 1:
            parts = [(((w,), c)) for w, c in p.terms.items()]
        else:
            parts = self.iterated_comul(p, n - 1).terms.items()
        for k, c in parts:
            legs = [self.mono(w) for w in k]
            out = out + f(*legs).scale(c)
        return self.nf(out)

    # construction-time compatibility

    def _validate(self):
        issues = []
        for r in self.relations:
            if not r.terms:
                continue
            if self.comul(r).terms:
                issues.append(f"comul does not kill relation {r.fmt()}")
            if self.counit(r):
                issues.append(f"counit does not kill relation {r.fmt()}")
            if self.antipode(r).terms:
                issues.append(f"antipode does not kill relation {r.fmt()}")
            if self._sigen is not None and self.antipode_inv(r).terms:
                issues.append(f"antipode_inv does not kill relation {r.fmt()}")
        if self._sigen is not None:
            for i, g in enumerate(self.alphabet.names):
                x = self.mono((i,))
                if self.antipode(self.antipode_inv(x)) != x:
                    issues.append(f"S(S^-1({g})) != {g}")
                if self.antipode_inv(self.antipode(x)) != x:
                    issues.append(f"S^-1(S({g})) != {g}")
        return issues


def comul_eval(a, A):
    return A.comul(a)


def iterated_comul(a, A, n):
    return A.iterated_comul(a, n)


def antipode_eval(a, A):
    return A.antipode(a)


class SweedlerContext:
    """Seeded sampler of normal-form elements of degree <= max_degree.

    Every call to rng() restarts the stream, so a check sees the same
    samples no matter which checks ran before it.
    """

    def __init__(self, algebra, max_degree, seed=0, samples=100, terms=3):
        self.algebra = algebra
        self.max_degree = max_degree
        self.seed = seed
        self.samples = samples
        self.terms = terms
        F = algebra.field
        pool = [1, -1, 2, -2, 3]
        if F.characteristic != 2:
            pool.append(Fraction(1, 2))
        self.pool = [F.canonical(c) for c in pool]
        self._words = {}

    def rng(self, salt=""):
        return random.Random(f"{self.seed}:{salt}")

    def words(self, D=None, algebra=None):
        A = algebra or self.algebra
        D = self.max_degree if D is None else D
        key = (id(A), D)
        if key not in self._words:
            self._words[key] = A.normal_words(D)
        return self._words[key]

    def element(self, rng, D=None, algebra=None, words=None):
        A = algebra or self.algebra
        if words is None:
            words = self.words(D, A)
        F = A.field
        out = {}
        for _ in range(rng.randint(1, self.terms)):
            w = words[rng.randrange(len(words))]
            _acc(F, out, w, self.pool[rng.randrange(len(self.pool))])
        if not out:
            out[words[rng.randrange(len(words))]] = F.one
        return NCPoly(A.alphabet, F, out, _clean=True)

    def elements(self, salt="", n=None, D=None):
        rng = self.rng(salt)
        return [self.element(rng, D) for _ in range(self.samples if n is None else n)]

    def coverage(self, D=2):
        """Generators, then every normal monomial of degree <= D."""
        A = self.algebra
        out = list(A.gens())
        out.extend(A.mono(w) for w in self.words(min(D, self.max_degree)))
        return out


def _required_bound(A, deg):
    return A.antipode_growth() * deg + deg


def _certify(A, deg, what):
    bound = _required_bound(A, deg)
    try:
        A.rewrite.require(bound, what)
    except Refusal:
        raise Refusal(f"{what} at degree {deg} needs rewriting to degree {bound}; {A.name} is {A.rewrite.status}")
    return bound


def _first_failure(items, pred):
    n = 0
    for x in items:
        n += 1
        if not pred(x):
            return n, x
    return n, None


def check_hopf_axioms(A, ctx):
    rep = Report(f"hopf axioms {A.name}")
    rep.note("degree", ctx.max_degree)
    rep.note("seed", ctx.seed)
    rep.note("samples", ctx.samples)
    try:
        bound = _certify(A, 2 * ctx.max_degree, "hopf axiom check")
    except Refusal as e:
        rep.refuse(e)
        return rep
    rep.note("rewrite", f"{A.rewrite.status}, needed {bound}")
    F = A.field
    singles = ctx.coverage() + ctx.elements("single")
    rng = ctx.rng("pairs")
    gens = A.gens()
    pairs = [(a, b) for a in gens for b in gens]
    pairs += [(ctx.element(rng), ctx.element(rng)) for _ in range(ctx.samples)]
    one = A.const(1)

    def coassoc(a):
        return A.iterated_comul(a, 2, "left") == A.iterated_comul(a, 2, "right")

    def counit_left(a):
        d = A.comul(a)
        out = NCPoly.zero(A.alphabet, F)
        for (u, v), c in d.terms.items():
            e = A.counit(A.mono(u))
            if e:
                out = out + A.mono(v, F.mul(c, e))
        return out == a

    def counit_right(a):
        d = A.comul(a)
        out = NCPoly.zero(A.alphabet, F)
        for (u, v), c in d.terms.items():
            e = A.counit(A.mono(v))
            if e:
                out = out + A.mono(u, F.mul(c, e))
        return out == a

    def antipode_left(a):
        return A.sweedler(a, 2, lambda x, y: A.antipode(x) * y) == one.scale(A.counit(a))

    def antipode_right(a):
        return A.sweedler(a, 2, lambda x, y: x * A.antipode(y)) == one.scale(A.counit(a))

    def comul_mult(ab):
        a, b = ab
        return A.comul(A.mul(a, b)) == A.tensor_nf(A.comul(a) * A.comul(b))

    def counit_mult(ab):
        a, b = ab
        return A.counit(A.mul(a, b)) == F.mul(A.counit(a), A.counit(b))

    def antipode_anti(ab):
        a, b = ab
        return A.antipode(A.mul(a, b)) == A.mul(A.antipode(b), A.antipode(a))

    singles = [A.nf(a) for a in singles]
    pairs = [(A.nf(a), A.nf(b)) for a, b in pairs]
    for name, pred, items in (
        ("coassociativity", coassoc, singles),
        ("counit_left", counit_left, singles),
        ("counit_right", counit_right, singles),
        ("antipode_left", antipode_left, singles),
        ("antipode_right", antipode_right, singles),
        ("comul_multiplicative", comul_mult, pairs),
        ("counit_multiplicative", counit_mult, pairs),
        ("antipode_antimultiplicative", antipode_anti, pairs),
    ):
        n, bad = _first_failure(items, pred)
        if bad is None:
            rep.add(name, True, f"{n} elements")
        else:
            w = bad.fmt() if isinstance(bad, NCPoly) else f"a = {bad[0].fmt()}, b = {bad[1].fmt()}"
            rep.add(name, False, f"failed at element {n}", w)
    return rep


def action_eval(kind, m, h, A):
    """The four module structures on M = A built from Delta and S."""
    S = A.antipode
    if kind == "tilde":
        return A.sweedler(h, 2, lambda h1, h2: S(h1) * m * h2)
    if kind == "bar":
        return A.sweedler(h, 2, lambda h1, h2: h1 * m * S(h2))
    if kind == "prime":
        return A.sweedler(h, 2, lambda h1, h2: h2 * m * S(h1))
    if kind == "doubleprime":
        return A.sweedler(h, 2, lambda h1, h2: S(h2) * m * h1)
    raise ValueError(f"unknown action kind {kind!r}")


def check_module_axiom(kind, A, ctx, action=None):
    """Unit and associativity of an action on sampled (m, h, h') triples.

    `action(m, h)` overrides the evaluator (same argument order for left
    and right kinds); negative controls use it.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown action kind {kind!r}")
    act = action or (lambda m, h: action_eval(kind, m, h, A))
    rep = Report(f"module axiom {kind} {A.name}")
    rep.note("degree", ctx.max_degree)
    rep.note("seed", ctx.seed)
    try:
        _certify(A, 3 * ctx.max_degree, "module axiom check")
    except Refusal as e:
        rep.refuse(e)
        return rep
    rng = ctx.rng(f"module:{kind}")
    triples = [(A.nf(ctx.element(rng)), A.nf(ctx.element(rng)), A.nf(ctx.element(rng))) for _ in range(ctx.samples)]
    one = A.const(1)
    right = kind in RIGHT_KINDS

    n, bad = _first_failure(triples, lambda t: act(t[0], one) == t[0])
    rep.add("unit", bad is None, f"{n} samples", None if bad is None else f"m = {bad[0].fmt()}")

    def assoc(t):
        m, h, h2 = t
        if right:
            return act(act(m, h), h2) == act(m, A.mul(h, h2))
        # left action: h.(h'.m) = (hh').m
        return act(act(m, h2), h) == act(m, A.mul(h, h2))

    n, bad = _first_failure(triples, assoc)
    rep.add("associativity", bad is None, f"{n} samples",
            None if bad is None else f"m = {bad[0].fmt()}, h = {bad[1].fmt()}, h' = {bad[2].fmt()}")
    return rep


def adjoint_stability(A, membership, ctx, b_sampler, inverse=None):
    """All four adjoint expressions of sampled (a, b) land in B.

    membership(x) decides x in B; b_sampler(rng) draws an element of B
    (already mapped into A).  The S^-1 variants run when A has S^-1.
    """
    rep = Report(f"adjoint stability {A.name}")
    rep.note("degree", ctx.max_degree)
    rep.note("seed", ctx.seed)
    S = A.antipode
    exprs = [
        ("a1_b_S(a2)", lambda a, b: A.sweedler(a, 2, lambda x, y: x * b * S(y))),
        ("S(a1)_b_a2", lambda a, b: A.sweedler(a, 2, lambda x, y: S(x) * b * y)),
    ]
    use_inv = A.has_antipode_inv if inverse is None else inverse
    if use_inv:
        Si = A.antipode_inv
        exprs += [
            ("a2_b_Sinv(a1)", lambda a, b: A.sweedler(a, 2, lambda x, y: y * b * Si(x))),
            ("Sinv(a2)_b_a1", lambda a, b: A.sweedler(a, 2, lambda x, y: Si(y) * b * x)),
        ]
    rng = ctx.rng("adjoint")
    pairs = [(A.nf(ctx.element(rng)), A.nf(b_sampler(rng))) for _ in range(ctx.samples)]
    pairs = [(g, A.const(1)) for g in A.gens()] + pairs
    try:
        for name, f in exprs:
            n, bad = _first_failure(pairs, lambda ab: membership(f(*ab)))
            rep.add(name, bad is None, f"{n} pairs",
                    None if bad is None else f"a = {bad[0].fmt()}, b = {bad[1].fmt()}")
    except Refusal as e:
        rep.refuse(e)
    return rep
