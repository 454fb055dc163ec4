"""Hopf morphisms and degree-window certificates for exact sequences
k -> B -> A -> H -> k.

All statements are about degree windows of normal words.  Ideal and
coinvariant spans are generated from factors of degree <= D + slack and then
cut down to the window; every equality is reported as two inclusions, each
decided by exact rank arithmetic.
"""

from .freealg import NCPoly, TensorPoly
from .hopf import _acc
from .linalg import Echelon, WordCode, nullspace
from .report import Refusal, Report


class MorphismError(ValueError):
    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(self.issues))


class HopfMorphism:
    """Algebra map given on generators, checked to be a Hopf map on generators.

    With strict=False the violations are kept in `issues`; corrupted test
    fixtures are built that way.
    """

    def __init__(self, source, target, images, name="", strict=True):
        self.source = source
        self.target = target
        self.name = name
        missing = [g for g in source.alphabet.names if g not in images]
        if missing:
            raise MorphismError([f"no image for generator {g}" for g in missing])
        self.images = {g: target.nf(images[g]) for g in source.alphabet.names}
        self._gimg = {source.alphabet.index(g): self.images[g].terms for g in source.alphabet.names}
        self._memo = {(): {(): target.field.one}}
        self.issues = self._validate()
        if self.issues and strict:
            raise MorphismError(self.issues)

    def _word(self, w):
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        F = self.target.field
        head = self._word(w[:-1])
        raw = {}
        for u, c in head.items():
            for v, d in self._gimg[w[-1]].items():
                _acc(F, raw, u + v, F.mul(c, d))
        out = self.target.rewrite.nf_terms(raw)
        self._memo[w] = out
        return out

    def __call__(self, p):
        F = self.target.field
        out = {}
        for w, c in p.terms.items():
            for u, d in self._word(w).items():
                _acc(F, out, u, F.mul(c, d))
        return NCPoly(self.target.alphabet, F, out, _clean=True)

    def tensor(self, t):
        """f (x) f on a 2-leg tensor over the source."""
        F = self.target.field
        out = {}
        for (u, v), c in t.terms.items():
            for a, x in self._word(u).items():
                for b, y in self._word(v).items():
                    _acc(F, out, (a, b), F.mul(c, F.mul(x, y)))
        T = self.target
        return TensorPoly((T.alphabet, T.alphabet), F, out, _clean=True)

    def _validate(self):
        S, T = self.source, self.target
        issues = []
        for r in S.relations:
            if self(r).terms:
                issues.append(f"relation {r.fmt()} does not map to 0")
        for g in S.alphabet.names:
            x = S.gen(g)
            fx = self.images[g]
            if T.comul(fx) != self.tensor(S.comul(x)):
                issues.append(f"comul not preserved on {g}")
            if T.counit(fx) != S.counit(x):
                issues.append(f"counit not preserved on {g}")
            if T.antipode(fx) != self(S.antipode(x)):
                issues.append(f"antipode not preserved on {g}")
        return issues

    def fmt(self):
        return ", ".join(f"{g} -> {self.images[g].fmt()}" for g in self.source.alphabet.names)


class SequenceSpec:
    """k -> B -> A -> H -> k with a claimed free-basis witness.

    `witness` is a set of generator names of A; the witness words are the
    normal words of A spelled with those letters only.
    """

    def __init__(self, name, B, A, H, i, p, witness=(), degree=3, slack=None, strict=True):
        self.name = name
        self.B, self.A, self.H = B, A, H
        self.i, self.p = i, p
        self.witness = tuple(witness)
        self.degree = degree
        if slack is None:
            slack = max((r.degree() for r in A.relations), default=1)
        self.slack = slack
        self._b_ech = {}
        self.issues = []
        for g in B.alphabet.names:
            x = B.gen(g)
            if p(i(x)) != H.const(B.counit(x)):
                self.issues.append(f"p(i({g})) != counit({g})")
        if self.issues and strict:
            raise MorphismError(self.issues)

    def witness_words(self, D):
        allowed = {self.A.alphabet.index(g) for g in self.witness}
        return [w for w in self.A.normal_words(D) if all(c in allowed for c in w)]

    def b_plus(self):
        """(i(g) - eps(g)) for the generators g of B: they generate i(B)^+ as a one-sided ideal."""
        out = []
        for g in self.B.alphabet.names:
            x = self.B.gen(g)
            out.append(self.i(x) - self.A.const(self.B.counit(x)))
        return [e for e in out if e.terms]

    def in_B(self, a):
        """Exact membership of a normal-form a in the span of i(B) words of degree <= deg(a) + slack."""
        if not a.terms:
            return True
        D = a.degree() + self.slack
        ech = self._b_ech.get(D)
        if ech is None:
            code = WordCode(self.A.alphabet)
            ech = Echelon(self.A.field)
            for w in self.B.normal_words(D):
                ech.add(_vec(self.i(self.B.mono(w)), code))
            self._b_ech[D] = ech
        return ech.contains(_vec(a, WordCode(self.A.alphabet)))

    def b_sampler(self, ctx, D=None):
        words = self.B.normal_words(ctx.max_degree if D is None else D)

        def sample(rng):
            return self.i(ctx.element(rng, algebra=self.B, words=words))
        return sample


def _vec(p, code, slot=0):
    return {code.code(w, slot): c for w, c in p.terms.items()}


def _certify(alg, D, what):
    alg.rewrite.require(D, what)


def _refusing(title, fn):
    rep = Report(title)
    try:
        fn(rep)
    except Refusal as e:
        rep.refuse(e)
    return rep


def check_injectivity(i, D):
    """No kernel up to degree D on the normal basis of the source."""
    B, A = i.source, i.target

    def run(rep):
        _certify(B, D, "injectivity")
        words = B.normal_words(D)
        code = WordCode(A.alphabet)
        images = [_vec(i(B.mono(w)), code) for w in words]
        ker, _ = nullspace(A.field, images)
        rep.note("degree", D)
        rep.note("source_window", len(words))
        if not ker:
            rep.add("no_kernel_up_to_degree", True, f"rank {len(words)} of {len(words)}")
            return
        k = ker[0]
        wit = B.poly({words[t]: c for t, c in k.items()})
        rep.add("no_kernel_up_to_degree", False, f"kernel dimension {len(ker)}", wit.fmt())
    return _refusing(f"injectivity {i.name}", run)


def check_surjectivity(p, D, search=None, slack=2):
    """Every normal word of H of degree <= D is reached from A's window of degree <= search."""
    A, H = p.source, p.target
    search = D + slack if search is None else search

    def run(rep):
        if search < D:
            raise ValueError("search bound must be >= D")
        _certify(A, search, "surjectivity")
        _certify(H, D, "surjectivity")
        code = WordCode(H.alphabet)
        ech = Echelon(H.field)
        for w in A.normal_words(search):
            ech.add(_vec(p(A.mono(w)), code))
        missed = [w for w in H.normal_words(D) if not ech.contains({code.code(w): H.field.one})]
        rep.note("degree", D)
        rep.note("search_bound", search)
        rep.add("all_words_reached", not missed,
                f"{len(missed)} unreached" if missed else "",
                ", ".join(H.alphabet.fmt_word(w) for w in missed[:8]) or None)
    return _refusing(f"surjectivity {p.name}", run)


def _ideal_window(seq, D, side):
    """Echelon of span{e*w} (left) or span{w*e} (right) cut to degree <= D; returns rows in the window."""
    A = seq.A
    code = WordCode(A.alphabet)
    ech = Echelon(A.field)
    gens = seq.b_plus()
    for w in A.normal_words(D + seq.slack):
        m = A.mono(w)
        for e in gens:
            v = A.nf(e * m) if side == "left" else A.nf(m * e)
            ech.add(_vec(v, code))
    limit = code.bound(D)
    return [ech.row(k) for k in ech.pivots() if k < limit], code


def _kernel_window(p, D, code):
    A = p.source
    words = A.normal_words(D)
    hcode = WordCode(p.target.alphabet)
    images = [_vec(p(A.mono(w)), hcode) for w in words]
    ker, _ = nullspace(A.field, images)
    return [{code.code(words[t]): c for t, c in k.items()} for k in ker]


def _inclusion(F, sub, sup):
    """First vector of `sub` outside span(sup), or None."""
    ech = Echelon(F)
    for v in sup:
        ech.add(v)
    for v in sub:
        if not ech.contains(v):
            return v
    return None


def _fmt_vec(alg, code, v):
    return alg.poly({code.decode(c)[0]: x for c, x in v.items()}).fmt()


def check_kernel_condition(seq, D):
    """Ker(p) = i(B)^+ A = A i(B)^+ on the degree <= D window."""
    A = seq.A

    def run(rep):
        _certify(A, D + seq.slack, "kernel condition")
        code = WordCode(A.alphabet)
        K = _kernel_window(seq.p, D, code)
        rep.note("degree", D)
        rep.note("slack", seq.slack)
        rep.note("dim_kernel", len(K))
        for side in ("left", "right"):
            L, _ = _ideal_window(seq, D, side)
            rep.note(f"dim_{side}_ideal", len(L))
            bad = _inclusion(A.field, K, L)
            rep.add(f"kernel_in_{side}_ideal", bad is None, "",
                    None if bad is None else _fmt_vec(A, code, bad))
            bad = _inclusion(A.field, L, K)
            rep.add(f"{side}_ideal_in_kernel", bad is None, "",
                    None if bad is None else _fmt_vec(A, code, bad))
    return _refusing(f"kernel condition {seq.name}", run)


def _coinvariant_space(seq, D, side):
    """Nullspace of a -> a1 (x) p(a2) - a (x) 1 (right) or p(a1) (x) a2 - 1 (x) a (left)."""
    A, H, p = seq.A, seq.H, seq.p
    F = A.field
    words = A.normal_words(D)
    keys = {}
    images = []
    for w in words:
        d = A.comul(A.mono(w))
        out = {}
        for (u, v), c in d.terms.items():
            if side == "right":
                for x, e in p._word(v).items():
                    _acc(F, out, (u, x), F.mul(c, e))
            else:
                for x, e in p._word(u).items():
                    _acc(F, out, (x, v), F.mul(c, e))
        k = (w, ()) if side == "right" else ((), w)
        _acc(F, out, k, F.neg(F.one))
        images.append({keys.setdefault(k2, len(keys)): c for k2, c in out.items()})
    ker, _ = nullspace(F, images)
    return ker, words


def check_coinvariants(seq, D):
    A = seq.A

    def run(rep):
        _certify(A, D + seq.slack, "coinvariants")
        code = WordCode(A.alphabet)
        image = []
        for w in seq.B.normal_words(D + seq.slack):
            image.append(_vec(seq.i(seq.B.mono(w)), code))
        ech = Echelon(A.field)
        for v in image:
            ech.add(v)
        limit = code.bound(D)
        I = [ech.row(k) for k in ech.pivots() if k < limit]
        rep.note("degree", D)
        rep.note("dim_image_of_i", len(I))
        for side in ("right", "left"):
            ker, words = _coinvariant_space(seq, D, side)
            N = [{code.code(words[t]): c for t, c in k.items()} for k in ker]
            rep.note(f"dim_{side}_coinvariants", len(N))
            bad = _inclusion(A.field, N, I)
            rep.add(f"{side}_coinvariants_in_B", bad is None, "",
                    None if bad is None else _fmt_vec(A, code, bad))
            bad = _inclusion(A.field, I, N)
            rep.add(f"B_in_{side}_coinvariants", bad is None, "",
                    None if bad is None else _fmt_vec(A, code, bad))
    return _refusing(f"coinvariants {seq.name}", run)


def b_membership(seq, a, D):
    if a.terms and a.degree() > D:
        raise Refusal(f"element of degree {a.degree()} exceeds the membership window {D}")
    seq.A.rewrite.require(D + seq.slack, "membership")
    return seq.in_B(seq.A.nf(a))


def check_freeness_witness(seq, witness=None, D=None):
    """i(B) words times witness words are independent and span A's window, on both sides."""
    A, B = seq.A, seq.B
    D = seq.degree if D is None else D
    if witness is not None:
        seq = _with_witness(seq, witness)

    def run(rep):
        _certify(A, D + seq.slack, "freeness witness")
        W = seq.witness_words(D + seq.slack)
        bw = B.normal_words(D + seq.slack)
        code = WordCode(A.alphabet)
        limit = code.bound(D)
        rep.note("degree", D)
        rep.note("witness_letters", " ".join(seq.witness) or "(none)")
        rep.note("witness_words", len([w for w in W if len(w) <= D]))
        window = A.normal_words(D)
        for side in ("left", "right"):
            ech = Echelon(A.field)
            dep = None
            count = 0
            for b in bw:
                ib = seq.i(B.mono(b))
                for w in W:
                    if len(b) + len(w) > D + seq.slack:
                        continue
                    m = A.mono(w)
                    v = A.nf(ib * m) if side == "left" else A.nf(m * ib)
                    ok, _ = ech.add(_vec(v, code))
                    count += 1
                    if not ok and dep is None:
                        dep = f"{B.alphabet.fmt_word(b)} . {A.alphabet.fmt_word(w)}"
            rep.add(f"{side}_independent", dep is None, f"{count} products", dep)
            missed = [w for w in window if not ech.contains({code.code(w): A.field.one})]
            in_window = len([k for k in ech.pivots() if k < limit])
            rep.add(f"{side}_spanning", not missed, f"{in_window} of {len(window)} window words",
                    ", ".join(A.alphabet.fmt_word(w) for w in missed[:8]) or None)
    return _refusing(f"freeness witness {seq.name}", run)


def _with_witness(seq, witness):
    clone = object.__new__(SequenceSpec)
    clone.__dict__.update(seq.__dict__)
    clone.witness = tuple(witness)
    return clone


def tor0_iso_check(seq, V_dim, D, corrupt=False):
    """phi(a (x) v) = p(a) (x) v has kernel (i(B)^+ A) (x) V and is onto H (x) V, on the window.

    corrupt=True swaps in eps(a) (x) v as a negative control.
    """
    A, H, p = seq.A, seq.H, seq.p
    F = A.field

    def run(rep):
        _certify(A, D + seq.slack, "Tor_0 identification")
        rep.note("degree", D)
        rep.note("V_dim", V_dim)
        if V_dim == 0:
            rep.add("kernel_in_span", True, "zero space")
            rep.add("span_in_kernel", True, "zero space")
            rep.add("phi_onto", True, "zero space")
            return
        words = A.normal_words(D)
        code = WordCode(A.alphabet, V_dim)
        hcode = WordCode(H.alphabet, V_dim)

        def phi(w, v):
            if corrupt:
                e = A.counit(A.mono(w))
                return {hcode.code((), v): e} if e else {}
            return {hcode.code(u, v): c for u, c in p._word(w).items()}

        tags = [(w, v) for w in words for v in range(V_dim)]
        ker, _ = nullspace(F, [phi(w, v) for w, v in tags])
        K = [{code.code(tags[t][0], tags[t][1]): c for t, c in k.items()} for k in ker]
        L1, code1 = _ideal_window(seq, D, "left")
        L = []
        for row in L1:
            for v in range(V_dim):
                L.append({code.code(code1.decode(c)[0], v): x for c, x in row.items()})
        rep.note("dim_kernel", len(K))
        rep.note("dim_span", len(L))
        bad = _inclusion(F, K, L)
        rep.add("kernel_in_span", bad is None, "", None if bad is None else _fmt_tensor_vec(A, code, bad))
        bad = _inclusion(F, L, K)
        rep.add("span_in_kernel", bad is None, "", None if bad is None else _fmt_tensor_vec(A, code, bad))
        ech = Echelon(F)
        for w in A.normal_words(D + seq.slack):
            for v in range(V_dim):
                ech.add(phi(w, v))
        missed = [(u, v) for u in H.normal_words(D) for v in range(V_dim)
                  if not ech.contains({hcode.code(u, v): F.one})]
        rep.add("phi_onto", not missed, "", None if not missed else
                ", ".join(f"{H.alphabet.fmt_word(u)} (x) e{v + 1}" for u, v in missed[:8]))
    return _refusing(f"Tor_0 identification {seq.name}", run)


def _fmt_tensor_vec(A, code, v):
    parts = {}
    for c, x in v.items():
        w, slot = code.decode(c)
        parts.setdefault(slot, {})[w] = x
    return " + ".join(f"({A.poly(t).fmt()}) (x) e{s + 1}" for s, t in sorted(parts.items()))


def check_composite(seq, ctx):
    """p(i(b)) = eps(b) 1 on sampled elements of B."""
    rep = Report(f"composite p.i {seq.name}")
    B, H = seq.B, seq.H
    rng = ctx.rng("composite")
    words = B.normal_words(ctx.max_degree)
    samples = [ctx.element(rng, algebra=B, words=words) for _ in range(ctx.samples)]
    bad = None
    for b in samples:
        if seq.p(seq.i(b)) != H.const(B.counit(b)):
            bad = b
            break
    rep.add("p_i_is_counit", bad is None, f"{len(samples)} samples", None if bad is None else bad.fmt())
    return rep


def exactness_battery(seq, D=None, ctx=None):
    """Injectivity, surjectivity, kernel condition, both coinvariant conditions, freeness witness."""
    D = seq.degree if D is None else D
    rep = Report(f"exact sequence {seq.name}")
    rep.note("degree", D)
    rep.note("slack", seq.slack)
    if seq.issues:
        rep.note("sequence_issues", "; ".join(seq.issues))
    for label, r in (
        ("injectivity", check_injectivity(seq.i, D)),
        ("surjectivity", check_surjectivity(seq.p, D, slack=seq.slack)),
        ("kernel", check_kernel_condition(seq, D)),
        ("coinvariants", check_coinvariants(seq, D)),
        ("freeness", check_freeness_witness(seq, None, D)),
    ):
        for c in r.checks:
            rep.checks.append(c._replace(name=f"{label}.{c.name}"))
        if r.refused and not rep.refused:
            rep.refused = r.refused
    if ctx is not None:
        rep.merge(check_composite(seq, ctx), "composite")
    return rep
