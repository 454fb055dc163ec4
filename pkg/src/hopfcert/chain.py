"""Cochain-level identities for an exact sequence k -> B -> A -> H -> k.

Elements of P_q = A^r are tuples of NCPolys over A.  A left B-linear map
f: P_q -> M is stored by its values on the free B-basis {w e_j} (w a
freeness-witness word), so f(x) = sum_j sum_w i(b_w) f(w e_j) where
x_j = sum_w i(b_w) w.  Values are seeded lazily, which lets a sampled f
be evaluated anywhere without fixing a finite support in advance.

Every check has a `corrupt` switch implementing a deliberately wrong
formula; the corrupt variants are the negative controls.
"""

import random

from .linalg import Echelon, WordCode
from .report import Refusal, Report


class LeftFreeDecomposition:
    """a = sum_w i(b_w) w over the witness words, by leading-term division.

    The leading word L of a is split as L = u v with v a witness word and
    u the leading word of some i(b); this needs LM(i(b) v) = L, which holds
    for the corpus sequences.  A word with no such split is refused.
    """

    def __init__(self, seq):
        self.seq = seq
        A = seq.A
        self.A = A
        self.letters = {A.alphabet.index(g) for g in seq.witness}
        self._lm = {}
        self._lm_degree = -1
        self._memo = {}

    def _grow(self, n):
        if n <= self._lm_degree:
            return
        A, B, i = self.A, self.seq.B, self.seq.i
        for b in B.normal_words(n):
            if len(b) <= self._lm_degree:
                continue
            ib = A.nf(i(B.mono(b)))
            if ib.terms:
                w, c = ib.leading()
                self._lm.setdefault(w, (ib, c))
        self._lm_degree = n

    def _split(self, L):
        A = self.A
        F = A.field
        k0 = len(L)
        while k0 > 0 and L[k0 - 1] in self.letters:
            k0 -= 1
        self._grow(len(L))
        for k in range(k0, len(L) + 1):
            hit = self._lm.get(L[:k])
            if hit is None:
                continue
            ib, c = hit
            t = A.nf(ib * A.mono(L[k:]))
            if t.terms and t.leading()[0] == L:
                return L[k:], ib, t, F.div(F.one, t.leading()[1])
        raise Refusal(f"no leading-term split of {A.alphabet.fmt_word(L)} over the witness")

    def word(self, L):
        hit = self._memo.get(L)
        if hit is not None:
            return hit
        A = self.A
        F = A.field
        v, ib, t, inv = self._split(L)
        out = {v: ib.scale(inv)}
        for w, c in t.terms.items():
            if w == L:
                continue
            for u, p in self.word(w).items():
                q = out.get(u)
                q = p.scale(F.neg(F.mul(c, inv))) if q is None else q - p.scale(F.mul(c, inv))
                out[u] = q
        out = {u: p for u, p in out.items() if p.terms}
        self._memo[L] = out
        return out

    def __call__(self, a):
        A = self.A
        out = {}
        for w, c in a.terms.items():
            for u, p in self.word(w).items():
                q = out.get(u)
                out[u] = p.scale(c) if q is None else q + p.scale(c)
        return {u: A.nf(p) for u, p in out.items() if p.terms}


class CochainModel:
    """A seeded left B-linear map P_q -> M with M = A ("A") or M = i(B) ("B")."""

    def __init__(self, seq, decomposition, rank, target="A", salt="", value_degree=1, terms=2):
        self.seq = seq
        self.dec = decomposition
        self.rank = rank
        self.target = target
        self.salt = salt
        self.value_degree = value_degree
        self.terms = terms
        self._values = {}

    def value(self, w, j):
        key = (w, j)
        hit = self._values.get(key)
        if hit is not None:
            return hit
        seq = self.seq
        rng = random.Random(f"{self.salt}:{self.target}:{j}:{w}")
        alg = seq.A if self.target == "A" else seq.B
        words = alg.normal_words(self.value_degree)
        F = alg.field
        pool = [F.canonical(c) for c in (1, -1, 2, 3)]
        out = {}
        for _ in range(rng.randint(1, self.terms)):
            u = words[rng.randrange(len(words))]
            out[u] = F.add(out.get(u, F.zero), pool[rng.randrange(len(pool))])
        v = alg.poly(out)
        if self.target != "A":
            v = seq.i(v)
        v = seq.A.nf(v)
        self._values[key] = v
        return v

    def __call__(self, x):
        A = self.seq.A
        acc = A.const(0)
        for j, comp in enumerate(x):
            if not comp.terms:
                continue
            for w, ib in self.dec(comp).items():
                acc = acc + ib * self.value(w, j)
        return A.nf(acc)

    def coboundary(self, d):
        """(delta f)(y) = f(d(y)) for the left map d: P_{q+1} -> P_q."""
        return lambda y: self(d(y))


# Sweedler helpers

def _legs(A, a, n, memo):
    """Terms (c, (a1, ..., an)) of the (n-1)-fold coproduct of a."""
    key = (tuple(sorted(a.terms.items(), key=lambda t: A.alphabet.key(t[0]))), n)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if n == 1:
        out = [(c, (A.mono(w),)) for w, c in a.terms.items()]
    else:
        t = A.iterated_comul(a, n - 1)
        out = [(c, tuple(A.mono(w) for w in k)) for k, c in t.items()]
    memo[key] = out
    return out


def _act(A, a, x):
    return tuple(A.nf(a * c) if c.terms else c for c in x)


class _Ops:
    def __init__(self, seq, corrupt=False):
        self.seq = seq
        self.A = seq.A
        self.corrupt = corrupt
        self.memo = {}

    def S(self, p):
        return self.A.antipode(p)

    def Si(self, p):
        return self.A.antipode_inv(p)

    def star(self, a, f, swap=False):
        """(p(a).f)(x) = a1 f(S(a2) x); corrupt drops S, swap uses a2 f(S(a1) x)."""
        A = self.A
        terms = _legs(A, a, 2, self.memo)
        corrupt = self.corrupt

        def g(x):
            acc = A.const(0)
            for c, (a1, a2) in terms:
                if swap:
                    a1, a2 = a2, a1
                s = a2 if corrupt else self.S(a2)
                acc = acc + (a1 * f(_act(A, s, x))).scale(c)
            return A.nf(acc)
        return g

    def harpoon(self, f, a):
        """(f <- a)(x) = S(a2) f(S^2(a1) x) a3; corrupt omits a3."""
        A = self.A
        if self.corrupt:
            terms = [(c, (a1, a2, A.const(1))) for c, (a1, a2) in _legs(A, a, 2, self.memo)]
        else:
            terms = _legs(A, a, 3, self.memo)

        def g(x):
            acc = A.const(0)
            for c, (a1, a2, a3) in terms:
                acc = acc + (self.S(a2) * f(_act(A, self.S(self.S(a1)), x)) * a3).scale(c)
            return A.nf(acc)
        return g


def _points(ctx, A, rank, rng, n=1):
    out = []
    words = A.normal_words(1)
    for _ in range(n):
        out.append(tuple(A.nf(ctx.element(rng, algebra=A, words=words)) for _ in range(rank)))
    return out


def _fmt_point(x):
    return "(" + ", ".join(c.fmt() for c in x) + ")"


class _Tally:
    """First failure per named identity, in insertion order."""

    def __init__(self):
        self.names = []
        self.count = {}
        self.bad = {}

    def record(self, name, ok, witness):
        if name not in self.count:
            self.names.append(name)
            self.count[name] = 0
        self.count[name] += 1
        if not ok and name not in self.bad:
            self.bad[name] = witness() if callable(witness) else witness

    def emit(self, rep):
        for n in self.names:
            w = self.bad.get(n)
            rep.add(n, w is None, f"{self.count[n]} samples", w)


def _b_plus_sample(seq, ctx, rng, D):
    B = seq.B
    b = ctx.element(rng, algebra=B, words=B.normal_words(D))
    return seq.A.nf(seq.i(b) - seq.A.const(B.counit(b)))


def _setup(title, seq, res, q, ctx, corrupt):
    rep = Report(title)
    rep.note("sequence", seq.name)
    rep.note("q", q)
    rep.note("seed", ctx.seed)
    rep.note("samples", ctx.samples)
    rep.note("degree", ctx.max_degree)
    if corrupt:
        rep.note("variant", "corrupted (negative control)")
    if res is not None and q > res.length:
        rep.note("P_q", "zero (q beyond the resolution length)")
        rep.add("trivial", True, "both sides zero")
        return rep, None
    return rep, res.ranks[q] if res is not None else None


def _run(rep, body):
    try:
        body()
    except Refusal as e:
        rep.refuse(e)
    return rep


def star_action_check(seq, res, q, ctx, corrupt=False):
    """Action (p(a).f)(x) = a1 f(S(a2) x) on Hom_B(P_q, A): unit, lift independence,
    B-linearity and the action axiom on sampled cochains."""
    A = seq.A
    rep, rank = _setup(f"star action {seq.name}", seq, res, q, ctx, corrupt)
    if rank is None:
        return rep

    def body():
        ops = _Ops(seq, corrupt)
        dec = LeftFreeDecomposition(seq)
        rng = ctx.rng(f"star:{q}")
        t = _Tally()
        one = A.const(1)
        lift = (seq.b_plus()[0], A.gen(seq.witness[0])) if seq.b_plus() and seq.witness else None
        for s in range(ctx.samples):
            f = CochainModel(seq, dec, rank, "A", f"{ctx.seed}:star:{q}:{s}")
            a, a2 = A.nf(ctx.element(rng)), A.nf(ctx.element(rng))
            bp = _b_plus_sample(seq, ctx, rng, ctx.max_degree)
            if s == 0 and lift is not None:
                bp, a2 = lift
            ib = A.nf(seq.i(ctx.element(rng, algebra=seq.B, words=seq.B.normal_words(1))))
            x, = _points(ctx, A, rank, rng)
            g = ops.star(a, f)
            gx = g(x)
            wit = f"a = {a.fmt()}, x = {_fmt_point(x)}"
            t.record("unit", ops.star(one, f)(x) == f(x), wit)
            t.record("lift_independent", ops.star(A.nf(a + bp * a2), f)(x) == gx,
                     lambda: f"a = {a.fmt()}, lift a + ({bp.fmt()})*({a2.fmt()}), x = {_fmt_point(x)}")
            t.record("B_linear", g(_act(A, ib, x)) == A.nf(ib * gx), lambda: f"{wit}, b = {ib.fmt()}")
            t.record("action_axiom", ops.star(A.nf(a * a2), f)(x) == ops.star(a, ops.star(a2, f))(x),
                     lambda: f"{wit}, a' = {a2.fmt()}")
        t.emit(rep)
    return _run(rep, body)


def harpoon_action_check(seq, res, q, ctx, corrupt=False):
    """Right action (f <- a)(x) = S(a2) f(S^2(a1) x) a3 on Hom_B(P_q, B): values stay in B,
    unit, and (f <- a) <- a' = f <- aa'."""
    A = seq.A
    rep, rank = _setup(f"harpoon action {seq.name}", seq, res, q, ctx, corrupt)
    if rank is None:
        return rep

    def body():
        ops = _Ops(seq, corrupt)
        dec = LeftFreeDecomposition(seq)
        rng = ctx.rng(f"harpoon:{q}")
        t = _Tally()
        one = A.const(1)
        for s in range(ctx.samples):
            f = CochainModel(seq, dec, rank, "B", f"{ctx.seed}:harpoon:{q}:{s}")
            a, a2 = A.nf(ctx.element(rng)), A.nf(ctx.element(rng))
            x, = _points(ctx, A, rank, rng)
            g = ops.harpoon(f, a)
            gx = g(x)
            wit = f"a = {a.fmt()}, x = {_fmt_point(x)}"
            t.record("values_in_B", seq.in_B(gx), lambda: f"{wit}, value {gx.fmt()}")
            t.record("unit", ops.harpoon(f, one)(x) == f(x), wit)
            t.record("action_axiom", ops.harpoon(g, a2)(x) == ops.harpoon(f, A.nf(a * a2))(x),
                     lambda: f"{wit}, a' = {a2.fmt()}")
        t.emit(rep)
    return _run(rep, body)


def phi_map_check(seq, N_rank, ctx, res=None, q=0, corrupt=False):
    """phi(f (x) m)(n) = f(n) m for N = B^N_rank and M = A, with its inverse, plus the
    A-linearity computation of phi on Hom_B(P_q, B) (x)_B A, line by line.

    Hom_B(B^r, B) (x)_B M is normalized as sum_j e_j^* (x) m_j.  corrupt
    drops the last coordinate in the inverse and uses S for S^-1 in the
    A-linearity identity.
    """
    A, B = seq.A, seq.B
    rep = Report(f"phi map {seq.name}")
    rep.note("sequence", seq.name)
    rep.note("N_rank", N_rank)
    rep.note("seed", ctx.seed)
    rep.note("samples", ctx.samples)
    if corrupt:
        rep.note("variant", "corrupted (negative control)")

    def body():
        rng = ctx.rng(f"phi:{N_rank}")
        bwords = B.normal_words(ctx.max_degree)
        t = _Tally()

        def bel():
            return A.nf(seq.i(ctx.element(rng, algebra=B, words=bwords)))

        def canon(pairs):
            # sum_k f_k (x) m_k  ->  (sum_k f_k(e_j) m_k)_j
            return tuple(A.nf(sum((f[j] * m for f, m in pairs), A.const(0))) for j in range(N_rank))

        def phi(pairs):
            return lambda n: A.nf(sum((n[j] * f[j] * m for f, m in pairs for j in range(N_rank)), A.const(0)))

        def psi(g):
            keep = N_rank - 1 if corrupt else N_rank
            pairs = []
            for j in range(keep):
                e = tuple(A.const(1 if k == j else 0) for k in range(N_rank))
                pairs.append((e, g(e)))
            return pairs

        for _ in range(ctx.samples):
            f = tuple(bel() for _ in range(N_rank))
            m = A.nf(ctx.element(rng))
            b = bel()
            n = tuple(bel() for _ in range(N_rank))
            vals = tuple(A.nf(ctx.element(rng)) for _ in range(N_rank))

            def g(y, vals=vals):
                return A.nf(sum((y[j] * vals[j] for j in range(N_rank)), A.const(0)))
            fb = tuple(A.nf(x * b) for x in f)
            t.record("balanced", canon([(fb, m)]) == canon([(f, A.nf(b * m))]),
                     lambda: f"f = {_fmt_point(f)}, b = {b.fmt()}, m = {m.fmt()}")
            t.record("phi_after_psi", phi(psi(g))(n) == g(n), lambda: f"n = {_fmt_point(n)}")
            t.record("psi_after_phi", canon(psi(phi([(f, m)]))) == canon([(f, m)]),
                     lambda: f"f = {_fmt_point(f)}, m = {m.fmt()}")
        t.emit(rep)
        if res is not None:
            _phi_linearity_chain(rep, seq, res, q, ctx, corrupt)
    return _run(rep, body)


def _phi_linearity_chain(rep, seq, res, q, ctx, corrupt):
    """phi is A-linear for the star actions, checked through four equal expressions."""
    A = seq.A
    rep.note("q", q)
    if q > res.length:
        rep.add("a_linearity", True, "P_q is zero")
        return
    rank = res.ranks[q]
    ops = _Ops(seq)
    dec = LeftFreeDecomposition(seq)
    rng = ctx.rng(f"phi_lin:{q}")
    t = _Tally()
    inv = ops.S if corrupt else ops.Si
    for s in range(ctx.samples):
        f = CochainModel(seq, dec, rank, "B", f"{ctx.seed}:phi_lin:{q}:{s}")
        a, m = A.nf(ctx.element(rng)), A.nf(ctx.element(rng))
        x, = _points(ctx, A, rank, rng)
        # line 1: phi(f <- S^-1(a2) (x) a1 m)(x)
        l1 = A.const(0)
        for c, (a1, a2) in _legs(A, a, 2, ops.memo):
            l1 = l1 + (ops.harpoon(f, inv(a2))(x) * a1 * m).scale(c)
        l1 = A.nf(l1)
        # line 2: a3 f(S(a4) x) S^-1(a2) a1 m
        l2 = A.const(0)
        for c, (a1, a2, a3, a4) in _legs(A, a, 4, ops.memo):
            l2 = l2 + (a3 * f(_act(A, ops.S(a4), x)) * ops.Si(a2) * a1 * m).scale(c)
        l2 = A.nf(l2)
        # line 3: a1 f(S(a2) x) m
        l3 = A.const(0)
        for c, (a1, a2) in _legs(A, a, 2, ops.memo):
            l3 = l3 + (a1 * f(_act(A, ops.S(a2), x)) * m).scale(c)
        l3 = A.nf(l3)
        # line 4: (a -> phi(f (x) m))(x)
        l4 = ops.star(a, lambda y: A.nf(f(y) * m))(x)
        wit = f"a = {a.fmt()}, m = {m.fmt()}, x = {_fmt_point(x)}"
        t.record("phi_A_linear_step1", l1 == l2, wit)
        t.record("phi_A_linear_step2", l2 == l3, wit)
        t.record("phi_A_linear_step3", l3 == l4, wit)
    t.emit(rep)


class _Section:
    """A chosen preimage under p of each normal word of H (exact solve on a window)."""

    def __init__(self, seq):
        self.seq = seq
        self._ech = {}
        self._memo = {}

    def __call__(self, h):
        hit = self._memo.get(h)
        if hit is not None:
            return hit
        seq = self.seq
        A, H = seq.A, seq.H
        D = len(h) + seq.slack
        got = self._ech.get(D)
        if got is None:
            words = A.normal_words(D)
            code = WordCode(H.alphabet)
            ech = Echelon(A.field, track=True)
            for k, w in enumerate(words):
                ech.add({code.code(u): c for u, c in seq.p._word(w).items()}, tag=k)
            got = self._ech[D] = (ech, code, words)
        ech, code, words = got
        sol = ech.solve({code.code(h): A.field.one})
        if sol is None:
            raise Refusal(f"no preimage of {H.alphabet.fmt_word(h)} within degree {D}")
        out = A.poly({words[k]: c for k, c in sol.items()})
        self._memo[h] = out
        return out


def uv_iso_check(seq, ctx, corrupt=False):
    """u(x (x) p(a)) = x S^-1(a2) (x)_B a1 and v(x (x)_B a) = x a2 (x) p(a1) for X = A.

    X (x)_B A is normalized through the free decomposition of the right
    factor; X (x) H is a dict from normal words of H to elements of X.
    corrupt uses S in place of S^-1 inside u.
    """
    A, H = seq.A, seq.H
    F = A.field
    rep = Report(f"u/v isomorphism {seq.name}")
    rep.note("sequence", seq.name)
    rep.note("X", "A (right regular)")
    rep.note("seed", ctx.seed)
    rep.note("samples", ctx.samples)
    if corrupt:
        rep.note("variant", "corrupted (negative control)")

    def body():
        if not A.has_antipode_inv:
            raise Refusal(f"{A.name} has no antipode_inv; the u/v isomorphism needs bijective antipodes")
        ops = _Ops(seq)
        dec = LeftFreeDecomposition(seq)
        lift = _Section(seq)
        inv = ops.S if corrupt else ops.Si

        def canon(pairs):
            out = {}
            for x, a in pairs:
                for w, ib in dec(a).items():
                    out[w] = out.get(w, A.const(0)) + x * ib
            return {w: A.nf(p) for w, p in out.items() if A.nf(p).terms}

        def u_lift(x, a):
            pairs = []
            for c, (a1, a2) in _legs(A, a, 2, ops.memo):
                pairs.append((A.nf((x * inv(a2)).scale(c)), a1))
            return pairs

        def u(elem):
            pairs = []
            for h, x in elem.items():
                pairs.extend(u_lift(x, lift(h)))
            return canon(pairs)

        def v(pairs):
            out = {}
            for x, a in pairs:
                for c, (a1, a2) in _legs(A, a, 2, ops.memo):
                    xa = (x * a2).scale(c)
                    for h, d in seq.p(a1).terms.items():
                        out[h] = out.get(h, A.const(0)) + xa.scale(d)
            return {h: A.nf(p) for h, p in out.items() if A.nf(p).terms}

        def xh(x, a):
            return {h: A.nf(x.scale(c)) for h, c in seq.p(a).terms.items() if c}

        def act(a, pairs):
            out = []
            for x, m in pairs:
                for c, (a1, a2) in _legs(A, a, 2, ops.memo):
                    out.append((A.nf((x * ops.Si(a2)).scale(c)), A.nf(a1 * m)))
            return out

        def fmt_x(elem):
            return " + ".join(f"({p.fmt()}) (x) {H.alphabet.fmt_word(h)}" for h, p in sorted(
                elem.items(), key=lambda t: H.alphabet.key(t[0]))) or "0"

        rng = ctx.rng("uv")
        bwords = seq.B.normal_words(1)
        t = _Tally()
        for _ in range(ctx.samples):
            x, a, a2, m = (A.nf(ctx.element(rng)) for _ in range(4))
            ib = A.nf(seq.i(ctx.element(rng, algebra=seq.B, words=bwords)))
            bp = _b_plus_sample(seq, ctx, rng, 1)
            wit = f"x = {x.fmt()}, a = {a.fmt()}"
            t.record("action_well_defined",
                     canon(act(a, [(A.nf(x * ib), m)])) == canon(act(a, [(x, A.nf(ib * m))])),
                     lambda: f"{wit}, b = {ib.fmt()}, m = {m.fmt()}")
            t.record("v_well_defined", v([(A.nf(x * ib), a)]) == v([(x, A.nf(ib * a))]),
                     lambda: f"{wit}, b = {ib.fmt()}")
            t.record("u_lift_independent",
                     canon(u_lift(x, a)) == canon(u_lift(x, A.nf(a + bp * a2))),
                     lambda: f"{wit}, lift a + ({bp.fmt()})*({a2.fmt()})")
            t.record("u_after_v_identity", u(v([(x, a)])) == canon([(x, a)]), wit)
            e = xh(x, a)
            ue = u(e)
            ve = v([(p, A.mono(w)) for w, p in ue.items()])
            t.record("v_after_u_identity", ve == e, lambda: f"{wit}: v(u({fmt_x(e)})) = {fmt_x(ve)}")
            t.record("u_A_linear", u(xh(x, A.nf(a2 * a))) == canon(act(a2, [(p, A.mono(w)) for w, p in ue.items()])),
                     lambda: f"{wit}, a' = {a2.fmt()}")
        t.emit(rep)
    return _run(rep, body)


def hmod_iso_check(seq, res, q, ctx, corrupt=False):
    """[f] (x) p(a) -> p(a).[f] from Hom_B(P_q, B) (x) H to Hom_B(P_q, A).

    Checks H-linearity, independence of the lift of p(a), and the
    factorization through phi and u (which carry the bijectivity; see the
    phi and u/v checks).  corrupt evaluates a2 f(S(a1) x).
    """
    A = seq.A
    rep, rank = _setup(f"H-module isomorphism {seq.name}", seq, res, q, ctx, corrupt)
    if rank is None:
        return rep

    def body():
        ops = _Ops(seq)
        dec = LeftFreeDecomposition(seq)
        rng = ctx.rng(f"hmod:{q}")
        t = _Tally()

        def psi(f, a):
            return ops.star(a, f, swap=corrupt)

        for s in range(ctx.samples):
            f = CochainModel(seq, dec, rank, "B", f"{ctx.seed}:hmod:{q}:{s}")
            a, a2 = A.nf(ctx.element(rng)), A.nf(ctx.element(rng))
            bp = _b_plus_sample(seq, ctx, rng, 1)
            x, = _points(ctx, A, rank, rng)
            gx = psi(f, a)(x)
            wit = f"a = {a.fmt()}, x = {_fmt_point(x)}"
            t.record("H_linear", psi(f, A.nf(a2 * a))(x) == ops.star(a2, psi(f, a))(x),
                     lambda: f"{wit}, a' = {a2.fmt()}")
            t.record("lift_independent", psi(f, A.nf(a + bp * a2))(x) == gx,
                     lambda: f"{wit}, lift a + ({bp.fmt()})*({a2.fmt()})")
            comp = A.const(0)
            for c, (a1, a_2) in _legs(A, a, 2, ops.memo):
                comp = comp + (ops.harpoon(f, ops.Si(a_2))(x) * a1).scale(c)
            t.record("equals_phi_after_u", A.nf(comp) == gx, wit)
        t.emit(rep)
        rep.note("bijectivity", "phi and u are isomorphisms (phi and u/v checks)")
    return _run(rep, body)
