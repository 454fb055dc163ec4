"""Comodule-algebra check for a coaction rho: k[vars] -> k[vars] (x) A.

Left legs are commutative monomials, stored as sorted letter tuples;
right legs are normal words of A.  rho is extended to monomials by
multiplying the images of the letters in sorted order.
"""

from itertools import combinations_with_replacement

from .report import Refusal, Report


def _acc(F, out, k, c):
    v = F.add(out.get(k, F.zero), c)
    if v:
        out[k] = v
    else:
        out.pop(k, None)


class Coaction:
    def __init__(self, algebra, var_alphabet, images):
        self.A = algebra
        self.vars = var_alphabet
        self.F = algebra.field
        self.gen_images = {}
        for v in var_alphabet.names:
            t = images[v]
            out = {}
            for (left, right), c in t.terms.items():
                for w, d in algebra.rewrite.nf_word(right).items():
                    _acc(self.F, out, (tuple(sorted(left)), w), self.F.mul(c, d))
            self.gen_images[var_alphabet.index(v)] = out
        self._memo = {(): {((), ()): self.F.one}}

    def mul(self, s, t):
        """Product in k[vars] (x) A."""
        F = self.F
        nfw = self.A.rewrite.nf_word
        out = {}
        for (l1, r1), c in s.items():
            for (l2, r2), d in t.items():
                cd = F.mul(c, d)
                left = tuple(sorted(l1 + l2))
                for w, e in nfw(r1 + r2).items():
                    _acc(F, out, (left, w), F.mul(cd, e))
        return out

    def rho(self, mono):
        mono = tuple(sorted(mono))
        hit = self._memo.get(mono)
        if hit is None:
            hit = self.mul(self.rho(mono[:-1]), self.gen_images[mono[-1]])
            self._memo[mono] = hit
        return hit

    def monomials(self, D):
        ids = range(len(self.vars))
        out = []
        for n in range(D + 1):
            out.extend(combinations_with_replacement(ids, n))
        return out

    def fmt_mono(self, m):
        return "*".join(self.vars.names[i] for i in m) or "1"

    def fmt(self, t):
        if not t:
            return "0"
        parts = []
        for (l, r), c in sorted(t.items(), key=lambda kv: (kv[0][0], self.A.alphabet.key(kv[0][1]))):
            coef = "" if c == self.F.one else f"{self.F.fmt(c)}*"
            parts.append(f"{coef}{self.fmt_mono(l)} (x) {self.A.alphabet.fmt_word(r) or '1'}")
        return " + ".join(parts)

    def rho_then_rho(self, mono):
        """(rho (x) id) rho(m) as {(left, mid, right): c}."""
        F = self.F
        out = {}
        for (l, r), c in self.rho(mono).items():
            for (l2, m), d in self.rho(l).items():
                _acc(F, out, (l2, m, r), F.mul(c, d))
        return out

    def rho_then_comul(self, mono):
        """(id (x) Delta) rho(m)."""
        F = self.F
        A = self.A
        out = {}
        for (l, r), c in self.rho(mono).items():
            for (u1, u2), d in A._comul_word(r).items():
                _acc(F, out, (l, u1, u2), F.mul(c, d))
        return out


def coaction_check(algebra, var_alphabet, images, D):
    """Algebra map (with commuting variables), coassociativity, counit and grading on degree <= D."""
    rep = Report(f"coaction {algebra.name}")
    rep.note("degree", D)
    rep.note("vars", ", ".join(var_alphabet.names))
    try:
        algebra.rewrite.require(2 * D, "coaction check")
        co = Coaction(algebra, var_alphabet, images)
        F = algebra.field
        monos = co.monomials(D)

        bad = None
        count = 0
        for k, m in enumerate(monos):
            for m2 in monos[k:]:
                if len(m) + len(m2) > D:
                    continue
                count += 1
                whole = co.rho(m + m2)
                if co.mul(co.rho(m), co.rho(m2)) != whole or co.mul(co.rho(m2), co.rho(m)) != whole:
                    bad = bad or (f"m = {co.fmt_mono(m)}, m' = {co.fmt_mono(m2)}: "
                                  f"rho(m)rho(m') = {co.fmt(co.mul(co.rho(m), co.rho(m2)))}, "
                                  f"rho(m')rho(m) = {co.fmt(co.mul(co.rho(m2), co.rho(m)))}")
        rep.add("algebra_map", bad is None, f"{count} pairs", bad)

        bad = next((m for m in monos if co.rho_then_rho(m) != co.rho_then_comul(m)), None)
        rep.add("coassociative", bad is None, f"{len(monos)} monomials",
                None if bad is None else f"m = {co.fmt_mono(bad)}")

        def counit_ok(m):
            out = {}
            for (l, r), c in co.rho(m).items():
                e = algebra.counit(algebra.mono(r))
                if e:
                    _acc(F, out, l, F.mul(c, e))
            return out == {tuple(sorted(m)): F.one}
        bad = next((m for m in monos if not counit_ok(m)), None)
        rep.add("counit", bad is None, f"{len(monos)} monomials",
                None if bad is None else f"m = {co.fmt_mono(bad)}")

        bad = next((m for m in monos if any(len(l) != len(m) for (l, _) in co.rho(m))), None)
        rep.add("grading_preserving", bad is None, f"{len(monos)} monomials",
                None if bad is None else f"m = {co.fmt_mono(bad)}: {co.fmt(co.rho(bad))}")
    except Refusal as e:
        rep.refuse(e)
    return rep
