"""Rewriting systems for finitely presented algebras.

Relations are oriented by their leading word under deglex.  Completion
resolves overlap ambiguities up to a degree cap (Buchberger/Bergman style)
and inter-reduces after every new rule, so inclusion ambiguities never
arise.  A system is stamped Confluent only when every overlap of the final
rules fits under the cap and resolves; otherwise it is complete up to the
cap and says so.
"""

import heapq
from typing import NamedTuple

from .freealg import NCPoly
from .report import Refusal


DEFAULT_BUDGET = 10**6


class RewriteBudgetExceeded(RuntimeError):
    pass


class UnitIdeal(ValueError):
    pass


class Status(NamedTuple):
    confluent: bool
    bound: int | None

    def __str__(self):
        return "Confluent" if self.confluent else f"CompleteUpToDegree({self.bound})"


CONFLUENT = Status(True, None)


class RewriteRule(NamedTuple):
    lhs: tuple
    rhs: dict

    def poly(self, alphabet, field):
        """lhs - rhs as an element of the free algebra."""
        p = NCPoly.monomial(alphabet, field, self.lhs)
        return p - NCPoly(alphabet, field, dict(self.rhs), _clean=True)


class RewriteSystem:
    def __init__(self, alphabet, field, rules, status=CONFLUENT, cap=None, budget=DEFAULT_BUDGET, provenance=None):
        self.alphabet = alphabet
        self.field = field
        key = alphabet.key
        self.rules = sorted(rules, key=lambda r: key(r.lhs))
        self.status = status
        self.cap = cap
        self.budget = budget
        self.provenance = provenance
        self._lhs = {r.lhs: i for i, r in enumerate(self.rules)}
        self._lens = sorted({len(r.lhs) for r in self.rules})
        self._memo = {}

    @property
    def certified_degree(self):
        """None means unbounded (confluent)."""
        return None if self.status.confluent else self.status.bound

    def require(self, degree, what="request"):
        b = self.certified_degree
        if b is not None and degree > b:
            raise Refusal(f"{what} needs rewriting certified to degree {degree}, system is {self.status}")

    def find(self, word):
        """Leftmost reducible position: (position, rule index) or None."""
        lhs = self._lhs
        lens = self._lens
        n = len(word)
        for i in range(n):
            for L in lens:
                if i + L > n:
                    break
                j = lhs.get(word[i:i + L])
                if j is not None:
                    return i, j
        return None

    def is_normal(self, word):
        return self.find(word) is None

    def reduce_terms(self, terms, budget=None, trace=None):
        """Normal form of a raw term dict.

        Largest monomial first, leftmost reducible position.  With `trace`
        (a list) every step is recorded as (coeff, left, rule index, right)
        meaning coeff*left*(lhs - rhs)*right was subtracted.
        """
        F = self.field
        key = self.alphabet.key
        budget = self.budget if budget is None else budget
        memo = None if trace is not None else self._memo
        pending = {}
        heap = []
        for w, c in terms.items():
            if c:
                pending[w] = F.add(pending.get(w, F.zero), c)
        for w in pending:
            heap.append((_neg_key(key(w)), w))
        heapq.heapify(heap)
        out = {}
        steps = 0
        rules = self.rules
        while heap:
            _, w = heapq.heappop(heap)
            c = pending.pop(w, None)
            if not c:
                continue
            if memo is not None:
                hit = memo.get(w)
                if hit is not None:
                    for u, d in hit.items():
                        s = F.add(out.get(u, F.zero), F.mul(c, d))
                        if s:
                            out[u] = s
                        else:
                            out.pop(u, None)
                    continue
            hit = self.find(w)
            if hit is None:
                s = F.add(out.get(w, F.zero), c)
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
                continue
            steps += 1
            if steps > budget:
                raise RewriteBudgetExceeded(
                    f"normal form exceeded {budget} rewriting steps at word {self.alphabet.fmt_word(w)}"
                )
            i, j = hit
            rule = rules[j]
            left, right = w[:i], w[i + len(rule.lhs):]
            if trace is not None:
                trace.append((c, left, j, right))
            for m, d in rule.rhs.items():
                u = left + m + right
                old = pending.get(u)
                if old is None:
                    heapq.heappush(heap, (_neg_key(key(u)), u))
                    pending[u] = F.mul(c, d)
                else:
                    s = F.add(old, F.mul(c, d))
                    pending[u] = s
        return out

    def nf_word(self, word):
        """Normal form of a single word as a raw dict (memoized)."""
        hit = self._memo.get(word)
        if hit is None:
            hit = self.reduce_terms({word: self.field.one})
            self._memo[word] = hit
        return hit

    def nf_terms(self, terms):
        """Normal form of a raw term dict, word by word through the memo."""
        F = self.field
        out = {}
        for w, c in terms.items():
            for u, d in self.nf_word(w).items():
                s = F.add(out.get(u, F.zero), F.mul(c, d))
                if s:
                    out[u] = s
                else:
                    del out[u]
        return out

    def normal_form(self, p, budget=None, trace=None):
        if p.alphabet != self.alphabet or p.field != self.field:
            raise ValueError("polynomial is not over this system's alphabet and field")
        if trace is None and budget is None:
            return NCPoly(self.alphabet, self.field, self.nf_terms(p.terms), _clean=True)
        return NCPoly(self.alphabet, self.field, self.reduce_terms(p.terms, budget, trace), _clean=True)

    def overlaps(self, i, j):
        """Overlaps lhs_i = a s, lhs_j = s b with s nonempty proper; yields (a, s, b)."""
        u = self.rules[i].lhs
        v = self.rules[j].lhs
        for k in range(1, min(len(u), len(v))):
            if u[-k:] == v[:k]:
                yield u[:-k], u[-k:], v[k:]

    def unresolved_overlaps(self, cap=None):
        """Re-run overlap resolution; returns (unresolved list, max overlap degree seen above cap)."""
        bad = []
        beyond = []
        for i in range(len(self.rules)):
            for j in range(len(self.rules)):
                for a, s, b in self.overlaps(i, j):
                    deg = len(a) + len(s) + len(b)
                    if cap is not None and deg > cap:
                        beyond.append(a + s + b)
                        continue
                    sp = _spoly(self, i, j, a, b)
                    r = self.reduce_terms(sp)
                    if r:
                        bad.append((a + s + b, r))
        return bad, beyond

    def fmt_rule(self, rule):
        lhs = self.alphabet.fmt_word(rule.lhs)
        rhs = NCPoly(self.alphabet, self.field, dict(rule.rhs), _clean=True).fmt()
        return f"{lhs} -> {rhs}"

    def serialize(self):
        lines = [
            f"order: deglex {' < '.join(self.alphabet.precedence)}",
            f"status: {self.status}",
            f"rules: {len(self.rules)}",
        ]
        lines.extend(self.fmt_rule(r) for r in self.rules)
        return "\n".join(lines) + "\n"


class _NegKey:
    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return self.k > other.k

    def __eq__(self, other):
        return self.k == other.k


def _neg_key(k):
    # deglex keys are (length, tuple); heapq is a min-heap
    return _NegKey(k)


def _spoly(rs, i, j, a, b):
    """rhs_i * b - a * rhs_j for the overlap lhs_i*b = a*lhs_j."""
    F = rs.field
    out = {}
    for m, c in rs.rules[i].rhs.items():
        w = m + b
        out[w] = F.add(out.get(w, F.zero), c)
    for m, c in rs.rules[j].rhs.items():
        w = a + m
        out[w] = F.sub(out.get(w, F.zero), c)
    return {w: c for w, c in out.items() if c}


# provenance bookkeeping: a representation is a dict (left, relation index, right) -> coeff

def _rep_add(F, acc, rep, c=None, left=(), right=()):
    for (l, k, r), v in rep.items():
        key = (left + l, k, r + right)
        v = v if c is None else F.mul(c, v)
        s = F.add(acc.get(key, F.zero), v)
        if s:
            acc[key] = s
        else:
            acc.pop(key, None)
    return acc


def _rep_from_trace(F, trace, reps):
    acc = {}
    for c, left, j, right in trace:
        _rep_add(F, acc, reps[j], c, left, right)
    return acc


class _Completer:
    def __init__(self, alphabet, field, relations, cap, budget, track):
        self.alphabet = alphabet
        self.field = field
        self.cap = cap
        self.budget = budget
        self.track = track
        self.rules = {}
        self.reps = {}
        self.queue = []
        F = field
        for k, p in enumerate(relations):
            if p.alphabet != alphabet or p.field != field:
                raise ValueError("relation over a different alphabet or field")
            if p.is_zero():
                continue
            rep = {((), k, ()): F.one} if track else None
            self.queue.append((dict(p.terms), rep))

    def system(self, status=CONFLUENT):
        rules = [RewriteRule(l, r) for l, r in self.rules.items()]
        rs = RewriteSystem(self.alphabet, self.field, rules, status, self.cap, self.budget)
        if self.track:
            rs.provenance = [self.reps[r.lhs] for r in rs.rules]
        return rs

    def reduce(self, terms, rep):
        rs = self.system()
        if self.track:
            trace = []
            out = rs.reduce_terms(terms, self.budget, trace)
            reps = [self.reps[r.lhs] for r in rs.rules]
            # terms - out = sum of traced steps, so out's rep = rep - traced
            sub = _rep_from_trace(self.field, trace, reps)
            new = dict(rep)
            _rep_add(self.field, new, sub, self.field.neg(self.field.one))
            return out, new
        return rs.reduce_terms(terms, self.budget), None

    def insert(self, terms, rep):
        F = self.field
        key = self.alphabet.key
        lead = max(terms, key=key)
        if not lead:
            raise UnitIdeal("relations generate the whole algebra (a nonzero constant was derived)")
        inv = F.inv(terms[lead])
        rhs = {w: F.neg(F.mul(inv, c)) for w, c in terms.items() if w != lead}
        if self.track:
            rep = {k: F.mul(inv, v) for k, v in rep.items()}
        # rules whose lhs now reduces go back to the queue
        for l in list(self.rules):
            if _contains(l, lead):
                r = self.rules.pop(l)
                back = dict(r)
                back = {w: F.neg(c) for w, c in back.items()}
                back[l] = F.one
                self.queue.append((back, self.reps.pop(l, None)))
        self.rules[lead] = rhs
        if self.track:
            self.reps[lead] = rep
        self._tail_reduce()

    def _tail_reduce(self):
        F = self.field
        changed = True
        while changed:
            changed = False
            rs = self.system()
            for l, rhs in list(self.rules.items()):
                if all(rs.is_normal(w) for w in rhs):
                    continue
                if self.track:
                    trace = []
                    new = rs.reduce_terms(rhs, self.budget, trace)
                    reps = [self.reps[r.lhs] for r in rs.rules]
                    # lhs - new = (lhs - rhs) + (rhs - new)
                    _rep_add(F, self.reps[l], _rep_from_trace(F, trace, reps))
                else:
                    new = rs.reduce_terms(rhs, self.budget)
                self.rules[l] = new
                changed = True
                break

    def drain(self):
        key = self.alphabet.key
        while self.queue:
            self.queue.sort(key=lambda t: key(max(t[0], key=key)) if t[0] else (-1, ()))
            terms, rep = self.queue.pop(0)
            out, rep = self.reduce(terms, rep)
            if out:
                self.insert(out, rep)

    def run(self):
        F = self.field
        while True:
            self.drain()
            rs = self.system()
            new = []
            beyond = False
            for i in range(len(rs.rules)):
                for j in range(len(rs.rules)):
                    for a, s, b in rs.overlaps(i, j):
                        if len(a) + len(s) + len(b) > self.cap:
                            beyond = True
                            continue
                        sp = _spoly(rs, i, j, a, b)
                        r = rs.reduce_terms(sp, self.budget)
                        if r:
                            rep = None
                            if self.track:
                                ri = self.reps[rs.rules[i].lhs]
                                rj = self.reps[rs.rules[j].lhs]
                                # (lhs_i - rhs_i) b - a (lhs_j - rhs_j) = -(sp)
                                rep = {}
                                _rep_add(F, rep, ri, F.neg(F.one), (), b)
                                _rep_add(F, rep, rj, F.one, a, ())
                            new.append((sp, rep))
            if not new:
                status = Status(False, self.cap) if beyond else CONFLUENT
                return self.system(status)
            self.queue.extend(new)


def _contains(word, sub):
    n, m = len(word), len(sub)
    for i in range(n - m + 1):
        if word[i:i + m] == sub:
            return True
    return False


def complete(relations, alphabet, field, cap, budget=DEFAULT_BUDGET, track=False):
    """Complete a relation set into a rewriting system, resolving overlaps up to `cap`."""
    rels = list(relations)
    degs = [p.degree() for p in rels if not p.is_zero()]
    if degs and cap < max(degs):
        raise ValueError(f"cap {cap} is below the relation degree {max(degs)}")
    return _Completer(alphabet, field, rels, cap, budget, track).run()


def normal_form(p, rs):
    return rs.normal_form(p)


class DegreeWindowBasis(NamedTuple):
    max_degree: int
    basis: list


def degree_basis(rs, D):
    """All irreducible words of degree <= D in increasing monomial order."""
    if D < 0:
        raise ValueError("negative degree")
    rs.require(D, "degree basis")
    return DegreeWindowBasis(D, normal_words(rs, D))


def normal_words(rs, D):
    key = rs.alphabet.key
    gens = range(len(rs.alphabet))
    layer = [()]
    out = [()]
    lens = rs._lens
    lhs = rs._lhs
    for _ in range(D):
        nxt = []
        for w in layer:
            for g in gens:
                u = w + (g,)
                n = len(u)
                # only suffixes can be newly reducible
                if any(n >= L and u[n - L:] in lhs for L in lens):
                    continue
                nxt.append(u)
        out.extend(nxt)
        layer = nxt
    out.sort(key=key)
    return out


def expand_representation(rep, relations, alphabet, field):
    """Sum of coeff * left * relation * right in the free algebra."""
    out = NCPoly.zero(alphabet, field)
    for (l, k, r), c in rep.items():
        out = out + NCPoly.monomial(alphabet, field, l, c) * relations[k] * NCPoly.monomial(alphabet, field, r)
    return out


def ideal_certificate(p, rs):
    """Representation of p - nf(p) over the original relations (needs a tracked system)."""
    if rs.provenance is None:
        raise ValueError("system was completed without provenance tracking")
    trace = []
    nf = rs.normal_form(p, trace=trace)
    return nf, _rep_from_trace(rs.field, trace, rs.provenance)
