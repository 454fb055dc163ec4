"""Free modules over a presented algebra and windowed Ext computations.

Elements of A^r are tuples of NCPolys.  A left map multiplies the entries
on the right of the input (v -> v M, row-vector convention), a right map
multiplies on the left (c -> M c).  Windows are spans of w e_j (or e_j w)
with |w| <= D; cokernel and cohomology counts are only reported on the
interior degrees n <= D - slack where image truncation is complete.
"""

from typing import NamedTuple

from .linalg import Echelon, WordCode, nullspace
from .report import Refusal, Report

LEFT, RIGHT = "left", "right"


class FreeModuleMap:
    """A-linear map A^domain_rank -> A^codomain_rank given by a matrix.

    matrix[i][j] is the codomain_rank x domain_rank entry; for a left map
    f(v)_i = sum_j v_j M[i][j], for a right map f(c)_i = sum_j M[i][j] c_j.
    """

    def __init__(self, algebra, side, domain_rank, codomain_rank, matrix):
        if side not in (LEFT, RIGHT):
            raise ValueError(f"side must be left or right, not {side!r}")
        if len(matrix) != codomain_rank or any(len(r) != domain_rank for r in matrix):
            raise ValueError("matrix shape does not match the ranks")
        self.algebra = algebra
        self.side = side
        self.domain_rank = domain_rank
        self.codomain_rank = codomain_rank
        self.matrix = tuple(tuple(algebra.nf(e) for e in row) for row in matrix)

    @classmethod
    def from_rows(cls, algebra, rows, codomain_rank):
        """Left map from DSL rows: rows[j] lists the coordinates of d(e_j)."""
        n = len(rows)
        M = [[rows[j][i] for j in range(n)] for i in range(codomain_rank)]
        return cls(algebra, LEFT, n, codomain_rank, M)

    def __repr__(self):
        return f"FreeModuleMap({self.side}, {self.domain_rank} -> {self.codomain_rank})"

    def entry_degree(self):
        return max((e.degree() for row in self.matrix for e in row), default=0)

    def is_zero(self):
        return all(not e.terms for row in self.matrix for e in row)

    def __call__(self, vec):
        A = self.algebra
        out = []
        for i in range(self.codomain_rank):
            acc = A.const(0)
            for j, v in enumerate(vec):
                e = self.matrix[i][j]
                if not e.terms or not v.terms:
                    continue
                acc = acc + (v * e if self.side == LEFT else e * v)
            out.append(A.nf(acc))
        return tuple(out)

    def basis_image(self, word, j):
        """Image of w e_j (left) or e_j w (right)."""
        A = self.algebra
        w = A.mono(word)
        out = []
        for i in range(self.codomain_rank):
            e = self.matrix[i][j]
            out.append(A.nf(w * e if self.side == LEFT else e * w) if e.terms else A.const(0))
        return tuple(out)

    def compose(self, other):
        """self after other."""
        if self.side != other.side or other.codomain_rank != self.domain_rank:
            raise ValueError("maps do not compose")
        A = self.algebra
        M = []
        for i in range(self.codomain_rank):
            row = []
            for k in range(other.domain_rank):
                acc = A.const(0)
                for j in range(self.domain_rank):
                    x, y = self.matrix[i][j], other.matrix[j][k]
                    if x.terms and y.terms:
                        acc = acc + (y * x if self.side == LEFT else x * y)
                row.append(acc)
            M.append(row)
        return FreeModuleMap(self.algebra, self.side, other.domain_rank, self.codomain_rank, M)

    def dual(self):
        """Hom_A(-, A) of the map: transpose and flip the side."""
        M = [[self.matrix[i][j] for i in range(self.codomain_rank)] for j in range(self.domain_rank)]
        side = RIGHT if self.side == LEFT else LEFT
        return FreeModuleMap(self.algebra, side, self.codomain_rank, self.domain_rank, M)

    def fmt(self):
        rows = []
        for j in range(self.domain_rank):
            rows.append(", ".join(self.matrix[i][j].fmt() for i in range(self.codomain_rank)))
        return " ; ".join(rows)


class Resolution:
    """Free left resolution P_n -> ... -> P_0 = A -> k (augmentation = counit)."""

    def __init__(self, algebra, ranks, differentials, side=LEFT):
        self.algebra = algebra
        self.side = side
        self.ranks = tuple(ranks)
        self.differentials = list(differentials)
        if self.ranks[0] != 1:
            raise ValueError("P_0 must be A")
        for q, d in enumerate(self.differentials, start=1):
            if d.domain_rank != self.ranks[q] or d.codomain_rank != self.ranks[q - 1]:
                raise ValueError(f"d{q} has the wrong shape")

    @classmethod
    def from_block(cls, algebra, block):
        ds = [FreeModuleMap.from_rows(algebra, rows, block.ranks[q])
              for q, rows in enumerate(block.rows)]
        return cls(algebra, block.ranks, ds)

    @property
    def length(self):
        return len(self.ranks) - 1

    def d(self, q):
        return self.differentials[q - 1]

    def entry_degree(self):
        return max((d.entry_degree() for d in self.differentials), default=1) or 1

    def fmt(self):
        lines = ["ranks: " + ", ".join(map(str, self.ranks))]
        for q, d in enumerate(self.differentials, start=1):
            lines.append(f"d{q}: {d.fmt()}")
        return "\n".join(lines)


class WindowResult(NamedTuple):
    D: int
    interior: int
    dims: tuple
    total: int
    witnesses: tuple


def _fmt_vec(A, code, vec):
    parts = {}
    for c, x in vec.items():
        w, slot = code.decode(c)
        parts.setdefault(slot, {})[w] = x
    comps = [A.poly(parts.get(s, {})).fmt() for s in range(code.slots)]
    return comps[0] if code.slots == 1 else "(" + ", ".join(comps) + ")"


def _code_tuple(vec, code):
    out = {}
    for j, p in enumerate(vec):
        for w, c in p.terms.items():
            out[code.code(w, j)] = c
    return out


def _degree_counts(pivots, code, top):
    dims = [0] * (top + 1)
    for k in pivots:
        n = code.degree(k)
        if n <= top:
            dims[n] += 1
    return dims


def _require(A, D, what):
    A.rewrite.require(D, what)


def _window_kernel_echelon(f, D):
    """Echelon (in domain coordinates) of the exact kernel of f on the degree <= D window."""
    A = f.algebra
    words = A.normal_words(D)
    tags = [(w, j) for w in words for j in range(f.domain_rank)]
    ccode = WordCode(A.alphabet, max(f.codomain_rank, 1))
    images = [_code_tuple(f.basis_image(w, j), ccode) for w, j in tags]
    ker, _ = nullspace(A.field, images)
    dcode = WordCode(A.alphabet, f.domain_rank)
    ech = Echelon(A.field)
    for k in ker:
        ech.add({dcode.code(*tags[t]): c for t, c in k.items()})
    return ech, dcode


def _window_image_echelon(f, D):
    """Echelon of f(domain window <= D); callers cut it to the codomain window."""
    A = f.algebra
    ccode = WordCode(A.alphabet, f.codomain_rank)
    ech = Echelon(A.field)
    for w in A.normal_words(D):
        for j in range(f.domain_rank):
            ech.add(_code_tuple(f.basis_image(w, j), ccode))
    return ech, ccode


def window_kernel(f, D):
    """Exact kernel of f on the degree <= D window, counted by leading degree."""
    A = f.algebra
    _require(A, D + f.entry_degree(), "window kernel")
    ech, code = _window_kernel_echelon(f, D)
    dims = _degree_counts(ech.pivots(), code, D)
    wit = tuple(_fmt_vec(A, code, ech.row(k)) for k in ech.pivots()[:3])
    return WindowResult(D, D, tuple(dims), sum(dims), wit)


def window_cokernel(f, D, slack=None):
    """Cokernel dims on the interior degrees <= D - slack; preimages range over degree <= D."""
    A = f.algebra
    slack = max(f.entry_degree(), 1) if slack is None else slack
    top = D - slack
    if top < 0:
        raise Refusal(f"window {D} with slack {slack} has no interior degree")
    _require(A, D + f.entry_degree(), "window cokernel")
    ech, code = _window_image_echelon(f, D)
    hit = set(ech.pivots())
    dims = [0] * (top + 1)
    wit = []
    for w in A.normal_words(top):
        for j in range(f.codomain_rank):
            c = code.code(w, j)
            if c not in hit:
                dims[len(w)] += 1
                if len(wit) < 3:
                    wit.append(_fmt_vec(A, code, {c: A.field.one}))
    return WindowResult(D, top, tuple(dims), sum(dims), tuple(wit))


def _check_symbolic_zero(rep, name, f):
    bad = None
    for i, row in enumerate(f.matrix):
        for j, e in enumerate(row):
            if e.terms and bad is None:
                bad = f"entry ({i + 1},{j + 1}) = {e.fmt()}"
    rep.add(name, bad is None, "symbolic", bad)


def verify_resolution(res, D, slack=None):
    """d o d = 0 and eps o d1 = 0 symbolically, exactness on the window by rank counting."""
    A = res.algebra
    rep = Report(f"resolution {A.name}")
    slack = res.entry_degree() if slack is None else slack
    top = D - slack
    rep.note("ranks", ", ".join(map(str, res.ranks)))
    rep.note("degree", D)
    rep.note("interior", f"0..{top}")
    try:
        if top < 0:
            raise Refusal(f"window {D} with slack {slack} has no interior degree")
        _require(A, D + res.entry_degree(), "resolution check")
        for q in range(1, res.length):
            _check_symbolic_zero(rep, f"d{q}_d{q + 1}_zero", res.d(q).compose(res.d(q + 1)))
        if res.length >= 1:
            d1 = res.d(1)
            bad = None
            for j in range(d1.domain_rank):
                e = A.counit(d1.matrix[0][j])
                if e and bad is None:
                    bad = f"eps(d1(e{j + 1})) = {A.field.fmt(e)}"
            rep.add("augmentation_d1_zero", bad is None, "symbolic", bad)
        for q in range(res.length + 1):
            _exact_at(rep, res, q, D, top)
    except Refusal as e:
        rep.refuse(e)
    return rep


def _exact_at(rep, res, q, D, top):
    A = res.algebra
    code = WordCode(A.alphabet, res.ranks[q])
    if q == 0:
        words = A.normal_words(D)
        ker, _ = nullspace(A.field, [{0: A.counit(A.mono(w))} for w in words])
        K = Echelon(A.field)
        for k in ker:
            K.add({code.code(words[t]): c for t, c in k.items()})
    else:
        K, kcode = _window_kernel_echelon(res.d(q), D)
        code = kcode
    I = Echelon(A.field)
    if q < res.length:
        I, _ = _window_image_echelon(res.d(q + 1), D)
    limit = code.bound(D)
    kd = _degree_counts([k for k in K.pivots() if k < limit], code, top)
    idims = _degree_counts([k for k in I.pivots() if k < limit], code, top)
    bad = [n for n in range(top + 1) if kd[n] != idims[n]]
    wit = None
    if bad:
        n = bad[0]
        extra = [k for k in K.pivots() if code.degree(k) == n and k not in I.rows]
        wit = f"degree {n}: dim ker {kd[n]} vs dim im {idims[n]}"
        if extra:
            wit += "; cycle " + _fmt_vec(A, code, I.reduce(K.row(extra[0])))
    rep.add(f"exact_at_P{q}", not bad, f"dims {kd}", wit)


class ExtCertificate(NamedTuple):
    algebra: str
    index: int
    window: tuple
    interior: int
    dims: tuple
    total: int
    verdict: str
    witness: str
    character: dict
    nakayama: dict
    widenings: tuple
    reason: str

    def report(self):
        rep = Report(f"Ext^{self.index}(k, {self.algebra})")
        rep.note("window", f"{self.window[0]}..{self.window[1]}")
        rep.note("interior", f"0..{self.interior}")
        rep.note("dims", " ".join(map(str, self.dims)))
        rep.note("total", self.total)
        for D, total, w in self.widenings:
            rep.note(f"widened_{D}", f"total {total}, witness {w or '-'}")
        rep.note("verdict", self.verdict)
        if self.witness:
            rep.note("witness", self.witness)
        if self.character:
            rep.note("character", ", ".join(f"{g} -> {v}" for g, v in self.character.items()))
        if self.nakayama:
            rep.note("nakayama", ", ".join(f"{g} -> {v}" for g, v in self.nakayama.items()))
        if self.reason:
            rep.note("reason", self.reason)
        rep.add("verdict_conclusive", self.verdict != "Inconclusive", self.verdict)
        return rep


class _Cohomology(NamedTuple):
    K: Echelon
    I: Echelon
    code: WordCode
    dims: tuple
    witness: dict
    D: int


def cochain_differential(res, q):
    """delta^q = Hom(d_{q+1}, A): C^q -> C^{q+1} as a right-module map."""
    return res.d(q + 1).dual()


def _cohomology(res, i, D, top):
    A = res.algebra
    r = res.ranks[i]
    code = WordCode(A.alphabet, r)
    if i < res.length:
        K, _ = _window_kernel_echelon(cochain_differential(res, i), D)
    else:
        K = Echelon(A.field)
        for w in A.normal_words(D):
            for j in range(r):
                K.add({code.code(w, j): A.field.one})
    I = Echelon(A.field)
    if i > 0:
        I, _ = _window_image_echelon(cochain_differential(res, i - 1), D)
    limit = code.bound(D)
    kd = _degree_counts([k for k in K.pivots() if k < limit], code, top)
    idims = _degree_counts([k for k in I.pivots() if k < limit], code, top)
    dims = tuple(a - b for a, b in zip(kd, idims))
    witness = None
    for k in K.pivots():
        if code.degree(k) > top:
            break
        if k not in I.rows:
            v = I.reduce(K.row(k))
            lead = v[max(v)]
            F = A.field
            witness = {c: F.div(x, lead) for c, x in v.items()}
            break
    return _Cohomology(K, I, code, dims, witness, D)


def _vec_of(A, code, vec):
    comps = [dict() for _ in range(code.slots)]
    for c, x in vec.items():
        w, s = code.decode(c)
        comps[s][w] = x
    return tuple(A.poly(t) for t in comps)


def _character(res, coh, wide):
    """Scalar right action of each generator on the witness class, or None."""
    A = res.algebra
    F = A.field
    code = coh.code
    w = _vec_of(A, code, coh.witness)
    base = wide.I.reduce(coh.witness)
    if not base:
        return None
    piv = max(base)
    out = {}
    for g in A.alphabet.names:
        h = A.gen(g)
        wh = tuple(A.nf(x * h) for x in w)
        if max((x.degree() for x in wh), default=0) > wide.D:
            return None
        red = wide.I.reduce(_code_tuple(wh, code))
        lam = F.div(red.get(piv, F.zero), base[piv])
        if any(F.sub(red.get(c, F.zero), F.mul(lam, x)) for c, x in base.items()) \
                or any(c not in base for c in red):
            return None
        out[g] = lam
    return out


def nakayama_from_character(A, xi):
    """sigma(h) = xi(h1) S^2(h2) on generators."""
    F = A.field
    out = {}
    for g in A.alphabet.names:
        acc = A.const(0)
        for (u1, u2), c in A.comul(A.gen(g)).terms.items():
            v = c
            for letter in u1:
                v = F.mul(v, xi[A.alphabet.names[letter]])
            if v:
                acc = acc + A.antipode(A.antipode(A.mono(u2))).scale(v)
        out[g] = A.nf(acc)
    return out


def ext_certificate(res, i, D, slack=None, widenings=2):
    """Window cohomology of Hom_A(P, A) in degree i, with widening-stability verdicts.

    Verdicts: ZeroOnWindow, OneDimensional (with character and Nakayama
    data when the generators act by scalars), Nonzero (stable positive
    dimension), Inconclusive.
    """
    A = res.algebra
    F = A.field
    slack = res.entry_degree() if slack is None else slack
    top = D - slack
    if top < 0:
        raise Refusal(f"window {D} with slack {slack} has no interior degree")
    if i < 0:
        raise Refusal("negative Ext index")
    _require(A, D + widenings + res.entry_degree() + 1, "Ext certificate")
    if i > res.length:
        dims = tuple([0] * (top + 1))
        return ExtCertificate(A.name, i, (0, D), top, dims, 0, "ZeroOnWindow", "", {}, {},
                              (), "index beyond the resolution length")
    runs = [_cohomology(res, i, D + k, D + k - slack) for k in range(widenings + 1)]
    base = runs[0]
    code = base.code
    fmt = (lambda v: _fmt_vec(A, code, v) if v else "")
    wits = [fmt(r.witness) if r.witness is not None else "" for r in runs]
    stable_dims = all(r.dims[:top + 1] == base.dims for r in runs[1:])
    stable_wit = all(w == wits[0] for w in wits[1:])
    total = sum(base.dims)
    wide = tuple((r.D, sum(r.dims[:top + 1]), w) for r, w in zip(runs[1:], wits[1:]))
    character, nakayama, reason = {}, {}, ""
    if not stable_dims:
        verdict, reason = "Inconclusive", "window dimensions change under widening"
    elif total == 0:
        verdict = "ZeroOnWindow"
    elif not stable_wit:
        verdict, reason = "Inconclusive", "witness changes under widening"
    elif total == 1:
        xi = _character(res, base, runs[-1])
        if xi is None:
            verdict, reason = "Inconclusive", "generators do not act by scalars on the witness class"
        else:
            verdict = "OneDimensional"
            character = {g: F.fmt(v) for g, v in xi.items()}
            nakayama = {g: p.fmt() for g, p in nakayama_from_character(A, xi).items()}
    else:
        verdict, reason = "Nonzero", f"stable window dimension {total} (not one-dimensional)"
    return ExtCertificate(A.name, i, (0, D), top, base.dims, total, verdict, wits[0],
                          character, nakayama, wide, reason)


def nakayama_is_identity(A, cert):
    return all(cert.nakayama.get(g) == A.gen(g).fmt() for g in A.alphabet.names)


# chain-level checks live in their own module; re-exported here
from .chain import (  # noqa: E402
    CochainModel, LeftFreeDecomposition, harpoon_action_check, hmod_iso_check,
    phi_map_check, star_action_check, uv_iso_check,
)

__all__ = [
    "FreeModuleMap", "Resolution", "WindowResult", "ExtCertificate", "window_kernel",
    "window_cokernel", "verify_resolution", "ext_certificate", "cochain_differential",
    "nakayama_from_character", "nakayama_is_identity", "CochainModel", "LeftFreeDecomposition",
    "star_action_check", "harpoon_action_check", "phi_map_check", "uv_iso_check", "hmod_iso_check",
]
