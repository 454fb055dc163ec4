"""Presentation files: lexer, parser and canonical serializer.

A file is line oriented.  Top-level lines are `algebra NAME over FIELD` or
`key: ...`; indented lines continue the current section.  `#` starts a
comment.  Items in list sections are separated by commas or newlines.

    algebra H1 over Q
    gens: x, g, ginv
    inverses: (g, ginv)
    comul:
      x -> 1 (x) x + x (x) g
    ...

Errors carry a line, a column and one of three codes: lexical, syntax,
semantic.
"""

import os
import re
from fractions import Fraction
from typing import NamedTuple

from .coeffs import DivisionByZero, FieldError, FieldSpec
from .freealg import Alphabet, NCPoly, TensorPoly
from .hopf import HopfPresentation, PresentationError
from .rewrite import UnitIdeal, complete


LEXICAL = "lexical"
SYNTAX = "syntax"
SEMANTIC = "semantic"


class DSLError(ValueError):
    def __init__(self, code, message, line=0, col=0, source=None):
        self.code = code
        self.message = message
        self.line = line
        self.col = col
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: {code} error: {message}")


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t]+)
  | (?P<tensor>\(x\))
  | (?P<arrow>->)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),;=<])
    """,
    re.VERBOSE,
)


def tokenize(text, line=1, col=1):
    """Tokens of one fragment; `line`/`col` locate its first character."""
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DSLError(LEXICAL, f"unexpected character {text[pos]!r}", line, col + pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), line, col + pos))
        pos = m.end()
    out.append(Token("end", "", line, col + n))
    return out


class Fragment(NamedTuple):
    text: str
    line: int
    col: int


class Scope:
    """Name resolution for expressions: generators of one alphabet per leg plus scalar params."""

    def __init__(self, field, alphabets, params=None):
        self.field = field
        self.alphabets = list(alphabets)
        self.params = dict(params or {})


class _Parser:
    def __init__(self, frag, scope):
        self.toks = tokenize(frag.text, frag.line, frag.col)
        self.i = 0
        self.scope = scope
        self.F = scope.field

    @property
    def tok(self):
        return self.toks[self.i]

    def take(self, kind=None, text=None):
        t = self.tok
        if (kind and t.kind != kind) or (text is not None and t.text != text):
            want = text or kind
            got = t.text or "end of input"
            raise DSLError(SYNTAX, f"expected {want!r}, found {got!r}", t.line, t.col)
        self.i += 1
        return t

    def at(self, text):
        return self.tok.kind == "op" and self.tok.text == text

    def done(self):
        if self.tok.kind != "end":
            raise DSLError(SYNTAX, f"unexpected {self.tok.text!r}", self.tok.line, self.tok.col)

    # scalars

    def scalar(self):
        t = self.take("num")
        v = Fraction(int(t.text))
        try:
            v = self.F.canonical(v)
            if self.at("/"):
                self.take()
                d = self.tok
                if d.kind == "ident" and d.text in self.scope.params:
                    self.take()
                    den = self.scope.params[d.text]
                else:
                    den = self.F.canonical(int(self.take("num").text))
                if not den:
                    raise DSLError(SEMANTIC, "division by zero", d.line, d.col)
                v = self.F.div(v, den)
            return v
        except DivisionByZero as e:
            raise DSLError(SEMANTIC, str(e), t.line, t.col) from None

    def signed_scalar(self):
        neg = False
        if self.at("-") or self.at("+"):
            neg = self.take().text == "-"
        if self.tok.kind == "ident" and self.tok.text in self.scope.params:
            v = self.scope.params[self.take().text]
        else:
            v = self.scalar()
        return self.F.neg(v) if neg else v

    # polynomials over one leg

    def expr(self, leg=0):
        out = self.term(leg)
        while self.at("+") or self.at("-"):
            op = self.take().text
            t = self.term(leg)
            out = out + t if op == "+" else out - t
        return out

    def term(self, leg):
        neg = False
        while self.at("-") or self.at("+"):
            if self.take().text == "-":
                neg = not neg
        out = self.power(leg)
        while self.at("*"):
            self.take()
            out = out * self.power(leg)
        return -out if neg else out

    def power(self, leg):
        base = self.atom(leg)
        if self.at("^"):
            self.take()
            t = self.take("num")
            n = int(t.text)
            if n < 1:
                raise DSLError(SYNTAX, "exponent must be a positive integer", t.line, t.col)
            base = base ** n
        return base

    def atom(self, leg):
        alph = self.scope.alphabets[leg]
        t = self.tok
        if t.kind == "num":
            return NCPoly.const(alph, self.F, self.scalar())
        if t.kind == "ident":
            self.take()
            if t.text in self.scope.params:
                return NCPoly.const(alph, self.F, self.scope.params[t.text])
            if t.text not in alph:
                raise DSLError(SEMANTIC, f"unknown generator {t.text!r}", t.line, t.col)
            return NCPoly.gen(alph, self.F, t.text)
        if self.at("("):
            self.take()
            e = self.expr(leg)
            self.take("op", ")")
            return e
        raise DSLError(SYNTAX, f"unexpected {t.text or 'end of input'!r}", t.line, t.col)

    # tensors: legs joined by (x), sums of such products

    def tensor(self, legs):
        out = TensorPoly.zero(self.scope.alphabets[:legs], self.F)
        neg = False
        if self.at("-") or self.at("+"):
            neg = self.take().text == "-"
        while True:
            start = self.tok
            parts = [self.product(0)]
            while self.tok.kind == "tensor":
                self.take()
                if len(parts) >= legs:
                    raise DSLError(SYNTAX, f"more than {legs} tensor legs", start.line, start.col)
                parts.append(self.product(len(parts)))
            if len(parts) != legs:
                raise DSLError(SYNTAX, f"expected {legs} tensor legs, found {len(parts)}", start.line, start.col)
            t = TensorPoly.pure(*parts)
            out = out - t if neg else out + t
            if not (self.at("+") or self.at("-")):
                return out
            neg = self.take().text == "-"

    def product(self, leg):
        out = self.power(leg)
        while self.at("*"):
            self.take()
            out = out * self.power(leg)
        return out


def parse_expr(frag, scope, leg=0):
    p = _Parser(frag, scope)
    e = p.expr(leg)
    p.done()
    return e


def parse_relation(frag, scope):
    """`lhs` or `lhs = rhs`, returned as lhs - rhs."""
    p = _Parser(frag, scope)
    e = p.expr()
    if p.at("="):
        p.take()
        e = e - p.expr()
    p.done()
    return e


def parse_tensor(frag, scope, legs=2):
    p = _Parser(frag, scope)
    t = p.tensor(legs)
    p.done()
    return t


# line structure

_LIST_KEYS = ("params", "gens", "inverses", "precedence", "rels", "comul", "counit", "antipode", "antipode_inv")
_BLOCK_KEYS = ("resolution", "coaction")


def _strip_comment(line):
    i = line.find("#")
    return line if i < 0 else line[:i]


def _split_top(frag, seps=","):
    """Split a fragment at separators outside parentheses (the (x) token is not a paren)."""
    out = []
    depth = 0
    start = 0
    text = frag.text
    i = 0
    while i < len(text):
        if text.startswith("(x)", i):
            i += 3
            continue
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in seps and depth == 0:
            out.append(Fragment(text[start:i], frag.line, frag.col + start))
            start = i + 1
        i += 1
    out.append(Fragment(text[start:], frag.line, frag.col + start))
    res = []
    for f in out:
        lead = len(f.text) - len(f.text.lstrip())
        body = f.text.strip()
        if body:
            res.append(Fragment(body, f.line, f.col + lead))
    return res


class _Section(NamedTuple):
    key: str
    line: int
    col: int
    items: list


def _sections(text, source=None, keys=_LIST_KEYS + _BLOCK_KEYS, header=("algebra",)):
    """Group lines into (key, items) sections; returns header fragment and sections."""
    head = None
    sections = []
    cur = None
    for ln, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        if indent:
            if cur is None:
                raise DSLError(SYNTAX, "indented line outside any section", ln, indent + 1, source)
            cur.items.append(Fragment(body, ln, indent + 1))
            continue
        word = body.split(None, 1)[0]
        if word in header and not word.endswith(":"):
            if head is not None:
                raise DSLError(SYNTAX, f"duplicate {word} line", ln, 1, source)
            head = Fragment(body, ln, 1)
            cur = None
            continue
        m = re.match(r"([A-Za-z_][A-Za-z0-9_]*)\s*:(.*)$", body)
        if m is None:
            raise DSLError(SYNTAX, f"expected 'key:' or a header line, found {body!r}", ln, 1, source)
        key = m.group(1)
        if key not in keys:
            raise DSLError(SYNTAX, f"unknown section {key!r}", ln, 1, source)
        if any(s.key == key for s in sections):
            raise DSLError(SYNTAX, f"duplicate section {key!r}", ln, 1, source)
        cur = _Section(key, ln, 1, [])
        rest = m.group(2)
        if rest.strip():
            off = body.index(":") + 1
            lead = len(rest) - len(rest.lstrip())
            cur.items.append(Fragment(rest.strip(), ln, off + lead + 1))
        sections.append(cur)
    return head, sections


class Resolution(NamedTuple):
    """Free left resolution data: ranks[q] = rank of P_q, rows[q-1] = d_q rows (one per basis element of P_q)."""
    ranks: tuple
    rows: tuple


class Coaction(NamedTuple):
    vars: tuple
    images: dict


class PresentationFile:
    def __init__(self, name, field, params, gens, inverses, precedence, rels, comul, counit,
                 antipode, antipode_inv, resolution, coaction, presentation, source=None, var_alphabet=None):
        self.name = name
        self.field = field
        self.params = params
        self.gens = gens
        self.inverses = inverses
        self.precedence = precedence
        self.rels = rels
        self.comul = comul
        self.counit = counit
        self.antipode = antipode
        self.antipode_inv = antipode_inv
        self.resolution = resolution
        self.coaction = coaction
        self.presentation = presentation
        self.source = source
        self.var_alphabet = var_alphabet

    def structure(self):
        """Canonical comparable summary (what round-trip identity means)."""
        return serialize_presentation(self)

    def __eq__(self, other):
        return isinstance(other, PresentationFile) and self.structure() == other.structure()


def _parse_header(head, source):
    if head is None:
        raise DSLError(SYNTAX, "missing 'algebra NAME over FIELD' line", 1, 1, source)
    parts = head.text.split()
    if len(parts) != 4 or parts[2] != "over":
        raise DSLError(SYNTAX, "expected 'algebra NAME over FIELD'", head.line, head.col, source)
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", parts[1]):
        raise DSLError(SYNTAX, f"bad algebra name {parts[1]!r}", head.line, head.col + len(parts[0]) + 1, source)
    try:
        field = FieldSpec.from_name(parts[3])
    except FieldError as e:
        raise DSLError(SEMANTIC, str(e), head.line, head.text.rindex(parts[3]) + 1, source) from None
    return parts[1], field


def _ident(frag, what):
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", frag.text):
        raise DSLError(SYNTAX, f"bad {what} {frag.text!r}", frag.line, frag.col)
    return frag.text


def _map_entries(sec):
    """`name -> rhs` entries of a section, returned as (name, name frag, rhs frag)."""
    out = []
    for item in sec.items:
        for frag in _split_top(item):
            i = frag.text.find("->")
            if i < 0:
                raise DSLError(SYNTAX, "expected 'NAME -> expression'", frag.line, frag.col)
            name = Fragment(frag.text[:i].strip(), frag.line, frag.col)
            rest = frag.text[i + 2:]
            lead = len(rest) - len(rest.lstrip())
            rhs = Fragment(rest.strip(), frag.line, frag.col + i + 2 + lead)
            if not rhs.text:
                raise DSLError(SYNTAX, "missing right-hand side", frag.line, frag.col + i + 2)
            out.append((_ident(name, "name"), name, rhs))
    return out


def _located(fn, source):
    try:
        return fn()
    except DSLError as e:
        if e.source is None:
            raise DSLError(e.code, e.message, e.line, e.col, source) from None
        raise


def parse_presentation(text, source=None, strict=True, cap=6):
    return _located(lambda: _parse_presentation(text, source, strict, cap), source)


def _parse_presentation(text, source, strict, cap):
    head, sections = _sections(text, source)
    name, F = _parse_header(head, source)
    sec = {s.key: s for s in sections}

    params = {}
    if "params" in sec:
        pscope = Scope(F, [Alphabet([])], {})
        for item in sec["params"].items:
            for frag in _split_top(item):
                i = frag.text.find("=")
                if i < 0:
                    raise DSLError(SYNTAX, "expected 'NAME = scalar'", frag.line, frag.col)
                pname = _ident(Fragment(frag.text[:i].strip(), frag.line, frag.col), "parameter name")
                rest = frag.text[i + 1:]
                vfrag = Fragment(rest.strip(), frag.line, frag.col + i + 1 + len(rest) - len(rest.lstrip()))
                p = _Parser(vfrag, Scope(F, pscope.alphabets, params))
                v = p.signed_scalar()
                p.done()
                params[pname] = v

    if "gens" not in sec or not sec["gens"].items:
        s = sec.get("gens")
        raise DSLError(SEMANTIC, "at least one generator required", s.line if s else 1, 1)
    gens = []
    for item in sec["gens"].items:
        for frag in _split_top(item):
            g = _ident(frag, "generator name")
            if g in gens:
                raise DSLError(SEMANTIC, f"duplicate generator {g!r}", frag.line, frag.col)
            if g in params:
                raise DSLError(SEMANTIC, f"generator {g!r} shadows a parameter", frag.line, frag.col)
            gens.append(g)
    if not gens:
        raise DSLError(SEMANTIC, "at least one generator required", sec["gens"].line, 1)

    precedence = None
    if "precedence" in sec:
        s = sec["precedence"]
        frags = []
        for item in s.items:
            frags.extend(_split_top(item, "<"))
        precedence = []
        for frag in frags:
            g = _ident(frag, "generator name")
            if g not in gens:
                raise DSLError(SEMANTIC, f"unknown generator {g!r}", frag.line, frag.col)
            if g in precedence:
                raise DSLError(SEMANTIC, f"generator {g!r} listed twice", frag.line, frag.col)
            precedence.append(g)
        if len(precedence) != len(gens):
            missing = [g for g in gens if g not in precedence]
            raise DSLError(SEMANTIC, f"precedence misses {', '.join(missing)}", s.line, 1)
    alphabet = Alphabet(gens, precedence)
    scope = Scope(F, [alphabet, alphabet], params)

    inverses = []
    if "inverses" in sec:
        for item in sec["inverses"].items:
            for frag in _split_top(item):
                m = re.fullmatch(r"\(\s*([A-Za-z_]\w*)\s*,\s*([A-Za-z_]\w*)\s*\)", frag.text)
                if m is None:
                    raise DSLError(SYNTAX, "expected '(gen, inverse)'", frag.line, frag.col)
                for g in m.groups():
                    if g not in alphabet:
                        raise DSLError(SEMANTIC, f"unknown generator {g!r}", frag.line, frag.col)
                inverses.append(m.groups())

    rels = []
    if "rels" in sec:
        for item in sec["rels"].items:
            for frag in _split_top(item):
                r = parse_relation(frag, scope)
                if r.is_zero():
                    raise DSLError(SEMANTIC, "relation is identically zero", frag.line, frag.col)
                rels.append((r, frag))
    all_rels = []
    for a, b in inverses:
        ga, gb = NCPoly.gen(alphabet, F, a), NCPoly.gen(alphabet, F, b)
        all_rels += [ga * gb - 1, gb * ga - 1]
    all_rels += [r for r, _ in rels]

    def gen_map(key, parse):
        if key not in sec:
            return None
        out = {}
        for g, nfrag, rhs in _map_entries(sec[key]):
            if g not in alphabet:
                raise DSLError(SEMANTIC, f"{key} references undeclared generator {g!r}", nfrag.line, nfrag.col)
            if g in out:
                raise DSLError(SEMANTIC, f"{key} entry for {g!r} given twice", nfrag.line, nfrag.col)
            out[g] = parse(rhs)
        return out

    comul = gen_map("comul", lambda f: parse_tensor(f, scope, 2))
    counit = gen_map("counit", lambda f: _scalar_frag(f, scope))
    antipode = gen_map("antipode", lambda f: parse_expr(f, scope))
    antipode_inv = gen_map("antipode_inv", lambda f: parse_expr(f, scope))
    for key, table in (("comul", comul), ("counit", counit), ("antipode", antipode)):
        if table is None:
            raise DSLError(SEMANTIC, f"missing {key} section", head.line, 1)
        for g in gens:
            if g not in table:
                raise DSLError(SEMANTIC, f"{key} missing for generator {g!r}", sec[key].line, 1)
    if antipode_inv is not None:
        for g in gens:
            if g not in antipode_inv:
                raise DSLError(SEMANTIC, f"antipode_inv missing for generator {g!r}", sec["antipode_inv"].line, 1)

    resolution = None
    if "resolution" in sec:
        resolution = _parse_resolution(sec["resolution"], scope)
    coaction = None
    var_alphabet = None
    if "coaction" in sec:
        coaction, var_alphabet = _parse_coaction(sec["coaction"], F, alphabet, params)

    try:
        rs = complete(all_rels, alphabet, F, cap)
    except UnitIdeal as e:
        s = sec.get("rels") or sec.get("inverses")
        raise DSLError(SEMANTIC, str(e), s.line if s else 1, 1) from None
    try:
        pres = HopfPresentation(name, alphabet, F, all_rels, comul, counit, antipode,
                                antipode_inv, rewrite=rs, strict=strict)
    except PresentationError as e:
        s = sec.get("rels") or sec["comul"]
        raise DSLError(SEMANTIC, str(e), s.line, 1) from None

    return PresentationFile(name, F, params, tuple(gens), tuple(inverses), alphabet.precedence,
                            [r for r, _ in rels], comul, counit, antipode, antipode_inv,
                            resolution, coaction, pres, source, var_alphabet)


def _scalar_frag(frag, scope):
    p = _Parser(frag, scope)
    v = p.signed_scalar()
    p.done()
    return v


def _parse_resolution(sec, scope):
    ranks = None
    rows = {}
    for item in sec.items:
        m = re.match(r"(ranks|d(\d+))\s*:(.*)$", item.text)
        if m is None:
            raise DSLError(SYNTAX, "expected 'ranks:' or 'dN:' in resolution block", item.line, item.col)
        off = item.text.index(":") + 1
        body = Fragment(m.group(3).strip(), item.line, item.col + off + len(m.group(3)) - len(m.group(3).lstrip()))
        if m.group(1) == "ranks":
            ranks = []
            for f in _split_top(body):
                if not f.text.isdigit():
                    raise DSLError(SYNTAX, "rank must be a nonnegative integer", f.line, f.col)
                ranks.append(int(f.text))
            continue
        q = int(m.group(2))
        if q in rows:
            raise DSLError(SEMANTIC, f"d{q} given twice", item.line, item.col)
        rows[q] = (body, [ _split_top(r) for r in _split_top(body, ";") ])
    if ranks is None:
        raise DSLError(SEMANTIC, "resolution needs a ranks line", sec.line, 1)
    if len(ranks) < 1 or ranks[0] != 1:
        raise DSLError(SEMANTIC, "resolution must start at rank 1 (P_0 = A)", sec.line, 1)
    mats = []
    for q in range(1, len(ranks)):
        if q not in rows:
            raise DSLError(SEMANTIC, f"missing d{q}", sec.line, 1)
        body, rr = rows[q]
        if len(rr) != ranks[q]:
            raise DSLError(SEMANTIC, f"d{q} needs {ranks[q]} rows (one per basis element of P_{q}), found {len(rr)}",
                           body.line, body.col)
        mat = []
        for row in rr:
            if len(row) != ranks[q - 1]:
                at = row[0] if row else body
                raise DSLError(SEMANTIC, f"d{q} rows need {ranks[q - 1]} entries, found {len(row)}", at.line, at.col)
            mat.append([parse_expr(f, scope) for f in row])
        mats.append(mat)
    extra = [q for q in rows if q >= len(ranks) or q < 1]
    if extra:
        raise DSLError(SEMANTIC, f"d{extra[0]} outside the declared ranks", sec.line, 1)
    return Resolution(tuple(ranks), tuple(tuple(tuple(r) for r in m) for m in mats))


def _parse_coaction(sec, F, alphabet, params):
    vars_ = None
    entries = []
    for item in sec.items:
        m = re.match(r"vars\s*:(.*)$", item.text)
        if m:
            vars_ = [_ident(f, "variable") for f in _split_top(Fragment(m.group(1), item.line, item.col + 5))]
            continue
        entries.append(item)
    if not vars_:
        raise DSLError(SEMANTIC, "coaction needs a 'vars:' line", sec.line, 1)
    valph = Alphabet(vars_)
    scope = Scope(F, [valph, alphabet], params)
    images = {}
    fake = _Section("coaction", sec.line, 1, entries)
    for v, nfrag, rhs in _map_entries(fake):
        if v not in valph:
            raise DSLError(SEMANTIC, f"coaction references undeclared variable {v!r}", nfrag.line, nfrag.col)
        images[v] = parse_tensor(rhs, scope, 2)
    for v in vars_:
        if v not in images:
            raise DSLError(SEMANTIC, f"coaction missing for variable {v!r}", sec.line, 1)
    return Coaction(tuple(vars_), images), valph


# serialization

def fmt_tensor(t):
    """Tensor text that the parser reads back: coefficient on the first leg."""
    if not t.terms:
        return "0"
    F = t.field
    parts = []
    for k, c in t.items():
        legs = [a.fmt_word(w) for a, w in zip(t.alphabets, k)]
        neg = F.characteristic == 0 and c < 0
        mag = -c if neg else c
        cs = F.fmt(mag)
        if cs != "1":
            legs[0] = cs if legs[0] == "1" else f"{cs}*{legs[0]}"
        parts.append((neg, " (x) ".join(legs)))
    out = []
    for i, (neg, s) in enumerate(parts):
        if i == 0:
            out.append(f"-{s}" if neg else s)
        else:
            out.append(f" - {s}" if neg else f" + {s}")
    return "".join(out)


def serialize_presentation(pf):
    F = pf.field
    lines = [f"algebra {pf.name} over {F.name}"]
    if pf.params:
        lines.append("params: " + ", ".join(f"{k} = {F.fmt(v)}" for k, v in pf.params.items()))
    lines.append("gens: " + ", ".join(pf.gens))
    if pf.inverses:
        lines.append("inverses: " + ", ".join(f"({a}, {b})" for a, b in pf.inverses))
    lines.append("precedence: " + " < ".join(pf.precedence))
    if pf.rels:
        lines.append("rels:")
        lines.extend(f"  {r.fmt()}" for r in pf.rels)
    lines.append("comul:")
    lines.extend(f"  {g} -> {fmt_tensor(pf.comul[g])}" for g in pf.gens)
    lines.append("counit:")
    lines.extend(f"  {g} -> {F.fmt(pf.counit[g])}" for g in pf.gens)
    lines.append("antipode:")
    lines.extend(f"  {g} -> {pf.antipode[g].fmt()}" for g in pf.gens)
    if pf.antipode_inv is not None:
        lines.append("antipode_inv:")
        lines.extend(f"  {g} -> {pf.antipode_inv[g].fmt()}" for g in pf.gens)
    if pf.resolution is not None:
        lines.append("resolution:")
        lines.append("  ranks: " + ", ".join(str(r) for r in pf.resolution.ranks))
        for q, mat in enumerate(pf.resolution.rows, 1):
            rows = " ; ".join(", ".join(e.fmt() for e in row) for row in mat)
            lines.append(f"  d{q}: {rows}")
    if pf.coaction is not None:
        lines.append("coaction:")
        lines.append("  vars: " + ", ".join(pf.coaction.vars))
        lines.extend(f"  {v} -> {fmt_tensor(pf.coaction.images[v])}" for v in pf.coaction.vars)
    return "\n".join(lines) + "\n"


def load_presentation(path, strict=True, cache=None):
    path = os.path.normpath(path)
    key = (path, strict)
    if cache is not None and key in cache:
        return cache[key]
    with open(path, encoding="utf-8") as fh:
        pf = parse_presentation(fh.read(), source=path, strict=strict)
    if cache is not None:
        cache[key] = pf
    return pf


# sequence files

class SequenceFile(NamedTuple):
    name: str
    sub: PresentationFile
    ext: PresentationFile
    quotient: PresentationFile
    incl: dict
    proj: dict
    witness: tuple
    degree: int
    strict: bool
    source: str | None


_SEQ_KEYS = ("sub", "ext", "quotient", "incl", "proj", "witness", "degree", "strict")


def parse_sequence(text, source=None, base_dir=".", cache=None):
    return _located(lambda: _parse_sequence(text, source, base_dir, cache), source)


def _parse_sequence(text, source, base_dir, cache):
    head, sections = _sections(text, source, keys=_SEQ_KEYS, header=("sequence",))
    if head is None:
        raise DSLError(SYNTAX, "missing 'sequence NAME' line", 1, 1)
    parts = head.text.split()
    if len(parts) != 2:
        raise DSLError(SYNTAX, "expected 'sequence NAME'", head.line, head.col)
    sec = {s.key: s for s in sections}
    for k in ("sub", "ext", "quotient", "incl", "proj"):
        if k not in sec:
            raise DSLError(SEMANTIC, f"missing {k!r} section", head.line, 1)
    strict = True
    if "strict" in sec:
        v = sec["strict"].items[0].text if sec["strict"].items else ""
        if v not in ("yes", "no"):
            raise DSLError(SYNTAX, "strict must be yes or no", sec["strict"].line, 1)
        strict = v == "yes"
    files = {}
    for k in ("sub", "ext", "quotient"):
        item = sec[k].items[0] if sec[k].items else None
        if item is None:
            raise DSLError(SYNTAX, f"{k} needs a file name", sec[k].line, 1)
        path = os.path.join(base_dir, item.text)
        if not os.path.exists(path):
            raise DSLError(SEMANTIC, f"file not found: {item.text}", item.line, item.col)
        files[k] = load_presentation(path, cache=cache)
    B, A, H = files["sub"], files["ext"], files["quotient"]
    if not (B.field == A.field == H.field):
        raise DSLError(SEMANTIC, "sub, ext and quotient must share a field", head.line, 1)

    def morphism(key, src, dst):
        scope = Scope(dst.field, [dst.presentation.alphabet], dst.params)
        out = {}
        for g, nfrag, rhs in _map_entries(sec[key]):
            if g not in src.presentation.alphabet:
                raise DSLError(SEMANTIC, f"{key} references undeclared generator {g!r}", nfrag.line, nfrag.col)
            out[g] = parse_expr(rhs, scope)
        for g in src.gens:
            if g not in out:
                raise DSLError(SEMANTIC, f"{key} missing for generator {g!r}", sec[key].line, 1)
        return out

    incl = morphism("incl", B, A)
    proj = morphism("proj", A, H)
    witness = ()
    if "witness" in sec:
        ws = []
        for item in sec["witness"].items:
            for frag in _split_top(item):
                g = _ident(frag, "generator name")
                if g not in A.presentation.alphabet:
                    raise DSLError(SEMANTIC, f"unknown generator {g!r}", frag.line, frag.col)
                ws.append(g)
        witness = tuple(ws)
    degree = 3
    if "degree" in sec:
        it = sec["degree"].items
        if not it or not it[0].text.isdigit():
            raise DSLError(SYNTAX, "degree must be an integer", sec["degree"].line, 1)
        degree = int(it[0].text)
    return SequenceFile(parts[1], B, A, H, incl, proj, witness, degree, strict, source)


def load_sequence(path, cache=None):
    with open(path, encoding="utf-8") as fh:
        return parse_sequence(fh.read(), source=path, base_dir=os.path.dirname(path) or ".", cache=cache)


# manifests

class ManifestEntry(NamedTuple):
    kind: str
    name: str
    args: tuple
    line: int


def parse_manifest(text, source=None):
    """Lines: `base NAME FILE`, `cite NAME DIM FLAVOR CITATION...`, `sequence FILE`."""
    out = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "base" and len(parts) == 3:
            out.append(ManifestEntry(kind, parts[1], (parts[2],), ln))
        elif kind == "cite" and len(parts) >= 5:
            if not parts[2].isdigit():
                raise DSLError(SYNTAX, "cited dimension must be an integer", ln, line.index(parts[2]) + 1, source)
            if parts[3] not in ("Duality", "TwistedCY", "CY"):
                raise DSLError(SEMANTIC, f"unknown flavor {parts[3]!r}", ln, line.index(parts[3]) + 1, source)
            citation = line.split(None, 4)[4]
            out.append(ManifestEntry(kind, parts[1], (int(parts[2]), parts[3], citation), ln))
        elif kind == "sequence" and len(parts) == 2:
            out.append(ManifestEntry(kind, parts[1], (parts[1],), ln))
        else:
            raise DSLError(SYNTAX, f"bad manifest line {line!r}", ln, 1, source)
    return out


def build_sequence(sf, slack=None):
    """SequenceSpec from a parsed sequence file (non-strict files keep their violations)."""
    from .exactseq import HopfMorphism, SequenceSpec
    B, A, H = sf.sub.presentation, sf.ext.presentation, sf.quotient.presentation
    i = HopfMorphism(B, A, sf.incl, name="i", strict=sf.strict)
    p = HopfMorphism(A, H, sf.proj, name="p", strict=sf.strict)
    seq = SequenceSpec(sf.name, B, A, H, i, p, sf.witness, sf.degree, slack, strict=sf.strict)
    seq.issues = i.issues + p.issues + seq.issues
    return seq
