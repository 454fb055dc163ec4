"""Homological-duality facts with provenance and the extension rule.

A fact records (algebra, dimension, flavor) together with how it was
obtained: computed from a verified resolution and Ext certificates,
cited from the literature, composed along an exact sequence (extension
rule cd(A) = cd(B) + cd(H)), or split off from one (the converse
direction).  Rules fire only when the hypothesis ledger of the sequence
is complete; missing hypotheses are named in the refusal.
"""

from typing import NamedTuple

from .report import Refusal

FLAVORS = ("Duality", "TwistedCY", "CY")

# hypotheses of the extension rule, in the order they are reported
HYPOTHESES = (
    "exact sequence battery",
    "faithfully flat as a left and right B-module",
    "bijective antipodes",
    "B smooth",
    "H smooth",
)

EXTENSION_RULE = "extension rule cd(A) = cd(B) + cd(H)"
TCY_RULE = "twisted Calabi-Yau extensions are twisted Calabi-Yau"


class Provenance(NamedTuple):
    kind: str           # ComputedCertificate | Cited | ComposedByExtension | SplitByExtension
    summary: str
    sequence: str = ""
    parts: tuple = ()   # algebra ids of the facts this one was derived from


class DualityFact:
    """One node of the deduction calculus; composed facts check additivity on construction."""

    def __init__(self, algebra, dimension, flavor, provenance, character=None, smooth=True, parts=()):
        if flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {flavor!r}")
        if dimension < 0:
            raise ValueError("dimension must be nonnegative")
        if provenance.kind == "ComposedByExtension":
            if len(parts) != 2 or dimension != parts[0].dimension + parts[1].dimension:
                raise ValueError("a composed fact must have dimension sub + quotient")
        if flavor == "TwistedCY" and character is None:
            raise ValueError("twisted Calabi-Yau facts carry character data")
        self.algebra = algebra
        self.dimension = dimension
        self.flavor = flavor
        self.provenance = provenance
        self.character = character
        self.smooth = smooth
        self.parts = tuple(parts)

    def key(self):
        return (self.algebra, self.dimension, self.flavor)

    def line(self):
        p = self.provenance
        summary = p.kind if not p.summary else f"{p.kind}: {p.summary}"
        return f"{self.algebra}\t{self.dimension}\t{self.flavor}\t{summary}"

    def __repr__(self):
        return f"DualityFact({self.algebra}, {self.dimension}, {self.flavor}, {self.provenance.kind})"


class CertBundle(NamedTuple):
    """Verified resolution report plus Ext certificates indexed by degree."""
    resolution: object
    certificates: dict


class HypothesisLedger:
    def __init__(self, sequence):
        self.sequence = sequence
        self.entries = {}

    def record(self, name, evidence):
        if name not in HYPOTHESES and name != "cd equality":
            raise ValueError(f"unknown hypothesis {name!r}")
        self.entries[name] = str(evidence)

    def missing(self, names=HYPOTHESES):
        return [n for n in names if n not in self.entries]

    def require(self, names=HYPOTHESES):
        miss = self.missing(names)
        if miss:
            raise Refusal(f"sequence {self.sequence}: missing hypotheses: " + "; ".join(miss))

    def lines(self):
        return [f"{k}: {self.entries[k]}" for k in HYPOTHESES + ("cd equality",) if k in self.entries]


class SequenceInfo(NamedTuple):
    name: str
    sub: str
    ext: str
    quotient: str


class FactStore:
    def __init__(self):
        self.facts = {}
        self.sequences = {}
        self.ledgers = {}

    def get(self, algebra):
        if algebra not in self.facts:
            raise Refusal(f"no duality fact for {algebra}")
        return self.facts[algebra]

    def _store(self, fact):
        old = self.facts.get(fact.algebra)
        if old is not None:
            if old.key() != fact.key():
                show = lambda f: f.line().replace("\t", " ")
                raise Refusal(f"conflicting facts for {fact.algebra}: existing [{show(old)}], new [{show(fact)}]")
            return old
        self.facts[fact.algebra] = fact
        return fact

    def register_base_fact(self, algebra, bundle):
        """Duality in dimension d from a verified resolution and Ext certificates."""
        res = bundle.resolution
        if res is None or not res.passed:
            raise Refusal(f"{algebra}: no verified finite free resolution (smoothness witness)")
        ranks = dict(res.info).get("ranks", "")
        length = len(ranks.split(",")) - 1 if ranks else None
        certs = bundle.certificates
        indices = range(length + 1) if length is not None else sorted(certs)
        for i in indices:
            if i not in certs:
                raise Refusal(f"{algebra}: missing Ext^{i} certificate")
        for i in indices:
            if certs[i].verdict == "Inconclusive":
                raise Refusal(f"{algebra}: Ext^{i} certificate is inconclusive ({certs[i].reason})")
        nonzero = [i for i in indices if certs[i].verdict != "ZeroOnWindow"]
        if len(nonzero) != 1:
            raise Refusal(f"{algebra}: Ext is nonzero in degrees {nonzero}; duality needs exactly one")
        d = nonzero[0]
        top = certs[d]
        summary = f"resolution ranks {ranks}; " + ", ".join(f"Ext^{i} {certs[i].verdict}" for i in indices)
        character = None
        flavor = "Duality"
        if top.verdict == "OneDimensional":
            character = ", ".join(f"{g} -> {v}" for g, v in top.character.items())
            identity = all(top.nakayama.get(g) == g for g in top.nakayama)
            flavor = "CY" if identity else "TwistedCY"
        fact = DualityFact(algebra, d, flavor, Provenance("ComputedCertificate", summary),
                           character=character, smooth=True)
        return self._store(fact)

    def register_cited_fact(self, algebra, dimension, flavor, citation):
        """A trust-labeled fact; a cited duality includes smoothness."""
        character = "cited" if flavor == "TwistedCY" else None
        fact = DualityFact(algebra, dimension, flavor, Provenance("Cited", citation),
                           character=character, smooth=True)
        return self._store(fact)

    def add_sequence(self, name, sub, ext, quotient):
        self.sequences[name] = SequenceInfo(name, sub, ext, quotient)
        self.ledgers.setdefault(name, HypothesisLedger(name))
        return self.ledgers[name]

    def smoothness_from_facts(self, name):
        """Fill 'B smooth' / 'H smooth' from stored facts (computed resolutions or citations)."""
        info = self.sequences[name]
        ledger = self.ledgers[name]
        for label, alg in (("B smooth", info.sub), ("H smooth", info.quotient)):
            f = self.facts.get(alg)
            if f is not None and f.smooth:
                ledger.record(label, f"{alg}: {f.provenance.kind}")
        return ledger

    def apply_extension_rule(self, name, direction="forward"):
        if name not in self.sequences:
            raise Refusal(f"unknown sequence {name}")
        info = self.sequences[name]
        ledger = self.ledgers[name]
        if direction == "forward":
            ledger.require()
            fb, fh = self.get(info.sub), self.get(info.quotient)
            twisted = fb.flavor in ("TwistedCY", "CY") and fh.flavor in ("TwistedCY", "CY")
            flavor = "TwistedCY" if twisted else "Duality"
            rule = EXTENSION_RULE + (f"; {TCY_RULE}" if twisted else "")
            prov = Provenance("ComposedByExtension", f"{name} by {rule}", name, (info.sub, info.quotient))
            fact = DualityFact(info.ext, fb.dimension + fh.dimension, flavor, prov,
                               character="unresolved" if twisted else None, smooth=True, parts=(fb, fh))
            return self._store(fact)
        if direction != "converse":
            raise ValueError("direction must be forward or converse")
        ledger.require()
        fa = self.get(info.ext)
        known = [(lab, self.facts[a]) for lab, a in (("sub", info.sub), ("quotient", info.quotient))
                 if a in self.facts]
        if "cd equality" not in ledger.entries or not known:
            raise Refusal(f"sequence {name}: only cd(B) + cd(H) = {fa.dimension} is determined; "
                          "individual dimensions need the cd equality entry and one known side")
        lab, kf = known[0]
        other = info.quotient if lab == "sub" else info.sub
        dim = fa.dimension - kf.dimension
        if dim < 0:
            raise Refusal(f"sequence {name}: {kf.algebra} has dimension above {info.ext}")
        prov = Provenance("SplitByExtension", f"{name} by {EXTENSION_RULE} (converse)", name,
                          (info.ext, kf.algebra))
        return self._store(DualityFact(other, dim, "Duality", prov, smooth=True, parts=(fa, kf)))

    def explain(self, algebra):
        lines = []
        self._explain(self.get(algebra), "", "", lines)
        return "\n".join(lines) + "\n"

    def _explain(self, fact, lead, cont, lines):
        p = fact.provenance
        head = f"{fact.algebra}: {fact.flavor} dimension {fact.dimension}"
        if fact.character and fact.character not in ("cited",):
            head += f" (character {fact.character})"
        if p.kind == "Cited":
            head += f" [CITED] {p.summary}"
        else:
            head += f" [{p.kind}] {p.summary}"
        lines.append(lead + head)
        kids = [self.facts[a] for a in p.parts if a in self.facts]
        for k, child in enumerate(kids):
            last = k == len(kids) - 1
            self._explain(child, cont + ("`-- " if last else "|-- "), cont + ("    " if last else "|   "), lines)

    def ledger_text(self):
        return "".join(self.facts[a].line() + "\n" for a in sorted(self.facts))
