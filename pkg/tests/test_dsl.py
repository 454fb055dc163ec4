import glob
import os
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hopfcert.cli import CORPUS
from hopfcert.coeffs import FieldSpec
from hopfcert.dsl import (LEXICAL, SEMANTIC, SYNTAX, DSLError, Fragment, Scope, parse_expr,
                          parse_manifest, parse_presentation, parse_sequence, serialize_presentation)
from hopfcert.freealg import Alphabet, NCPoly

HOPF_FILES = sorted(glob.glob(os.path.join(CORPUS, "*.hopf")) + glob.glob(os.path.join(CORPUS, "fixtures", "*.hopf")))

H1_TEXT = """algebra H1 over Q
gens: x, g, ginv
inverses: (g, ginv)
comul:
  x -> 1 (x) x + x (x) g
  g -> g (x) g
  ginv -> ginv (x) ginv
counit: x -> 0, g -> 1, ginv -> 1
antipode:
  x -> -x*ginv
  g -> ginv
  ginv -> g
"""


@pytest.mark.parametrize("path", HOPF_FILES, ids=os.path.basename)
def test_round_trip(path):
    with open(path) as fh:
        pf = parse_presentation(fh.read(), source=path, strict=False)
    text = serialize_presentation(pf)
    again = parse_presentation(text, strict=False)
    assert again == pf
    assert serialize_presentation(again) == text


def _error(text, **kw):
    with pytest.raises(DSLError) as info:
        parse_presentation(text, **kw)
    return info.value


def test_lexical_error_position():
    e = _error(H1_TEXT.replace("x -> -x*ginv", "x -> -x$ginv"))
    assert (e.code, e.line, e.col) == (LEXICAL, 10, 10)


def test_syntax_error_position():
    e = _error(H1_TEXT.replace("g -> g (x) g", "g -> g (x) * g"))
    assert e.code == SYNTAX and e.line == 6


def test_semantic_unknown_generator():
    e = _error(H1_TEXT.replace("antipode:\n  x -> -x*ginv", "antipode:\n  x -> -x*h"))
    assert e.code == SEMANTIC and e.line == 10 and "'h'" in e.message


def test_missing_header():
    assert _error("gens: x\n").code == SYNTAX


def test_bad_field():
    e = _error(H1_TEXT.replace("over Q", "over F9"))
    assert e.code == SEMANTIC and e.line == 1


def test_broken_axioms_refused_when_strict():
    bad = H1_TEXT.replace("g -> ginv\n", "g -> g\n")
    with pytest.raises(DSLError):
        parse_presentation(bad)
    pf = parse_presentation(bad, strict=False)
    assert pf.presentation.issues


def test_prime_field_reads_fractions():
    pf = parse_presentation(H1_TEXT.replace("over Q", "over F7").replace("-x*ginv", "-1/2*x*ginv"), strict=False)
    assert pf.antipode["x"].fmt() == "3*x*ginv"


def test_manifest_and_sequence():
    entries = parse_manifest("base kZ kz.hopf\ncite B 3 TwistedCY Someone 2013\nsequence s.seq\n# c\n")
    assert [e.kind for e in entries] == ["base", "cite", "sequence"]
    with pytest.raises(DSLError):
        parse_manifest("bogus line\n")
    with open(os.path.join(CORPUS, "seq_kz_h2_h1.seq")) as fh:
        sf = parse_sequence(fh.read(), base_dir=CORPUS)
    assert sf.name == "kZ_H2_H1" and sf.degree == 4 and sf.strict
    with pytest.raises(DSLError) as info:
        parse_sequence("sequence s\nsub: kz.hopf\n", base_dir=CORPUS)
    assert info.value.code == SEMANTIC


AB = Alphabet(["a", "b"])
Q = FieldSpec.rationals()
words = st.lists(st.integers(0, 1), max_size=3).map(tuple)
coeffs = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))


@given(st.dictionaries(words, coeffs, max_size=4))
@settings(max_examples=80)
def test_poly_fmt_parses_back(terms):
    p = NCPoly(AB, Q, {w: Q.canonical(c) for w, c in terms.items()})
    back = parse_expr(Fragment(p.fmt(), 1, 1), Scope(Q, [AB]))
    assert back == p
