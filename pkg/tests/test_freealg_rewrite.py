import pytest
from hypothesis import given, settings, strategies as st

from hopfcert.coeffs import FieldSpec
from hopfcert.freealg import Alphabet, NCPoly, TensorPoly, word_compare
from hopfcert.report import Refusal
from hopfcert.rewrite import (RewriteBudgetExceeded, UnitIdeal, complete, degree_basis,
                              expand_representation, ideal_certificate)

from conftest import presentation

Q = FieldSpec.rationals()
AB = Alphabet(["x", "y", "z"], precedence=["z", "x", "y"])

words = st.lists(st.integers(0, 2), max_size=4).map(tuple)
polys = st.dictionaries(words, st.integers(-3, 3), max_size=4).map(
    lambda d: NCPoly(AB, Q, {w: Q.canonical(c) for w, c in d.items()}))


@given(u=words, v=words, w=words)
def test_deglex_is_a_monomial_order(u, v, w):
    c = word_compare(u, v, AB)
    assert c == -word_compare(v, u, AB)
    if c < 0:
        # compatible with concatenation on both sides
        assert word_compare(w + u, w + v, AB) < 0
        assert word_compare(u + w, v + w, AB) < 0
    if len(u) < len(v):
        assert c < 0


def test_precedence_drives_order():
    z, x = AB.index("z"), AB.index("x")
    assert word_compare((z,), (x,), AB) < 0
    assert AB.words(1) == [(z,), (x,), (AB.index("y"),)]


@given(p=polys, q=polys, r=polys)
@settings(max_examples=60)
def test_ring_laws(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == NCPoly.zero(AB, Q)
    assert p * NCPoly.one(AB, Q) == p


def test_tensor_pure_and_fmt():
    x, y = NCPoly.gen(AB, Q, "x"), NCPoly.gen(AB, Q, "y")
    t = TensorPoly.pure(x, y) + TensorPoly.pure(y, x)
    assert not t.is_zero()
    assert "(x)" in t.fmt()


def _rels(alph, *pairs):
    out = []
    for lhs, rhs in pairs:
        p = NCPoly.monomial(alph, Q, tuple(alph.index(c) for c in lhs))
        for word, c in rhs:
            p = p - NCPoly.monomial(alph, Q, tuple(alph.index(ch) for ch in word), c)
        out.append(p)
    return out


def test_completion_adds_overlap_rule():
    # yx = xy, zy = yz, zx = xz: confluent commutative polynomial ring in 3 letters
    A = Alphabet(["x", "y", "z"])
    rels = _rels(A, ("yx", [("xy", 1)]), ("zy", [("yz", 1)]), ("zx", [("xz", 1)]))
    rs = complete(rels, A, Q, 4)
    assert rs.status.confluent
    dims = [0] * 5
    for w in degree_basis(rs, 4).basis:
        dims[len(w)] += 1
    assert dims == [1, 3, 6, 10, 15]


def test_cap_below_relation_degree_is_rejected():
    A = Alphabet(["x"])
    with pytest.raises(ValueError):
        complete(_rels(A, ("xxx", [])), A, Q, 2)


def test_unit_ideal_detected():
    A = Alphabet(["x"])
    with pytest.raises(UnitIdeal):
        complete(_rels(A, ("x", [("", 1)]), ("xx", [("", 2)])), A, Q, 4)


def test_budget_exceeded():
    H2 = presentation("h2.hopf")
    rs = H2.rewrite
    w = tuple([H2.alphabet.index("u22"), H2.alphabet.index("u11")] * 6)
    with pytest.raises(RewriteBudgetExceeded):
        rs.reduce_terms({w: Q.one}, budget=3)


def test_uncertified_degree_refused():
    # a non-confluent system stamped up to its cap refuses requests above the cap
    A = Alphabet(["x", "y"])
    rels = _rels(A, ("xyx", [("yxy", 1)]))
    rs = complete(rels, A, Q, 4)
    assert not rs.status.confluent
    with pytest.raises(Refusal):
        degree_basis(rs, 6)
    assert "CompleteUpToDegree(4)" in rs.serialize()
    assert len(degree_basis(rs, 4).basis) > 0


@given(u=st.lists(st.sampled_from(["u11", "u12", "u22", "u11inv", "u22inv"]), max_size=5),
       v=st.lists(st.sampled_from(["u11", "u12", "u22", "u11inv", "u22inv"]), max_size=5))
@settings(max_examples=40, deadline=None)
def test_normal_form_is_multiplicative_and_idempotent(u, v):
    H2 = presentation("h2.hopf")
    mono = lambda names: H2.mono(tuple(H2.alphabet.index(n) for n in names))
    a, b = mono(u), mono(v)
    na, nb = H2.nf(a), H2.nf(b)
    assert H2.nf(na) == na
    assert H2.nf(a * b) == H2.nf(na * nb)
    assert all(H2.rewrite.is_normal(w) for w in na.terms)


def test_ideal_certificate_reconstructs_difference():
    A = Alphabet(["x", "y", "z"])
    rels = _rels(A, ("yx", [("xy", 1)]), ("zy", [("yz", 1)]), ("zx", [("xz", 1)]))
    rs = complete(rels, A, Q, 4, track=True)
    p = NCPoly.monomial(A, Q, (2, 1, 0)) + NCPoly.monomial(A, Q, (1, 0), 3)
    nf, rep = ideal_certificate(p, rs)
    assert p - nf == expand_representation(rep, rels, A, Q)
