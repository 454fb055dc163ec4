import pytest
from hypothesis import given, settings, strategies as st

from hopfcert.hopf import KINDS, SweedlerContext, action_eval, check_hopf_axioms, check_module_axiom

from conftest import presentation

GOOD = ["kz.hopf", "h1.hopf", "h2.hopf", "b_e_q2.hopf", "g_e_q2.hopf",
        "kz_f7.hopf", "h1_f7.hopf", "h2_f7.hopf", "b_e_q3_f7.hopf", "g_e_q3_f7.hopf"]
BAD = {
    "fixtures/h1_bad_antipode.hopf": "antipode_left",
    "fixtures/h1_bad_coassoc.hopf": "coassociativity",
    "fixtures/h1_bad_counit.hopf": "counit_left",
    "fixtures/h2_bad_comul.hopf": "antipode_left",
    "fixtures/kz_bad_antipode.hopf": "antipode_left",
}


@pytest.mark.parametrize("name", GOOD)
def test_axioms_hold_on_corpus(name):
    A = presentation(name)
    rep = check_hopf_axioms(A, SweedlerContext(A, 2, samples=40))
    assert rep.passed, rep.text()


@pytest.mark.parametrize("name", sorted(BAD))
def test_negative_controls_fail(name):
    A = presentation(name, strict=False)
    rep = check_hopf_axioms(A, SweedlerContext(A, 2, samples=40))
    assert not rep.passed
    assert not rep.check(BAD[name]).ok
    assert rep.check(BAD[name]).witness


def test_samples_are_seeded():
    A = presentation("h2.hopf")
    a = [p.fmt() for p in SweedlerContext(A, 3, seed=5, samples=10).elements("s")]
    b = [p.fmt() for p in SweedlerContext(A, 3, seed=5, samples=10).elements("s")]
    c = [p.fmt() for p in SweedlerContext(A, 3, seed=6, samples=10).elements("s")]
    assert a == b and a != c


@pytest.mark.parametrize("kind", KINDS)
def test_module_axioms(kind):
    A = presentation("h2.hopf")
    assert check_module_axiom(kind, A, SweedlerContext(A, 2, samples=25)).passed


def test_module_axiom_negative_control():
    # dropping the antipode from the adjoint action breaks associativity
    A = presentation("h2.hopf")
    bad = lambda m, h: A.sweedler(h, 2, lambda h1, h2: h1 * m * h2)
    rep = check_module_axiom("bar", A, SweedlerContext(A, 2, samples=25), action=bad)
    assert not rep.passed


words = st.lists(st.sampled_from(["x", "g", "ginv"]), min_size=1, max_size=4)


@given(words, words)
@settings(max_examples=40, deadline=None)
def test_structure_maps_on_products(u, v):
    A = presentation("h1.hopf")
    a = A.mul(*[A.gen(n) for n in u])
    b = A.mul(*[A.gen(n) for n in v])
    ab = A.mul(a, b)
    S = A.antipode
    assert S(ab) == A.mul(S(b), S(a))
    assert A.antipode_inv(S(ab)) == ab
    assert A.counit(ab) == A.field.mul(A.counit(a), A.counit(b))
    # S(a1) a2 = eps(a) 1
    assert A.sweedler(ab, 2, lambda x, y: S(x) * y) == A.const(A.counit(ab))


def test_adjoint_action_of_group_like():
    A = presentation("h1.hopf")
    g, x, ginv = A.gen("g"), A.gen("x"), A.gen("ginv")
    assert action_eval("bar", x, g, A) == A.mul(g, x, ginv)
