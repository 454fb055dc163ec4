from hopfcert.coaction import Coaction, coaction_check
from hopfcert.dsl import load_presentation

from conftest import corpus


def _pf(name):
    return load_presentation(corpus(name), strict=False)


def test_h2_coaction_passes():
    for name in ("h2.hopf", "h2_f7.hopf"):
        pf = _pf(name)
        rep = coaction_check(pf.presentation, pf.var_alphabet, pf.coaction.images, 4)
        assert rep.passed, rep.text()


def test_noncentral_fixture_fails():
    pf = _pf("fixtures/h2_noncentral.hopf")
    rep = coaction_check(pf.presentation, pf.var_alphabet, pf.coaction.images, 4)
    assert not rep.check("algebra_map").ok
    assert not rep.check("coassociative").ok


def test_rho_is_multiplicative_on_letters():
    pf = _pf("h2.hopf")
    co = Coaction(pf.presentation, pf.var_alphabet, pf.coaction.images)
    x, y = pf.var_alphabet.index("x"), pf.var_alphabet.index("y")
    assert co.rho((x, y)) == co.mul(co.rho((x,)), co.rho((y,)))
    assert co.rho((y, x)) == co.rho((x, y))
    assert len(co.monomials(2)) == 6
