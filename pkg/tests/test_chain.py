import pytest
from hypothesis import given, settings, strategies as st

from hopfcert.chain import CochainModel, LeftFreeDecomposition
from hopfcert.dsl import load_presentation
from hopfcert.homcalc import (Resolution, harpoon_action_check, hmod_iso_check, phi_map_check,
                              star_action_check, uv_iso_check)
from hopfcert.hopf import SweedlerContext

from conftest import corpus


@pytest.fixture(scope="module")
def res_h2(H2):
    pf = load_presentation(corpus("h2.hopf"))
    return Resolution.from_block(pf.presentation, pf.resolution)


@pytest.fixture(scope="module")
def ctx(seq_h2):
    return SweedlerContext(seq_h2.A, 2, seed=3, samples=25)


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_left_free_decomposition_reconstructs(seq_h2, seed):
    import random
    A = seq_h2.A
    c = SweedlerContext(A, 3, samples=1)
    a = A.nf(c.element(random.Random(seed)))
    parts = LeftFreeDecomposition(seq_h2)(a)
    total = A.const(0)
    for w, ib in parts.items():
        assert seq_h2.in_B(ib)
        assert all(g in seq_h2.witness for g in A.alphabet.fmt_word(w).split("*") if w)
        total = total + ib * A.mono(w)
    assert A.nf(total) == a


def test_cochain_model_is_left_B_linear(seq_h2):
    A = seq_h2.A
    dec = LeftFreeDecomposition(seq_h2)
    f = CochainModel(seq_h2, dec, 2, target="A", salt="t")
    b = seq_h2.i(seq_h2.B.gen("t"))
    x = (A.mul(A.gen("u12"), A.gen("u22")), A.gen("u11") + A.gen("u22inv"))
    bx = tuple(A.nf(b * e) for e in x)
    assert f(bx) == A.nf(b * f(x))
    g = CochainModel(seq_h2, dec, 2, target="B", salt="t")
    assert seq_h2.in_B(g(x))


@pytest.mark.parametrize("q", [0, 1])
def test_star(seq_h2, res_h2, ctx, q):
    assert star_action_check(seq_h2, res_h2, q, ctx).passed
    bad = star_action_check(seq_h2, res_h2, q, ctx, corrupt=True)
    assert not bad.check("action_axiom").ok


def test_harpoon(seq_h2, res_h2, ctx):
    assert harpoon_action_check(seq_h2, res_h2, 0, ctx).passed
    bad = harpoon_action_check(seq_h2, res_h2, 0, ctx, corrupt=True)
    # omitting a_3 keeps a right action but leaves B
    assert not bad.check("values_in_B").ok
    assert bad.check("action_axiom").ok


def test_phi(seq_h2, res_h2, ctx):
    rep = phi_map_check(seq_h2, 2, ctx, res=res_h2)
    assert rep.passed
    assert rep.check("phi_A_linear_step3").ok
    assert not phi_map_check(seq_h2, 2, ctx, res=res_h2, corrupt=True).passed


def test_uv(seq_h2, ctx):
    assert uv_iso_check(seq_h2, ctx).passed
    assert not uv_iso_check(seq_h2, ctx, corrupt=True).check("u_after_v_identity").ok


@pytest.mark.parametrize("q", [0, 1, 3])
def test_hmod(seq_h2, res_h2, ctx, q):
    assert hmod_iso_check(seq_h2, res_h2, q, ctx).passed
    if q <= res_h2.length:
        assert not hmod_iso_check(seq_h2, res_h2, q, ctx, corrupt=True).check("H_linear").ok


def test_g_sequence_uv_phi(seq_g):
    c = SweedlerContext(seq_g.A, 2, samples=20)
    assert uv_iso_check(seq_g, c).passed
    assert phi_map_check(seq_g, 1, c).passed
