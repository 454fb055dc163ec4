import pytest

from hopfcert.exactseq import (b_membership, check_composite, check_freeness_witness, check_injectivity,
                               check_surjectivity, exactness_battery, tor0_iso_check)
from hopfcert.hopf import SweedlerContext
from hopfcert.report import Refusal

from conftest import sequence


def test_battery_h2(seq_h2):
    rep = exactness_battery(seq_h2, 4)
    assert rep.passed, rep.text()
    assert rep.check("freeness.left_spanning").detail == "157 of 157 window words"


def test_battery_g(seq_g):
    assert exactness_battery(seq_g, 3).passed


def test_bad_inclusion_breaks_coinvariants():
    rep = exactness_battery(sequence("fixtures/seq_bad_incl.seq"), 3)
    assert not rep.check("coinvariants.right_coinvariants_in_B").ok
    assert rep.check("coinvariants.right_coinvariants_in_B").witness == "u11"
    assert rep.check("injectivity.no_kernel_up_to_degree").ok


def test_bad_projection_breaks_surjectivity_and_kernel():
    rep = exactness_battery(sequence("fixtures/seq_bad_proj.seq"), 3)
    assert not rep.check("surjectivity.all_words_reached").ok
    assert not rep.check("kernel.kernel_in_left_ideal").ok
    assert rep.check("kernel.left_ideal_in_kernel").ok


def test_components(seq_h2):
    assert check_injectivity(seq_h2.i, 4).passed
    assert check_surjectivity(seq_h2.p, 4).passed
    ctx = SweedlerContext(seq_h2.A, 3, samples=30)
    assert check_composite(seq_h2, ctx).passed


def test_wrong_freeness_witness_fails(seq_h2):
    # dropping u22inv leaves half of A unreached
    rep = check_freeness_witness(seq_h2, witness=("u12", "u22"), D=3)
    assert not rep.passed


def test_membership(seq_h2):
    A = seq_h2.A
    u11, u11inv, u12 = A.gen("u11"), A.gen("u11inv"), A.gen("u12")
    assert b_membership(seq_h2, A.mul(u11, u11, u11inv), 3)
    assert not b_membership(seq_h2, u12, 3)
    with pytest.raises(Refusal):
        b_membership(seq_h2, A.mul(u11, u11, u11, u11), 2)


@pytest.mark.parametrize("V_dim", [0, 1, 2])
def test_tor0_identification(seq_h2, V_dim):
    assert tor0_iso_check(seq_h2, V_dim, 3).passed


def test_tor0_negative_control(seq_h2):
    assert not tor0_iso_check(seq_h2, 2, 3, corrupt=True).passed
