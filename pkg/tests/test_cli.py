import pytest

from hopfcert.cli import parse_window

from conftest import cli


def test_window_syntax():
    assert parse_window("6") == 6
    assert parse_window("-6..4") == 6
    assert parse_window("0..5") == 5


@pytest.mark.parametrize("argv,code", [
    (["check-hopf", "corpus/h1.hopf", "--degree", "2", "--samples", "20"], 0),
    (["check-hopf", "corpus/fixtures/h1_bad_counit.hopf", "--degree", "2", "--samples", "20"], 1),
    (["check-exact", "corpus/fixtures/seq_bad_incl.seq", "--degree", "3"], 1),
    (["verify-chain", "corpus/seq_kz_g_b_q2.seq", "--identity", "star", "--samples", "5"], 2),
    (["ext", "corpus/h1.hopf", "--i", "1", "--window", "1", "--slack", "2"], 2),
    (["basis", "corpus/nope.hopf"], 64),
    (["basis"], 64),
    (["frobnicate"], 64),
    (["ext", "corpus/h1.hopf", "--i", "x"], 64),
    (["coaction-check", "corpus/kz.hopf"], 2),
])
def test_exit_codes(argv, code):
    assert cli(*argv)[0] == code


def test_witness_printed_on_failure():
    code, out, _ = cli("check-hopf", "corpus/fixtures/kz_bad_antipode.hopf", "--degree", "2", "--samples", "10")
    assert code == 1 and "witness: " in out


def test_kv_format():
    code, out, _ = cli("basis", "corpus/kz.hopf", "--degree", "3", "--format", "kv")
    assert code == 0
    assert "info.dims=1 2 2 2" in out.splitlines()


def test_verify_chain_selectors():
    code, out, _ = cli("verify-chain", "corpus/seq_kz_h2_h1.seq", "--identity", "adjoint", "--samples", "20")
    assert code == 0 and "adjoint.a1_b_S(a2)" in out
    code, out, _ = cli("verify-chain", "corpus/seq_kz_h2_h1.seq", "--identity", "adjoint", "--samples", "20", "--corrupt")
    assert code == 1


def test_duality_ledger_file(tmp_path):
    led = tmp_path / "ledger.tsv"
    code, out, _ = cli("duality", "derive", "corpus/manifest.txt", "--ledger", str(led))
    assert code == 0
    assert "dim(G_E_q2): 4 (TwistedCY, ComposedByExtension)" in out
    assert led.read_text().splitlines()[0].startswith("B_E_q2\t3\tTwistedCY\tCited")


def test_explain_unknown_algebra():
    assert cli("duality", "explain", "Nope")[0] == 2


def test_complete_output_stable():
    a = cli("complete", "corpus/g_e_q2.hopf")
    b = cli("complete", "corpus/g_e_q2.hopf")
    assert a == b and a[0] == 0
