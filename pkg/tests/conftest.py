import io
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from hopfcert.cli import CORPUS, run_command  # noqa: E402
from hopfcert.dsl import load_presentation, load_sequence, build_sequence  # noqa: E402

_CACHE = {}


def corpus(name):
    return os.path.join(CORPUS, name)


def presentation(name, strict=True):
    return load_presentation(corpus(name), strict=strict, cache=_CACHE).presentation


def sequence(name):
    return build_sequence(load_sequence(corpus(name), cache=_CACHE))


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="session")
def H1():
    return presentation("h1.hopf")


@pytest.fixture(scope="session")
def H2():
    return presentation("h2.hopf")


@pytest.fixture(scope="session")
def kZ():
    return presentation("kz.hopf")


@pytest.fixture(scope="session")
def seq_h2():
    return sequence("seq_kz_h2_h1.seq")


@pytest.fixture(scope="session")
def seq_g():
    return sequence("seq_kz_g_b_q2.seq")
