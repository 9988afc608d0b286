import pytest

from gaussn import make_model


@pytest.fixture(scope="session")
def chi2():
    return make_model("chi2log")


@pytest.fixture(scope="session")
def gauss():
    return make_model("gauss")


@pytest.fixture(scope="session")
def trig():
    return make_model("trig")


@pytest.fixture(scope="session")
def binom():
    return make_model("binom")


@pytest.fixture(scope="session")
def all_models(chi2, gauss, trig, binom):
    return (chi2, gauss, trig, binom)
