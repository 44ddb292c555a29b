import pytest

from omkit.corpus import CORPUS_NAMES, corpus


@pytest.fixture(scope="session")
def rank1():
    return corpus("rank1")


@pytest.fixture(scope="session")
def boolean3():
    return corpus("boolean3")


@pytest.fixture(scope="session")
def uniform23():
    return corpus("uniform-2-3")


@pytest.fixture(scope="session")
def braid3():
    return corpus("braid3")


@pytest.fixture(scope="session")
def five_planes():
    return corpus("sec3-arrangement")


@pytest.fixture(scope="session")
def non_pappus():
    return corpus("non-pappus")


@pytest.fixture(scope="session")
def all_corpus():
    return {name: corpus(name) for name in CORPUS_NAMES}
