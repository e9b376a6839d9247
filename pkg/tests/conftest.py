import pytest

from plconvex.corpus import build_corpus, extend_with_contraction


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


@pytest.fixture(scope="session")
def contracted_corpus(corpus):
    return extend_with_contraction(corpus)
