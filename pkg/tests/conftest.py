import pytest
from hypothesis import settings
from hypothesis import strategies as st

from freesep.words import Word, _free_reduce, parse

settings.register_profile("default", deadline=None)
settings.load_profile("default")


def reduced_words(rank=2, max_len=12, min_len=0):
    letters = st.sampled_from([i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)])
    return st.lists(letters, min_size=min_len, max_size=max_len).map(
        lambda raw: Word(rank, tuple(_free_reduce(raw)))
    )


def nontrivial_words(rank=2, max_len=12):
    return reduced_words(rank, max_len, 1).filter(lambda w: not w.is_identity())


@pytest.fixture
def w2():
    return lambda s: parse(s, 2)


@pytest.fixture
def w3():
    return lambda s: parse(s, 3)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for result in test_acceptance.RESULTS.values():
        terminalreporter.write_line(result.line())
