import pytest

from tokensweep.corpus import load_corpus
from tokensweep.lexicon import LexiconSet, data_dir, load_lemmas, load_lexicons


@pytest.fixture(scope="session")
def lex() -> LexiconSet:
    return load_lexicons()


@pytest.fixture(scope="session")
def lemmas():
    return load_lemmas()


@pytest.fixture(scope="session")
def mini_corpus_path():
    return data_dir() / "mini_corpus.tsv"


@pytest.fixture(scope="session")
def mini_corpus(mini_corpus_path):
    return load_corpus(mini_corpus_path)


_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "PASS" if report.passed else "FAIL"
        _criteria[n] = (status, title)
        print(f"\n[criterion {n:2d}] {status}  {title}")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        status, title = _criteria[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {title}")
