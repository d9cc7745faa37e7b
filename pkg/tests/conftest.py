import pytest

_verdicts: dict[int, tuple[str, str, str]] = {}


class Verdict:
    """Records one acceptance line; the test body must call ``passed()`` to count as PASS."""

    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.notes: list[str] = []
        _verdicts[number] = ("FAIL", title, "did not finish")

    def note(self, text: str):
        self.notes.append(text)

    def passed(self):
        _verdicts[self.number] = ("PASS", self.title, "; ".join(self.notes))


@pytest.fixture
def criterion(request):
    mark = request.node.get_closest_marker("criterion")
    return Verdict(*mark.args)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        mark = item.get_closest_marker("criterion")
        if mark is not None and rep.failed:
            msg = str(rep.longrepr.reprcrash.message) if hasattr(rep.longrepr, "reprcrash") else "error"
            _verdicts[mark.args[0]] = ("FAIL", mark.args[1], msg.splitlines()[0][:160])


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_verdicts):
        status, title, detail = _verdicts[n]
        line = f"{status} {n:2d} {title}"
        terminalreporter.write_line(f"{line}  [{detail}]" if detail else line)
