import pytest

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


class _Recorder:
    def __init__(self, key: str):
        self.key = key
        self.status: tuple[bool, str] | None = None

    def __call__(self, ok: bool, detail: str) -> bool:
        self.status = (bool(ok), detail)
        return bool(ok)


@pytest.fixture
def acceptance(request):
    """Record the outcome of one acceptance criterion; a test that errors out counts as FAIL."""
    key = request.node.get_closest_marker("criterion").args[0]
    rec = _Recorder(key)
    yield rec
    _ACCEPTANCE[key] = rec.status or (False, "did not complete")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=int):
        ok, detail = _ACCEPTANCE[key]
        terminalreporter.write_line(f"AC{key:>2} {'PASS' if ok else 'FAIL'}  {detail}")
