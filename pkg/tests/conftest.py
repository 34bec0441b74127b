"""Shared test plumbing: the acceptance-criteria result table and its
end-of-run report, one line per criterion."""

ACCEPTANCE: dict[str, bool] = {}


def run_criterion(name: str, body) -> None:
    ok = False
    try:
        body()
        ok = True
    finally:
        ACCEPTANCE[name] = ok


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.lstrip("AC"))):
        terminalreporter.write_line(
            f"  {name}: {'PASS' if ACCEPTANCE[name] else 'FAIL'}"
        )
