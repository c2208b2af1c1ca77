ACCEPTANCE_RESULTS: list[tuple[str, bool, float]] = []


def record_criterion(name: str, passed: bool, seconds: float) -> None:
    ACCEPTANCE_RESULTS.append((name, passed, seconds))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, seconds in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {name} ({seconds:.2f}s)")
