import suite


def pytest_terminal_summary(terminalreporter):
    if not suite.ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, (ok, detail) in sorted(suite.ACCEPTANCE.items()):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
