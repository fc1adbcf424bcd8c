import support


def pytest_terminal_summary(terminalreporter):
    if not support.ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(support.ACCEPTANCE):
        ok, detail = support.ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} {detail}")
