def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        passed, title, detail = RESULTS[k]
        terminalreporter.write_line(f"criterion {k:2d} {'PASS' if passed else 'FAIL'}: {title} ({detail})")
