def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the per-criterion pass/fail lines collected by the acceptance tests."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
