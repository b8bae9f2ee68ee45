import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
    missing = [k for k in range(1, 12) if k not in results]
    if missing:
        terminalreporter.write_line("not run or errored before a verdict: " + ", ".join(map(str, missing)))
