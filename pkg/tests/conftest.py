from __future__ import annotations

import support


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = support.ACCEPTANCE_RESULTS
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, title, detail = results[number]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{status} criterion {number}: {title} ({detail})")
