"""Prints one PASS/FAIL line per acceptance criterion after the run.

The acceptance tests are named test_criterion_<id>_..., one per criterion
(5 is split into bundled datasets / thyroid / large-scale substitute, so
its parts stay individually visible).
"""

import re

_CRITERION = re.compile(r"test_criterion_(\d+[a-z]?)_")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::" not in nodeid:
                continue
            m = _CRITERION.search(nodeid)
            if not m:
                continue
            label = m.group(1)
            ok = status == "passed"
            outcomes[label] = outcomes.get(label, True) and ok
    if not outcomes:
        return

    def order(label):
        return (int(re.match(r"\d+", label).group()), label)

    terminalreporter.write_sep("-", "acceptance criteria")
    for label in sorted(outcomes, key=order):
        verdict = "PASS" if outcomes[label] else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {label}: {verdict}")
