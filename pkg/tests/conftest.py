import warnings

warnings.filterwarnings("ignore", message=".*TBB threading layer.*")

ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, title, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"AC{n:<2} {status}  {title}" + (f"  [{detail}]" if detail else ""))
