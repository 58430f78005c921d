import pytest


@pytest.fixture(scope="session")
def acceptance_report(pytestconfig):
    """Print a report line on the real terminal, bypassing capture."""
    capman = pytestconfig.pluginmanager.getplugin("capturemanager")

    def report(line):
        if capman is not None:
            with capman.global_and_fixture_disabled():
                print(line, flush=True)
        else:
            print(line, flush=True)

    return report
