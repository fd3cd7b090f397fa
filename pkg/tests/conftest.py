"""Shared pytest wiring for the test suite."""

_capture_manager = None


def pytest_configure(config):
    global _capture_manager
    _capture_manager = config.pluginmanager.getplugin("capturemanager")


def emit(line):
    """Print a line that shows up even while pytest captures output.

    The acceptance battery uses this for its one-line-per-check scoreboard,
    which should be visible for passing checks too, not just on failure.
    """
    if _capture_manager is not None:
        with _capture_manager.global_and_fixture_disabled():
            print(line, flush=True)
    else:
        print(line, flush=True)
