import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))


@pytest.fixture(scope="session")
def ellipse_family():
    from offsetph.offsets import offset_family
    from offsetph.presets import get_preset

    return offset_family(get_preset("ellipse").variety())


@pytest.fixture(scope="session")
def circle_family():
    from offsetph.offsets import offset_family
    from offsetph.presets import get_preset

    return offset_family(get_preset("circle").variety())


from hypothesis import settings  # noqa: E402

settings.register_profile("offsetph", derandomize=True, deadline=None, print_blob=True)
settings.load_profile("offsetph")


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
