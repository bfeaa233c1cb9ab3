import pytest

from twinpdc.presets import preset_geometry


@pytest.fixture(scope="session")
def ppktp():
    return preset_geometry("ppktp_counter")


@pytest.fixture(scope="session")
def kdp():
    return preset_geometry("kdp_asymmetric")


@pytest.fixture(scope="session")
def bbo():
    return preset_geometry("bbo_symmetric")
