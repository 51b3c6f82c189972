import pytest

from sweepdecoder.lattice import build_lattice


def pytest_addoption(parser):
    parser.addoption("--run-acceptance", action="store_true", default=False,
                     help="run the long statistical acceptance experiments")
    parser.addoption("--run-extended", action="store_true", default=False,
                     help="also run the hours-long extended experiments")


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: long statistical run, needs --run-acceptance")
    config.addinivalue_line("markers", "extended: hours of CPU, needs --run-extended")


def pytest_collection_modifyitems(config, items):
    run_acceptance = config.getoption("--run-acceptance")
    run_extended = config.getoption("--run-extended")
    skip_acceptance = pytest.mark.skip(reason="needs --run-acceptance")
    skip_extended = pytest.mark.skip(reason="needs --run-extended")
    for item in items:
        if "extended" in item.keywords and not run_extended:
            item.add_marker(skip_extended)
        elif "acceptance" in item.keywords and not run_acceptance:
            item.add_marker(skip_acceptance)


@pytest.fixture(scope="session")
def rhombic_periodic_2():
    return build_lattice("rhombic-periodic", 2)


@pytest.fixture(scope="session")
def rhombic_periodic_4():
    return build_lattice("rhombic-periodic", 4)


@pytest.fixture(scope="session")
def rhombic_periodic_6():
    return build_lattice("rhombic-periodic", 6)


@pytest.fixture(scope="session")
def rhombic_open_3():
    return build_lattice("rhombic-open", 3)


@pytest.fixture(scope="session")
def rhombic_open_5():
    return build_lattice("rhombic-open", 5)


@pytest.fixture(scope="session")
def cubic_periodic_3():
    return build_lattice("cubic-periodic", 3)


@pytest.fixture(scope="session")
def cubic_periodic_4():
    return build_lattice("cubic-periodic", 4)


@pytest.fixture(scope="session")
def cubic_open_4():
    return build_lattice("cubic-open", 4)
