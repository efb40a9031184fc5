import pytest

from jumpgreedy.instance_io import fixture_path, load_instance


@pytest.fixture(scope="session")
def j1():
    inst = load_instance(fixture_path("j1.json"))
    return inst.system, inst.objective


@pytest.fixture(scope="session")
def j2():
    inst = load_instance(fixture_path("j2.json"))
    return inst.system, inst.objective


@pytest.fixture(scope="session")
def k3():
    return load_instance(fixture_path("k3.json"))


@pytest.fixture(scope="session")
def dm2():
    return load_instance(fixture_path("dm2.json"))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
