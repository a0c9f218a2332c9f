import time

import pytest

import rotorweyl as rw

OPEN_A = (0.0, 0.2)
OPEN_B = (0.2, 0.4)
KICK = 2.0


@pytest.fixture(scope="session")
def timings():
    # wall-clock seconds of the expensive shared computations, keyed by name
    return {}


@pytest.fixture(scope="session")
def spec160():
    return rw.OpenMapSpec(dim=160, kick=KICK, opening=OPEN_A)


@pytest.fixture(scope="session")
def map160(spec160):
    return rw.open_map(spec160)


@pytest.fixture(scope="session")
def res160(map160):
    return rw.eigenvalues(map160)


@pytest.fixture(scope="session")
def schur160_fast(map160):
    return rw.ordered_schur(map160, rw.ORDER_FAST)


@pytest.fixture(scope="session")
def spec1280():
    return rw.OpenMapSpec(dim=1280, kick=KICK, opening=OPEN_A)


@pytest.fixture(scope="session")
def map1280(spec1280):
    return rw.open_map(spec1280)


@pytest.fixture(scope="session")
def res1280(map1280, timings):
    t0 = time.perf_counter()
    res = rw.eigenvalues(map1280)
    timings["eig_1280"] = time.perf_counter() - t0
    return res


@pytest.fixture(scope="session")
def schur1280_fast(map1280, timings):
    t0 = time.perf_counter()
    form = rw.ordered_schur(map1280, rw.ORDER_FAST)
    timings["schur_fast_1280"] = time.perf_counter() - t0
    return form


@pytest.fixture(scope="session")
def schur1280_slow(map1280, timings):
    t0 = time.perf_counter()
    form = rw.ordered_schur(map1280, rw.ORDER_SLOW)
    timings["schur_slow_1280"] = time.perf_counter() - t0
    return form


@pytest.fixture(scope="session")
def sweep_reports(timings):
    t0 = time.perf_counter()
    reports = {
        "A": rw.weyl_sweep((160, 320, 640, 1280), KICK, OPEN_A),
        "B": rw.weyl_sweep((160, 320, 640, 1280), KICK, OPEN_B),
    }
    timings["weyl_sweeps"] = time.perf_counter() - t0
    return reports
