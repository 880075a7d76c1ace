import pytest

from encircle import example1, example2, run


@pytest.fixture(scope="session")
def warm():
    """Compile the jitted core once so timed runs measure integration only."""
    cfg = example1()
    cfg.t_end = 0.01
    run(cfg)


@pytest.fixture(scope="session")
def example1_trace(warm):
    return run(example1())


@pytest.fixture(scope="session")
def example2_trace(warm):
    return run(example2())
