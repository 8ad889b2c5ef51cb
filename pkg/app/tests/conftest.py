import pytest

from app.schemas.experiment import RunConfig


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="Roda os testes marcados como slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="use --runslow para rodar")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def make_config():
    """Fábrica de RunConfig pequenas a partir de seções parciais"""
    def _make(**sections):
        data = {
            "system": {"n": 8, "sensors": 1, "mode": "identical"},
            "profile": {"family": "identity"},
            "experiment": {"resolution": 2, "trials": 2, "master_seed": 7},
        }
        for name, values in sections.items():
            data.setdefault(name, {}).update(values)
        return RunConfig.model_validate(data)
    return _make
