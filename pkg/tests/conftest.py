"""
Shared fixtures: small instances with known answers and oracle limits sized
for the test suite.
"""
from pathlib import Path

import pytest

from sqpack.models.packing import Instance
from sqpack.models.schemas import SearchLimits
from sqpack.services.exact_service import clear_fit_cache
from sqpack.services.instance_service import gen_adversarial, serialize_instance


@pytest.fixture(autouse=True)
def fresh_fit_cache():
    clear_fit_cache()
    yield


@pytest.fixture
def adversarial3() -> Instance:
    """Nine items of 1/3 then three items of 2/3."""
    return gen_adversarial(3)


@pytest.fixture
def ffds_example() -> Instance:
    return Instance.from_sizes(["3/5", "11/20", "2/5", "2/5", "2/5", "9/20", "9/20", "9/20", "9/20"])


@pytest.fixture
def oracle_limits() -> SearchLimits:
    return SearchLimits(max_items=9, node_budget=5_000_000, time_budget=120)


@pytest.fixture
def write_instance(tmp_path: Path):
    """Write an instance file under tmp_path and return its path as text."""
    def _write(inst: Instance, name: str = "instance.smsbpp") -> str:
        path = tmp_path / name
        path.write_text(serialize_instance(inst))
        return str(path)
    return _write

