import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from geokg import fixtures
from geokg.store import TripleStore


@pytest.fixture(scope="session")
def fixture_triples():
    return fixtures.build_fixture_triples()


@pytest.fixture(scope="session")
def fixture_store(fixture_triples):
    store = TripleStore()
    store.bulk_load(fixture_triples)
    return store
