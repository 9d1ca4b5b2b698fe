"""Shared fixtures."""
import pytest
from fastapi.testclient import TestClient

from app.schemas.sequence import SequenceFamily, SequenceId
from app.services.asymptotics_service import AsymptoticsService
from app.services.bounds_service import BoundsService
from app.services.comparator_service import ComparatorService
from app.services.sequence_service import get_sequence_service
from app.services.storage_service import LocalStorageService


@pytest.fixture
def sequences():
    return get_sequence_service()


@pytest.fixture
def comparator():
    return ComparatorService(workers=1)


@pytest.fixture
def bounds():
    return BoundsService()


@pytest.fixture
def asymptotics():
    return AsymptoticsService()


@pytest.fixture
def storage(tmp_path):
    return LocalStorageService(str(tmp_path / "cache"))


@pytest.fixture
def seq():
    """SequenceId factory: ``seq("motzkin")`` or ``seq("sfam", 2, 2)``."""

    def make(family: str, *r: int) -> SequenceId:
        return SequenceId(family=SequenceFamily(family), r=tuple(r) if r else None)

    return make


@pytest.fixture
def client():
    from main import app

    with TestClient(app) as test_client:
        yield test_client
