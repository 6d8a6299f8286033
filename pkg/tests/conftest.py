from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from deme.api import create_app
from deme.service import DemeService


@pytest.fixture
def data_dir(tmp_path):
    return tmp_path / "data"


@pytest.fixture
def service(data_dir):
    svc = DemeService(data_dir)
    yield svc
    svc.close()


@pytest.fixture
def members(service):
    """Four seeded members keyed by a short name."""
    return {
        name: service.add_member(name.capitalize()).member_id
        for name in ("alice", "bob", "carol", "dave")
    }


@pytest.fixture
def app(service):
    return create_app(service)


@pytest.fixture
def client(app):
    with TestClient(app) as test_client:
        yield test_client
