import threading
from pathlib import Path

import pytest

from rcmodel import parse
from rcmodel.service import ModelStore, create_server

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_PATH = REPO_ROOT / "examples" / "hiring.rcm"
GOLDEN_DIR = Path(__file__).resolve().parent / "goldens"
CORPUS_DIR = Path(__file__).resolve().parent / "corpus"


@pytest.fixture(scope="session")
def fixture_text() -> str:
    return FIXTURE_PATH.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fixture_model(fixture_text):
    result = parse(fixture_text)
    assert result.model is not None, result.diagnostics
    return result.model


@pytest.fixture()
def served_fixture(tmp_path, fixture_text):
    """A live server over a throwaway copy of the fixture file."""
    path = tmp_path / "hiring.rcm"
    path.write_text(fixture_text, encoding="utf-8")
    model = parse(fixture_text).model
    store = ModelStore(path, model)
    server = create_server(store, 0)
    port = server.server_address[1]
    # short poll so teardown's shutdown() returns quickly
    thread = threading.Thread(target=lambda: server.serve_forever(poll_interval=0.02), daemon=True)
    thread.start()
    try:
        yield f"http://127.0.0.1:{port}", store, path
    finally:
        server.shutdown()
        server.server_close()
