"""Shared fixtures: generated corpora and a live HTTP server."""

import os
import socket
import threading
import time

import pytest
import uvicorn

from kgfed.etl import DedupRegistry, gen_corpus, load_mapping, load_native
from kgfed.service import create_app
from kgfed.store import GraphStore


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    outdir = tmp_path_factory.mktemp("corpus-small")
    manifest = gen_corpus(42, "small", str(outdir))
    return str(outdir), manifest


def load_corpora(outdir, manifest, tenant, names=None):
    for name, corpus in manifest.corpora.items():
        if names is not None and name not in names:
            continue
        mapping = load_mapping(os.path.join(outdir, corpus["mapping"]))
        load_native(tenant, mapping, DedupRegistry())
    return tenant


@pytest.fixture(scope="session")
def small_federated(small_corpus):
    """All three small corpora natively loaded into one tenant."""
    outdir, manifest = small_corpus
    tenant = GraphStore().create_tenant("federated")
    return load_corpora(outdir, manifest, tenant), manifest


@pytest.fixture(scope="session")
def small_drug_tenant(small_corpus):
    outdir, manifest = small_corpus
    tenant = GraphStore().create_tenant("drugs")
    return load_corpora(outdir, manifest, tenant, names={"drugs"}), manifest


class LiveServer:
    def __init__(self):
        self.store = GraphStore()
        self.app = create_app(self.store)
        sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        # uvicorn only sets NODELAY on sockets it binds itself; without it,
        # loopback requests stall ~40ms on delayed ACKs
        sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
        sock.bind(("127.0.0.1", 0))
        self.port = sock.getsockname()[1]
        config = uvicorn.Config(
            self.app, log_level="warning", workers=1, lifespan="off"
        )
        self.server = uvicorn.Server(config)
        self.thread = threading.Thread(
            target=self.server.run, kwargs={"sockets": [sock]}, daemon=True
        )

    @property
    def url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def start(self):
        self.thread.start()
        deadline = time.time() + 10
        while not self.server.started:
            if time.time() > deadline:
                raise RuntimeError("server did not start")
            time.sleep(0.01)
        return self

    def stop(self):
        self.server.should_exit = True
        self.thread.join(timeout=10)


@pytest.fixture
def live_server():
    server = LiveServer().start()
    yield server
    server.stop()


@pytest.fixture(scope="session")
def shared_server():
    """Session-scoped server for tests that only add tenants."""
    server = LiveServer().start()
    yield server
    server.stop()
