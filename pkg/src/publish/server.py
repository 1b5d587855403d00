"""Running the REST server of a service or bundle."""

import socket
import threading
import time
from pathlib import Path
from typing import Optional, Union

import uvicorn
from fastapi import FastAPI

from ..core.errors import BundleError, ServeError
from ..core.service import Service
from ..runtime.registry import PrimitiveRegistry
from ..utils.logger import get_logger
from .bundle import load_bundle
from .models import Artifact, BackendKind


logger = get_logger(__name__)


def free_port(host: str = "127.0.0.1") -> int:
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as sock:
        sock.bind((host, 0))
        return sock.getsockname()[1]


class ServerHandle:
    """A uvicorn server for one FastAPI app, run in a background thread."""

    def __init__(self, app: FastAPI, host: str = "127.0.0.1", port: int = 0, log_level: str = "warning"):
        self.app = app
        self.host = host
        self.port = port or free_port(host)
        self.server = uvicorn.Server(
            uvicorn.Config(app, host=self.host, port=self.port, log_level=log_level, lifespan="on")
        )
        self._thread: Optional[threading.Thread] = None

    @property
    def url(self) -> str:
        return f"http://{self.host}:{self.port}"

    def start(self, timeout: float = 10.0) -> "ServerHandle":
        """Start serving and wait until the socket accepts requests.

        Raises:
            ServeError: If the server does not come up within ``timeout``
        """
        self._thread = threading.Thread(target=self.server.run, name=f"zooc-serve-{self.port}", daemon=True)
        self._thread.start()
        deadline = time.monotonic() + timeout
        while not self.server.started:
            if not self._thread.is_alive() or time.monotonic() > deadline:
                self.server.should_exit = True
                raise ServeError(self.url)
            time.sleep(0.01)
        logger.info("server started", url=self.url)
        return self

    def stop(self, timeout: float = 10.0) -> None:
        self.server.should_exit = True
        if self._thread is not None:
            self._thread.join(timeout)
            self._thread = None
        logger.info("server stopped", url=self.url)

    def wait(self) -> None:
        """Block until the server exits, stopping it on Ctrl-C."""
        try:
            while self._thread is not None and self._thread.is_alive():
                self._thread.join(0.5)
        except KeyboardInterrupt:
            self.stop()

    def __enter__(self) -> "ServerHandle":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()


def serve(
    target: Union[Artifact, Service, Path, str],
    port: int = 0,
    registry: Optional[PrimitiveRegistry] = None,
    host: str = "127.0.0.1",
    start: bool = True,
) -> ServerHandle:
    """Serve a service, an artifact or a bundle path.

    Args:
        target: In-process service (needs ``registry``), a published
            artifact or a bundle path
        port: Port to bind, 0 picks a free one
        registry: Primitives for an in-process service
        host: Interface to bind
        start: Start the server before returning

    Returns:
        Server handle

    Raises:
        BundleError: If the bundle cannot be loaded or is a descriptor only
    """
    from ..api.main import create_app

    if isinstance(target, Service):
        if registry is None:
            raise ValueError("serving an in-process service needs a primitive registry")
        service = target
    else:
        path = target.output_path if isinstance(target, Artifact) else Path(target)
        if isinstance(target, Artifact) and target.kind == BackendKind.UNIKERNEL:
            raise BundleError("unikernel artifacts are build descriptors and cannot be served")
        loaded = load_bundle(path)
        service, registry = loaded.service, loaded.registry

    handle = ServerHandle(create_app(service, registry), host=host, port=port)
    return handle.start() if start else handle
