"""FastAPI application serving one published service."""

from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..core.errors import (
    InputArityMismatch,
    InputTypeMismatch,
    InvalidPayload,
    ServiceTypeError,
    WireDecodeError,
    ZooError,
)
from ..core.service import Service
from ..runtime.registry import PrimitiveRegistry
from ..utils.config import get_config
from ..utils.logger import get_logger
from .routes import router


logger = get_logger(__name__)

STATUS_BY_ERROR = (
    (InputTypeMismatch, 400),
    (InputArityMismatch, 400),
    (ServiceTypeError, 400),
    (WireDecodeError, 422),
    (InvalidPayload, 422),
)


def status_for(error: ZooError) -> int:
    """HTTP status of a domain error; anything unlisted is a server fault."""
    for error_type, status in STATUS_BY_ERROR:
        if isinstance(error, error_type):
            return status
    return 500


def create_app(service: Service, registry: PrimitiveRegistry) -> FastAPI:
    """Build the app serving ``service`` with primitives from ``registry``.

    Args:
        service: Service answering ``/invoke``
        registry: Primitives for the service's graph nodes

    Returns:
        FastAPI application
    """
    config = get_config()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        logger.info("serving service", service=service.name, type=service.type_string)
        yield
        logger.info("service stopped", service=service.name)

    app = FastAPI(
        title=f"{config.app_name}: {service.name}",
        version=config.app_version,
        description=f"Published zoo service {service.name} ({service.type_string})",
        lifespan=lifespan,
    )
    app.state.service = service
    app.state.registry = registry

    async def handle_zoo_error(request: Request, exc: ZooError) -> JSONResponse:
        status = status_for(exc)
        if status >= 500:
            logger.error("invocation failed", service=service.name, error=str(exc))
        return JSONResponse(status_code=status, content=exc.to_dict())

    app.add_exception_handler(ZooError, handle_zoo_error)
    app.include_router(router)
    return app
