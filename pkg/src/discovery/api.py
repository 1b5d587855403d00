"""HTTP API of the discovery registry."""

from contextlib import asynccontextmanager
from datetime import datetime
from typing import List, Optional

from fastapi import APIRouter, FastAPI, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from ..core.errors import InvalidTypeString, RecordNotFound, StorageError, UnknownType, ZooError
from ..utils.config import get_config
from ..utils.logger import get_logger
from .models import DiscoveryRecord
from .registry import DiscoveryRegistry


logger = get_logger(__name__)
router = APIRouter(prefix="/records", tags=["discovery"])


class RecordIn(BaseModel):
    """Request body of ``POST /records``."""
    gist_id: str = Field(..., description="Package the service is based on")
    description: str = Field(default="", description="One-line description")
    type_string: str = Field(..., description='Arrow signature, e.g. "png_img -> fr_text"')
    uri: str = Field(..., description="Where the published service lives")
    published_at: Optional[datetime] = None


class RecordId(BaseModel):
    id: str


def get_registry(request: Request) -> DiscoveryRegistry:
    return request.app.state.registry


@router.post("", response_model=RecordId)
async def register_record(body: RecordIn, request: Request) -> RecordId:
    """Register a published service; re-registering returns the same id."""
    values = body.model_dump(exclude_none=True)
    try:
        record = DiscoveryRecord(**values)
    except ValueError as e:
        return JSONResponse(status_code=422, content={"error": "invalid_record", "message": str(e)})
    return RecordId(id=get_registry(request).register(record))


@router.get("", response_model=List[DiscoveryRecord])
async def search_records(
    request: Request,
    output: Optional[str] = Query(default=None, description="Required output type"),
    input_type: Optional[str] = Query(default=None, alias="input", description="Type that must be among the inputs"),
    q: Optional[str] = Query(default=None, description="Substring of the description"),
) -> List[DiscoveryRecord]:
    """Search records, newest first."""
    return get_registry(request).search(input_type=input_type, output_type=output, text=q)


@router.get("/{record_id}", response_model=DiscoveryRecord)
async def get_record(record_id: str, request: Request) -> DiscoveryRecord:
    return get_registry(request).get(record_id)


def create_registry_app(registry: DiscoveryRegistry) -> FastAPI:
    """Build the discovery registry app.

    Args:
        registry: Registry answering the requests

    Returns:
        FastAPI application
    """
    config = get_config()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        logger.info("discovery registry serving", records=len(registry))
        yield
        logger.info("discovery registry stopped")

    app = FastAPI(
        title=f"{config.app_name} discovery registry",
        version=config.app_version,
        description="Public record of published zoo services",
        lifespan=lifespan,
    )
    app.state.registry = registry

    async def handle_zoo_error(request: Request, exc: ZooError) -> JSONResponse:
        if isinstance(exc, RecordNotFound):
            status = 404
        elif isinstance(exc, (InvalidTypeString, UnknownType)):
            status = 400
        elif isinstance(exc, StorageError):
            status = 503
        else:
            status = 500
        return JSONResponse(status_code=status, content=exc.to_dict())

    app.add_exception_handler(ZooError, handle_zoo_error)
    app.include_router(router)

    @app.get("/health")
    async def health_check():
        return {"status": "healthy", "records": len(registry), "version": config.app_version}

    return app
