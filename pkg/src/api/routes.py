"""Routes of a served service."""

from fastapi import APIRouter, Request
from fastapi.concurrency import run_in_threadpool

from ..core.values import decode_value, encode_value
from ..runtime.executor import check_inputs, execute
from ..utils.config import get_config
from ..utils.logger import get_logger
from .models import ErrorResponse, HealthResponse, InvokeRequest, InvokeResponse


logger = get_logger(__name__)
router = APIRouter(tags=["service"])

ERROR_RESPONSES = {
    400: {"model": ErrorResponse, "description": "Input type mismatch"},
    422: {"model": ErrorResponse, "description": "Malformed typed-value encoding"},
    500: {"model": ErrorResponse, "description": "Primitive failure"},
}


@router.get("/signature", response_model=str)
async def get_signature(request: Request) -> str:
    """Type string of the served service, as a JSON string."""
    return request.app.state.service.type_string


@router.post("/invoke", response_model=InvokeResponse, responses=ERROR_RESPONSES)
async def invoke(body: InvokeRequest, request: Request) -> InvokeResponse:
    """Run the service on typed inputs.

    Args:
        body: Encoded inputs, in signature order
        request: Incoming request carrying the app state

    Returns:
        Encoded output value
    """
    service = request.app.state.service
    registry = request.app.state.registry

    inputs = [decode_value(item) for item in body.inputs]
    check_inputs(service, inputs)
    output = await run_in_threadpool(execute, service, inputs, registry)

    logger.debug("service invoked", service=service.name, output_type=output.dtype.token)
    return InvokeResponse(output=encode_value(output))


@router.get("/health", response_model=HealthResponse)
async def health_check(request: Request) -> HealthResponse:
    """Health check endpoint.

    Returns:
        Service health status
    """
    service = request.app.state.service
    return HealthResponse(
        status="healthy",
        service=service.name,
        type=service.type_string,
        version=get_config().app_version,
    )
