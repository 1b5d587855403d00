"""Pydantic models for the service-serving API."""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class InvokeRequest(BaseModel):
    """Request body of ``POST /invoke``."""
    inputs: List[Any] = Field(
        ...,
        description='Typed values, e.g. {"type": "png_img", "data": "<base64>"}',
    )


class InvokeResponse(BaseModel):
    """Response body of ``POST /invoke``."""
    output: Dict[str, Any] = Field(..., description="Typed value produced by the service")


class HealthResponse(BaseModel):
    """Health check response."""
    status: str = Field(..., description="Service health status")
    service: str = Field(..., description="Name of the served service")
    type: str = Field(..., description="Type string of the served service")
    version: str = Field(..., description="zooc version")


class ErrorResponse(BaseModel):
    """Error body shared by every failing endpoint."""
    error: str
    message: str
    position: Optional[int] = None
    expected: Optional[str] = None
    found: Optional[str] = None
