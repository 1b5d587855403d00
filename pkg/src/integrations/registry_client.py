"""HTTP client for a remote discovery registry."""

from typing import List, Optional

import httpx
from tenacity import (
    RetryError,
    retry,
    retry_if_exception_type,
    stop_after_attempt,
    wait_exponential,
)

from ..core.errors import InvalidTypeString, RecordNotFound, RegistryUnavailable
from ..discovery.models import DiscoveryRecord
from ..utils.logger import get_logger


logger = get_logger(__name__)


class RegistryClient:
    """Client for the discovery registry HTTP API."""

    def __init__(
        self,
        base_url: str,
        timeout: float = 10.0,
        retry_attempts: int = 3,
        transport: Optional[httpx.BaseTransport] = None,
    ):
        """Initialize the registry client.

        Args:
            base_url: Registry root, e.g. ``http://127.0.0.1:8500``
            timeout: Request timeout in seconds
            retry_attempts: Attempts per request on transport failures
            transport: Custom httpx transport
        """
        self.base_url = base_url.rstrip("/")
        self.retry_attempts = max(1, retry_attempts)
        self.client = httpx.Client(base_url=self.base_url, timeout=timeout, transport=transport)
        self.logger = logger

    @classmethod
    def from_config(cls, config, transport: Optional[httpx.BaseTransport] = None) -> "RegistryClient":
        return cls(
            config.registry_url,
            timeout=config.remote_timeout,
            retry_attempts=config.remote_retry_attempts,
            transport=transport,
        )

    def _request(self, method: str, path: str, **kwargs) -> httpx.Response:
        @retry(
            stop=stop_after_attempt(self.retry_attempts),
            wait=wait_exponential(multiplier=0.05, max=1.0),
            retry=retry_if_exception_type(httpx.TransportError),
        )
        def send() -> httpx.Response:
            return self.client.request(method, path, **kwargs)

        try:
            response = send()
        except RetryError as e:
            cause = e.last_attempt.exception()
            self.logger.error("discovery registry unreachable", url=self.base_url, error=str(cause))
            raise RegistryUnavailable(f"registry {self.base_url} unreachable: {cause}") from cause

        if response.status_code >= 500:
            raise RegistryUnavailable(f"registry {self.base_url} answered {response.status_code}")
        return response

    def register(self, record: DiscoveryRecord) -> str:
        """Register a record remotely and return its id.

        Raises:
            InvalidTypeString: If the registry rejects the type string
            RegistryUnavailable: If the registry cannot be reached
        """
        payload = record.model_dump(mode="json", exclude={"id"})
        response = self._request("POST", "/records", json=payload)
        if response.status_code in (400, 422):
            raise InvalidTypeString(record.type_string, response.json().get("message", response.text))
        response.raise_for_status()
        return response.json()["id"]

    def search(
        self,
        input_type: Optional[str] = None,
        output_type: Optional[str] = None,
        text: Optional[str] = None,
    ) -> List[DiscoveryRecord]:
        params = {
            key: value
            for key, value in (("input", input_type), ("output", output_type), ("q", text))
            if value is not None
        }
        response = self._request("GET", "/records", params={k: str(v) for k, v in params.items()})
        response.raise_for_status()
        return [DiscoveryRecord.model_validate(item) for item in response.json()]

    def get(self, record_id: str) -> DiscoveryRecord:
        response = self._request("GET", f"/records/{record_id}")
        if response.status_code == 404:
            raise RecordNotFound(record_id)
        response.raise_for_status()
        return DiscoveryRecord.model_validate(response.json())

    def close(self) -> None:
        self.client.close()
