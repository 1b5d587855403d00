"""HTTP package remote.

Protocol:
    GET /pkg/<gid>/latest  -> {"vid": "<vid>"}
    GET /pkg/<gid>/<vid>   -> zip archive of the version's files
"""

import io
import zipfile
from typing import Dict, Optional

import httpx
from tenacity import (
    RetryError,
    retry,
    retry_if_exception_type,
    stop_after_attempt,
    wait_exponential,
)

from ..core.errors import InvalidRemoteContent, PackageNotFound, RemoteUnavailable
from ..core.refs import VID_PATTERN
from ..utils.logger import get_logger


logger = get_logger(__name__)


def pack_files(files: Dict[str, bytes]) -> bytes:
    """Zip a package's files, entries sorted by name with fixed timestamps."""
    buffer = io.BytesIO()
    with zipfile.ZipFile(buffer, "w", compression=zipfile.ZIP_DEFLATED) as archive:
        for name in sorted(files):
            info = zipfile.ZipInfo(name, date_time=(1980, 1, 1, 0, 0, 0))
            info.compress_type = zipfile.ZIP_DEFLATED
            archive.writestr(info, files[name])
    return buffer.getvalue()


def unpack_files(blob: bytes) -> Dict[str, bytes]:
    with zipfile.ZipFile(io.BytesIO(blob)) as archive:
        return {name: archive.read(name) for name in archive.namelist() if not name.endswith("/")}


class HttpRemote:
    """Package remote reached over HTTP."""

    def __init__(
        self,
        base_url: str,
        timeout: float = 10.0,
        retry_attempts: int = 3,
        transport: Optional[httpx.BaseTransport] = None,
    ):
        """Initialize the HTTP remote.

        Args:
            base_url: Server root, e.g. ``http://pkg.example:8000``
            timeout: Request timeout in seconds
            retry_attempts: Attempts per request on transport failures
            transport: Custom httpx transport (tests use ``httpx.MockTransport``)
        """
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.retry_attempts = max(1, retry_attempts)
        self.client = httpx.Client(base_url=self.base_url, timeout=timeout, transport=transport)
        self.logger = logger

    def _get(self, path: str) -> httpx.Response:
        @retry(
            stop=stop_after_attempt(self.retry_attempts),
            wait=wait_exponential(multiplier=0.05, max=1.0),
            retry=retry_if_exception_type(httpx.TransportError),
        )
        def send() -> httpx.Response:
            return self.client.get(path)

        try:
            return send()
        except RetryError as e:
            cause = e.last_attempt.exception()
            self.logger.error("package remote unreachable", url=self.base_url, path=path, error=str(cause))
            raise RemoteUnavailable(f"{self.base_url}{path}: {cause}") from cause

    def latest_vid(self, gid: str) -> str:
        response = self._get(f"/pkg/{gid}/latest")
        if response.status_code == 404:
            raise PackageNotFound(gid)
        if response.status_code >= 400:
            raise RemoteUnavailable(f"{self.base_url} answered {response.status_code}")
        try:
            vid = response.json()["vid"]
        except (ValueError, KeyError, TypeError) as e:
            raise RemoteUnavailable(f"{self.base_url} sent a malformed latest answer") from e
        if not isinstance(vid, str) or not VID_PATTERN.match(vid):
            raise InvalidRemoteContent(f"latest version id {vid!r} for {gid}")
        self.logger.debug("remote latest", gid=gid, vid=vid)
        return vid

    def fetch(self, gid: str, vid: str) -> Dict[str, bytes]:
        response = self._get(f"/pkg/{gid}/{vid}")
        if response.status_code == 404:
            raise PackageNotFound(gid, vid)
        if response.status_code >= 400:
            raise RemoteUnavailable(f"{self.base_url} answered {response.status_code}")
        try:
            return unpack_files(response.content)
        except zipfile.BadZipFile as e:
            raise RemoteUnavailable(f"{self.base_url} sent a corrupt archive for {gid}/{vid}") from e

    def close(self) -> None:
        self.client.close()
