"""Redis-backed storage for discovery records."""

from typing import List, Optional

import redis

from ..core.errors import StorageError
from ..discovery.models import DiscoveryRecord
from ..utils.logger import get_logger


logger = get_logger(__name__)

RECORDS_KEY = "zooc:discovery:records"


class RedisRecordStorage:
    """Discovery records kept in one Redis hash, keyed by record id."""

    def __init__(
        self,
        host: str = "localhost",
        port: int = 6379,
        db: int = 0,
        password: Optional[str] = None,
        client: Optional[redis.Redis] = None,
    ):
        """Initialize Redis storage.

        Args:
            host: Redis host
            port: Redis port
            db: Redis database number
            password: Redis password (if required)
            client: Pre-built client, used instead of connecting
        """
        self.client = client or redis.Redis(
            host=host,
            port=port,
            db=db,
            password=password,
            decode_responses=True,
        )
        self.logger = logger
        self.logger.info("redis record storage", host=host, port=port, db=db)

    def load_all(self) -> List[DiscoveryRecord]:
        try:
            entries = self.client.hgetall(RECORDS_KEY)
        except redis.RedisError as e:
            raise StorageError(f"cannot read records from redis: {e}") from e
        return [DiscoveryRecord.model_validate_json(value) for _, value in sorted(entries.items())]

    def append(self, record: DiscoveryRecord) -> None:
        try:
            self.client.hset(RECORDS_KEY, record.id, record.model_dump_json())
        except redis.RedisError as e:
            raise StorageError(f"cannot store record {record.id} in redis: {e}") from e
