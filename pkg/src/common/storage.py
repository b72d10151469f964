"""Report persistence to local files or S3."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import boto3
from botocore.config import Config
from botocore.exceptions import BotoCoreError, ClientError
from tenacity import retry, retry_if_exception_type, stop_after_attempt, wait_exponential_jitter

from src.common.config import AppConfig
from src.common.log import get_logger

LOGGER = get_logger(__name__)

LOCAL_MIRROR = Path(".tmp")


@dataclass(slots=True)
class ReportWriter:
    """Write rendered reports to a path or an ``s3://bucket/key`` target."""

    s3_client: Any
    dry_run: bool
    default_bucket: Optional[str]
    prefix: str

    @classmethod
    def from_config(cls, config: AppConfig) -> "ReportWriter":
        client = None
        if not config.dry_run:
            session = boto3.session.Session(region_name=config.aws_region)
            client = session.client("s3", config=Config(connect_timeout=10, read_timeout=10, retries={"max_attempts": 3}))
        return cls(s3_client=client, dry_run=config.dry_run, default_bucket=config.report_bucket, prefix=config.report_prefix)

    def persist(self, *, body: str, target: str, content_type: str = "application/json") -> str:
        """Persist ``body`` and return where it landed."""
        if target.startswith("s3://"):
            bucket, key = parse_s3_uri(target)
            return self._persist_s3(body=body, bucket=bucket, key=key, content_type=content_type)
        path = Path(target)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(body, encoding="utf-8")
        LOGGER.info("Report written", extra={"path": str(path), "bytes": len(body)})
        return str(path)

    def persist_default(self, *, body: str, name: str, content_type: str = "application/json") -> Optional[str]:
        """Upload to the configured bucket under the environment prefix, if any."""
        if not self.default_bucket:
            return None
        return self._persist_s3(body=body, bucket=self.default_bucket, key=f"{self.prefix}/{name}", content_type=content_type)

    def _persist_s3(self, *, body: str, bucket: str, key: str, content_type: str) -> str:
        uri = f"s3://{bucket}/{key}"
        if self.dry_run or self.s3_client is None:
            mirror = _write_local_mirror(key=key, body=body)
            LOGGER.info("Dry run: report mirrored locally", extra={"uri": uri, "path": str(mirror)})
            return str(mirror)
        _put_object(self.s3_client, bucket=bucket, key=key, body=body, content_type=content_type)
        LOGGER.info("Report uploaded", extra={"uri": uri, "bytes": len(body)})
        return uri


@retry(
    retry=retry_if_exception_type((BotoCoreError, ClientError)),
    stop=stop_after_attempt(3),
    wait=wait_exponential_jitter(initial=1, max=8),
    reraise=True,
)
def _put_object(client: Any, *, bucket: str, key: str, body: str, content_type: str) -> None:
    client.put_object(Bucket=bucket, Key=key, Body=body.encode("utf-8"), ContentType=content_type)


def _write_local_mirror(*, key: str, body: str) -> Path:
    LOCAL_MIRROR.mkdir(exist_ok=True)
    file_path = LOCAL_MIRROR / key.replace("/", "-")
    file_path.write_text(body, encoding="utf-8")
    return file_path


def parse_s3_uri(uri: str) -> tuple[str, str]:
    without_scheme = uri[len("s3://") :]
    parts = without_scheme.split("/", 1)
    if len(parts) != 2 or not parts[0] or not parts[1]:
        raise ValueError(f"Invalid S3 URI: {uri}")
    return parts[0], parts[1]


__all__ = ["ReportWriter", "parse_s3_uri"]
