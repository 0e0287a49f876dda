"""Fetch top-level comments from the YouTube Data API v3 (``commentThreads.list``)."""
from __future__ import annotations

import json
import logging
import os
import time
import urllib.error
import urllib.parse
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from .corpus import Comment

logger = logging.getLogger(__name__)

API_URL = "https://www.googleapis.com/youtube/v3/commentThreads"
API_KEY_ENV = "YT_API_KEY"

BACKOFF_BASE = 1.0
BACKOFF_FACTOR = 2.0
MAX_RETRIES = 5

_RATE_REASONS = {"quotaExceeded", "rateLimitExceeded", "userRateLimitExceeded", "dailyLimitExceeded"}
_VIDEO_REASONS = {"videoNotFound", "commentsDisabled", "forbidden", "processingFailure", "invalidVideoId"}
_CREDENTIAL_REASONS = {"keyInvalid", "keyExpired", "accessNotConfigured", "ipRefererBlocked", "authError"}


class IngestError(Exception):
    pass


class CredentialError(IngestError):
    pass


class RateLimitError(IngestError):
    """Quota or rate limit still exceeded after all retries."""


class VideoError(IngestError):
    def __init__(self, video_id: str, message: str):
        self.video_id = video_id
        super().__init__(f"{video_id}: {message}")


class ApiHttpError(IngestError):
    """Non-2xx response from the API, as raised by a transport."""

    def __init__(self, status: int, reason: str = "", message: str = ""):
        self.status = status
        self.reason = reason
        self.message = message
        super().__init__(f"HTTP {status} {reason}: {message}".strip())


Transport = Callable[[dict], dict]


@dataclass(frozen=True)
class FetchConfig:
    api_key: str
    video_ids: tuple
    max_comments_per_video: int = 100
    page_size: int = 100

    def __post_init__(self):
        object.__setattr__(self, "video_ids", tuple(self.video_ids))
        if not 1 <= self.page_size <= 100:
            raise ValueError(f"page_size must be in [1, 100], got {self.page_size}")
        if self.max_comments_per_video < 1:
            raise ValueError("max_comments_per_video must be positive")


@dataclass
class FetchReport:
    comments: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)
    requests: int = 0


def http_transport(params: dict, timeout: float = 30.0) -> dict:
    """Default transport: one GET against the live API."""
    url = API_URL + "?" + urllib.parse.urlencode(params)
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            return json.loads(resp.read().decode("utf-8"))
    except urllib.error.HTTPError as exc:
        reason, message = "", exc.reason
        try:
            err = json.loads(exc.read().decode("utf-8")).get("error", {})
            message = err.get("message", message)
            errors = err.get("errors") or [{}]
            reason = errors[0].get("reason", "")
        except (ValueError, AttributeError):
            pass
        raise ApiHttpError(exc.code, reason, str(message)) from None


def _classify(exc: ApiHttpError, video_id: str) -> Exception:
    status, reason = exc.status, exc.reason
    if status == 429 or status >= 500 or reason in _RATE_REASONS:
        return RateLimitError(exc.message or str(exc))
    if reason in _VIDEO_REASONS or status == 404:
        return VideoError(video_id, exc.message or reason or f"HTTP {status}")
    if status in (401, 403) or reason in _CREDENTIAL_REASONS:
        return CredentialError(exc.message or f"HTTP {status}")
    return VideoError(video_id, exc.message or f"HTTP {status}")


def _request_with_backoff(transport: Transport, params: dict, video_id: str, sleep) -> dict:
    delay = BACKOFF_BASE
    for attempt in range(MAX_RETRIES + 1):
        try:
            return transport(params)
        except ApiHttpError as exc:
            err = _classify(exc, video_id)
            if not isinstance(err, RateLimitError) or attempt == MAX_RETRIES:
                raise err from None
            logger.warning("rate limited on %s (%s); retrying in %.0fs", video_id, exc.message, delay)
            sleep(delay)
            delay *= BACKOFF_FACTOR
    raise AssertionError("unreachable")


def _thread_to_comment(item: dict, video_id: str) -> Optional[Comment]:
    top = item.get("snippet", {}).get("topLevelComment", {})
    snippet = top.get("snippet", {})
    text = snippet.get("textOriginal")
    if text is None:
        text = snippet.get("textDisplay", "")
    if not text.strip():
        return None
    return Comment(id=str(top.get("id") or item.get("id")), text=text, video_id=snippet.get("videoId", video_id))


def fetch_video(video_id: str, config: FetchConfig, transport: Transport = http_transport,
                sleep=time.sleep) -> tuple:
    """Fetch one video's comments page by page. Returns ``(comments, n_requests)``."""
    comments: list = []
    seen_tokens: set = set()
    token = None
    n_requests = 0
    while len(comments) < config.max_comments_per_video:
        remaining = config.max_comments_per_video - len(comments)
        params = {
            "part": "snippet",
            "videoId": video_id,
            "maxResults": min(config.page_size, remaining),
            "textFormat": "plainText",
            "key": config.api_key,
        }
        if token:
            params["pageToken"] = token
        payload = _request_with_backoff(transport, params, video_id, sleep)
        n_requests += 1
        for item in payload.get("items", []):
            c = _thread_to_comment(item, video_id)
            if c is not None:
                comments.append(c)
        token = payload.get("nextPageToken")
        if not token:
            break
        if token in seen_tokens:
            logger.warning("page token repeated for %s; stopping", video_id)
            break
        seen_tokens.add(token)
    return comments[: config.max_comments_per_video], n_requests


def fetch_comments_report(config: FetchConfig, transport: Optional[Transport] = None,
                          sleep=time.sleep, max_workers: int = 1) -> FetchReport:
    if not config.api_key:
        raise CredentialError(f"missing API key (set {API_KEY_ENV})")
    transport = transport or http_transport

    def one(vid):
        try:
            return vid, fetch_video(vid, config, transport, sleep), None
        except VideoError as exc:
            return vid, ([], 0), exc

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(one, config.video_ids))
    else:
        results = [one(v) for v in config.video_ids]

    report = FetchReport()
    for vid, (comments, n_req), err in results:
        report.requests += n_req
        if err is not None:
            logger.warning("skipping video %s", err)
            report.failures[vid] = str(err)
            continue
        report.counts[vid] = len(comments)
        report.comments.extend(comments)
    return report


def fetch_comments(config: FetchConfig, transport: Optional[Transport] = None,
                   sleep=time.sleep, max_workers: int = 1) -> list:
    return fetch_comments_report(config, transport, sleep, max_workers).comments


def save_raw(comments, path) -> None:
    """Write unlabeled comments as JSONL (``id``, ``video_id``, ``text``)."""
    with open(Path(path), "w", encoding="utf-8") as fh:
        for c in comments:
            fh.write(json.dumps({"id": c.id, "video_id": c.video_id, "text": c.text}, ensure_ascii=False) + "\n")


def api_key_from_env() -> Optional[str]:
    return os.environ.get(API_KEY_ENV) or None
