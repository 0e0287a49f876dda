import json

import pytest

from ytcomments import ingest
from ytcomments.corpus import load_comments
from ytcomments.ingest import (
    ApiHttpError,
    CredentialError,
    FetchConfig,
    RateLimitError,
    fetch_comments,
    fetch_comments_report,
    save_raw,
)


def _item(cid, text, vid):
    return {"id": cid, "snippet": {"topLevelComment": {"id": cid, "snippet": {"textOriginal": text, "videoId": vid}}}}


class FakeApi:
    """Serves ``pages[video]`` in order; records every request."""

    def __init__(self, per_video, page_size=100, errors=None):
        self.per_video = per_video
        self.page_size = page_size
        self.errors = errors or {}
        self.calls = []

    def __call__(self, params):
        self.calls.append(dict(params))
        vid = params["videoId"]
        queue = self.errors.get(vid)
        if queue:
            err = queue.pop(0)
            if err is not None:
                raise err
        total = self.per_video[vid]
        start = int(params.get("pageToken", "0"))
        stop = min(start + min(params["maxResults"], self.page_size), total)
        payload = {"items": [_item(f"{vid}-{i}", f"comment {i}", vid) for i in range(start, stop)]}
        if stop < total:
            payload["nextPageToken"] = str(stop)
        return payload


def test_three_pages_in_order():
    api = FakeApi({"v1": 300})
    out = fetch_comments(FetchConfig("k", ["v1"], max_comments_per_video=1000), api, sleep=lambda s: None)
    assert [c.id for c in out] == [f"v1-{i}" for i in range(300)]
    assert len(api.calls) == 3
    tokens = [c.get("pageToken") for c in api.calls if c.get("pageToken")]
    assert len(tokens) == len(set(tokens))


def test_cap_stops_after_two_requests():
    api = FakeApi({"v1": 1000})
    out = fetch_comments(FetchConfig("k", ["v1"], max_comments_per_video=150), api, sleep=lambda s: None)
    assert len(out) == 150
    assert len(api.calls) == 2
    assert api.calls[1]["maxResults"] == 50


def test_rate_limit_backs_off_then_succeeds():
    sleeps = []
    api = FakeApi({"v1": 5}, errors={"v1": [ApiHttpError(403, "quotaExceeded"), ApiHttpError(429), None]})
    out = fetch_comments(FetchConfig("k", ["v1"]), api, sleep=sleeps.append)
    assert len(out) == 5
    assert sleeps == [1.0, 2.0]


def test_rate_limit_exhausted_raises():
    api = FakeApi({"v1": 5}, errors={"v1": [ApiHttpError(429)] * 10})
    with pytest.raises(RateLimitError):
        fetch_comments(FetchConfig("k", ["v1"]), api, sleep=lambda s: None)


def test_invalid_key_raises_credential_error():
    api = FakeApi({"v1": 5}, errors={"v1": [ApiHttpError(401, "", "bad key")]})
    with pytest.raises(CredentialError):
        fetch_comments(FetchConfig("k", ["v1"]), api, sleep=lambda s: None)


def test_missing_key_raises_before_any_request():
    api = FakeApi({"v1": 5})
    with pytest.raises(CredentialError):
        fetch_comments(FetchConfig("", ["v1"]), api)
    assert api.calls == []


def test_failed_video_is_skipped():
    api = FakeApi({"bad": 5, "good": 3}, errors={"bad": [ApiHttpError(403, "commentsDisabled")]})
    rep = fetch_comments_report(FetchConfig("k", ["bad", "good"]), api, sleep=lambda s: None)
    assert [c.video_id for c in rep.comments] == ["good"] * 3
    assert "bad" in rep.failures and rep.counts == {"good": 3}


def test_video_without_comments():
    api = FakeApi({"v1": 0})
    assert fetch_comments(FetchConfig("k", ["v1"]), api) == []
    assert len(api.calls) == 1


def test_repeated_token_stops():
    def api(params):
        return {"items": [_item("x", "hi", "v")], "nextPageToken": "same"}

    out = fetch_comments(FetchConfig("k", ["v"], max_comments_per_video=50), api)
    assert len(out) == 2


@pytest.mark.parametrize("size", [0, 101])
def test_page_size_bounds(size):
    with pytest.raises(ValueError):
        FetchConfig("k", ["v"], page_size=size)


def test_save_raw_round_trip(tmp_path):
    api = FakeApi({"v1": 4})
    out = fetch_comments(FetchConfig("k", ["v1"]), api)
    p = tmp_path / "raw.jsonl"
    save_raw(out, p)
    rows = [json.loads(line) for line in p.read_text().splitlines()]
    assert set(rows[0]) == {"id", "video_id", "text"}
    assert [c.id for c in load_comments(p)] == [c.id for c in out]


def test_api_key_from_env(monkeypatch):
    monkeypatch.setenv(ingest.API_KEY_ENV, "abc")
    assert ingest.api_key_from_env() == "abc"
    monkeypatch.delenv(ingest.API_KEY_ENV)
    assert ingest.api_key_from_env() is None
