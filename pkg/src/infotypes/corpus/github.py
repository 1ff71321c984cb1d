"""Fetch issue threads from the GitHub REST v3 API."""

from __future__ import annotations

import logging
import os
from datetime import datetime, timezone

import httpx

from ..errors import InfoTypeError
from .types import Association, IssueComment, IssueThread, parse_timestamp
from ..preprocess.masking import has_code

logger = logging.getLogger(__name__)

API_URL = "https://api.github.com"
PER_PAGE = 100


class GitHubError(InfoTypeError):
    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


class NotFoundError(GitHubError):
    pass


class RateLimitError(GitHubError):
    def __init__(self, message: str, reset_at: datetime | None):
        super().__init__(message, status=403)
        self.reset_at = reset_at


def _check(response: httpx.Response) -> None:
    if response.status_code < 400:
        return
    url = str(response.request.url)
    if response.status_code == 404:
        raise NotFoundError(f"not found: {url}", status=404)
    if response.status_code in (403, 429) and response.headers.get("X-RateLimit-Remaining") == "0":
        reset = response.headers.get("X-RateLimit-Reset")
        reset_at = datetime.fromtimestamp(int(reset), tz=timezone.utc) if reset else None
        raise RateLimitError(f"GitHub rate limit exceeded; resets at {reset_at}", reset_at)
    raise GitHubError(f"HTTP {response.status_code} for {url}", status=response.status_code)


def _client(auth_token: str | None, transport=None) -> httpx.Client:
    headers = {"Accept": "application/vnd.github.v3+json"}
    if auth_token:
        headers["Authorization"] = f"Bearer {auth_token}"
    return httpx.Client(base_url=API_URL, headers=headers, timeout=30.0, transport=transport)


def _get_paginated(client: httpx.Client, path: str) -> list:
    items: list = []
    url: str | None = path
    params: dict | None = {"per_page": PER_PAGE}
    while url:
        response = client.get(url, params=params)
        _check(response)
        items.extend(response.json())
        url = response.links.get("next", {}).get("url")
        params = None  # the next link already carries the query string
    return items


def _comment(record: dict) -> IssueComment:
    body = record.get("body") or ""
    return IssueComment(
        author_login=(record.get("user") or {}).get("login") or "",
        author_association=Association.from_github(record.get("author_association")),
        created_at=parse_timestamp(record["created_at"]),
        body_raw=body,
        has_code=has_code(body),
    )


def fetch_thread(
    owner: str,
    repo: str,
    issue_number: int,
    auth_token: str | None = None,
    transport: httpx.BaseTransport | None = None,
) -> IssueThread:
    """Download an issue and all of its comments as an unsegmented thread.

    ``auth_token`` defaults to the ``GITHUB_TOKEN`` environment variable.
    ``transport`` lets callers (and tests) substitute the HTTP layer.
    """
    token = auth_token if auth_token is not None else os.environ.get("GITHUB_TOKEN")
    with _client(token, transport) as client:
        response = client.get(f"/repos/{owner}/{repo}/issues/{issue_number}")
        _check(response)
        issue = response.json()
        records = _get_paginated(client, f"/repos/{owner}/{repo}/issues/{issue_number}/comments")
    logger.info("fetched %s/%s#%d with %d comments", owner, repo, issue_number, len(records))
    comments = [_comment(issue)] + [_comment(r) for r in records]
    comments.sort(key=lambda c: c.created_at)
    return IssueThread(
        project=f"{owner}/{repo}",
        issue_number=int(issue.get("number", issue_number)),
        title=issue.get("title") or "",
        comments=tuple(comments),
        opened_at=comments[0].created_at,
    )
