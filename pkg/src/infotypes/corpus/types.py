"""Corpus data model: information types and the thread/comment/sentence hierarchy."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime, timezone

from ..errors import ValidationError


class InfoType(enum.IntEnum):
    ExpectedBehaviour = 0
    Motivation = 1
    ObservedBugBehaviour = 2
    BugReproduction = 3
    InvestigationAndExploration = 4
    SolutionDiscussion = 5
    ContributionAndCommitment = 6
    TaskProgress = 7
    Testing = 8
    FuturePlan = 9
    PotentialNewIssuesAndRequests = 10
    SolutionUsage = 11
    Workarounds = 12
    IssueContentManagement = 13
    ActionOnIssue = 14
    SocialConversation = 15

    @classmethod
    def parse(cls, name: str) -> "InfoType":
        """Look up a type by identifier or by a spelled-out variant of its name."""
        key = name.strip()
        if key in cls.__members__:
            return cls[key]
        found = _ALIASES.get(_normalize(key))
        if found is None:
            raise ValidationError(f"unknown information type label {name!r}")
        return found

    @property
    def display_name(self) -> str:
        return _DISPLAY_NAMES[self]


_DISPLAY_NAMES = {
    InfoType.ExpectedBehaviour: "Expected Behaviour",
    InfoType.Motivation: "Motivation",
    InfoType.ObservedBugBehaviour: "Observed Bug Behaviour",
    InfoType.BugReproduction: "Bug Reproduction",
    InfoType.InvestigationAndExploration: "Investigation and Exploration",
    InfoType.SolutionDiscussion: "Solution Discussion",
    InfoType.ContributionAndCommitment: "Contribution and Commitment",
    InfoType.TaskProgress: "Task Progress",
    InfoType.Testing: "Testing",
    InfoType.FuturePlan: "Future Plan",
    InfoType.PotentialNewIssuesAndRequests: "Potential New Issues and Requests",
    InfoType.SolutionUsage: "Solution Usage",
    InfoType.Workarounds: "Workarounds",
    InfoType.IssueContentManagement: "Issue Content Management",
    InfoType.ActionOnIssue: "Action on Issue",
    InfoType.SocialConversation: "Social Conversation",
}


def _normalize(name: str) -> str:
    return "".join(ch for ch in name.lower() if ch.isalnum())


_ALIASES = {_normalize(t.name): t for t in InfoType}
_ALIASES.update({_normalize(v): k for k, v in _DISPLAY_NAMES.items()})
_ALIASES.update(
    {
        "workaround": InfoType.Workarounds,
        "contentmanagement": InfoType.IssueContentManagement,
        "testingrelated": InfoType.Testing,
        "observedbugbehavior": InfoType.ObservedBugBehaviour,
        "expectedbehavior": InfoType.ExpectedBehaviour,
    }
)

# Types too rare to train on; dropped by filter_for_training by default.
EXCLUDED_FROM_TRAINING = frozenset(
    {InfoType.FuturePlan, InfoType.IssueContentManagement, InfoType.Testing}
)
TRAINING_TYPES = tuple(t for t in InfoType if t not in EXCLUDED_FROM_TRAINING)


class Association(str, enum.Enum):
    OWNER = "OWNER"
    CL = "CL"
    MBR = "MBR"
    OTHER = "OTHER"

    @classmethod
    def from_github(cls, value: str | None) -> "Association":
        return _GITHUB_ASSOCIATION.get((value or "").upper(), cls.OTHER)

    @classmethod
    def parse(cls, value: str) -> "Association":
        try:
            return cls(value)
        except ValueError:
            raise ValidationError(f"unknown author association {value!r}") from None


_GITHUB_ASSOCIATION = {
    "OWNER": Association.OWNER,
    "COLLABORATOR": Association.CL,
    "MEMBER": Association.MBR,
}


def utc_seconds(ts: datetime) -> datetime:
    """Normalize a timestamp to an aware UTC datetime truncated to whole seconds."""
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).replace(microsecond=0)


def parse_timestamp(text: str) -> datetime:
    text = text.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    try:
        return utc_seconds(datetime.fromisoformat(text))
    except ValueError:
        raise ValidationError(f"invalid ISO-8601 timestamp {text!r}") from None


def format_timestamp(ts: datetime) -> str:
    return utc_seconds(ts).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class Sentence:
    id: str
    text_raw: str
    text_masked: str
    tokens: tuple[str, ...]
    labels: tuple[InfoType, ...]
    comment_index: int
    sentence_index_in_comment: int
    sentence_index_in_thread: int

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError(f"sentence {self.id}: duplicate labels {self.labels}")


@dataclass(frozen=True)
class IssueComment:
    author_login: str
    author_association: Association
    created_at: datetime
    body_raw: str
    has_code: bool
    sentences: tuple[Sentence, ...] = ()


@dataclass(frozen=True)
class IssueThread:
    project: str
    issue_number: int
    title: str
    comments: tuple[IssueComment, ...]
    opened_at: datetime
    # Set when timestamps were invented (CSV import without dates); temporal
    # features computed from such a thread carry no information.
    synthetic_timestamps: bool = False
    _sentence_count: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.validate()
        object.__setattr__(
            self, "_sentence_count", sum(len(c.sentences) for c in self.comments)
        )

    @property
    def key(self) -> str:
        return f"{self.project}#{self.issue_number}"

    @property
    def last_comment_at(self) -> datetime:
        return self.comments[-1].created_at

    @property
    def duration_seconds(self) -> float:
        return (self.last_comment_at - self.comments[0].created_at).total_seconds()

    @property
    def is_segmented(self) -> bool:
        return self._sentence_count > 0

    @property
    def n_sentences(self) -> int:
        return self._sentence_count

    def sentences(self):
        """Yield ``(comment_index, sentence)`` pairs in thread order."""
        for ci, comment in enumerate(self.comments):
            for sentence in comment.sentences:
                yield ci, sentence

    def validate(self) -> None:
        where = f"thread {self.project}#{self.issue_number}"
        if self.issue_number <= 0:
            raise ValidationError(f"{where}: issue_number must be positive")
        if not self.comments:
            raise ValidationError(f"{where}: no comments (the original post is required)")
        times = [c.created_at for c in self.comments]
        if any(b < a for a, b in zip(times, times[1:])):
            raise ValidationError(f"{where}: comments are not sorted by created_at")
        if self.last_comment_at < self.opened_at:
            raise ValidationError(f"{where}: last comment precedes opened_at")
        total = sum(len(c.sentences) for c in self.comments)
        position = 0
        for ci, comment in enumerate(self.comments):
            n = len(comment.sentences)
            for si, s in enumerate(comment.sentences, start=1):
                position += 1
                if (
                    s.comment_index != ci
                    or s.sentence_index_in_comment != si
                    or s.sentence_index_in_thread != position
                ):
                    raise ValidationError(
                        f"{where}: sentence {s.id} has inconsistent indices "
                        f"(comment {s.comment_index}, {s.sentence_index_in_comment}/{n}, "
                        f"{s.sentence_index_in_thread}/{total})"
                    )


def make_sentence(
    comment_index: int,
    index_in_comment: int,
    index_in_thread: int,
    text_raw: str,
    text_masked: str,
    tokens,
    labels=(),
) -> Sentence:
    return Sentence(
        id=f"c{comment_index}s{index_in_comment}",
        text_raw=text_raw,
        text_masked=text_masked,
        tokens=tuple(tokens),
        labels=tuple(labels),
        comment_index=comment_index,
        sentence_index_in_comment=index_in_comment,
        sentence_index_in_thread=index_in_thread,
    )
