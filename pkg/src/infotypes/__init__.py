"""Detection of information types in issue-tracker discussion threads."""

__version__ = "0.1.0"
