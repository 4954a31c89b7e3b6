"""Shared error taxonomy.

ValidationError covers everything caused by bad user input (manifests,
wordlists, flags, mismatched schemas).  The CLI maps it to exit code 1;
any other exception is an internal failure and maps to exit code 2.
"""

from __future__ import annotations


class CrossreadError(Exception):
    """Base class for all package errors."""


class ValidationError(CrossreadError):
    """Invalid input data or configuration.

    `code` is a short machine-readable tag (e.g. "missing-file",
    "duplicate-id") stable across releases; the message is for humans.
    """

    def __init__(self, code: str, message: str) -> None:
        super().__init__(message)
        self.code = code
