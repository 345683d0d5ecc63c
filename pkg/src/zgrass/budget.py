"""Global cap on exhaustive work.

The default cap is 10**7 primitive operations; the ``ZGRASS_BUDGET``
environment variable overrides it, and :func:`budget_limit` scopes a
temporary override.
"""

from __future__ import annotations

import contextlib
import os
from typing import Iterator

from .errors import BudgetExceeded

DEFAULT_BUDGET = 10**7

_override: list[int] = []


def current_budget() -> int:
    if _override:
        return _override[-1]
    env = os.environ.get("ZGRASS_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET


@contextlib.contextmanager
def budget_limit(limit: int) -> Iterator[int]:
    if limit <= 0:
        raise ValueError("budget must be positive")
    _override.append(limit)
    try:
        yield limit
    finally:
        _override.pop()


def check_budget(projected: int, what: str = "operation", budget: int | None = None) -> None:
    cap = current_budget() if budget is None else budget
    if projected > cap:
        raise BudgetExceeded(projected, cap, what)
