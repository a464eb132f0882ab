"""Decorator that keeps one failing suite from killing a report run."""

from __future__ import annotations

import functools
import time
from typing import Callable, TypeVar

from loguru import logger

from revcurv.errors import ConstructionError
from revcurv.metrics import suite_duration
from revcurv.report import CheckRecord

log = logger.bind(name="SuiteGuard")

Ctx = TypeVar("Ctx")
Suite = Callable[[Ctx], list[CheckRecord]]


def safe_suite(suite_name: str) -> Callable[[Suite[Ctx]], Suite[Ctx]]:
    """Wrap a suite so that exceptions become a failed record.

    ``ConstructionError`` is re-raised: without a valid profile the remaining
    suites have nothing to check.
    """

    def decorator(func: Suite[Ctx]) -> Suite[Ctx]:
        @functools.wraps(func)
        def wrapper(ctx: Ctx) -> list[CheckRecord]:
            start = time.perf_counter()
            try:
                return func(ctx)
            except ConstructionError:
                raise
            except Exception as exc:
                log.exception("Suite {} crashed: {}", suite_name, exc)
                return [
                    CheckRecord(
                        id=f"{suite_name}.crashed",
                        description=f"suite {suite_name} ran to completion",
                        statement="no exception raised",
                        measured=float("nan"),
                        threshold=float("nan"),
                        passed=False,
                        detail=f"{type(exc).__name__}: {exc}",
                    )
                ]
            finally:
                suite_duration.labels(suite_name).observe(time.perf_counter() - start)

        return wrapper

    return decorator
