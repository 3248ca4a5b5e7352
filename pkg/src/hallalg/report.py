"""Structured outcome of an identity or theorem check."""

from __future__ import annotations

import json
import time

__all__ = ["VerificationReport", "timed_report", "InternalCheckError"]


class InternalCheckError(RuntimeError):
    """An internal consistency assertion failed; results cannot be trusted."""


class VerificationReport:
    """Parameters, both sides of the checked identity, status and timing."""

    __slots__ = ("check", "params", "status", "lhs", "rhs", "elapsed_ms", "detail")

    def __init__(self, check, params, status, lhs="", rhs="", elapsed_ms=0, detail=""):
        self.check = check
        self.params = dict(params)
        self.status = status
        self.lhs = str(lhs)
        self.rhs = str(rhs)
        self.elapsed_ms = int(elapsed_ms)
        self.detail = detail

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self):
        out = {
            "check": self.check,
            "params": self.params,
            "status": self.status,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "elapsed_ms": self.elapsed_ms,
        }
        if self.detail:
            out["detail"] = self.detail
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def __repr__(self):
        return f"VerificationReport({self.check}, {self.status})"


def timed_report(check, params, fn):
    """Run fn() -> (ok, lhs, rhs, detail) and wrap it with timing."""
    start = time.monotonic()
    ok, lhs, rhs, detail = fn()
    elapsed = (time.monotonic() - start) * 1000
    return VerificationReport(check, params, "pass" if ok else "fail",
                              lhs, rhs, elapsed, detail)
