"""Verification reports, acceptance policy, and output formatting."""

from __future__ import annotations

import json

PASS = "pass"
FAIL = "fail"
CALIBRATED = "calibrated"
REPORTED = "reported"


class VerificationReport:
    """Outcome of one identity check.

    ``status`` is pass/fail/calibrated/reported; ``residual`` is the exact
    nonzero element on failure (None or a zero element otherwise);
    ``payload`` carries solved constants, chosen repairs, matched candidates.
    """

    __slots__ = ("suite", "label", "check", "status", "residual", "payload")

    def __init__(self, suite, label, check, status, residual=None, payload=None):
        self.suite = suite
        self.label = label
        self.check = check
        self.status = status
        self.residual = residual
        self.payload = payload or {}

    def key(self):
        return (self.suite, self.label, self.check)

    def residual_json(self):
        if self.residual is None:
            return None
        if hasattr(self.residual, "to_json"):
            return self.residual.to_json()
        return str(self.residual)

    def to_json(self):
        out = {
            "suite": self.suite,
            "label": self.label,
            "check": self.check,
            "status": self.status,
            "residual": self.residual_json(),
        }
        if self.payload:
            out["payload"] = _jsonable(self.payload)
        return out

    def text_line(self):
        head = "%-11s %-11s %-34s %s" % (self.suite, self.label, self.check, self.status)
        if self.status in (FAIL, CALIBRATED, REPORTED):
            digest = ""
            if self.residual is not None and not _is_zeroish(self.residual):
                digest = str(self.residual)
                if len(digest) > 120:
                    digest = digest[:117] + "..."
                digest = "  residual: " + digest + "  (full residual in JSON output)"
            elif self.payload:
                note = self.payload.get("note") or next(iter(self.payload.values()), "")
                digest = "  " + str(note)[:120]
            return head + digest
        return head


def _is_zeroish(x):
    return hasattr(x, "is_zero") and x.is_zero()


def _jsonable(obj):
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (int, float, str, bool)) or obj is None:
        return obj
    return str(obj)


def sort_reports(reports):
    return sorted(reports, key=lambda r: r.key())


def render_json(reports) -> str:
    data = [r.to_json() for r in sort_reports(reports)]
    return json.dumps({"reports": data}, sort_keys=True, indent=2)


def render_text(reports) -> str:
    return "\n".join(r.text_line() for r in sort_reports(reports))


def load_policy(text: str) -> dict:
    """Parse the acceptance policy: lines `suite:check:label = status[,status]`.

    The default requirement for an unlisted check is `pass`.
    """
    policy = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, allowed = line.partition("=")
        suite, check, label = (p.strip() for p in key.strip().split(":"))
        statuses = tuple(s.strip() for s in allowed.split(",") if s.strip())
        policy[(suite, check, label)] = statuses
    return policy


def default_policy() -> dict:
    import importlib.resources
    text = importlib.resources.files("pvcubics").joinpath("policy.txt").read_text()
    return load_policy(text)


def allowed_statuses(policy: dict, report: VerificationReport) -> tuple:
    for key in ((report.suite, report.check, report.label),
                (report.suite, report.check, "*"),
                (report.suite, "*", report.label)):
        if key in policy:
            return policy[key]
    return (PASS,)


def violations(policy: dict, reports) -> list:
    bad = []
    for r in reports:
        if r.status not in allowed_statuses(policy, r):
            bad.append(r)
    return bad
