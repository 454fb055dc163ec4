"""Pass/fail reports with deterministic text and key-value renderings."""

from typing import NamedTuple


class Refusal(Exception):
    """A request outside the certified range; callers report it, never guess."""


class Check(NamedTuple):
    name: str
    ok: bool
    detail: str = ""
    witness: str | None = None


class Report:
    def __init__(self, title, checks=None, info=None):
        self.title = title
        self.checks = list(checks or [])
        self.info = list(info or [])
        self.refused = None

    def add(self, name, ok, detail="", witness=None):
        self.checks.append(Check(name, bool(ok), detail, witness))
        return ok

    def note(self, key, value):
        self.info.append((key, str(value)))

    def refuse(self, reason):
        self.refused = str(reason)

    def merge(self, other, prefix=None):
        for c in other.checks:
            name = f"{prefix}.{c.name}" if prefix else c.name
            self.checks.append(c._replace(name=name))
        for k, v in other.info:
            self.info.append((f"{prefix}.{k}" if prefix else k, v))
        if other.refused and not self.refused:
            self.refused = other.refused

    @property
    def passed(self):
        return self.refused is None and all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def status(self):
        if self.refused is not None:
            return "REFUSED"
        return "PASS" if self.passed else "FAIL"

    def exit_code(self):
        if self.refused is not None:
            return 2
        return 0 if self.passed else 1

    def text(self):
        lines = [f"{self.title}: {self.status}"]
        for k, v in self.info:
            lines.append(f"  {k}: {v}")
        for c in self.checks:
            line = f"  [{'pass' if c.ok else 'FAIL'}] {c.name}"
            if c.detail:
                line += f" ({c.detail})"
            lines.append(line)
            if c.witness is not None and not c.ok:
                lines.append(f"      witness: {c.witness}")
        if self.refused is not None:
            lines.append(f"  refused: {self.refused}")
        return "\n".join(lines) + "\n"

    def kv(self):
        lines = [f"title={self.title}", f"status={self.status}"]
        for k, v in self.info:
            lines.append(f"info.{k}={v}")
        for c in self.checks:
            lines.append(f"check.{c.name}={'pass' if c.ok else 'fail'}")
            if c.detail:
                lines.append(f"check.{c.name}.detail={c.detail}")
            if c.witness is not None and not c.ok:
                lines.append(f"check.{c.name}.witness={c.witness}")
        if self.refused is not None:
            lines.append(f"refused={self.refused}")
        return "\n".join(lines) + "\n"

    def render(self, fmt="text"):
        return self.kv() if fmt == "kv" else self.text()

    def __repr__(self):
        return f"Report({self.title!r}, {self.status})"
