"""Structured pass/fail reports for validation-style operations."""

from dataclasses import dataclass, field


@dataclass
class CheckItem:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    items: list = field(default_factory=list)

    def add(self, name, ok, detail=""):
        self.items.append(CheckItem(name, bool(ok), detail))
        return ok

    @property
    def ok(self):
        return all(item.ok for item in self.items)

    def failures(self):
        return [item for item in self.items if not item.ok]

    def summary(self):
        lines = []
        for item in self.items:
            mark = "PASS" if item.ok else "FAIL"
            line = "[%s] %s" % (mark, item.name)
            if item.detail:
                line += ": " + item.detail
            lines.append(line)
        return "\n".join(lines)

    def to_json(self):
        return {
            "ok": self.ok,
            "checks": [
                {"name": it.name, "ok": it.ok, "detail": it.detail}
                for it in self.items
            ],
        }
