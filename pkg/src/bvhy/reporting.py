"""Tiny pass/fail report containers shared by the checking routines."""

from dataclasses import dataclass, field
from typing import Any, List, Optional


@dataclass
class CheckItem:
    name: str
    passed: bool
    witness: Optional[Any] = None

    def to_dict(self):
        d = {"name": self.name, "passed": self.passed}
        if not self.passed and self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class CheckReport:
    title: str
    items: List[CheckItem] = field(default_factory=list)

    def add(self, name: str, passed: bool, witness=None) -> None:
        self.items.append(CheckItem(name, passed, witness))

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def failures(self) -> List[CheckItem]:
        return [item for item in self.items if not item.passed]

    def to_dict(self):
        return {
            "title": self.title,
            "passed": self.passed,
            "items": [item.to_dict() for item in self.items],
        }
