"""Example parameter tuples shipped with the package (``data/fixtures.yaml``)."""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import yaml


@dataclass(frozen=True)
class Fixture:
    id: int
    family: str
    params: tuple[float, ...] | None
    reason: str = ""
    partial: tuple | None = None

    @property
    def complete(self) -> bool:
        return self.params is not None

    @property
    def name(self) -> str:
        return f"P{self.id}"


def load_fixtures(text: str | None = None) -> list[Fixture]:
    if text is None:
        text = resources.files("riccati").joinpath("data/fixtures.yaml").read_text()
    data = yaml.safe_load(text)
    out = []
    for d in data["fixtures"]:
        params = d.get("params")
        out.append(Fixture(int(d["id"]), d["family"],
                           tuple(float(v) for v in params) if params is not None else None,
                           d.get("reason", ""),
                           tuple(d["partial"]) if d.get("partial") else None))
    return out


def fixture(pid: int) -> Fixture:
    for f in load_fixtures():
        if f.id == pid:
            return f
    raise KeyError(f"P{pid}")
