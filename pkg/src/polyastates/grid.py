"""The versioned standard parameter grid used by ``verify`` and the test suite."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .distributions import PolyaParams


@dataclass(frozen=True)
class StandardGrid:
    M: tuple[int, ...]
    gamma: tuple[float, ...]
    eta: tuple[float, ...]
    settings: dict = field(default_factory=dict, compare=False, repr=False)

    def __iter__(self):
        for M, g, eta in itertools.product(self.M, self.gamma, self.eta):
            yield PolyaParams(M, g, eta)

    def __len__(self) -> int:
        return len(self.M) * len(self.gamma) * len(self.eta)

    def __getitem__(self, key):
        return self.settings[key]


def load_grid(path: str | Path | None = None) -> StandardGrid:
    """Load a grid config; the packaged ``standard_grid.json`` by default."""
    if path is None:
        text = resources.files("polyastates").joinpath("data/standard_grid.json").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    raw = json.loads(text)
    return StandardGrid(
        M=tuple(int(m) for m in raw["M"]),
        gamma=tuple(float(g) for g in raw["gamma"]),
        eta=tuple(float(e) for e in raw["eta"]),
        settings=raw,
    )
