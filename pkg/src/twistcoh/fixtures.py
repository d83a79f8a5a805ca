"""Named fixtures shipped with the package and their conversion to engine objects."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Optional, Tuple

from .constructions import LckFixture, PartitionFixture, RelativePair
from .errors import FixtureError, ParseError
from .forms import AffineTorusMap
from .operators import TwistData
from .parser import parse_form, parse_function

KNOWN_KEYS = {"description", "model", "f", "theta", "omega", "m", "map", "partition",
              "zeros", "degrees", "schedule"}


def parse_model(model: str) -> int:
    """``"t3"`` -> 3."""
    text = str(model).strip().lower()
    if text.startswith("t") and text[1:].isdigit() and int(text[1:]) >= 1:
        return int(text[1:])
    raise ParseError(f"model must look like t1, t2, ...; got {model!r}")


def parse_map(text: str, target_dim: Optional[int] = None) -> AffineTorusMap:
    """``"A;b"`` with rows of ``A`` separated by commas and entries by spaces."""
    if text.count(";") != 1:
        raise ParseError(f"map must be written 'A;b', got {text!r}")
    a_text, b_text = text.split(";")
    try:
        rows = [[int(x) for x in row.split()] for row in a_text.split(",")]
        b = [Fraction(x) for x in b_text.split()]
    except ValueError as exc:
        raise ParseError(f"bad map {text!r}: {exc}") from None
    if len(b) == 1 and len(rows) > 1 and b[0] == 0:
        b = b * len(rows)
    if target_dim is not None and len(rows) != target_dim:
        raise ParseError(f"map has {len(rows)} rows but the model is T^{target_dim}")
    try:
        return AffineTorusMap(rows, b)
    except ValueError as exc:
        raise ParseError(f"bad map {text!r}: {exc}") from None


@dataclass
class Fixture:
    name: str
    data: Dict[str, object] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return parse_model(self.data["model"])

    def twist(self) -> TwistData:
        f = parse_function(str(self.data.get("f", "1")), self.dim)
        theta = parse_form(str(self.data.get("theta", "0*dt1")), self.dim, 1)
        return TwistData(f, theta)

    def lck(self) -> LckFixture:
        if "omega" not in self.data:
            raise FixtureError(f"fixture {self.name!r} has no omega")
        omega = parse_form(str(self.data["omega"]), self.dim, 2)
        return LckFixture(omega, self.twist(), Fraction(str(self.data.get("m", "0"))),
                          name=self.name)

    def relative_pair(self) -> RelativePair:
        if "map" not in self.data:
            raise FixtureError(f"fixture {self.name!r} has no map")
        return RelativePair(parse_map(str(self.data["map"]), self.dim), self.twist())

    def partition(self) -> PartitionFixture:
        if "partition" not in self.data:
            raise FixtureError(f"fixture {self.name!r} has no partition")
        u, v = self.data["partition"]
        return PartitionFixture(parse_function(u, self.dim), parse_function(v, self.dim))

    def zeros(self) -> List[Tuple[int, ...]]:
        """Declared zeros of ``f`` in quarter turns."""
        return [tuple(z) for z in self.data.get("zeros", [])]

    def check_zeros(self) -> bool:
        f = self.twist().f
        return all(not f.evaluate_quarter_turns(z) for z in self.zeros())


@lru_cache(maxsize=1)
def _raw_catalogue() -> str:
    return resources.files("twistcoh").joinpath("data/fixtures.json").read_text("utf-8")


def catalogue() -> Dict[str, Fixture]:
    data = json.loads(_raw_catalogue())
    return {name: Fixture(name, dict(body)) for name, body in data.items()}


def get_fixture(name: str) -> Fixture:
    cat = catalogue()
    if name not in cat:
        raise FixtureError(f"unknown fixture {name!r}; known: {', '.join(sorted(cat))}")
    return cat[name]
