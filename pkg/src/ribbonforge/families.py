"""Family specifications and layout modes.

A :class:`FamilySpec` names which parametric family a diagram was built
from (and with which parameters); a :class:`LayoutMode` records whether
the diagram is tight (touching segments encoded by the crossing ledger)
or exploded by a small rational offset.  Both are plain frozen value
types shared by the construction, topology, and serialization layers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import ClassVar, Union

from .errors import ParameterError

__all__ = [
    "FamilySpec",
    "Torus2",
    "Twist",
    "Pretzel",
    "Unknot",
    "Hopf",
    "PentagonTrefoil",
    "LayoutMode",
    "Tight",
    "Exploded",
    "MAX_EXPLODE_DELTA",
]


@dataclass(frozen=True)
class Torus2:
    """The (2, q) torus link family; ``q >= 2`` half-twists."""

    q: int
    kind: ClassVar[str] = "torus2"

    def __post_init__(self) -> None:
        if not isinstance(self.q, int) or isinstance(self.q, bool):
            raise ParameterError("torus parameter q must be an integer")
        if self.q < 2:
            raise ParameterError(f"torus parameter q must be >= 2, got {self.q}")

    def params(self) -> dict:
        return {"q": self.q}


@dataclass(frozen=True)
class Twist:
    """The twist knot family with ``n >= 1`` twists plus a clasp."""

    n: int
    kind: ClassVar[str] = "twist"

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool):
            raise ParameterError("twist parameter n must be an integer")
        if self.n < 1:
            raise ParameterError(f"twist parameter n must be >= 1, got {self.n}")

    def params(self) -> dict:
        return {"n": self.n}


@dataclass(frozen=True)
class Pretzel:
    """Pretzel links P(p_1, ..., p_k), k >= 3 signed twist counts.

    Individual entries may be zero (an uncrossed strand pair).
    """

    twists: tuple[int, ...]
    kind: ClassVar[str] = "pretzel"

    def __init__(self, twists) -> None:
        try:
            normalized = tuple(twists)
        except TypeError:
            raise ParameterError("pretzel twists must be a sequence of integers")
        object.__setattr__(self, "twists", normalized)
        self.__post_init__()

    def __post_init__(self) -> None:
        if len(self.twists) < 3:
            raise ParameterError(
                f"pretzel needs at least 3 twist parameters, got {len(self.twists)}"
            )
        for t in self.twists:
            if not isinstance(t, int) or isinstance(t, bool):
                raise ParameterError(f"pretzel twist counts must be integers, got {t!r}")

    def params(self) -> dict:
        return {"twists": list(self.twists)}


@dataclass(frozen=True)
class Unknot:
    """A single unknotted component."""

    kind: ClassVar[str] = "unknot"

    def params(self) -> dict:
        return {}


@dataclass(frozen=True)
class Hopf:
    """The two-component Hopf link."""

    kind: ClassVar[str] = "hopf"

    def params(self) -> dict:
        return {}


@dataclass(frozen=True)
class PentagonTrefoil:
    """The trefoil folded flat onto a regular pentagon."""

    kind: ClassVar[str] = "pentagon_trefoil"

    def params(self) -> dict:
        return {}


FamilySpec = Union[Torus2, Twist, Pretzel, Unknot, Hopf, PentagonTrefoil]

#: Exclusive upper bound for the explode offset.
MAX_EXPLODE_DELTA = Fraction(1, 8)


@dataclass(frozen=True)
class Tight:
    """Touching layout: coincident segments, ledger carries the crossings."""

    kind: ClassVar[str] = "tight"


@dataclass(frozen=True)
class Exploded:
    """Generic layout: pieces pushed apart by a rational offset ``delta``."""

    delta: Fraction = field(default=Fraction(1, 64))
    kind: ClassVar[str] = "exploded"

    def __init__(self, delta=Fraction(1, 64)) -> None:
        try:
            value = Fraction(delta)
        except (TypeError, ValueError):
            raise ParameterError(f"explode offset must be rational, got {delta!r}")
        object.__setattr__(self, "delta", value)
        if not 0 < value < MAX_EXPLODE_DELTA:
            raise ParameterError(
                f"explode offset must lie strictly between 0 and 1/8, got {value}"
            )


LayoutMode = Union[Tight, Exploded]
