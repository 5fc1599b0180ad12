"""Interpretations, configuration entries and witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

from apps.configurations.exceptions import ConfigurationError, FormulaError
from apps.configurations.formulas import QfFormula, check_formula, format_formula
from apps.kernel.exceptions import SignatureError

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence

    from apps.kernel.structures import Signature, Structure, Tup

type Block = tuple[int, ...]


@dataclass(slots=True, frozen=True)
class Interpretation:
    """Each symbol of ``source`` ↦ a formula over ``target`` in ``arity × width`` variables."""

    source: Signature
    target: Signature
    width: int
    formulas: tuple[tuple[str, QfFormula], ...]
    _by_symbol: dict[str, QfFormula] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.width < 1:
            msg = f"width must be at least 1, got {self.width}"
            raise FormulaError(msg)
        table = dict(self.formulas)
        if len(table) != len(self.formulas) or set(table) != set(self.source.names):
            msg = f"interpretation covers {sorted(table)}, source signature is [{self.source.describe()}]"
            raise SignatureError(msg)
        for name, phi in self.formulas:
            check_formula(phi, self.target, self.source.arity(name), self.width)
        object.__setattr__(self, "_by_symbol", table)

    @classmethod
    def of(cls, source: Signature, target: Signature, width: int, formulas: Mapping[str, QfFormula]) -> Interpretation:
        """Formulas are stored in source-signature order."""
        return cls(source, target, width, tuple((n, formulas[n]) for n in source.names if n in formulas))

    def formula(self, name: str) -> QfFormula:
        self.source.index(name)
        return self._by_symbol[name]

    def as_record(self) -> dict[str, Any]:
        return {
            "source": [[n, a] for n, a in self.source.symbols],
            "target": [[n, a] for n, a in self.target.symbols],
            "width": self.width,
            "formulas": {n: format_formula(phi) for n, phi in self.formulas},
        }


@dataclass(slots=True, frozen=True)
class ConfigEntry:
    """``f_A``: element ``a`` of ``index`` ↦ ``blocks[a]``, a tuple of elements of ``target``."""

    index: Structure
    target: Structure
    blocks: tuple[Block, ...]

    def __post_init__(self) -> None:
        if len(self.blocks) != self.index.size:
            msg = f"{len(self.blocks)} blocks for an index structure of size {self.index.size}"
            raise ConfigurationError(msg)
        for block in self.blocks:
            if any(not 0 <= x < self.target.size for x in block):
                msg = f"block {list(block)} leaves a target of size {self.target.size}"
                raise ConfigurationError(msg)

    @classmethod
    def of(cls, index: Structure, target: Structure, blocks: Sequence[Sequence[int]]) -> ConfigEntry:
        return cls(index, target, tuple(tuple(b) for b in blocks))

    @property
    def injective(self) -> bool:
        return len(set(self.blocks)) == len(self.blocks)

    def apply(self, tup: Tup) -> tuple[Block, ...]:
        return tuple(self.blocks[a] for a in tup)

    def as_record(self) -> dict[str, Any]:
        return {
            "index": self.index.as_record(),
            "target": self.target.as_record(),
            "blocks": [list(b) for b in self.blocks],
        }


@dataclass(slots=True, frozen=True)
class ConfigWitness:
    interp: Interpretation
    entries: tuple[ConfigEntry, ...]

    def __post_init__(self) -> None:
        for n, e in enumerate(self.entries):
            if e.index.sig != self.interp.source or e.target.sig != self.interp.target:
                msg = f"entry {n} is over [{e.index.sig.describe()}] → [{e.target.sig.describe()}]"
                raise SignatureError(msg)
            if any(len(b) != self.interp.width for b in e.blocks):
                msg = f"entry {n} has blocks of the wrong width (expected {self.interp.width})"
                raise ConfigurationError(msg)

    @property
    def width(self) -> int:
        return self.interp.width

    @property
    def injective(self) -> bool:
        return all(e.injective for e in self.entries)

    def as_record(self) -> dict[str, Any]:
        return {
            "interpretation": self.interp.as_record(),
            "injective": self.injective,
            "entries": [e.as_record() for e in self.entries],
        }


@dataclass(slots=True, frozen=True)
class Violation:
    """``index ⊨ symbol(tup)`` is ``expected`` but the formula says otherwise on entry ``entry``."""

    entry: int
    symbol: str
    tup: Tup
    expected: bool

    @property
    def message(self) -> str:
        side = "holds" if self.expected else "fails"
        return f"entry {self.entry}: {self.symbol}{list(self.tup)} {side} in the index, the interpretation disagrees"
