# apps/classes/specs.py
# ================================================================================
"""
``ClassSpec`` – an isomorphism-closed class of finite structures.

A spec is a plain frozen value.  Membership, enumeration and the hereditary
flag are computed by ``apps.classes.services``; product kinds hand the
decomposition work to ``apps.products``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING, Final

from apps.kernel.exceptions import SignatureError
from apps.kernel.structures import Signature, Structure

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping


class ClassKind(StrEnum):
    BUILTIN = "builtin"
    FORBIDDEN = "forbidden"
    LEX = "lex"
    FULL = "full"
    SUPER = "super"


PRODUCT_KINDS: Final[frozenset[ClassKind]] = frozenset({ClassKind.LEX, ClassKind.FULL, ClassKind.SUPER})

# ─── Product signatures ─────────────────────────────────────────────────────────

RESERVED_SYMBOLS: Final[dict[ClassKind, tuple[str, ...]]] = {
    ClassKind.LEX: ("E",),
    ClassKind.FULL: ("E0", "E1"),
    ClassKind.SUPER: (),
}
SUFFIXES: Final[tuple[str, str]] = ("_0", "_1")


@dataclass(slots=True, frozen=True)
class SymbolMap:
    """Factor symbol name → product symbol name, in factor signature order."""

    pairs: tuple[tuple[str, str], ...] = ()

    @property
    def forward(self) -> dict[str, str]:
        return dict(self.pairs)

    @property
    def backward(self) -> dict[str, str]:
        return {new: old for old, new in self.pairs}

    @property
    def targets(self) -> tuple[str, ...]:
        return tuple(new for _, new in self.pairs)

    @property
    def renamed(self) -> dict[str, str]:
        return {old: new for old, new in self.pairs if old != new}


@dataclass(slots=True, frozen=True)
class ProductSignature:
    sig: Signature
    reserved: tuple[str, ...]
    left: SymbolMap
    right: SymbolMap


def product_signature(kind: ClassKind, left: Signature, right: Signature, *, rename: bool = True) -> ProductSignature:
    """Reserved symbols first, then the left factor's symbols, then the right's.

    Factor symbols that collide with a reserved name or with each other get
    ``_0`` / ``_1`` suffixes (repeated until unique) and the rename is recorded.
    With ``rename=False`` any collision is a ``SignatureError``.
    """
    reserved = RESERVED_SYMBOLS[kind]
    taken = set(reserved)
    clashes = (set(left.names) & set(right.names)) | (taken & (set(left.names) | set(right.names)))
    if clashes and not rename:
        msg = f"{kind} product signatures collide on {sorted(clashes)} and renaming is disabled"
        raise SignatureError(msg)

    maps: list[SymbolMap] = []
    for side, factor in enumerate((left, right)):
        pairs = []
        for name, _ in factor.symbols:
            new = name
            while new in clashes or new in taken:
                new += SUFFIXES[side]
            taken.add(new)
            pairs.append((name, new))
        maps.append(SymbolMap(tuple(pairs)))

    symbols = (
        *((name, 2) for name in reserved),
        *((maps[0].forward[n], a) for n, a in left.symbols),
        *((maps[1].forward[n], a) for n, a in right.symbols),
    )
    return ProductSignature(Signature(tuple(symbols)), reserved, maps[0], maps[1])


# ─── ClassSpec ──────────────────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True, kw_only=True)
class ClassSpec:
    sig: Signature
    kind: ClassKind
    label: str = field(default="", compare=False)
    builtin: str | None = None
    param: int | None = None
    forbidden: tuple[Structure, ...] = ()
    left: ClassSpec | None = None
    right: ClassSpec | None = None
    left_map: SymbolMap | None = None
    right_map: SymbolMap | None = None

    def __str__(self) -> str:
        return self.label or self.describe()

    def describe(self) -> str:
        match self.kind:
            case ClassKind.BUILTIN:
                return f"{self.builtin}({self.param})" if self.param is not None else str(self.builtin)
            case ClassKind.FORBIDDEN:
                return f"forbidden[{len(self.forbidden)}] over {self.sig.describe()}"
            case _:
                return f"{self.kind}({self.left}, {self.right})"

    @property
    def factors(self) -> tuple[ClassSpec, ClassSpec]:
        if self.left is None or self.right is None:
            msg = f"{self.describe()} is not a product class"
            raise TypeError(msg)
        return self.left, self.right

    @property
    def symbol_maps(self) -> tuple[SymbolMap, SymbolMap]:
        if self.left_map is None or self.right_map is None:
            msg = f"{self.describe()} is not a product class"
            raise TypeError(msg)
        return self.left_map, self.right_map


def forbidden_class(sig: Signature, patterns: Iterable[Structure], *, label: str = "") -> ClassSpec:
    pats = tuple(patterns)
    for p in pats:
        if p.sig != sig:
            msg = f"forbidden pattern over [{p.sig.describe()}] in a class over [{sig.describe()}]"
            raise SignatureError(msg)
    return ClassSpec(sig=sig, kind=ClassKind.FORBIDDEN, forbidden=pats, label=label)


def product_class(kind: ClassKind, k0: ClassSpec, k1: ClassSpec, *, rename: bool = True, label: str = "") -> ClassSpec:
    if kind not in PRODUCT_KINDS:
        msg = f"{kind} is not a product kind"
        raise ValueError(msg)
    ps = product_signature(kind, k0.sig, k1.sig, rename=rename)
    return ClassSpec(
        sig=ps.sig, kind=kind, left=k0, right=k1, left_map=ps.left, right_map=ps.right, label=label,
    )


def lex_class(k0: ClassSpec, k1: ClassSpec, *, rename: bool = True, label: str = "") -> ClassSpec:
    return product_class(ClassKind.LEX, k0, k1, rename=rename, label=label)


def full_class(k0: ClassSpec, k1: ClassSpec, *, rename: bool = True, label: str = "") -> ClassSpec:
    return product_class(ClassKind.FULL, k0, k1, rename=rename, label=label)


def super_class(k0: ClassSpec, k1: ClassSpec, *, rename: bool = True, label: str = "") -> ClassSpec:
    return product_class(ClassKind.SUPER, k0, k1, rename=rename, label=label)


def factor_reducts(k: ClassSpec, s: Structure) -> tuple[Structure, Structure]:
    """The two factor-signature reducts of ``s``, with factor symbol names restored."""
    lm, rm = k.symbol_maps
    return (
        s.reduct(lm.targets, rename=lm.backward),
        s.reduct(rm.targets, rename=rm.backward),
    )


def relabel_symbols(s: Structure, mapping: Mapping[str, str]) -> Structure:
    return Structure(s.sig.rename(mapping), s.size, s.relations)
