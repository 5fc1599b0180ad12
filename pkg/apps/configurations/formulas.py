# apps/configurations/formulas.py
# ================================================================================
"""
Quantifier-free formulas over blocks of variables.

A variable ``x{i}.{j}`` stands for position ``j`` of the block assigned to
argument ``i``.  ``BlockEq(i, k, positions)`` says that blocks ``i`` and ``k``
agree on ``positions``; it is kept as one node and expanded only when a
formula is evaluated or rewritten variable by variable.

Printed in prefix notation::

    (and (E x0.0 x1.1) (not (= x0.0 x1.0)) (beq 0 1 [2 3]))
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from apps.configurations.exceptions import FormulaError

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence

    from apps.kernel.structures import Signature, Structure


# ─── Syntax tree ────────────────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True, order=True)
class Var:
    arg: int
    pos: int

    def __str__(self) -> str:
        return f"x{self.arg}.{self.pos}"


@dataclass(slots=True, frozen=True)
class Atom:
    symbol: str
    args: tuple[Var, ...]


@dataclass(slots=True, frozen=True)
class Eq:
    left: Var
    right: Var


@dataclass(slots=True, frozen=True)
class BlockEq:
    left: int
    right: int
    positions: tuple[int, ...]

    def expanded(self) -> QfFormula:
        return conj(*(Eq(Var(self.left, p), Var(self.right, p)) for p in self.positions))


@dataclass(slots=True, frozen=True)
class Not:
    body: QfFormula


@dataclass(slots=True, frozen=True)
class And:
    parts: tuple[QfFormula, ...]


@dataclass(slots=True, frozen=True)
class Or:
    parts: tuple[QfFormula, ...]


@dataclass(slots=True, frozen=True)
class Const:
    value: bool


type QfFormula = Atom | Eq | BlockEq | Not | And | Or | Const

TRUE = Const(True)
FALSE = Const(False)


def atom(symbol: str, *args: tuple[int, int]) -> Atom:
    """``atom("E", (0, 0), (1, 1))`` is ``E(x0.0, x1.1)``."""
    return Atom(symbol, tuple(Var(i, j) for i, j in args))


def conj(*parts: QfFormula) -> QfFormula:
    """Flattened conjunction; the empty conjunction is ``true``."""
    flat: list[QfFormula] = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, And) else (p,))
    if not flat:
        return TRUE
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*parts: QfFormula) -> QfFormula:
    flat: list[QfFormula] = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, Or) else (p,))
    if not flat:
        return FALSE
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


# ─── Semantics ──────────────────────────────────────────────────────────────────


def eval_qf(phi: QfFormula, m: Structure, assignment: Mapping[Var, int]) -> bool:
    """Truth of ``phi`` in ``m``; equality is element equality."""

    def value(v: Var) -> int:
        try:
            return assignment[v]
        except KeyError:
            msg = f"variable {v} is not assigned"
            raise FormulaError(msg) from None

    def ev(f: QfFormula) -> bool:
        match f:
            case Atom(symbol, args):
                return m.holds(symbol, [value(v) for v in args])
            case Eq(left, right):
                return value(left) == value(right)
            case BlockEq():
                return ev(f.expanded())
            case Not(body):
                return not ev(body)
            case And(parts):
                return all(ev(p) for p in parts)
            case Or(parts):
                return any(ev(p) for p in parts)
            case Const(v):
                return v
        msg = f"not a formula: {f!r}"
        raise FormulaError(msg)

    return ev(phi)


def block_assignment(blocks: Sequence[Sequence[int]]) -> dict[Var, int]:
    """``x{i}.{j} ↦ blocks[i][j]``"""
    return {Var(i, j): x for i, block in enumerate(blocks) for j, x in enumerate(block)}


# ─── Inspection ─────────────────────────────────────────────────────────────────


def _walk(phi: QfFormula) -> Iterator[QfFormula]:
    yield phi
    match phi:
        case Not(body):
            yield from _walk(body)
        case And(parts) | Or(parts):
            for p in parts:
                yield from _walk(p)


def variables(phi: QfFormula) -> frozenset[Var]:
    found: set[Var] = set()
    for node in _walk(phi):
        match node:
            case Atom(_, args):
                found.update(args)
            case Eq(left, right):
                found.update((left, right))
            case BlockEq(left, right, positions):
                found.update(Var(i, p) for i in (left, right) for p in positions)
    return frozenset(found)


def symbols(phi: QfFormula) -> frozenset[str]:
    return frozenset(node.symbol for node in _walk(phi) if isinstance(node, Atom))


def check_formula(phi: QfFormula, sig: Signature, arity: int, width: int) -> None:
    """Every atom is over ``sig`` with the right arity; every variable fits ``arity × width``."""
    for node in _walk(phi):
        if isinstance(node, Atom) and (node.symbol not in sig or sig.arity(node.symbol) != len(node.args)):
            msg = f"atom {format_formula(node)} does not match the target signature [{sig.describe()}]"
            raise FormulaError(msg)
    for v in variables(phi):
        if not (0 <= v.arg < arity and 0 <= v.pos < width):
            msg = f"variable {v} is out of range for arity {arity} and width {width}"
            raise FormulaError(msg)


# ─── Rewriting ──────────────────────────────────────────────────────────────────


def map_leaves(phi: QfFormula, leaf: Callable[[QfFormula], QfFormula]) -> QfFormula:
    """Rebuild ``phi`` with every atom, equality and constant passed through ``leaf``."""
    match phi:
        case Not(body):
            return Not(map_leaves(body, leaf))
        case And(parts):
            return conj(*(map_leaves(p, leaf) for p in parts))
        case Or(parts):
            return disj(*(map_leaves(p, leaf) for p in parts))
    return leaf(phi)


def shift_positions(phi: QfFormula, offset: int) -> QfFormula:
    """Move every variable ``offset`` places along its block; block equalities stay whole."""

    def leaf(f: QfFormula) -> QfFormula:
        match f:
            case Atom(symbol, args):
                return Atom(symbol, tuple(Var(v.arg, v.pos + offset) for v in args))
            case Eq(left, right):
                return Eq(Var(left.arg, left.pos + offset), Var(right.arg, right.pos + offset))
            case BlockEq(left, right, positions):
                return BlockEq(left, right, tuple(p + offset for p in positions))
        return f

    return map_leaves(phi, leaf)


def expand_block_equalities(phi: QfFormula) -> QfFormula:
    return map_leaves(phi, lambda f: f.expanded() if isinstance(f, BlockEq) else f)


def substitute(phi: QfFormula, rename: Callable[[Var], Var]) -> QfFormula:
    """Rename variables one by one; block equalities are expanded first."""

    def leaf(f: QfFormula) -> QfFormula:
        match f:
            case Atom(symbol, args):
                return Atom(symbol, tuple(rename(v) for v in args))
            case Eq(left, right):
                return Eq(rename(left), rename(right))
        return f

    return map_leaves(expand_block_equalities(phi), leaf)


# ─── Prefix notation ────────────────────────────────────────────────────────────


def format_formula(phi: QfFormula) -> str:
    match phi:
        case Atom(symbol, args):
            return f"({' '.join([symbol, *map(str, args)])})"
        case Eq(left, right):
            return f"(= {left} {right})"
        case BlockEq(left, right, positions):
            return f"(beq {left} {right} [{' '.join(map(str, positions))}])"
        case Not(body):
            return f"(not {format_formula(body)})"
        case And(parts):
            return f"(and {' '.join(map(format_formula, parts))})"
        case Or(parts):
            return f"(or {' '.join(map(format_formula, parts))})"
        case Const(v):
            return "true" if v else "false"
    msg = f"not a formula: {phi!r}"
    raise FormulaError(msg)


def all_block_pairs(arity: int) -> Iterable[tuple[int, int]]:
    return ((i, k) for i in range(arity) for k in range(i + 1, arity))
