# apps/workbench/services/dsl.py
# ================================================================================
"""
Text DSL for signatures, structures, classes and formulas.

A document is a list of bindings, optionally followed by one bare structure
literal or class expression (``#`` starts a comment)::

    sig G = [E/2]
    structure K3 = struct G 3 { E: (0,1) (1,0) (0,2) (2,0) (1,2) (2,1) }
    class PG = builtin planar_graphs
    class NoTriangle = forbidden { K3 } over G
    class W = lex(builtin sets, builtin sets)

Relations not listed in a structure literal are empty.  Formulas use the
prefix notation printed by ``apps.configurations.formulas.format_formula``.

Every error carries the line and column it was found at, including range
and signature errors discovered after parsing.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cache
from typing import TYPE_CHECKING, Any, Final

import pyparsing as pp
import structlog

from apps.classes.services.builtins import builtin
from apps.classes.specs import ClassKind, ClassSpec, forbidden_class, product_class
from apps.configurations.formulas import FALSE, TRUE, And, Atom, BlockEq, Eq, Not, Or, QfFormula, Var
from apps.kernel.exceptions import WorkbenchError
from apps.kernel.structures import Signature, Structure
from apps.workbench.exceptions import DslError

if TYPE_CHECKING:
    from collections.abc import Callable

log = structlog.get_logger(__name__).bind(component="Dsl")

KEYWORDS: Final[tuple[str, ...]] = (
    "sig", "structure", "struct", "class", "builtin", "forbidden", "over",
    "lex", "full", "super", "and", "or", "not", "beq", "true", "false",
)

type DslValue = Signature | Structure | ClassSpec


# ─── Parse tree ─────────────────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True)
class _Ref:
    name: str
    loc: int


@dataclass(slots=True, frozen=True)
class _Symbol:
    name: str
    arity: int
    loc: int


@dataclass(slots=True, frozen=True)
class _SigLit:
    symbols: tuple[_Symbol, ...]
    loc: int


@dataclass(slots=True, frozen=True)
class _Tuple:
    entries: tuple[int, ...]
    loc: int


@dataclass(slots=True, frozen=True)
class _RelBlock:
    name: str
    tuples: tuple[_Tuple, ...]
    loc: int


@dataclass(slots=True, frozen=True)
class _StructLit:
    sig: _SigLit | _Ref
    size: int
    blocks: tuple[_RelBlock, ...]
    loc: int


@dataclass(slots=True, frozen=True)
class _BuiltinExpr:
    name: str
    param: int | None
    loc: int


@dataclass(slots=True, frozen=True)
class _ForbiddenExpr:
    patterns: tuple[_StructLit | _Ref, ...]
    sig: _SigLit | _Ref
    loc: int


@dataclass(slots=True, frozen=True)
class _ProductExpr:
    kind: ClassKind
    left: _ClassNode
    right: _ClassNode
    loc: int


@dataclass(slots=True, frozen=True)
class _Binding:
    kind: str
    name: str
    value: Any
    loc: int


type _ClassNode = _BuiltinExpr | _ForbiddenExpr | _ProductExpr | _Ref


# ─── Grammar ────────────────────────────────────────────────────────────────────


def _located(factory: Callable[[int, pp.ParseResults], Any]) -> Callable[[str, int, pp.ParseResults], Any]:
    def action(_s: str, loc: int, toks: pp.ParseResults) -> Any:
        return factory(loc, toks)

    return action


def _var(toks: pp.ParseResults) -> Var:
    arg, pos = toks[0][1:].split(".")
    return Var(int(arg), int(pos))


@cache
def _grammar() -> tuple[pp.ParserElement, pp.ParserElement]:
    """``(document, formula)`` parsers; built once."""
    lpar, rpar, lbrack, rbrack, lbrace, rbrace, comma, colon, slash, equals, semi = map(pp.Suppress, "()[]{},:/=;")
    kw = {word: pp.Keyword(word) for word in KEYWORDS}
    ident = ~pp.MatchFirst(list(kw.values())) + pp.Word(pp.alphas + "_", pp.alphanums + "_")
    integer = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))
    ref = ident.copy().set_parse_action(_located(lambda loc, t: _Ref(t[0], loc)))

    # -- signatures and structures ---------------------------------------------------
    symbol = (ident + slash + integer).set_parse_action(_located(lambda loc, t: _Symbol(t[0], t[1], loc)))
    sig_literal = (lbrack + pp.Group(pp.Opt(pp.DelimitedList(symbol))) + rbrack).set_parse_action(
        _located(lambda loc, t: _SigLit(tuple(t[0]), loc)),
    )
    sig_expr = sig_literal | ref
    # "-" commits: past an opening token, errors are reported where they occur
    tup = (lpar - pp.Group(pp.DelimitedList(integer)) - rpar).set_parse_action(
        _located(lambda loc, t: _Tuple(tuple(t[0]), loc)),
    )
    rel_block = (ident + colon + pp.Group(pp.ZeroOrMore(tup)) + pp.Opt(semi)).set_parse_action(
        _located(lambda loc, t: _RelBlock(t[0], tuple(t[1]), loc)),
    )
    struct_literal = (
        kw["struct"].suppress() - sig_expr - integer - lbrace - pp.Group(pp.ZeroOrMore(rel_block)) - rbrace
    ).set_parse_action(_located(lambda loc, t: _StructLit(t[0], t[1], tuple(t[2]), loc)))

    # -- classes -----------------------------------------------------------------------
    class_expr = pp.Forward()
    builtin_expr = (kw["builtin"].suppress() + ident + pp.Opt(lpar + integer + rpar)).set_parse_action(
        _located(lambda loc, t: _BuiltinExpr(t[0], t[1] if len(t) > 1 else None, loc)),
    )
    forbidden_expr = (
        kw["forbidden"].suppress()
        + lbrace
        + pp.Group(pp.Opt(pp.DelimitedList(struct_literal | ref)))
        + rbrace
        + kw["over"].suppress()
        + sig_expr
    ).set_parse_action(_located(lambda loc, t: _ForbiddenExpr(tuple(t[0]), t[1], loc)))
    product_expr = (
        (kw["lex"] | kw["full"] | kw["super"]) + lpar + class_expr + comma + class_expr + rpar
    ).set_parse_action(_located(lambda loc, t: _ProductExpr(ClassKind(t[0]), t[1], t[2], loc)))
    class_expr <<= builtin_expr | forbidden_expr | product_expr | ref

    # -- documents ---------------------------------------------------------------------
    def binding(word: str, value: pp.ParserElement) -> pp.ParserElement:
        return (kw[word].suppress() + ident + equals + value).set_parse_action(
            _located(lambda loc, t: _Binding(word, t[0], t[1], loc)),
        )

    bindings = binding("sig", sig_literal) | binding("structure", struct_literal | ref) | binding("class", class_expr)
    document = pp.Group(pp.ZeroOrMore(bindings)) + pp.Opt(struct_literal | class_expr) + pp.StringEnd()
    document.ignore(pp.python_style_comment)

    # -- formulas ----------------------------------------------------------------------
    formula = pp.Forward()
    var = pp.Regex(r"x\d+\.\d+").set_parse_action(_var)
    const = kw["true"].copy().set_parse_action(lambda: TRUE) | kw["false"].copy().set_parse_action(lambda: FALSE)
    negation = (lpar + kw["not"].suppress() + formula + rpar).set_parse_action(lambda t: Not(t[0]))
    conjunction = (lpar + kw["and"].suppress() + pp.Group(pp.ZeroOrMore(formula)) + rpar).set_parse_action(
        lambda t: And(tuple(t[0])),
    )
    disjunction = (lpar + kw["or"].suppress() + pp.Group(pp.ZeroOrMore(formula)) + rpar).set_parse_action(
        lambda t: Or(tuple(t[0])),
    )
    block_eq = (
        lpar + kw["beq"].suppress() + integer + integer + lbrack + pp.Group(pp.ZeroOrMore(integer)) + rbrack + rpar
    ).set_parse_action(lambda t: BlockEq(t[0], t[1], tuple(t[2])))
    equality = (lpar + pp.Suppress("=") + var + var + rpar).set_parse_action(lambda t: Eq(t[0], t[1]))
    relation = (lpar + ident + pp.Group(pp.OneOrMore(var)) + rpar).set_parse_action(
        lambda t: Atom(t[0], tuple(t[1])),
    )
    formula <<= const | negation | conjunction | disjunction | block_eq | equality | relation

    return document, formula + pp.StringEnd()


# ─── From parse tree to values ──────────────────────────────────────────────────


class _Builder:
    def __init__(self, text: str) -> None:
        self.text = text
        self.env: dict[str, DslValue] = {}

    def error(self, message: str, loc: int) -> DslError:
        return DslError(message, pp.lineno(loc, self.text), pp.col(loc, self.text))

    def lookup[V](self, ref: _Ref, kind: type[V], what: str) -> V:
        if ref.name not in self.env:
            raise self.error(f"undefined name {ref.name!r}", ref.loc)
        value = self.env[ref.name]
        if not isinstance(value, kind):
            raise self.error(f"{ref.name!r} is not a {what}", ref.loc)
        return value

    def bind(self, b: _Binding) -> None:
        if b.name in self.env:
            raise self.error(f"name {b.name!r} is already bound", b.loc)
        match b.kind:
            case "sig":
                self.env[b.name] = self.signature(b.value)
            case "structure":
                self.env[b.name] = self.structure(b.value)
            case _:
                self.env[b.name] = self.klass(b.value, label=b.name)

    # -- values ------------------------------------------------------------------------
    def signature(self, node: _SigLit | _Ref) -> Signature:
        if isinstance(node, _Ref):
            return self.lookup(node, Signature, "signature")
        try:
            return Signature.of(*((s.name, s.arity) for s in node.symbols))
        except (WorkbenchError, ValueError) as exc:
            raise self.error(str(exc), node.loc) from None

    def structure(self, node: _StructLit | _Ref) -> Structure:
        if isinstance(node, _Ref):
            return self.lookup(node, Structure, "structure")
        sig = self.signature(node.sig)
        relations: dict[str, list[tuple[int, ...]]] = {name: [] for name in sig.names}
        for block in node.blocks:
            if block.name not in sig:
                raise self.error(f"symbol {block.name!r} is not in [{sig.describe()}]", block.loc)
            arity = sig.arity(block.name)
            for t in block.tuples:
                if len(t.entries) != arity:
                    raise self.error(f"arity mismatch: {block.name} takes {arity} entries, got {list(t.entries)}", t.loc)
                if any(x >= node.size for x in t.entries):
                    raise self.error(f"entry out of range: {list(t.entries)} in a structure of size {node.size}", t.loc)
                relations[block.name].append(t.entries)
        return Structure.build(sig, node.size, relations)

    def klass(self, node: _ClassNode, label: str = "") -> ClassSpec:
        try:
            match node:
                case _Ref():
                    k = self.lookup(node, ClassSpec, "class")
                    return replace(k, label=label) if label else k
                case _BuiltinExpr(name, param):
                    return builtin(name, param, label=label)
                case _ForbiddenExpr(patterns, sig):
                    return forbidden_class(self.signature(sig), [self.structure(p) for p in patterns], label=label)
                case _ProductExpr(kind, left, right):
                    return product_class(kind, self.klass(left), self.klass(right), label=label)
        except DslError:
            raise
        except (WorkbenchError, ValueError) as exc:
            raise self.error(str(exc).strip("'\""), node.loc) from None
        msg = f"not a class expression: {node!r}"
        raise TypeError(msg)

    def tail(self, node: Any) -> Structure | ClassSpec:
        if isinstance(node, _StructLit):
            return self.structure(node)
        if isinstance(node, _Ref) and isinstance(self.env.get(node.name), Structure):
            return self.lookup(node, Structure, "structure")
        return self.klass(node)


# ─── Public API ─────────────────────────────────────────────────────────────────


@dataclass(slots=True, frozen=True)
class DslDocument:
    bindings: dict[str, DslValue] = field(default_factory=dict)
    value: Structure | ClassSpec | None = None

    @property
    def result(self) -> Structure | ClassSpec | None:
        """The trailing expression, else the last bound structure or class."""
        if self.value is not None:
            return self.value
        found = [v for v in self.bindings.values() if isinstance(v, Structure | ClassSpec)]
        return found[-1] if found else None

    def structure(self, name: str) -> Structure:
        value = self.bindings.get(name)
        if not isinstance(value, Structure):
            msg = f"no structure named {name!r}"
            raise DslError(msg)
        return value

    def klass(self, name: str) -> ClassSpec:
        value = self.bindings.get(name)
        if not isinstance(value, ClassSpec):
            msg = f"no class named {name!r}"
            raise DslError(msg)
        return value


def _syntax_error(exc: pp.ParseBaseException) -> DslError:
    return DslError(f"syntax error: {exc.msg}", exc.lineno, exc.col)


def parse_document(text: str) -> DslDocument:
    document, _ = _grammar()
    try:
        tokens = document.parse_string(text, parse_all=True)
    except pp.ParseBaseException as exc:
        raise _syntax_error(exc) from None
    builder = _Builder(text)
    for b in tokens[0]:
        builder.bind(b)
    value = builder.tail(tokens[1]) if len(tokens) > 1 else None
    log.debug("dsl parsed", bindings=len(builder.env), trailing=value is not None)
    return DslDocument(dict(builder.env), value)


def parse_dsl(text: str) -> Structure | ClassSpec:
    result = parse_document(text).result
    if result is None:
        msg = "no structure or class in the input"
        raise DslError(msg, 1, 1)
    return result


def parse_structure(text: str) -> Structure:
    result = parse_dsl(text)
    if not isinstance(result, Structure):
        msg = "expected a structure, got a class"
        raise DslError(msg, 1, 1)
    return result


def parse_class(text: str) -> ClassSpec:
    result = parse_dsl(text)
    if not isinstance(result, ClassSpec):
        msg = "expected a class, got a structure"
        raise DslError(msg, 1, 1)
    return result


def parse_formula(text: str) -> QfFormula:
    _, formula = _grammar()
    try:
        return formula.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as exc:
        raise _syntax_error(exc) from None
