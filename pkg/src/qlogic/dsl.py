"""Plain-text scenario language (``.qls`` files): parser and elaborator.

Grammar (one token of lookahead everywhere; ``#`` starts a comment,
whitespace and newlines are insignificant):

    document   := { stmt }
    stmt       := space | basis | subspace | context | state | mode | toggle | query
    space      := "space" NAME "dim" INT
    basis      := "basis" NAME "." NAME "=" ( "computational" | "dft" "(" NAME ")" )
    subspace   := "subspace" NAME "=" "span" "(" NAME "." NAME "," indexset ")"
                | "subspace" NAME "=" "tensor" "(" NAME "," NAME ")"
    context    := "context" NAME "=" "partition" "(" NAME "." NAME ","
                      "[" indexset { "," indexset } "]" ")"
    state      := "state" NAME "=" ( "uniform" "(" NAME ")" | "vector" "[" complexlist "]" )
    mode       := "mode" ( "hilbert_lattice" | "collection" "(" NAME { "," NAME } ")" )
    toggle     := "toggle" ( "correspondence" | "kolmogorov" )
    query      := "query" ( "factual" | "counterfactual" ) prop "given" NAME
    prop       := NAME | "(" prop "and" prop ")"
    indexset   := "{" INT { "," INT } "}"

Complex literals are ``a``, ``bi``, or ``a+bi`` / ``a-bi`` with optional
leading sign.  Parsing recovers at statement boundaries and collects every
diagnostic instead of stopping at the first.  Name checks (uniqueness per
kind, resolution, declaration before use) are part of the parse phase;
numeric construction failures surface during elaboration with the span of
the declaring statement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .hilbert import StateVector, Subspace, ZeroStateError
from .lattice import (
    Context,
    ContextValidationError,
    InvariantSubspaceLattice,
    LatticeCollection,
    PartitionError,
    PastedLattice,
    context_from_partition,
    lattice_of,
    paste,
)
from .valuation import (
    Atomic,
    CollectionMode,
    Conjunction,
    HilbertLatticeMode,
    Proposition,
    SemanticsMode,
    ValuationResult,
    counterfactual_value,
    factual_value,
)

__all__ = [
    "Diagnostic",
    "ParseResult",
    "parse",
    "pretty_print",
    "ScenarioDocument",
    "elaborate",
    "ElaborationResult",
    "ScenarioProgram",
    "QueryOutcome",
    "run_queries",
]

STATEMENT_KEYWORDS = (
    "space",
    "basis",
    "subspace",
    "context",
    "state",
    "mode",
    "toggle",
    "query",
)

PHASE_PARSE = "parse"
PHASE_ELABORATE = "elaborate"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    line: int
    column: int
    phase: str = PHASE_PARSE

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

NAME_TOK = "name"
INT_TOK = "int"
FLOAT_TOK = "float"
IMAG_TOK = "imag"
EOF_TOK = "eof"
PUNCT = {
    ".": "dot",
    "=": "equals",
    "(": "lparen",
    ")": "rparen",
    "[": "lbracket",
    "]": "rbracket",
    "{": "lbrace",
    "}": "rbrace",
    ",": "comma",
    "+": "plus",
    "-": "minus",
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def _lex(source: str) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    line, column = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            column = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            column += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_line, start_column = line, column
        if ch.isdigit():
            j = i
            seen_dot = False
            while j < n and (source[j].isdigit() or (source[j] == "." and not seen_dot)):
                if source[j] == ".":
                    # A ".." range is not part of the grammar; stop before a
                    # dot that is not followed by a digit.
                    if j + 1 >= n or not source[j + 1].isdigit():
                        break
                    seen_dot = True
                j += 1
            text = source[i:j]
            kind = FLOAT_TOK if seen_dot else INT_TOK
            if j < n and source[j] == "i" and (j + 1 >= n or not _is_name_char(source[j + 1])):
                kind = IMAG_TOK
                j += 1
                text = source[i:j]
            tokens.append(Token(kind, text, start_line, start_column))
            column += j - i
            i = j
            continue
        if _is_name_start(ch):
            j = i
            while j < n and _is_name_char(source[j]):
                j += 1
            tokens.append(Token(NAME_TOK, source[i:j], start_line, start_column))
            column += j - i
            i = j
            continue
        if ch in PUNCT:
            tokens.append(Token(PUNCT[ch], ch, start_line, start_column))
            i += 1
            column += 1
            continue
        diagnostics.append(
            Diagnostic("error", f"unexpected character {ch!r}", start_line, start_column)
        )
        i += 1
        column += 1
    tokens.append(Token(EOF_TOK, "", line, column))
    return tokens, diagnostics


def _is_name_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_name_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


# ---------------------------------------------------------------------------
# Syntax tree
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Span:
    line: int
    column: int


def _span_field() -> Span:
    return Span(0, 0)


@dataclass(frozen=True)
class SpaceDecl:
    name: str
    dim: int
    span: Span = field(default_factory=_span_field, compare=False)


@dataclass(frozen=True)
class BasisDecl:
    space: str
    name: str
    kind: str  # "computational" | "dft"
    source: str | None  # basis name for dft
    span: Span = field(default_factory=_span_field, compare=False)


@dataclass(frozen=True)
class SubspaceSpanDecl:
    name: str
    space: str
    basis: str
    indices: tuple[int, ...]
    span: Span = field(default_factory=_span_field, compare=False)


@dataclass(frozen=True)
class SubspaceTensorDecl:
    name: str
    left: str
    right: str
    span: Span = field(default_factory=_span_field, compare=False)


@dataclass(frozen=True)
class ContextDecl:
    name: str
    space: str
    basis: str
    blocks: tuple[tuple[int, ...], ...]
    span: Span = field(default_factory=_span_field, compare=False)


@dataclass(frozen=True)
class StateUniformDecl:
    name: str
    subspace: str
    span: Span = field(default_factory=_span_field, compare=False)


@dataclass(frozen=True)
class StateVectorDecl:
    name: str
    entries: tuple[complex, ...]
    span: Span = field(default_factory=_span_field, compare=False)


@dataclass(frozen=True)
class ModeDecl:
    kind: str  # "hilbert_lattice" | "collection"
    contexts: tuple[str, ...]
    span: Span = field(default_factory=_span_field, compare=False)


@dataclass(frozen=True)
class ToggleDecl:
    name: str  # "correspondence" | "kolmogorov"
    span: Span = field(default_factory=_span_field, compare=False)


@dataclass(frozen=True)
class PropName:
    name: str


@dataclass(frozen=True)
class PropAnd:
    left: "PropNode"
    right: "PropNode"


PropNode = Union[PropName, PropAnd]


@dataclass(frozen=True)
class QueryDecl:
    kind: str  # "factual" | "counterfactual"
    prop: PropNode
    given: str
    span: Span = field(default_factory=_span_field, compare=False)


Statement = Union[
    SpaceDecl,
    BasisDecl,
    SubspaceSpanDecl,
    SubspaceTensorDecl,
    ContextDecl,
    StateUniformDecl,
    StateVectorDecl,
    ModeDecl,
    ToggleDecl,
    QueryDecl,
]


@dataclass(frozen=True)
class ScenarioDocument:
    statements: tuple[Statement, ...]


@dataclass(frozen=True)
class ParseResult:
    document: ScenarioDocument
    diagnostics: tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return not any(d.severity == "error" for d in self.diagnostics)


class _ParseAbort(Exception):
    """Internal: statement parse failed; diagnostic already recorded."""


class _Parser:
    def __init__(self, tokens: list[Token], diagnostics: list[Diagnostic]):
        self.tokens = tokens
        self.pos = 0
        self.diagnostics = diagnostics

    # token helpers ---------------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != EOF_TOK:
            self.pos += 1
        return tok

    def error(self, message: str, token: Token | None = None) -> _ParseAbort:
        tok = token or self.peek()
        self.diagnostics.append(Diagnostic("error", message, tok.line, tok.column))
        return _ParseAbort()

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.error(f"expected {what}, found {tok.text or 'end of file'!r}")
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok.kind != NAME_TOK or tok.text != word:
            raise self.error(f"expected {word!r}, found {tok.text or 'end of file'!r}")
        return self.advance()

    def expect_name(self, what: str = "a name") -> Token:
        tok = self.peek()
        if tok.kind != NAME_TOK:
            raise self.error(f"expected {what}, found {tok.text or 'end of file'!r}")
        if tok.text in STATEMENT_KEYWORDS:
            raise self.error(f"{tok.text!r} is a reserved statement keyword")
        return self.advance()

    def expect_int(self, what: str = "an integer") -> int:
        tok = self.peek()
        if tok.kind != INT_TOK:
            raise self.error(f"expected {what}, found {tok.text or 'end of file'!r}")
        self.advance()
        return int(tok.text)

    # statement parsing -----------------------------------------------------

    def parse_document(self) -> ScenarioDocument:
        statements: list[Statement] = []
        while self.peek().kind != EOF_TOK:
            tok = self.peek()
            handler = self._dispatch(tok)
            if handler is None:
                self.diagnostics.append(
                    Diagnostic(
                        "error",
                        f"expected a statement keyword, found {tok.text!r}",
                        tok.line,
                        tok.column,
                    )
                )
                self.advance()
                self._recover()
                continue
            try:
                statements.append(handler())
            except _ParseAbort:
                self._recover()
        return ScenarioDocument(tuple(statements))

    def _dispatch(self, tok: Token) -> Callable[[], Statement] | None:
        if tok.kind != NAME_TOK:
            return None
        return {
            "space": self._space,
            "basis": self._basis,
            "subspace": self._subspace,
            "context": self._context,
            "state": self._state,
            "mode": self._mode,
            "toggle": self._toggle,
            "query": self._query,
        }.get(tok.text)

    def _recover(self) -> None:
        while True:
            tok = self.peek()
            if tok.kind == EOF_TOK:
                return
            if tok.kind == NAME_TOK and tok.text in STATEMENT_KEYWORDS:
                return
            self.advance()

    def _space(self) -> SpaceDecl:
        head = self.advance()
        name = self.expect_name("a space name")
        self.expect_keyword("dim")
        dim = self.expect_int("the space dimension")
        return SpaceDecl(name.text, dim, Span(head.line, head.column))

    def _basis(self) -> BasisDecl:
        head = self.advance()
        space = self.expect_name("a space name")
        self.expect("dot", "'.'")
        name = self.expect_name("a basis name")
        self.expect("equals", "'='")
        tok = self.peek()
        if tok.kind == NAME_TOK and tok.text == "computational":
            self.advance()
            return BasisDecl(space.text, name.text, "computational", None, Span(head.line, head.column))
        if tok.kind == NAME_TOK and tok.text == "dft":
            self.advance()
            self.expect("lparen", "'('")
            source = self.expect_name("a basis name")
            self.expect("rparen", "')'")
            return BasisDecl(space.text, name.text, "dft", source.text, Span(head.line, head.column))
        raise self.error("expected 'computational' or 'dft(...)'")

    def _subspace(self) -> Statement:
        head = self.advance()
        name = self.expect_name("a subspace name")
        self.expect("equals", "'='")
        tok = self.peek()
        if tok.kind == NAME_TOK and tok.text == "span":
            self.advance()
            self.expect("lparen", "'('")
            space = self.expect_name("a space name")
            self.expect("dot", "'.'")
            basis = self.expect_name("a basis name")
            self.expect("comma", "','")
            indices = self._indexset()
            self.expect("rparen", "')'")
            return SubspaceSpanDecl(
                name.text, space.text, basis.text, indices, Span(head.line, head.column)
            )
        if tok.kind == NAME_TOK and tok.text == "tensor":
            self.advance()
            self.expect("lparen", "'('")
            left = self.expect_name("a subspace name")
            self.expect("comma", "','")
            right = self.expect_name("a subspace name")
            self.expect("rparen", "')'")
            return SubspaceTensorDecl(
                name.text, left.text, right.text, Span(head.line, head.column)
            )
        raise self.error("expected 'span(...)' or 'tensor(...)'")

    def _context(self) -> ContextDecl:
        head = self.advance()
        name = self.expect_name("a context name")
        self.expect("equals", "'='")
        self.expect_keyword("partition")
        self.expect("lparen", "'('")
        space = self.expect_name("a space name")
        self.expect("dot", "'.'")
        basis = self.expect_name("a basis name")
        self.expect("comma", "','")
        self.expect("lbracket", "'['")
        blocks = [self._indexset()]
        while self.peek().kind == "comma":
            self.advance()
            blocks.append(self._indexset())
        self.expect("rbracket", "']'")
        self.expect("rparen", "')'")
        return ContextDecl(
            name.text, space.text, basis.text, tuple(blocks), Span(head.line, head.column)
        )

    def _state(self) -> Statement:
        head = self.advance()
        name = self.expect_name("a state name")
        self.expect("equals", "'='")
        tok = self.peek()
        if tok.kind == NAME_TOK and tok.text == "uniform":
            self.advance()
            self.expect("lparen", "'('")
            subspace = self.expect_name("a subspace name")
            self.expect("rparen", "')'")
            return StateUniformDecl(name.text, subspace.text, Span(head.line, head.column))
        if tok.kind == NAME_TOK and tok.text == "vector":
            self.advance()
            self.expect("lbracket", "'['")
            entries = [self._complex()]
            while self.peek().kind == "comma":
                self.advance()
                entries.append(self._complex())
            self.expect("rbracket", "']'")
            return StateVectorDecl(name.text, tuple(entries), Span(head.line, head.column))
        raise self.error("expected 'uniform(...)' or 'vector[...]'")

    def _mode(self) -> ModeDecl:
        head = self.advance()
        tok = self.peek()
        if tok.kind == NAME_TOK and tok.text == "hilbert_lattice":
            self.advance()
            return ModeDecl("hilbert_lattice", (), Span(head.line, head.column))
        if tok.kind == NAME_TOK and tok.text == "collection":
            self.advance()
            self.expect("lparen", "'('")
            names = [self.expect_name("a context name").text]
            while self.peek().kind == "comma":
                self.advance()
                names.append(self.expect_name("a context name").text)
            self.expect("rparen", "')'")
            return ModeDecl("collection", tuple(names), Span(head.line, head.column))
        raise self.error("expected 'hilbert_lattice' or 'collection(...)'")

    def _toggle(self) -> ToggleDecl:
        head = self.advance()
        tok = self.peek()
        if tok.kind == NAME_TOK and tok.text in ("correspondence", "kolmogorov"):
            self.advance()
            return ToggleDecl(tok.text, Span(head.line, head.column))
        raise self.error("expected 'correspondence' or 'kolmogorov'")

    def _query(self) -> QueryDecl:
        head = self.advance()
        tok = self.peek()
        if tok.kind == NAME_TOK and tok.text in ("factual", "counterfactual"):
            kind = tok.text
            self.advance()
        else:
            raise self.error("expected 'factual' or 'counterfactual'")
        prop = self._prop()
        self.expect_keyword("given")
        given = self.expect_name("a state or subspace name")
        return QueryDecl(kind, prop, given.text, Span(head.line, head.column))

    def _prop(self) -> PropNode:
        tok = self.peek()
        if tok.kind == "lparen":
            self.advance()
            left = self._prop()
            self.expect_keyword("and")
            right = self._prop()
            self.expect("rparen", "')'")
            return PropAnd(left, right)
        name = self.expect_name("a subspace name")
        return PropName(name.text)

    def _indexset(self) -> tuple[int, ...]:
        self.expect("lbrace", "'{'")
        indices = [self.expect_int("a basis index")]
        while self.peek().kind == "comma":
            self.advance()
            indices.append(self.expect_int("a basis index"))
        self.expect("rbrace", "'}'")
        return tuple(indices)

    def _complex(self) -> complex:
        sign = 1.0
        if self.peek().kind == "minus":
            self.advance()
            sign = -1.0
        elif self.peek().kind == "plus":
            self.advance()
        first = self.peek()
        if first.kind == IMAG_TOK:
            self.advance()
            return complex(0.0, sign * float(first.text[:-1]))
        if first.kind not in (INT_TOK, FLOAT_TOK):
            raise self.error("expected a complex literal")
        self.advance()
        real = sign * float(first.text)
        if self.peek().kind in ("plus", "minus"):
            imag_sign = 1.0 if self.peek().kind == "plus" else -1.0
            self.advance()
            imag_tok = self.peek()
            if imag_tok.kind != IMAG_TOK:
                raise self.error("expected an imaginary part like '2i'")
            self.advance()
            return complex(real, imag_sign * float(imag_tok.text[:-1]))
        return complex(real, 0.0)


def _check_names(document: ScenarioDocument, diagnostics: list[Diagnostic]) -> None:
    """Uniqueness per kind, resolution, and declaration-before-use checks."""
    spaces: set[str] = set()
    bases: set[tuple[str, str]] = set()
    subspaces: set[str] = set()
    contexts: set[str] = set()
    states: set[str] = set()
    mode_seen = False

    def err(span: Span, message: str) -> None:
        diagnostics.append(Diagnostic("error", message, span.line, span.column))

    def need(collection: set, key, span: Span, what: str) -> None:
        if key not in collection:
            label = ".".join(key) if isinstance(key, tuple) else key
            err(span, f"{what} {label!r} is not declared at this point")

    def fresh(collection: set, key, span: Span, what: str) -> bool:
        if key in collection:
            label = ".".join(key) if isinstance(key, tuple) else key
            err(span, f"duplicate {what} {label!r}")
            return False
        collection.add(key)
        return True

    def prop_names(node: PropNode) -> list[tuple[str, Span]]:
        if isinstance(node, PropName):
            return [(node.name, Span(0, 0))]
        return prop_names(node.left) + prop_names(node.right)

    for stmt in document.statements:
        if isinstance(stmt, SpaceDecl):
            fresh(spaces, stmt.name, stmt.span, "space")
        elif isinstance(stmt, BasisDecl):
            need(spaces, stmt.space, stmt.span, "space")
            if stmt.kind == "dft" and stmt.source is not None:
                need(bases, (stmt.space, stmt.source), stmt.span, "basis")
            fresh(bases, (stmt.space, stmt.name), stmt.span, "basis")
        elif isinstance(stmt, SubspaceSpanDecl):
            need(spaces, stmt.space, stmt.span, "space")
            need(bases, (stmt.space, stmt.basis), stmt.span, "basis")
            fresh(subspaces, stmt.name, stmt.span, "subspace")
        elif isinstance(stmt, SubspaceTensorDecl):
            need(subspaces, stmt.left, stmt.span, "subspace")
            need(subspaces, stmt.right, stmt.span, "subspace")
            fresh(subspaces, stmt.name, stmt.span, "subspace")
        elif isinstance(stmt, ContextDecl):
            need(spaces, stmt.space, stmt.span, "space")
            need(bases, (stmt.space, stmt.basis), stmt.span, "basis")
            fresh(contexts, stmt.name, stmt.span, "context")
        elif isinstance(stmt, StateUniformDecl):
            need(subspaces, stmt.subspace, stmt.span, "subspace")
            fresh(states, stmt.name, stmt.span, "state")
        elif isinstance(stmt, StateVectorDecl):
            fresh(states, stmt.name, stmt.span, "state")
        elif isinstance(stmt, ModeDecl):
            if mode_seen:
                err(stmt.span, "the mode is already declared")
            mode_seen = True
            for name in stmt.contexts:
                need(contexts, name, stmt.span, "context")
        elif isinstance(stmt, QueryDecl):
            for name, _ in prop_names(stmt.prop):
                need(subspaces, name, stmt.span, "subspace")
            if stmt.kind == "factual":
                need(states, stmt.given, stmt.span, "state")
            else:
                need(subspaces, stmt.given, stmt.span, "subspace")


def parse(source: str) -> ParseResult:
    """Parse a scenario text; all diagnostics are collected, never just the first."""
    tokens, diagnostics = _lex(source)
    parser = _Parser(tokens, diagnostics)
    document = parser.parse_document()
    _check_names(document, diagnostics)
    return ParseResult(document, tuple(diagnostics))


# ---------------------------------------------------------------------------
# Pretty printer
# ---------------------------------------------------------------------------


def _format_complex(z: complex) -> str:
    def number(x: float) -> str:
        return f"{int(x)}" if float(x).is_integer() else repr(x)

    if z.imag == 0:
        return number(z.real)
    if z.real == 0:
        return f"{number(z.imag)}i"
    op = "+" if z.imag >= 0 else "-"
    return f"{number(z.real)}{op}{number(abs(z.imag))}i"


def _format_indexset(indices: Sequence[int]) -> str:
    return "{" + ", ".join(str(i) for i in indices) + "}"


def _format_prop(node: PropNode) -> str:
    if isinstance(node, PropName):
        return node.name
    return f"({_format_prop(node.left)} and {_format_prop(node.right)})"


def format_statement(stmt: Statement) -> str:
    if isinstance(stmt, SpaceDecl):
        return f"space {stmt.name} dim {stmt.dim}"
    if isinstance(stmt, BasisDecl):
        rhs = "computational" if stmt.kind == "computational" else f"dft({stmt.source})"
        return f"basis {stmt.space}.{stmt.name} = {rhs}"
    if isinstance(stmt, SubspaceSpanDecl):
        return (
            f"subspace {stmt.name} = span({stmt.space}.{stmt.basis}, "
            f"{_format_indexset(stmt.indices)})"
        )
    if isinstance(stmt, SubspaceTensorDecl):
        return f"subspace {stmt.name} = tensor({stmt.left}, {stmt.right})"
    if isinstance(stmt, ContextDecl):
        blocks = ", ".join(_format_indexset(b) for b in stmt.blocks)
        return f"context {stmt.name} = partition({stmt.space}.{stmt.basis}, [{blocks}])"
    if isinstance(stmt, StateUniformDecl):
        return f"state {stmt.name} = uniform({stmt.subspace})"
    if isinstance(stmt, StateVectorDecl):
        entries = ", ".join(_format_complex(z) for z in stmt.entries)
        return f"state {stmt.name} = vector [{entries}]"
    if isinstance(stmt, ModeDecl):
        if stmt.kind == "hilbert_lattice":
            return "mode hilbert_lattice"
        return f"mode collection({', '.join(stmt.contexts)})"
    if isinstance(stmt, ToggleDecl):
        return f"toggle {stmt.name}"
    if isinstance(stmt, QueryDecl):
        return f"query {stmt.kind} {_format_prop(stmt.prop)} given {stmt.given}"
    raise TypeError(f"unknown statement {stmt!r}")


def pretty_print(document: ScenarioDocument) -> str:
    return "\n".join(format_statement(s) for s in document.statements) + "\n"


# ---------------------------------------------------------------------------
# Elaboration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ElaboratedQuery:
    kind: str
    prop: Proposition
    given_name: str
    given_state: StateVector | None
    given_subspace: Subspace | None
    text: str
    span: Span


class ScenarioProgram:
    """Runtime objects built from a parsed document."""

    def __init__(self) -> None:
        self.spaces: dict[str, int] = {}
        self.bases: dict[tuple[str, str], np.ndarray] = {}
        self.subspaces: dict[str, Subspace] = {}
        self.contexts: dict[str, Context] = {}
        self.states: dict[str, StateVector] = {}
        self.mode_decl: ModeDecl | None = None
        self.toggles: set[str] = set()
        self.queries: list[ElaboratedQuery] = []
        self._lattices: dict[str, InvariantSubspaceLattice] = {}
        self._collection: LatticeCollection | None = None
        self._pasted_by_dim: dict[int, PastedLattice] = {}

    def lattice(self, context_name: str) -> InvariantSubspaceLattice:
        if context_name not in self._lattices:
            self._lattices[context_name] = lattice_of(self.contexts[context_name])
        return self._lattices[context_name]

    def collection(self) -> LatticeCollection:
        """Collection declared by 'mode collection(...)'; validated during elaboration."""
        if self._collection is None:
            assert self.mode_decl is not None and self.mode_decl.kind == "collection"
            self._collection = LatticeCollection(
                tuple(self.lattice(name) for name in self.mode_decl.contexts)
            )
        return self._collection

    def mode_for_dim(self, dim: int) -> SemanticsMode:
        if self.mode_decl is not None and self.mode_decl.kind == "collection":
            return CollectionMode(self.collection())
        if dim not in self._pasted_by_dim:
            matching = tuple(
                self.lattice(name)
                for name, ctx in self.contexts.items()
                if ctx.dim == dim
            )
            self._pasted_by_dim[dim] = paste(LatticeCollection(matching))
        return HilbertLatticeMode(self._pasted_by_dim[dim])

    @property
    def mode_name(self) -> str:
        if self.mode_decl is not None and self.mode_decl.kind == "collection":
            return "collection"
        return "hilbert_lattice"


@dataclass(frozen=True)
class ElaborationResult:
    program: ScenarioProgram
    diagnostics: tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return not any(d.severity == "error" for d in self.diagnostics)


def elaborate(document: ScenarioDocument) -> ElaborationResult:
    """Build runtime objects; constructor failures become diagnostics with the
    declaring statement's span."""
    program = ScenarioProgram()
    diagnostics: list[Diagnostic] = []

    def err(span: Span, message: str) -> None:
        diagnostics.append(
            Diagnostic("error", message, span.line, span.column, PHASE_ELABORATE)
        )

    for stmt in document.statements:
        try:
            _elaborate_statement(stmt, program)
        except (
            ContextValidationError,
            PartitionError,
            ZeroStateError,
            ValueError,
            KeyError,
        ) as exc:
            message = str(exc) if str(exc) else type(exc).__name__
            err(stmt.span, message)
    return ElaborationResult(program, tuple(diagnostics))


def _elaborate_statement(stmt: Statement, program: ScenarioProgram) -> None:
    if isinstance(stmt, SpaceDecl):
        if stmt.dim < 1:
            raise ValueError(f"space dimension must be positive, got {stmt.dim}")
        program.spaces[stmt.name] = stmt.dim
    elif isinstance(stmt, BasisDecl):
        dim = _require(program.spaces, stmt.space, "space")
        if stmt.kind == "computational":
            program.bases[(stmt.space, stmt.name)] = np.eye(dim, dtype=np.complex128)
        else:
            source = _require(program.bases, (stmt.space, stmt.source), "basis")
            j, k = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
            dft = np.exp(2j * np.pi * j * k / dim) / np.sqrt(dim)
            program.bases[(stmt.space, stmt.name)] = source @ dft
    elif isinstance(stmt, SubspaceSpanDecl):
        basis = _require(program.bases, (stmt.space, stmt.basis), "basis")
        dim = basis.shape[0]
        for i in stmt.indices:
            if not 0 <= i < dim:
                raise ValueError(f"index {i} out of range for dimension {dim}")
        program.subspaces[stmt.name] = Subspace.span_of_columns(
            basis, sorted(set(stmt.indices))
        )
    elif isinstance(stmt, SubspaceTensorDecl):
        left = _require(program.subspaces, stmt.left, "subspace")
        right = _require(program.subspaces, stmt.right, "subspace")
        program.subspaces[stmt.name] = left.tensor(right)
    elif isinstance(stmt, ContextDecl):
        basis = _require(program.bases, (stmt.space, stmt.basis), "basis")
        program.contexts[stmt.name] = context_from_partition(basis, stmt.blocks, stmt.name)
    elif isinstance(stmt, StateUniformDecl):
        subspace = _require(program.subspaces, stmt.subspace, "subspace")
        if subspace.dim == 0:
            raise ZeroStateError("cannot build a state from the zero subspace")
        total = subspace.basis.sum(axis=1)
        program.states[stmt.name] = StateVector(total).normalize()
    elif isinstance(stmt, StateVectorDecl):
        program.states[stmt.name] = StateVector(np.array(stmt.entries)).normalize()
    elif isinstance(stmt, ModeDecl):
        program.mode_decl = stmt
        if stmt.kind == "collection":
            for name in stmt.contexts:
                _require(program.contexts, name, "context")
            dims = {program.contexts[name].dim for name in stmt.contexts}
            if len(dims) > 1:
                raise ValueError(
                    f"collection contexts mix ambient dimensions {sorted(dims)}"
                )
    elif isinstance(stmt, ToggleDecl):
        program.toggles.add(stmt.name)
    elif isinstance(stmt, QueryDecl):
        prop = _build_prop(stmt.prop, program)
        text = format_statement(stmt)
        if stmt.kind == "factual":
            state = _require(program.states, stmt.given, "state")
            if state.dim != prop.subspace.ambient_dim:
                raise ValueError(
                    f"state {stmt.given!r} has dimension {state.dim}, the proposition "
                    f"lives in dimension {prop.subspace.ambient_dim}"
                )
            program.queries.append(
                ElaboratedQuery(stmt.kind, prop, stmt.given, state, None, text, stmt.span)
            )
        else:
            given = _require(program.subspaces, stmt.given, "subspace")
            if given.ambient_dim != prop.subspace.ambient_dim:
                raise ValueError(
                    f"subspace {stmt.given!r} has ambient dimension {given.ambient_dim}, "
                    f"the proposition lives in dimension {prop.subspace.ambient_dim}"
                )
            if program.mode_decl is not None and program.mode_decl.kind == "collection":
                collection_dim = {
                    program.contexts[n].dim for n in program.mode_decl.contexts
                }
                if collection_dim and given.ambient_dim not in collection_dim:
                    raise ValueError(
                        "counterfactual query dimension does not match the declared "
                        "collection"
                    )
            program.queries.append(
                ElaboratedQuery(stmt.kind, prop, stmt.given, None, given, text, stmt.span)
            )
    else:
        raise TypeError(f"unknown statement {stmt!r}")


def _require(table: dict, key, what: str):
    if key not in table:
        label = ".".join(key) if isinstance(key, tuple) else key
        raise KeyError(f"{what} {label!r} failed to elaborate or is missing")
    return table[key]


def _build_prop(node: PropNode, program: ScenarioProgram) -> Proposition:
    if isinstance(node, PropName):
        return Atomic(node.name, _require(program.subspaces, node.name, "subspace"))
    return Conjunction(_build_prop(node.left, program), _build_prop(node.right, program))


@dataclass(frozen=True)
class QueryOutcome:
    text: str
    mode: str
    result: ValuationResult


def run_queries(program: ScenarioProgram) -> list[QueryOutcome]:
    """Evaluate every query under the declared mode, in document order."""
    outcomes = []
    for query in program.queries:
        if query.kind == "factual":
            assert query.given_state is not None
            result = factual_value(query.prop, query.given_state)
        else:
            assert query.given_subspace is not None
            mode = program.mode_for_dim(query.given_subspace.ambient_dim)
            result = counterfactual_value(query.prop, query.given_subspace, mode)
        outcomes.append(QueryOutcome(query.text, program.mode_name, result))
    return outcomes
