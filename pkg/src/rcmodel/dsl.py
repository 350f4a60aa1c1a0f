"""Parser and serializer for the ``.rcm`` risk-model text format.

Grammar (``#`` starts a line comment; whitespace is insignificant
outside strings; strings are single-line, escapes are ``\\"`` and
``\\\\`` only):

    file      = model ;
    model     = "model" STRING "{" {profileRow} {scenario} "}" ;
    profileRow= "attr" STRING STRING ;
    scenario  = "scenario" IDENT "{" "title" STRING
                "impact" ordinal "likelihood" ordinal
                {"reference" STRING} {node} {chain} {control} "}" ;
    ordinal   = "low" | "medium" | "high" ;
    node      = "factor" IDENT PATH "stage" stage ["note" STRING] ;
    stage     = "prevention" | "detection" | "response" ;
    chain     = "chain" IDENT {"->" IDENT} ;
    control   = "control" IDENT "on" IDENT STRING ["status" status] ;
    status    = "proposed" | "planned" | "implemented" | "rejected" ;
    PATH      = IDENT "." IDENT "." IDENT ;
    IDENT     = [a-zA-Z][a-zA-Z0-9_]* ;  STRING = '"' escaped-chars '"' ;

A chain statement with k identifiers contributes k-1 edges; chain
statements merge into one edge list and duplicate edges are demoted to
warnings. Parsing recovers at statement boundaries so one bad line does
not hide the rest of the file. LF and CRLF are both accepted; the
serializer emits LF and a canonical layout (two-space indentation, one
statement per line, declaration order preserved), so serialize(parse(x))
is byte-stable on canonical input.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    ERROR,
    WARNING,
    ChainEdge,
    Control,
    ControlStatus,
    Diagnostic,
    FactorNode,
    Ordinal,
    RiskModel,
    Scenario,
    ServiceProfile,
    SourceSpan,
    Stage,
)
from .taxonomy import FactorPath

_MODEL_KEYWORDS = frozenset({"attr", "scenario"})
_SCENARIO_KEYWORDS = frozenset(
    {"title", "impact", "likelihood", "reference", "factor", "chain", "control"}
)


@dataclass(frozen=True)
class ParseResult:
    model: RiskModel | None
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return self.model is not None

    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == ERROR]


# --- lexer -----------------------------------------------------------------

IDENT = "ident"
STRING = "string"
ARROW = "arrow"
DOT = "dot"
LBRACE = "lbrace"
RBRACE = "rbrace"
EOF = "eof"

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
_IDENT_CONT = _IDENT_START | set("0123456789_")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    value: str
    span: SourceSpan


def _lex(text: str) -> tuple[list[Token], list[Diagnostic]]:
    text = text.replace("\r\n", "\n")
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    line, col, i, n = 1, 1, 0, len(text)

    def diag(message: str, span: SourceSpan):
        diags.append(Diagnostic(ERROR, "lexical-error", message, span=span))

    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start = SourceSpan(line, col, 1)
        if ch == "{":
            tokens.append(Token(LBRACE, "{", "{", start))
            i += 1
            col += 1
            continue
        if ch == "}":
            tokens.append(Token(RBRACE, "}", "}", start))
            i += 1
            col += 1
            continue
        if ch == ".":
            tokens.append(Token(DOT, ".", ".", start))
            i += 1
            col += 1
            continue
        if ch == "-" and i + 1 < n and text[i + 1] == ">":
            tokens.append(Token(ARROW, "->", "->", SourceSpan(line, col, 2)))
            i += 2
            col += 2
            continue
        if ch in _IDENT_START:
            j = i + 1
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            word = text[i:j]
            tokens.append(Token(IDENT, word, word, SourceSpan(line, col, len(word))))
            col += j - i
            i = j
            continue
        if ch == '"':
            j = i + 1
            ccol = col + 1
            out: list[str] = []
            closed = False
            while j < n and text[j] != "\n":
                c = text[j]
                if c == "\\":
                    if j + 1 < n and text[j + 1] in ('"', "\\"):
                        out.append(text[j + 1])
                        j += 2
                        ccol += 2
                        continue
                    diag(
                        "unsupported escape sequence (only \\\" and \\\\ are allowed)",
                        SourceSpan(line, ccol, 2),
                    )
                    out.append(text[j + 1] if j + 1 < n and text[j + 1] != "\n" else "\\")
                    j += 2
                    ccol += 2
                    continue
                if c == '"':
                    closed = True
                    j += 1
                    ccol += 1
                    break
                out.append(c)
                j += 1
                ccol += 1
            if not closed:
                diag("unterminated string", SourceSpan(line, col, max(1, j - i)))
            tokens.append(Token(STRING, text[i:j], "".join(out), SourceSpan(line, col, j - i)))
            col = ccol
            i = j
            continue
        diag(f"unexpected character {ch!r}", start)
        i += 1
        col += 1
    tokens.append(Token(EOF, "", "", SourceSpan(line, col, 0)))
    return tokens, diags


# --- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token], diagnostics: list[Diagnostic]):
        self.tokens = tokens
        self.pos = 0
        self.diags = diagnostics

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != EOF:
            self.pos += 1
        return tok

    def error(self, message: str, span: SourceSpan, code: str = "syntax-error"):
        self.diags.append(Diagnostic(ERROR, code, message, span=span))

    def warn(self, message: str, span: SourceSpan, code: str):
        self.diags.append(Diagnostic(WARNING, code, message, span=span))

    def expect(self, kind: str, what: str) -> Token | None:
        tok = self.peek()
        if tok.kind != kind:
            self.error(f"expected {what}, got {tok.text or 'end of input'!r}", tok.span)
            return None
        return self.advance()

    def expect_keyword(self, word: str) -> Token | None:
        tok = self.peek()
        if tok.kind != IDENT or tok.value != word:
            self.error(f"expected keyword '{word}', got {tok.text or 'end of input'!r}", tok.span)
            return None
        return self.advance()

    def at_keyword(self, words: frozenset[str]) -> bool:
        tok = self.peek()
        return tok.kind == IDENT and tok.value in words

    def recover(self, keywords: frozenset[str]):
        """Skip to the next statement boundary in the given scope.

        The offending token may itself open the next statement, so the
        boundary check runs before any token is consumed.
        """
        while True:
            tok = self.peek()
            if tok.kind in (EOF, RBRACE) or (tok.kind == IDENT and tok.value in keywords):
                return
            self.advance()

    # statements -------------------------------------------------------

    def parse_file(self) -> RiskModel | None:
        if self.expect_keyword("model") is None:
            self.recover(frozenset())
            return None
        name_tok = self.expect(STRING, "model name string")
        if self.expect(LBRACE, "'{'") is None:
            self.recover(_MODEL_KEYWORDS)
        attributes: list[tuple[str, str]] = []
        scenarios: list[Scenario] = []
        seen_scenarios: dict[str, SourceSpan] = {}
        while True:
            tok = self.peek()
            if tok.kind == RBRACE:
                self.advance()
                break
            if tok.kind == EOF:
                self.error("unexpected end of input, expected '}'", tok.span)
                break
            if tok.kind == IDENT and tok.value == "attr":
                row = self.parse_attr()
                if row is not None:
                    if scenarios:
                        self.error("attribute rows must precede scenarios", tok.span)
                    attributes.append(row)
                continue
            if tok.kind == IDENT and tok.value == "scenario":
                scenario = self.parse_scenario()
                if scenario is not None:
                    if scenario.id in seen_scenarios:
                        self.error(
                            f"duplicate scenario id {scenario.id!r}", tok.span, code="duplicate-id"
                        )
                    else:
                        seen_scenarios[scenario.id] = tok.span
                        scenarios.append(scenario)
                continue
            if tok.kind == IDENT:
                self.error(f"unknown keyword {tok.value!r}", tok.span, code="unknown-keyword")
            else:
                self.error(f"expected a statement, got {tok.text!r}", tok.span)
            self.recover(_MODEL_KEYWORDS)
        trailing = self.peek()
        if trailing.kind != EOF:
            self.error("unexpected content after model block", trailing.span)
        return RiskModel(
            profile=ServiceProfile(
                name=name_tok.value if name_tok else "", attributes=tuple(attributes)
            ),
            scenarios=tuple(scenarios),
        )

    def parse_attr(self) -> tuple[str, str] | None:
        self.advance()  # attr
        key = self.expect(STRING, "attribute key string")
        if key is None:
            self.recover(_MODEL_KEYWORDS)
            return None
        value = self.expect(STRING, "attribute value string")
        if value is None:
            self.recover(_MODEL_KEYWORDS)
            return None
        return (key.value, value.value)

    def parse_scenario(self) -> Scenario | None:
        header = self.advance()  # scenario
        id_tok = self.expect(IDENT, "scenario identifier")
        if id_tok is None or self.expect(LBRACE, "'{'") is None:
            self.recover(_MODEL_KEYWORDS)
            return None
        title: str | None = None
        impact: Ordinal | None = None
        likelihood: Ordinal | None = None
        references: list[str] = []
        nodes: list[FactorNode] = []
        edges: list[ChainEdge] = []
        controls: list[Control] = []
        node_spans: dict[str, SourceSpan] = {}
        control_spans: dict[str, SourceSpan] = {}
        edge_set: set[tuple[str, str]] = set()
        while True:
            tok = self.peek()
            if tok.kind == RBRACE:
                self.advance()
                break
            if tok.kind == EOF:
                self.error("unexpected end of input, expected '}'", tok.span)
                break
            if tok.kind != IDENT:
                self.error(f"expected a statement, got {tok.text!r}", tok.span)
                self.recover(_SCENARIO_KEYWORDS)
                continue
            word = tok.value
            if word == "title":
                self.advance()
                s = self.expect(STRING, "title string")
                if s is not None:
                    if title is not None:
                        self.error("duplicate title statement", tok.span)
                    else:
                        title = s.value
                else:
                    self.recover(_SCENARIO_KEYWORDS)
            elif word in ("impact", "likelihood"):
                self.advance()
                value = self.parse_ordinal()
                if value is not None:
                    if word == "impact":
                        if impact is not None:
                            self.error("duplicate impact statement", tok.span)
                        else:
                            impact = value
                    else:
                        if likelihood is not None:
                            self.error("duplicate likelihood statement", tok.span)
                        else:
                            likelihood = value
            elif word == "reference":
                self.advance()
                s = self.expect(STRING, "reference string")
                if s is not None:
                    references.append(s.value)
                else:
                    self.recover(_SCENARIO_KEYWORDS)
            elif word == "factor":
                node = self.parse_node()
                if node is not None:
                    if node.node_id in node_spans:
                        self.error(
                            f"duplicate node id {node.node_id!r}", tok.span, code="duplicate-id"
                        )
                    else:
                        node_spans[node.node_id] = tok.span
                        nodes.append(node)
            elif word == "chain":
                self.parse_chain(edges, edge_set)
            elif word == "control":
                control = self.parse_control()
                if control is not None:
                    if control.control_id in control_spans:
                        self.error(
                            f"duplicate control id {control.control_id!r}",
                            tok.span,
                            code="duplicate-id",
                        )
                    else:
                        control_spans[control.control_id] = tok.span
                        controls.append(control)
            else:
                self.error(f"unknown keyword {word!r}", tok.span, code="unknown-keyword")
                self.recover(_SCENARIO_KEYWORDS)
        if title is None:
            self.error(f"scenario {id_tok.value} is missing a title", header.span)
        if impact is None:
            self.error(f"scenario {id_tok.value} is missing an impact", header.span)
        if likelihood is None:
            self.error(f"scenario {id_tok.value} is missing a likelihood", header.span)
        return Scenario(
            id=id_tok.value,
            title=title or "",
            impact=impact or Ordinal.low,
            likelihood=likelihood or Ordinal.low,
            references=tuple(references),
            nodes=tuple(nodes),
            edges=tuple(edges),
            controls=tuple(controls),
        )

    def parse_ordinal(self) -> Ordinal | None:
        tok = self.peek()
        if tok.kind == IDENT and tok.value in Ordinal.__members__:
            self.advance()
            return Ordinal[tok.value]
        self.error(f"expected low, medium or high, got {tok.text or 'end of input'!r}", tok.span)
        self.recover(_SCENARIO_KEYWORDS)
        return None

    def parse_path(self) -> FactorPath | None:
        first = self.expect(IDENT, "factor path")
        if first is None:
            return None
        parts = [first.value]
        while self.peek().kind == DOT:
            self.advance()
            part = self.expect(IDENT, "factor path segment")
            if part is None:
                return None
            parts.append(part.value)
        if len(parts) != 3:
            self.error(
                f"factor path must have exactly three segments, got {len(parts)}", first.span
            )
            return None
        return FactorPath(*parts)

    def parse_node(self) -> FactorNode | None:
        self.advance()  # factor
        id_tok = self.expect(IDENT, "node identifier")
        if id_tok is None:
            self.recover(_SCENARIO_KEYWORDS)
            return None
        path = self.parse_path()
        if path is None:
            self.recover(_SCENARIO_KEYWORDS)
            return None
        if self.expect_keyword("stage") is None:
            self.recover(_SCENARIO_KEYWORDS)
            return None
        stage_tok = self.peek()
        if stage_tok.kind != IDENT or stage_tok.value not in Stage.__members__:
            self.error(
                f"expected prevention, detection or response, got {stage_tok.text or 'end of input'!r}",
                stage_tok.span,
            )
            self.recover(_SCENARIO_KEYWORDS)
            return None
        self.advance()
        note: str | None = None
        if self.at_keyword(frozenset({"note"})):
            self.advance()
            s = self.expect(STRING, "note string")
            if s is None:
                self.recover(_SCENARIO_KEYWORDS)
                return None
            note = s.value
        return FactorNode(
            node_id=id_tok.value, factor=path, stage=Stage[stage_tok.value], note=note
        )

    def parse_chain(self, edges: list[ChainEdge], edge_set: set[tuple[str, str]]):
        self.advance()  # chain
        first = self.expect(IDENT, "node identifier")
        if first is None:
            self.recover(_SCENARIO_KEYWORDS)
            return
        prev = first
        while self.peek().kind == ARROW:
            self.advance()
            nxt = self.expect(IDENT, "node identifier")
            if nxt is None:
                self.recover(_SCENARIO_KEYWORDS)
                return
            if prev.value == nxt.value:
                self.error(
                    f"chain edge {prev.value!r} -> {nxt.value!r} is a self-loop",
                    nxt.span,
                    code="self-loop",
                )
            else:
                key = (prev.value, nxt.value)
                if key in edge_set:
                    self.warn(
                        f"duplicate chain edge {prev.value} -> {nxt.value}",
                        nxt.span,
                        code="duplicate-edge",
                    )
                else:
                    edge_set.add(key)
                    edges.append(ChainEdge(prev.value, nxt.value))
            prev = nxt

    def parse_control(self) -> Control | None:
        self.advance()  # control
        id_tok = self.expect(IDENT, "control identifier")
        if id_tok is None:
            self.recover(_SCENARIO_KEYWORDS)
            return None
        if self.expect_keyword("on") is None:
            self.recover(_SCENARIO_KEYWORDS)
            return None
        target = self.expect(IDENT, "target node identifier")
        if target is None:
            self.recover(_SCENARIO_KEYWORDS)
            return None
        desc = self.expect(STRING, "control description string")
        if desc is None:
            self.recover(_SCENARIO_KEYWORDS)
            return None
        status = ControlStatus.proposed
        if self.at_keyword(frozenset({"status"})):
            self.advance()
            status_tok = self.peek()
            if status_tok.kind != IDENT or status_tok.value not in ControlStatus.__members__:
                self.error(
                    f"expected proposed, planned, implemented or rejected, got {status_tok.text or 'end of input'!r}",
                    status_tok.span,
                )
                self.recover(_SCENARIO_KEYWORDS)
                return None
            self.advance()
            status = ControlStatus[status_tok.value]
        return Control(
            control_id=id_tok.value, target=target.value, description=desc.value, status=status
        )


def parse(text: str) -> ParseResult:
    """Parse ``.rcm`` source. The model is present iff there are no errors."""
    tokens, diagnostics = _lex(text)
    parser = _Parser(tokens, diagnostics)
    model = parser.parse_file()
    if any(d.severity == ERROR for d in parser.diags):
        model = None
    return ParseResult(model=model, diagnostics=parser.diags)


# --- serializer ------------------------------------------------------------


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _chain_runs(edges: tuple[ChainEdge, ...]) -> list[list[str]]:
    """Greedily coalesce consecutive edges into chain statements."""
    runs: list[list[str]] = []
    for edge in edges:
        if runs and runs[-1][-1] == edge.from_node:
            runs[-1].append(edge.to_node)
        else:
            runs.append([edge.from_node, edge.to_node])
    return runs


def serialize(model: RiskModel) -> str:
    """Canonical text form; ``parse(serialize(m))`` reproduces ``m``."""
    name = _quote(model.profile.name)
    if not model.profile.attributes and not model.scenarios:
        return f"model {name} {{}}\n"
    lines = [f"model {name} {{"]
    for key, value in model.profile.attributes:
        lines.append(f"  attr {_quote(key)} {_quote(value)}")
    for s in model.scenarios:
        lines.append(f"  scenario {s.id} {{")
        lines.append(f"    title {_quote(s.title)}")
        lines.append(f"    impact {s.impact.name}")
        lines.append(f"    likelihood {s.likelihood.name}")
        for ref in s.references:
            lines.append(f"    reference {_quote(ref)}")
        for node in s.nodes:
            stmt = f"    factor {node.node_id} {node.factor} stage {node.stage.name}"
            if node.note is not None:
                stmt += f" note {_quote(node.note)}"
            lines.append(stmt)
        for run in _chain_runs(s.edges):
            lines.append("    chain " + " -> ".join(run))
        for control in s.controls:
            lines.append(
                f"    control {control.control_id} on {control.target} "
                f"{_quote(control.description)} status {control.status.name}"
            )
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
