"""Text format for node graphs.

The format is line-oriented and case-sensitive. ``#`` starts a comment that
runs to the end of the line. One graph per file::

    graph BallForce {
      # declarations
      node right : EventInputAxis (axis_name="MoveRight")
      node speed : ConstFloat (value=10.0)
      node vec   : MakeVector
      node scaled: ScaleVector
      node self  : SelfActor
      node push  : AddForce
      # wires
      exec right.out -> push.in
      data right.AxisValue -> vec.x
      data vec.out -> scaled.v
      data speed.out -> scaled.s
      data scaled.out -> push.force
      data self.out -> push.target
    }

Literals are floats (``20.0``, ``-1e-3``), strings (``"Pick Up"`` with
``\\"``, ``\\\\``, ``\\n``, ``\\t`` escapes), booleans (``true``/``false``),
and vectors (``(1.0, 0.0, -2.5)``).

:func:`serialize` emits a canonical form: node order is determined by the
sorted wire lists (then remaining nodes by id), so any two structurally equal
graphs serialize to identical bytes. :func:`to_json_text` exports the same
canonical ordering as a versioned JSON document (``fgjson/1``).

Parsing reports diagnostics with byte-offset spans and stops after 25 errors.
Codes: ``SyntaxError``, ``UnknownKind``, ``UnknownPin``, ``DuplicateNodeId``,
``UnknownNode``, ``BadLiteral``. Pin *plane* and *type* problems (e.g. an exec
wire into a pure node) parse fine and are left to the validator, which is why
a file can round-trip through the parser and still fail validation.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

from .errors import ValidationFailed
from .graph.model import CATALOG, Graph, Node, Wire
from .graph.validate import validate

SYNTAX_ERROR = "SyntaxError"
UNKNOWN_KIND = "UnknownKind"
UNKNOWN_PIN = "UnknownPin"
DUPLICATE_NODE_ID = "DuplicateNodeId"
UNKNOWN_NODE = "UnknownNode"
BAD_LITERAL = "BadLiteral"

MAX_PARSE_ERRORS = 25


@dataclass(frozen=True, slots=True)
class SourceSpan:
    """Location of a token: 1-based line/column plus utf-8 byte offsets."""

    line: int
    col: int
    begin: int
    end: int


@dataclass(frozen=True, slots=True)
class ParseDiagnostic:
    code: str
    message: str
    span: SourceSpan

    def __str__(self) -> str:
        return f"{self.span.line}:{self.span.col}: {self.code}: {self.message}"


@dataclass(slots=True)
class ParseResult:
    graph: Optional[Graph]
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.graph is not None


_TOKEN_RE = re.compile(
    r"""
      (?P<ws>[ \t\r]+)
    | (?P<comment>\#.*)
    | (?P<arrow>->)
    | (?P<number>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    | (?P<string>"(?:[^"\\]|\\.)*")
    | (?P<badstring>"(?:[^"\\]|\\.)*)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<punct>[{}():,.=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str
    text: str
    span: SourceSpan


class _ParseState:
    def __init__(self, source: str):
        self.source = source
        self.diagnostics: list[ParseDiagnostic] = []
        self.stopped = False

    def error(self, code: str, message: str, span: SourceSpan) -> None:
        if len(self.diagnostics) >= MAX_PARSE_ERRORS:
            self.stopped = True
            return
        self.diagnostics.append(ParseDiagnostic(code, message, span))
        if len(self.diagnostics) >= MAX_PARSE_ERRORS:
            self.stopped = True


def _tokenize_line(state: _ParseState, line: str, line_no: int, byte_base: int) -> Optional[list[_Token]]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(line):
        m = _TOKEN_RE.match(line, pos)
        if m is None:
            span = _span_at(line, line_no, byte_base, pos, pos + 1)
            state.error(SYNTAX_ERROR, f"unexpected character {line[pos]!r}", span)
            return None
        kind = m.lastgroup
        if kind == "comment":
            break
        if kind == "badstring":
            span = _span_at(line, line_no, byte_base, m.start(), m.end())
            state.error(SYNTAX_ERROR, "unterminated string literal", span)
            return None
        if kind != "ws":
            span = _span_at(line, line_no, byte_base, m.start(), m.end())
            tokens.append(_Token(kind, m.group(), span))
        pos = m.end()
    return tokens


def _span_at(line: str, line_no: int, byte_base: int, start: int, end: int) -> SourceSpan:
    begin = byte_base + len(line[:start].encode("utf-8"))
    stop = byte_base + len(line[:end].encode("utf-8"))
    return SourceSpan(line_no, start + 1, begin, stop)


class _Cursor:
    """Token stream for one line, with single-token lookahead."""

    def __init__(self, tokens: list[_Token], line_no: int, line_len_bytes: int, byte_base: int):
        self.tokens = tokens
        self.pos = 0
        self.end_span = SourceSpan(
            line_no,
            (tokens[-1].span.col + len(tokens[-1].text)) if tokens else 1,
            byte_base + line_len_bytes,
            byte_base + line_len_bytes,
        )

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> Optional[_Token]:
        tok = self.peek()
        if tok is not None:
            self.pos += 1
        return tok

    def here(self) -> SourceSpan:
        tok = self.peek()
        return tok.span if tok is not None else self.end_span

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)


@dataclass(slots=True)
class _NodeDecl:
    node_id: str
    id_span: SourceSpan
    kind: str
    kind_span: SourceSpan
    params: list[tuple[str, SourceSpan, Any, SourceSpan]]


@dataclass(slots=True)
class _WireDecl:
    plane: str  # "exec" | "data"
    src_node: str
    src_pin: str
    src_span: SourceSpan
    dst_node: str
    dst_pin: str
    dst_span: SourceSpan


_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


def _unescape(state: _ParseState, token: _Token) -> Optional[str]:
    body = token.text[1:-1]
    out: list[str] = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            esc = body[i + 1]
            if esc not in _ESCAPES:
                state.error(BAD_LITERAL, f"unknown string escape '\\{esc}'", token.span)
                return None
            out.append(_ESCAPES[esc])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _parse_number(state: _ParseState, token: _Token) -> Optional[float]:
    value = float(token.text)
    if not math.isfinite(value):
        state.error(BAD_LITERAL, f"number {token.text} does not fit in a float", token.span)
        return None
    return value


def _parse_literal(state: _ParseState, cur: _Cursor) -> tuple[Any, Optional[SourceSpan]]:
    """Returns (value, span); value None with span None means failure."""
    tok = cur.peek()
    if tok is None:
        state.error(SYNTAX_ERROR, "expected a literal", cur.here())
        return None, None
    if tok.kind == "number":
        cur.next()
        value = _parse_number(state, tok)
        return (value, tok.span) if value is not None else (None, None)
    if tok.kind == "string":
        cur.next()
        value = _unescape(state, tok)
        return (value, tok.span) if value is not None else (None, None)
    if tok.kind == "ident" and tok.text in ("true", "false"):
        cur.next()
        return tok.text == "true", tok.span
    if tok.kind == "punct" and tok.text == "(":
        open_span = tok.span
        cur.next()
        comps: list[float] = []
        for i in range(3):
            num = cur.next()
            if num is None or num.kind != "number":
                state.error(BAD_LITERAL, "vector literal needs three numbers", open_span)
                return None, None
            value = _parse_number(state, num)
            if value is None:
                return None, None
            comps.append(value)
            if i < 2:
                comma = cur.next()
                if comma is None or comma.text != ",":
                    state.error(BAD_LITERAL, "expected ',' in vector literal", open_span)
                    return None, None
        close = cur.next()
        if close is None or close.text != ")":
            state.error(BAD_LITERAL, "unclosed vector literal", open_span)
            return None, None
        return tuple(comps), SourceSpan(
            open_span.line, open_span.col, open_span.begin, close.span.end
        )
    state.error(BAD_LITERAL, f"not a literal: {tok.text!r}", tok.span)
    return None, None


def _expect(state: _ParseState, cur: _Cursor, text: str, what: str) -> Optional[_Token]:
    tok = cur.next()
    if tok is None or tok.text != text:
        state.error(SYNTAX_ERROR, f"expected {what}", tok.span if tok else cur.here())
        return None
    return tok


def _expect_ident(state: _ParseState, cur: _Cursor, what: str) -> Optional[_Token]:
    tok = cur.next()
    if tok is None or tok.kind != "ident":
        state.error(SYNTAX_ERROR, f"expected {what}", tok.span if tok else cur.here())
        return None
    return tok


def _parse_ref(state: _ParseState, cur: _Cursor) -> Optional[tuple[str, str, SourceSpan]]:
    node_tok = _expect_ident(state, cur, "a node id")
    if node_tok is None:
        return None
    if _expect(state, cur, ".", "'.' between node and pin") is None:
        return None
    pin_tok = _expect_ident(state, cur, "a pin name")
    if pin_tok is None:
        return None
    span = SourceSpan(
        node_tok.span.line, node_tok.span.col, node_tok.span.begin, pin_tok.span.end
    )
    return node_tok.text, pin_tok.text, span


def _parse_node_decl(state: _ParseState, cur: _Cursor) -> Optional[_NodeDecl]:
    id_tok = _expect_ident(state, cur, "a node id")
    if id_tok is None:
        return None
    if _expect(state, cur, ":", "':' after node id") is None:
        return None
    kind_tok = _expect_ident(state, cur, "a node kind")
    if kind_tok is None:
        return None
    params: list[tuple[str, SourceSpan, Any, SourceSpan]] = []
    if not cur.at_end():
        if _expect(state, cur, "(", "'(' to open params") is None:
            return None
        closing = cur.peek()
        if closing is not None and closing.text == ")":
            cur.next()
        else:
            while True:
                name_tok = _expect_ident(state, cur, "a param name")
                if name_tok is None:
                    return None
                if _expect(state, cur, "=", "'=' after param name") is None:
                    return None
                value, value_span = _parse_literal(state, cur)
                if value_span is None:
                    return None
                params.append((name_tok.text, name_tok.span, value, value_span))
                sep = cur.next()
                if sep is not None and sep.text == ",":
                    continue
                if sep is not None and sep.text == ")":
                    break
                state.error(
                    SYNTAX_ERROR, "expected ',' or ')' in params", sep.span if sep else cur.here()
                )
                return None
    if not cur.at_end():
        state.error(SYNTAX_ERROR, "trailing tokens after node declaration", cur.here())
        return None
    return _NodeDecl(id_tok.text, id_tok.span, kind_tok.text, kind_tok.span, params)


def _parse_wire(state: _ParseState, cur: _Cursor, plane: str) -> Optional[_WireDecl]:
    src = _parse_ref(state, cur)
    if src is None:
        return None
    arrow = cur.next()
    if arrow is None or arrow.kind != "arrow":
        state.error(SYNTAX_ERROR, "expected '->'", arrow.span if arrow else cur.here())
        return None
    dst = _parse_ref(state, cur)
    if dst is None:
        return None
    if not cur.at_end():
        state.error(SYNTAX_ERROR, "trailing tokens after wire", cur.here())
        return None
    return _WireDecl(plane, src[0], src[1], src[2], dst[0], dst[1], dst[2])


def parse(source: str) -> ParseResult:
    """Parse one graph document. Returns the graph, or error diagnostics."""
    state = _ParseState(source)
    decls: list[_NodeDecl] = []
    wires: list[_WireDecl] = []
    graph_name: Optional[str] = None
    saw_header = False
    saw_close = False

    byte_base = 0
    line_no = 0
    for raw_line in source.split("\n"):
        line_no += 1
        line_bytes = len(raw_line.encode("utf-8"))
        if state.stopped:
            break
        tokens = _tokenize_line(state, raw_line, line_no, byte_base)
        byte_base += line_bytes + 1
        if tokens is None or not tokens:
            continue
        cur = _Cursor(tokens, line_no, line_bytes, byte_base - line_bytes - 1)
        head = tokens[0]

        if saw_close:
            state.error(SYNTAX_ERROR, "content after closing '}'", head.span)
            continue

        if not saw_header:
            if head.text != "graph":
                state.error(SYNTAX_ERROR, "expected 'graph <Name> {' header", head.span)
                continue
            cur.next()
            name_tok = _expect_ident(state, cur, "a graph name")
            if name_tok is None:
                continue
            if _expect(state, cur, "{", "'{' after graph name") is None:
                continue
            if not cur.at_end():
                state.error(SYNTAX_ERROR, "trailing tokens after '{'", cur.here())
                continue
            graph_name = name_tok.text
            saw_header = True
            continue

        if head.text == "}":
            cur.next()
            if not cur.at_end():
                state.error(SYNTAX_ERROR, "trailing tokens after '}'", cur.here())
            saw_close = True
            continue
        if head.text == "node":
            cur.next()
            decl = _parse_node_decl(state, cur)
            if decl is not None:
                decls.append(decl)
            continue
        if head.text in ("exec", "data"):
            cur.next()
            wire = _parse_wire(state, cur, head.text)
            if wire is not None:
                wires.append(wire)
            continue
        state.error(SYNTAX_ERROR, f"unknown statement '{head.text}'", head.span)

    if not state.stopped:
        if not saw_header:
            state.error(
                SYNTAX_ERROR, "missing 'graph <Name> {' header", SourceSpan(1, 1, 0, 0)
            )
        elif not saw_close:
            end = len(source.encode("utf-8"))
            state.error(
                SYNTAX_ERROR, "missing closing '}'", SourceSpan(line_no, 1, end, end)
            )

    nodes = _resolve_nodes(state, decls)
    exec_wires, data_wires = _resolve_wires(state, wires, nodes)

    if state.diagnostics:
        return ParseResult(None, state.diagnostics)
    graph = Graph(
        name=graph_name,
        nodes=list(nodes.values()),
        exec_wires=exec_wires,
        data_wires=data_wires,
    )
    return ParseResult(graph, [])


def _resolve_nodes(state: _ParseState, decls: list[_NodeDecl]) -> dict[str, Node]:
    nodes: dict[str, Node] = {}
    for decl in decls:
        if decl.node_id in nodes:
            state.error(
                DUPLICATE_NODE_ID,
                f"node id '{decl.node_id}' already declared",
                decl.id_span,
            )
            continue
        spec = CATALOG.get(decl.kind)
        if spec is None:
            state.error(UNKNOWN_KIND, f"no such node kind '{decl.kind}'", decl.kind_span)
            continue
        params: dict[str, Any] = {}
        bad = False
        for name, name_span, value, _value_span in decl.params:
            if name not in spec.params:
                state.error(
                    UNKNOWN_PIN, f"kind {decl.kind} has no param '{name}'", name_span
                )
                bad = True
                continue
            if name in params:
                state.error(SYNTAX_ERROR, f"duplicate param '{name}'", name_span)
                bad = True
                continue
            params[name] = value
        if bad:
            continue
        nodes[decl.node_id] = Node(decl.node_id, decl.kind, params)
    return nodes


def _resolve_wires(
    state: _ParseState, wires: list[_WireDecl], nodes: dict[str, Node]
) -> tuple[list[Wire], list[Wire]]:
    exec_wires: list[Wire] = []
    data_wires: list[Wire] = []
    for wire in wires:
        ok = True
        for node_id, span in ((wire.src_node, wire.src_span), (wire.dst_node, wire.dst_span)):
            if node_id not in nodes:
                state.error(UNKNOWN_NODE, f"wire references undeclared node '{node_id}'", span)
                ok = False
        if not ok:
            continue
        src_spec = nodes[wire.src_node].spec
        dst_spec = nodes[wire.dst_node].spec
        if wire.plane == "exec":
            # Source must be a real exec-out; the destination pin is checked
            # only when the kind has exec-ins at all, so that exec wires into
            # pure nodes parse and are rejected by the validator instead.
            if wire.src_pin not in src_spec.exec_out:
                state.error(
                    UNKNOWN_PIN,
                    f"kind {src_spec.name} has no exec-out pin '{wire.src_pin}'",
                    wire.src_span,
                )
                continue
            if dst_spec.exec_in and wire.dst_pin not in dst_spec.exec_in:
                state.error(
                    UNKNOWN_PIN,
                    f"kind {dst_spec.name} has no exec-in pin '{wire.dst_pin}'",
                    wire.dst_span,
                )
                continue
            exec_wires.append(Wire(wire.src_node, wire.src_pin, wire.dst_node, wire.dst_pin))
        else:
            if wire.src_pin not in src_spec.data_out and wire.src_pin not in src_spec.exec_out:
                state.error(
                    UNKNOWN_PIN,
                    f"kind {src_spec.name} has no data-out pin '{wire.src_pin}'",
                    wire.src_span,
                )
                continue
            if wire.dst_pin not in dst_spec.data_in and wire.dst_pin not in dst_spec.exec_in:
                state.error(
                    UNKNOWN_PIN,
                    f"kind {dst_spec.name} has no data-in pin '{wire.dst_pin}'",
                    wire.dst_span,
                )
                continue
            data_wires.append(Wire(wire.src_node, wire.src_pin, wire.dst_node, wire.dst_pin))
    return exec_wires, data_wires


# -- canonical output ---------------------------------------------------------


def _canonical_order(graph: Graph) -> tuple[list[Node], list[Wire], list[Wire]]:
    exec_sorted = sorted(graph.exec_wires, key=Wire.sort_key)
    data_sorted = sorted(graph.data_wires, key=Wire.sort_key)
    order: list[str] = []
    seen: set[str] = set()
    for wire in [*exec_sorted, *data_sorted]:
        for node_id in (wire.src_node, wire.dst_node):
            if node_id not in seen:
                seen.add(node_id)
                order.append(node_id)
    for node_id in sorted(node.id for node in graph.nodes):
        if node_id not in seen:
            seen.add(node_id)
            order.append(node_id)
    by_id = {node.id: node for node in graph.nodes}
    nodes = [by_id[node_id] for node_id in order if node_id in by_id]
    return nodes, exec_sorted, data_sorted


_ESCAPE_OUT = {'"': '\\"', "\\": "\\\\", "\n": "\\n", "\t": "\\t"}


def _format_literal(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        # Only the escapes the tokenizer understands; everything else,
        # non-ascii included, is written verbatim.
        return '"' + "".join(_ESCAPE_OUT.get(ch, ch) for ch in value) + '"'
    if isinstance(value, tuple):
        return f"({repr(value[0])}, {repr(value[1])}, {repr(value[2])})"
    raise TypeError(f"unsupported literal: {value!r}")


def _ordered_params(node: Node) -> list[tuple[str, Any]]:
    spec = CATALOG.get(node.kind)
    if spec is None:
        return sorted(node.params.items())
    ordered = [(name, node.params[name]) for name in spec.params if name in node.params]
    extras = [(n, v) for n, v in sorted(node.params.items()) if n not in spec.params]
    return ordered + extras


def serialize(graph: Graph) -> str:
    """Canonical text form: equal graphs serialize to identical bytes."""
    nodes, exec_sorted, data_sorted = _canonical_order(graph)
    lines = [f"graph {graph.name} {{"]
    for node in nodes:
        params = _ordered_params(node)
        suffix = ""
        if params:
            inner = ", ".join(f"{name}={_format_literal(value)}" for name, value in params)
            suffix = f" ({inner})"
        lines.append(f"  node {node.id} : {node.kind}{suffix}")
    for wire in exec_sorted:
        lines.append(f"  exec {wire.src_node}.{wire.src_pin} -> {wire.dst_node}.{wire.dst_pin}")
    for wire in data_sorted:
        lines.append(f"  data {wire.src_node}.{wire.src_pin} -> {wire.dst_node}.{wire.dst_pin}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json_document(graph: Graph) -> dict:
    """The graph as a JSON-ready dict, schema ``fgjson/1``, canonical order."""
    nodes, exec_sorted, data_sorted = _canonical_order(graph)
    node_docs = []
    for node in nodes:
        doc: dict[str, Any] = {"id": node.id, "kind": node.kind}
        params = _ordered_params(node)
        if params:
            doc["params"] = {
                name: (list(value) if isinstance(value, tuple) else value)
                for name, value in params
            }
        node_docs.append(doc)
    return {
        "format": "fgjson/1",
        "name": graph.name,
        "nodes": node_docs,
        "exec": [[w.src_node, w.src_pin, w.dst_node, w.dst_pin] for w in exec_sorted],
        "data": [[w.src_node, w.src_pin, w.dst_node, w.dst_pin] for w in data_sorted],
    }


def to_json_text(graph: Graph) -> str:
    return json.dumps(to_json_document(graph), indent=2) + "\n"


# -- file helpers -------------------------------------------------------------


def parse_file(path: Union[str, Path]) -> ParseResult:
    return parse(Path(path).read_text(encoding="utf-8"))


def load_validated(path: Union[str, Path]) -> Graph:
    """Parse and validate a graph file; any error raises ValidationFailed."""
    result = parse_file(path)
    if not result.ok:
        raise ValidationFailed(str(path), result.diagnostics)
    diags = validate(result.graph)
    if diags:
        raise ValidationFailed(str(path), diags)
    return result.graph
