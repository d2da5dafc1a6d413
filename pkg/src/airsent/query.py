"""Boolean search query parsing, rendering, and record matching.

Grammar (Twitter-style): implicit adjacency is AND, AND binds tighter
than OR, `-` negates, `lang:xx` filters language, and `-is:retweet`
(or `-is-retweet`) excludes retweets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .records import TweetRecord


class QuerySyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class Term:
    text: str

    def __post_init__(self):
        if not self.text:
            raise ValueError("empty term")
        object.__setattr__(self, "text", self.text.lower())


@dataclass(frozen=True)
class Mention:
    handle: str

    def __post_init__(self):
        object.__setattr__(self, "handle", self.handle.lower())


@dataclass(frozen=True)
class LangFilter:
    code: str

    def __post_init__(self):
        object.__setattr__(self, "code", self.code.lower())


@dataclass(frozen=True)
class RetweetExclusion:
    pass


@dataclass(frozen=True)
class Not:
    child: "Node"


@dataclass(frozen=True)
class And:
    children: tuple["Node", ...]


@dataclass(frozen=True)
class Or:
    children: tuple["Node", ...]


Node = Term | Mention | LangFilter | RetweetExclusion | Not | And | Or


@dataclass(frozen=True)
class Query:
    root: Node
    source: str = ""


_TOKEN_RE = re.compile(r"\(|\)|-|[^\s()\-][^\s()]*")


@dataclass(frozen=True)
class _Tok:
    text: str
    offset: int


def _lex(source: str) -> list[_Tok]:
    tokens = []
    pos = 0
    while pos < len(source):
        if source[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise QuerySyntaxError(f"unexpected character {source[pos]!r}", pos)
        tokens.append(_Tok(m.group(0), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _lex(source)
        self.i = 0

    def peek(self) -> _Tok | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise QuerySyntaxError("unexpected end of query", len(self.source))
        self.i += 1
        return tok

    def parse(self) -> Node:
        node = self.or_expr()
        tok = self.peek()
        if tok is not None:
            raise QuerySyntaxError(f"unexpected token {tok.text!r}", tok.offset)
        return node

    def or_expr(self) -> Node:
        parts = [self.and_expr()]
        while True:
            tok = self.peek()
            if tok is not None and tok.text.upper() == "OR":
                self.next()
                parts.append(self.and_expr())
            else:
                break
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def and_expr(self) -> Node:
        parts = [self.unary()]
        while True:
            tok = self.peek()
            if tok is None or tok.text == ")" or tok.text.upper() == "OR":
                break
            if tok.text.upper() == "AND":
                self.next()
                tok = self.peek()
                if tok is None or tok.text == ")" or tok.text.upper() in ("AND", "OR"):
                    offset = tok.offset if tok else len(self.source)
                    raise QuerySyntaxError("dangling AND", offset)
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Node:
        tok = self.peek()
        if tok is None:
            raise QuerySyntaxError("expected operand", len(self.source))
        if tok.text == "-":
            self.next()
            nxt = self.peek()
            if nxt is not None and nxt.text.lower() in ("is:retweet", "is-retweet"):
                self.next()
                return RetweetExclusion()
            return Not(self.unary())
        if tok.text.upper() == "NOT":
            self.next()
            return Not(self.unary())
        return self.primary()

    def primary(self) -> Node:
        tok = self.next()
        text = tok.text
        if text == "(":
            node = self.or_expr()
            closing = self.peek()
            if closing is None or closing.text != ")":
                raise QuerySyntaxError("unbalanced parenthesis", tok.offset)
            self.next()
            return node
        if text == ")":
            raise QuerySyntaxError("unbalanced parenthesis", tok.offset)
        if text.upper() in ("AND", "OR", "NOT"):
            raise QuerySyntaxError(f"dangling operator {text}", tok.offset)
        lower = text.lower()
        if lower.startswith("@") and len(lower) > 1:
            return Mention(lower[1:])
        if lower.startswith("lang:"):
            code = lower[len("lang:"):]
            if not code:
                raise QuerySyntaxError("empty lang filter", tok.offset)
            return LangFilter(code)
        # strip sigils that carry no search meaning here
        word = re.sub(r"[^\w]", "", lower)
        if not word:
            raise QuerySyntaxError(f"empty operand {text!r}", tok.offset)
        return Term(word)


def parse_query(source: str) -> Query:
    if not source or not source.strip():
        raise QuerySyntaxError("empty query", 0)
    return Query(root=_Parser(source).parse(), source=source)


def render(query: Query) -> str:
    """Canonical pretty-printer; parse(render(parse(s))) is a fixed point."""
    return _render(query.root, parent=None)


def _render(node: Node, parent: str | None) -> str:
    if isinstance(node, Term):
        return node.text
    if isinstance(node, Mention):
        return "@" + node.handle
    if isinstance(node, LangFilter):
        return "lang:" + node.code
    if isinstance(node, RetweetExclusion):
        return "-is:retweet"
    if isinstance(node, Not):
        return "NOT " + _render_child(node.child, "not")
    if isinstance(node, And):
        body = " ".join(_render_child(c, "and") for c in node.children)
        return f"({body})" if parent == "not" else body
    if isinstance(node, Or):
        body = " OR ".join(_render_child(c, "or") for c in node.children)
        return f"({body})" if parent in ("and", "not") else body
    raise TypeError(f"unknown node {node!r}")


def _render_child(node: Node, parent: str) -> str:
    return _render(node, parent)


_WORD_SPLIT = re.compile(r"[^a-z0-9_]+")


def matches(query: Query, record: TweetRecord) -> bool:
    return _eval(query.root, record)


def _eval(node: Node, record: TweetRecord) -> bool:
    if isinstance(node, Term):
        tokens = _WORD_SPLIT.split(record.text.lower())
        return node.text in tokens
    if isinstance(node, Mention):
        pattern = r"@" + re.escape(node.handle) + r"(?!\w)"
        return re.search(pattern, record.text.lower()) is not None
    if isinstance(node, LangFilter):
        return record.lang.lower() == node.code
    if isinstance(node, RetweetExclusion):
        return not record.is_retweet
    if isinstance(node, Not):
        return not _eval(node.child, record)
    if isinstance(node, And):
        return all(_eval(c, record) for c in node.children)
    if isinstance(node, Or):
        return any(_eval(c, record) for c in node.children)
    raise TypeError(f"unknown node {node!r}")
