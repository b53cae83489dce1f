"""Textual game format: parser, canonical serializer and DOT export.

The surface syntax is s-expressions with a one-line player header::

    players i j             ; comment to end of line
    (node j
      (leaf 1 0)
      (node i
        (leaf -inf -inf)
        (leaf :win 0 1)))

Payoff values are integers, ``p/q`` rationals, decimals (converted exactly;
``0.1`` becomes ``1/10``) or ``inf``/``-inf``. ``(contract p sub)`` wraps a
subgame in a commitment move for ``p``. The serializer always emits reduced
rationals, so serialized text is canonical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    ArityError,
    DuplicatePlayerError,
    ParseError,
    UnknownPlayerError,
)
from .rational import NEG_INF, POS_INF, ExtendedRational
from .trees import (
    ContractNode,
    Decision,
    GameTree,
    Leaf,
    PlayerId,
    validate,
)

FILE_EXTENSION = ".game"


@dataclass(frozen=True)
class GameDocument:
    name: str
    players: tuple[PlayerId, ...]
    root: GameTree
    spans: dict[int, tuple[int, int]] = field(default_factory=dict, compare=False)

    @property
    def player_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.players)

    def player(self, name: str) -> PlayerId:
        for p in self.players:
            if p.name == name:
                return p
        raise KeyError(f"no player named {name!r}")


_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | set("0123456789'")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def loc(self):
        return (self.line, self.col)

    def eof(self):
        return self.pos >= len(self.text)

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def advance(self):
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def skip_blank(self, stop_at_newline=False):
        while not self.eof():
            ch = self.peek()
            if ch == ";":
                while not self.eof() and self.peek() != "\n":
                    self.advance()
            elif ch == "\n":
                if stop_at_newline:
                    return
                self.advance()
            elif ch.isspace():
                self.advance()
            else:
                return

    def error(self, message):
        raise ParseError(message, self.line, self.col)

    def read_ident(self):
        if self.peek() not in _IDENT_START:
            self.error(f"expected identifier, found {self.peek()!r}")
        chars = []
        while not self.eof() and self.peek() in _IDENT_CONT:
            chars.append(self.advance())
        return "".join(chars)

    def read_value(self) -> ExtendedRational:
        line, col = self.loc()
        chars = []
        while not self.eof() and (self.peek() not in "() \t\r\n;"):
            chars.append(self.advance())
        text = "".join(chars)
        if text in ("inf", "+inf"):
            return POS_INF
        if text == "-inf":
            return NEG_INF
        try:
            return ExtendedRational(str(Fraction(text)))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"expected payoff value, found {text!r}", line, col) from None


def parse(text: str, name: str = "game") -> GameDocument:
    """Parse a game document; errors carry the offending line and column."""
    sc = _Scanner(text)
    sc.skip_blank()
    kw_loc = sc.loc()
    kw = sc.read_ident() if sc.peek() in _IDENT_START else ""
    if kw != "players":
        raise ParseError("expected 'players' header", *kw_loc)
    names: list[str] = []
    while True:
        sc.skip_blank(stop_at_newline=True)
        if sc.eof() or sc.peek() == "\n":
            break
        loc = sc.loc()
        if sc.peek() not in _IDENT_START:
            sc.error(f"expected player name, found {sc.peek()!r}")
        n = sc.read_ident()
        if n in names:
            raise DuplicatePlayerError(f"player {n!r} declared twice", *loc)
        names.append(n)
    if not names:
        sc.error("header declares no players")
    players = tuple(PlayerId(i, n) for i, n in enumerate(names))
    index_of = {p.name: p.index for p in players}

    spans: dict[int, tuple[int, int]] = {}
    counter = [0]

    def parse_sexpr() -> GameTree:
        sc.skip_blank()
        if sc.eof():
            sc.error("expected '(', found end of input")
        if sc.peek() != "(":
            sc.error(f"expected '(', found {sc.peek()!r}")
        open_loc = sc.loc()
        sc.advance()
        sc.skip_blank()
        head_loc = sc.loc()
        head = sc.read_ident()
        uid = counter[0]
        counter[0] += 1
        spans[uid] = open_loc

        if head == "leaf":
            label = None
            sc.skip_blank()
            if sc.peek() == ":":
                sc.advance()
                label = sc.read_ident()
            values: list[ExtendedRational] = []
            while True:
                sc.skip_blank()
                if sc.eof():
                    sc.error("unterminated leaf, expected ')'")
                if sc.peek() == ")":
                    sc.advance()
                    break
                values.append(sc.read_value())
            if not values:
                raise ParseError("leaf has no payoff values", *open_loc)
            if len(values) != len(players):
                raise ArityError(
                    f"leaf has {len(values)} payoffs for {len(players)} players",
                    *open_loc,
                )
            return Leaf(uid=uid, payoffs=tuple(values), label=label, origin=uid)

        if head in ("node", "contract"):
            sc.skip_blank()
            owner_loc = sc.loc()
            owner_name = sc.read_ident()
            if owner_name not in index_of:
                raise UnknownPlayerError(f"unknown player {owner_name!r}", *owner_loc)
            owner = index_of[owner_name]
            children: list[GameTree] = []
            while True:
                sc.skip_blank()
                if sc.eof():
                    sc.error("unterminated form, expected ')'")
                if sc.peek() == ")":
                    sc.advance()
                    break
                children.append(parse_sexpr())
            if head == "contract":
                if len(children) != 1:
                    raise ParseError(
                        f"contract must wrap exactly one subgame, found {len(children)}",
                        *open_loc,
                    )
                return ContractNode(uid=uid, owner=owner, inner=children[0])
            if len(children) < 2:
                raise ParseError(
                    f"node needs at least two children, found {len(children)}",
                    *open_loc,
                )
            return Decision(uid=uid, owner=owner, children=tuple(children))

        raise ParseError(f"expected 'leaf', 'node' or 'contract', found {head!r}", *head_loc)

    root = parse_sexpr()
    sc.skip_blank()
    if not sc.eof():
        sc.error(f"unexpected trailing input {sc.peek()!r}")
    validate(root, players)
    return GameDocument(name=name, players=players, root=root, spans=spans)


def parse_file(path, name: str | None = None) -> GameDocument:
    import os

    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if name is None:
        name = os.path.splitext(os.path.basename(str(path)))[0]
    return parse(text, name=name)


def _format_value(v: ExtendedRational) -> str:
    return str(v)


def _serialize_node(n: GameTree, names: tuple[str, ...], indent: int, out: list[str]):
    pad = "  " * indent
    if isinstance(n, Leaf):
        label = f":{n.label} " if n.label else ""
        payoffs = " ".join(_format_value(v) for v in n.payoffs)
        out.append(f"{pad}(leaf {label}{payoffs})")
        return
    if isinstance(n, ContractNode):
        out.append(f"{pad}(contract {names[n.owner]}")
        _serialize_node(n.inner, names, indent + 1, out)
        out[-1] += ")"
        return
    out.append(f"{pad}(node {names[n.owner]}")
    for c in n.children:
        _serialize_node(c, names, indent + 1, out)
    out[-1] += ")"


def serialize(doc: GameDocument) -> str:
    """Canonical text form; round-trips through parse()."""
    lines = ["players " + " ".join(doc.player_names)]
    _serialize_node(doc.root, doc.player_names, 0, lines)
    return "\n".join(lines) + "\n"


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(
    doc: GameDocument,
    spe_profile=None,
    highlight_leaves=None,
    region=None,
    title: str | None = None,
) -> str:
    """Emit the game as a DOT digraph.

    ``spe_profile`` (a StrategyProfile) thickens each node's chosen edge the
    way the figures print equilibria in bold. ``highlight_leaves`` maps leaf
    uids to colors (used for attack outcomes); ``region`` is a set of leaf
    uids drawn with a filled background.
    """
    choices = getattr(spe_profile, "choices", spe_profile) or {}
    highlight_leaves = highlight_leaves or {}
    region = region or set()
    lines = [f"digraph {_dot_quote(title or doc.name)} {{"]
    lines.append("  node [fontname=\"Helvetica\"];")

    def rec(n: GameTree):
        if isinstance(n, Leaf):
            text = ", ".join(str(v) for v in n.payoffs)
            label = f"{n.label}\\n({text})" if n.label else f"({text})"
            attrs = [f"label={_dot_quote(label)}", "shape=box"]
            if n.uid in region:
                attrs.append("style=filled")
                attrs.append("fillcolor=lightgrey")
            if n.uid in highlight_leaves:
                attrs.append(f"color={_dot_quote(highlight_leaves[n.uid])}")
                attrs.append("penwidth=2.4")
            lines.append(f"  n{n.uid} [{', '.join(attrs)}];")
            return
        if isinstance(n, ContractNode):
            owner = doc.player_names[n.owner]
            lines.append(
                f"  n{n.uid} [label={_dot_quote(owner)}, shape=circle, peripheries=2];"
            )
            lines.append(f"  n{n.uid} -> n{n.inner.uid};")
            rec(n.inner)
            return
        owner = doc.player_names[n.owner]
        lines.append(f"  n{n.uid} [label={_dot_quote(owner)}, shape=circle];")
        chosen = choices.get(n.uid)
        for idx, c in enumerate(n.children):
            attrs = " [penwidth=2.4]" if chosen == idx else ""
            lines.append(f"  n{n.uid} -> n{c.uid}{attrs};")
        for c in n.children:
            rec(c)

    rec(doc.root)
    lines.append("}")
    return "\n".join(lines) + "\n"
