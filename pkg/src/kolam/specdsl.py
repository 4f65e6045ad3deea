"""Mapping-spec language: a line-oriented recursive-descent parser.

    kolam 3x3
    symmetry rot180
    pigment indigo 0.2 0.3 0.6
    map sleep_hours -> dot_size linear 4..9 => 0.18..0.50 clamp
    map mood -> color { calm: rice_white, positive: turmeric, stressed: kumkum }
    map activity -> fill { none: empty, yoga: hatch_h/dense }

Each line holds one declaration, so a syntax error costs only its own line:
the parser records a diagnostic and resumes at the next line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from .errors import KolamError
from .geometry import RenderParams, max_dot_radius
from .grid import GridSpec, SymmetryGroup
from .mapping import (
    CHANNEL_ORDER,
    BUILTIN_PIGMENTS,
    Binding,
    CategoryMap,
    Channel,
    Density,
    Fill,
    FillKind,
    LinearScale,
    LineType,
    MappingSpec,
    Pigment,
    format_number,
)

SYMMETRY_NAMES = ("none", "h", "v", "rot180", "d4")
FILL_KINDS = tuple(k.value for k in FillKind)
DENSITIES = tuple(d.value for d in Density)


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class SpecError(KolamError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


# ---------------------------------------------------------------------------
# AST; positions are excluded from equality so format round-trips compare equal


@dataclass(frozen=True)
class GridDecl:
    width: int
    height: int
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SymmetryDecl:
    name: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class PigmentDecl:
    name: str
    rgb: tuple[float, float, float]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Ident:
    name: str


@dataclass(frozen=True)
class FillSpec:
    kind: str
    density: str | None = None


PairValue = Union[Ident, int, FillSpec]


@dataclass(frozen=True)
class Pair:
    key: str
    value: PairValue
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)  # column of the value


@dataclass(frozen=True)
class LinearNode:
    lo: float
    hi: float
    rlo: float
    rhi: float
    clamp: bool = False
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CatMapNode:
    pairs: tuple[Pair, ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MapDecl:
    field: str
    channel: str
    scale: Union[LinearNode, CatMapNode]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)
    channel_column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SpecAst:
    grid: GridDecl | None = None
    symmetry: SymmetryDecl | None = None
    pigments: tuple[PigmentDecl, ...] = ()
    maps: tuple[MapDecl, ...] = ()


# ---------------------------------------------------------------------------
# lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t]+)
  | (?P<comment>\#.*)
  | (?P<dims>\d+x\d+)
  | (?P<num>-?\d+(?:\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|=>|\.\.|[{}:,/])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "num", "x", "op", "end"
    text: str
    line: int
    column: int


class _LineError(Exception):
    def __init__(self, message: str, column: int):
        self.message = message
        self.column = column


def _tokenize(text: str, lineno: int) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise _LineError(f"unexpected character {text[pos]!r}", pos + 1)
        kind = m.lastgroup
        col = pos + 1
        if kind == "dims":
            w, h = m.group().split("x")
            tokens.append(Token("num", w, lineno, col))
            tokens.append(Token("x", "x", lineno, col + len(w)))
            tokens.append(Token("num", h, lineno, col + len(w) + 1))
        elif kind in ("num", "ident", "op"):
            tokens.append(Token(kind, m.group(), lineno, col))
        pos = m.end()
    tokens.append(Token("end", "", lineno, len(text) + 1))
    return tokens


# ---------------------------------------------------------------------------
# parser


class _LineParser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise _LineError(message, tok.column)

    def describe(self, tok: Token) -> str:
        return "end of line" if tok.kind == "end" else repr(tok.text)

    def expect_op(self, op: str) -> Token:
        if self.tok.kind == "op" and self.tok.text == op:
            return self.advance()
        self.fail(f"expected '{op}', found {self.describe(self.tok)}")

    def expect_ident(self, what: str) -> Token:
        if self.tok.kind == "ident":
            return self.advance()
        self.fail(f"expected {what}, found {self.describe(self.tok)}")

    def expect_int(self, what: str) -> tuple[int, Token]:
        tok = self.tok
        if tok.kind == "num" and re.fullmatch(r"\d+", tok.text):
            self.advance()
            return int(tok.text), tok
        self.fail(f"expected {what}, found {self.describe(tok)}")

    def expect_num(self, what: str) -> float:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return float(tok.text)
        self.fail(f"expected {what}, found {self.describe(tok)}")

    def expect_end(self) -> None:
        if self.tok.kind != "end":
            self.fail(f"unexpected {self.describe(self.tok)} at end of declaration")

    # line := grid | symmetry | mapdecl | pigment
    def declaration(self):
        head = self.tok
        if head.kind != "ident":
            self.fail(f"expected a declaration (kolam, symmetry, map, pigment), found {self.describe(head)}")
        keyword = head.text
        if keyword == "kolam":
            return self.grid()
        if keyword == "symmetry":
            return self.symmetry()
        if keyword == "map":
            return self.mapdecl()
        if keyword == "pigment":
            return self.pigment()
        self.fail(f"unknown declaration {keyword!r}")

    def grid(self) -> GridDecl:
        head = self.advance()
        width, wtok = self.expect_int("grid width")
        if not (self.tok.kind == "x" or (self.tok.kind == "ident" and self.tok.text == "x")):
            self.fail(f"expected 'x' between grid dimensions, found {self.describe(self.tok)}")
        self.advance()
        height, htok = self.expect_int("grid height")
        self.expect_end()
        if width < 1:
            self.fail("grid width must be at least 1", wtok)
        if height < 1:
            self.fail("grid height must be at least 1", htok)
        return GridDecl(width, height, head.line, head.column)

    def symmetry(self) -> SymmetryDecl:
        head = self.advance()
        tok = self.tok
        if tok.kind != "ident" or tok.text not in SYMMETRY_NAMES:
            self.fail(f"unknown symmetry {tok.text!r} (expected one of {', '.join(SYMMETRY_NAMES)})"
                      if tok.kind != "end" else "expected a symmetry name")
        self.advance()
        self.expect_end()
        return SymmetryDecl(tok.text, head.line, head.column)

    def pigment(self) -> PigmentDecl:
        head = self.advance()
        name = self.expect_ident("pigment name").text
        rgb = tuple(self.expect_num(f"{c} component") for c in ("red", "green", "blue"))
        self.expect_end()
        return PigmentDecl(name, rgb, head.line, head.column)

    def mapdecl(self) -> MapDecl:
        head = self.advance()
        field_name = self.expect_ident("field name").text
        self.expect_op("->")
        ctok = self.tok
        if ctok.kind != "ident":
            self.fail(f"expected a channel, found {self.describe(ctok)}")
        if ctok.text not in {c.value for c in Channel}:
            self.fail(f"unknown channel {ctok.text!r}")
        self.advance()
        scale = self.scale()
        self.expect_end()
        return MapDecl(field_name, ctok.text, scale, head.line, head.column, ctok.column)

    # scale := linear | catmap
    def scale(self):
        tok = self.tok
        if tok.kind == "ident" and tok.text == "linear":
            return self.linear()
        if tok.kind == "op" and tok.text == "{":
            return self.catmap()
        self.fail(f"expected 'linear' or '{{', found {self.describe(tok)}")

    def linear(self) -> LinearNode:
        head = self.advance()
        lo = self.expect_num("domain start")
        self.expect_op("..")
        hi = self.expect_num("domain end")
        self.expect_op("=>")
        rlo = self.expect_num("range start")
        self.expect_op("..")
        rhi = self.expect_num("range end")
        clamp = False
        if self.tok.kind == "ident" and self.tok.text == "clamp":
            self.advance()
            clamp = True
        if not lo < hi:
            raise _LineError(f"linear domain {format_number(lo)}..{format_number(hi)} is empty", head.column)
        if not rlo <= rhi:
            raise _LineError(f"linear range {format_number(rlo)}..{format_number(rhi)} is reversed", head.column)
        return LinearNode(lo, hi, rlo, rhi, clamp, head.line, head.column)

    def catmap(self) -> CatMapNode:
        head = self.expect_op("{")
        pairs = [self.pair()]
        while self.tok.kind == "op" and self.tok.text == ",":
            self.advance()
            pairs.append(self.pair())
        self.expect_op("}")
        return CatMapNode(tuple(pairs), head.line, head.column)

    def pair(self) -> Pair:
        key = self.expect_ident("category name")
        self.expect_op(":")
        vtok = self.tok
        if vtok.kind == "num":
            value, _ = self.expect_int("integer or name")
            return Pair(key.text, value, vtok.line, vtok.column)
        name = self.expect_ident("value").text
        if self.tok.kind == "op" and self.tok.text == "/":
            if name not in FILL_KINDS:
                self.fail(f"unknown fill kind {name!r}", vtok)
            self.advance()
            dtok = self.tok
            if dtok.kind != "ident" or dtok.text not in DENSITIES:
                self.fail(f"expected a density ({', '.join(DENSITIES)}), found {self.describe(dtok)}")
            self.advance()
            return Pair(key.text, FillSpec(name, dtok.text), vtok.line, vtok.column)
        return Pair(key.text, Ident(name), vtok.line, vtok.column)


def parse(source: str) -> tuple[SpecAst | None, list[Diagnostic]]:
    """Parse spec text.  The AST is None whenever any error was reported."""
    diagnostics: list[Diagnostic] = []
    grid = symmetry = None
    pigments, maps = [], []
    for lineno, text in enumerate(source.splitlines(), start=1):
        try:
            tokens = _tokenize(text, lineno)
            if tokens[0].kind == "end":
                continue
            node = _LineParser(tokens).declaration()
        except _LineError as err:
            diagnostics.append(Diagnostic("error", err.message, lineno, err.column))
            continue
        if isinstance(node, GridDecl):
            if grid is not None:
                diagnostics.append(Diagnostic("error", f"duplicate grid declaration (first on line {grid.line})",
                                              lineno, node.column))
                continue
            grid = node
        elif isinstance(node, SymmetryDecl):
            if symmetry is not None:
                diagnostics.append(Diagnostic(
                    "error", f"duplicate symmetry declaration (first on line {symmetry.line})", lineno, node.column))
                continue
            symmetry = node
        elif isinstance(node, PigmentDecl):
            pigments.append(node)
        else:
            maps.append(node)
    if any(d.severity == "error" for d in diagnostics):
        return None, diagnostics
    return SpecAst(grid, symmetry, tuple(pigments), tuple(maps)), diagnostics


# ---------------------------------------------------------------------------
# lowering


def lower(ast: SpecAst, params: RenderParams | None = None) -> tuple[MappingSpec | None, list[Diagnostic]]:
    params = params or RenderParams()
    diags: list[Diagnostic] = []

    def error(message: str, line: int, column: int) -> None:
        diags.append(Diagnostic("error", message, line, column))

    grid = None
    if ast.grid is None:
        error("missing grid declaration (e.g. 'kolam 3x3')", 1, 1)
    else:
        grid = GridSpec(ast.grid.width, ast.grid.height)

    symmetry = SymmetryGroup.NONE
    if ast.symmetry is not None:
        symmetry = SymmetryGroup.parse(ast.symmetry.name)
        if symmetry is SymmetryGroup.D4 and grid is not None and not grid.is_square:
            error(f"symmetry d4 needs a square grid, got {grid}", ast.symmetry.line, ast.symmetry.column)

    pigments = []
    seen_pigments: dict[str, int] = {}
    for decl in ast.pigments:
        if decl.name in seen_pigments:
            error(f"pigment {decl.name!r} declared twice (first on line {seen_pigments[decl.name]})",
                  decl.line, decl.column)
            continue
        seen_pigments[decl.name] = decl.line
        if not all(0.0 <= c <= 1.0 for c in decl.rgb):
            error(f"pigment {decl.name!r} components must lie in [0, 1]", decl.line, decl.column)
            continue
        pigments.append(Pigment(decl.name, decl.rgb))
    palette = dict(BUILTIN_PIGMENTS)
    palette.update((p.name, p) for p in pigments)

    bindings = []
    bound: dict[str, int] = {}
    for decl in ast.maps:
        if decl.channel in bound:
            error(f"channel {decl.channel!r} bound twice (first on line {bound[decl.channel]})",
                  decl.line, decl.channel_column)
            continue
        bound[decl.channel] = decl.line
        channel = Channel(decl.channel)
        scale = _lower_scale(decl, channel, palette, params, error)
        if scale is not None:
            bindings.append(Binding(decl.field, channel, scale))

    if diags:
        return None, diags
    return MappingSpec(grid, symmetry, tuple(bindings), tuple(pigments)), diags


def _lower_scale(decl: MapDecl, channel: Channel, palette, params: RenderParams, error):
    node = decl.scale
    if channel is Channel.DOT_SIZE:
        if not isinstance(node, LinearNode):
            error("channel 'dot_size' needs a linear scale", node.line, node.column)
            return None
        ceiling = max_dot_radius(params.stroke_width, params.half_gap)
        if node.rlo <= 0:
            error(f"dot_size range must start above 0, got {format_number(node.rlo)}", node.line, node.column)
            return None
        if not node.rhi < ceiling:
            error(
                f"dot_size range {format_number(node.rlo)}..{format_number(node.rhi)} exceeds the dot radius "
                f"ceiling 1/sqrt(2) - half gap - stroke/2 = {ceiling:.4f}",
                node.line, node.column,
            )
            return None
        return LinearScale(node.lo, node.hi, node.rlo, node.rhi, node.clamp)

    if isinstance(node, LinearNode):
        error(f"channel {channel.value!r} needs a category map, not a linear scale", node.line, node.column)
        return None

    pairs = []
    keys: set[str] = set()
    ok = True
    for pair in node.pairs:
        if pair.key in keys:
            error(f"category {pair.key!r} mapped twice", pair.line, pair.column)
            ok = False
            continue
        keys.add(pair.key)
        value = _lower_value(channel, pair, palette, error)
        if value is None:
            ok = False
        else:
            pairs.append((pair.key, value))
    return CategoryMap(tuple(pairs)) if ok else None


def _lower_value(channel: Channel, pair: Pair, palette, error):
    v = pair.value
    if channel is Channel.PATTERN:
        if isinstance(v, int):
            return v
        error("pattern values must be catalog indices (integers)", pair.line, pair.column)
        return None
    if channel is Channel.FILL:
        if isinstance(v, FillSpec):
            return Fill(FillKind(v.kind), Density(v.density or Density.MEDIUM.value))
        if isinstance(v, Ident) and v.name in FILL_KINDS:
            return Fill(FillKind(v.name))
        error(f"unknown fill kind {_show(v)} (expected one of {', '.join(FILL_KINDS)})", pair.line, pair.column)
        return None
    if isinstance(v, FillSpec):
        error(f"fill pattern {_show(v)} is only valid for channel 'fill'", pair.line, pair.column)
        return None
    if channel is Channel.LINE_TYPE:
        names = tuple(t.value for t in LineType)
        if isinstance(v, Ident) and v.name in names:
            return v.name
        error(f"unknown line type {_show(v)} (expected one of {', '.join(names)})", pair.line, pair.column)
        return None
    # color
    if isinstance(v, Ident) and v.name in palette:
        return v.name
    error(f"unknown pigment {_show(v)}", pair.line, pair.column)
    return None


def _show(v: PairValue) -> str:
    if isinstance(v, Ident):
        return repr(v.name)
    if isinstance(v, FillSpec):
        return repr(_format_value(v))
    return repr(str(v))


# ---------------------------------------------------------------------------
# formatter


def _format_value(v: PairValue) -> str:
    if isinstance(v, Ident):
        return v.name
    if isinstance(v, FillSpec):
        return v.kind if v.density is None else f"{v.kind}/{v.density}"
    return str(v)


def format_spec(ast: SpecAst) -> str:
    """Canonical text: grid, symmetry, pigments by name, maps in channel order."""
    out = []
    if ast.grid is not None:
        out.append(f"kolam {ast.grid.width}x{ast.grid.height}")
    if ast.symmetry is not None:
        out.append(f"symmetry {ast.symmetry.name}")
    for p in sorted(ast.pigments, key=lambda p: p.name):
        out.append(f"pigment {p.name} " + " ".join(format_number(c) for c in p.rgb))
    order = {c.value: k for k, c in enumerate(CHANNEL_ORDER)}
    for m in sorted(ast.maps, key=lambda m: order[m.channel]):
        if isinstance(m.scale, LinearNode):
            s = m.scale
            scale = (
                f"linear {format_number(s.lo)}..{format_number(s.hi)} => "
                f"{format_number(s.rlo)}..{format_number(s.rhi)}" + (" clamp" if s.clamp else "")
            )
        else:
            scale = "{ " + ", ".join(f"{p.key}: {_format_value(p.value)}" for p in m.scale.pairs) + " }"
        out.append(f"map {m.field} -> {m.channel} {scale}")
    return "".join(line + "\n" for line in out)


def load_spec(source: str, params: RenderParams | None = None) -> MappingSpec:
    """Parse and lower in one step; raises SpecError carrying every diagnostic."""
    ast, diags = parse(source)
    if ast is None:
        raise SpecError(diags)
    spec, diags = lower(ast, params)
    if spec is None:
        raise SpecError(diags)
    return spec
