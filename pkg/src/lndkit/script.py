"""Session scripts: a variable declaration, named definitions and commands.

::

    vars x y z
    D = x*dy + y*dz          # derivation atoms are d<variable>
    f = 2*x*z - y^2
    check-lnd D
    kernel --max-degree 2 D

The declaration order fixes the lex order: the first variable is the least
significant.  Rational literals are written ``p/q`` without spaces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Polynomial
from .derivations import Derivation
from .errors import ParseError

IDENT = r"[A-Za-z_][A-Za-z0-9_']*"

# name -> (min operands, max operands or None, allowed flags)
COMMANDS = {
    "check-lnd": (1, 1, ("--step-bound",)),
    "check-lnd-set": (0, None, ("--depth-bound", "--width-bound")),
    "bracket": (2, 2, ()),
    "kernel": (0, None, ("--max-degree",)),
    "cutset": (0, None, ("--max-degree",)),
    "triangular?": (1, 1, ()),
    "triangularize": (1, None, ("--descent-steps", "--groebner-degree")),
    "theorem2": (1, 1, ("--max-degree", "--step-bound")),
    "derived-series": (1, None, ("--deg-bound", "--dim-bound")),
    "counterexample": (0, 0, ()),
}


@dataclass(frozen=True)
class Command:
    name: str
    operands: tuple = ()
    options: tuple = ()  # sorted (flag, value) pairs
    line: int = field(default=0, compare=False)

    def option(self, flag: str, default=None):
        return dict(self.options).get(flag, default)


@dataclass(frozen=True)
class SessionScript:
    variables: tuple
    definitions: tuple  # (name, Polynomial | Derivation) in definition order
    commands: tuple

    def value(self, name: str):
        return dict(self.definitions)[name]

    @property
    def nvars(self) -> int:
        return len(self.variables)


_TOKEN = re.compile(rf"""
    (?P<ws>\s+)
  | (?P<number>\d+(?:/\d+)?)
  | (?P<ident>{IDENT})
  | (?P<op>[-+*^()])
""", re.VERBOSE)


def _tokenize(text: str, line: int, offset: int) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, offset + pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), offset + pos + 1))
        pos = m.end()
    tokens.append(("end", "", offset + len(text) + 1))
    return tokens


class _ExprParser:
    def __init__(self, tokens, line: int, scope):
        self.tokens = tokens
        self.pos = 0
        self.line = line
        self.scope = scope

    def error(self, message, col=None):
        if col is None:
            col = self.tokens[self.pos][2]
        return ParseError(message, self.line, col)

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self):
        value = self.expr()
        kind, text, col = self.peek()
        if kind != "end":
            raise self.error(f"unexpected {text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, col = self.take()
            rhs = self.term()
            value = self.combine(op, value, rhs, col)
        return value

    def term(self):
        value = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            _, _, col = self.take()
            rhs = self.unary()
            value = self.multiply(value, rhs, col)
        return value

    def unary(self):
        kind, text, col = self.peek()
        if kind == "op" and text in ("-", "+"):
            self.take()
            value = self.unary()
            return -value if text == "-" else value
        return self.power()

    def power(self):
        value = self.atom()
        kind, text, col = self.peek()
        if kind == "op" and text == "^":
            self.take()
            kind, text, ecol = self.take()
            if kind != "number" or "/" in text:
                raise self.error("exponent must be a non-negative integer literal", ecol)
            if isinstance(value, Derivation):
                raise self.error("type error: cannot raise a derivation to a power", col)
            value = value ** int(text)
        return value

    def atom(self):
        kind, text, col = self.take()
        if kind == "number":
            num, _, den = text.partition("/")
            if den and int(den) == 0:
                raise self.error("zero denominator in rational literal", col)
            return Polynomial.constant(self.scope.nvars, Fraction(int(num), int(den) if den else 1))
        if kind == "ident":
            return self.scope.resolve(text, self.line, col)
        if kind == "op" and text == "(":
            value = self.expr()
            kind, text, ccol = self.take()
            if text != ")":
                raise self.error("expected ')'", ccol)
            return value
        if kind == "end":
            raise self.error("unexpected end of expression", col)
        raise self.error(f"unexpected {text!r}", col)

    def combine(self, op, a, b, col):
        if type(a) is not type(b):
            raise self.error("type error: cannot add a polynomial and a derivation", col)
        return a + b if op == "+" else a - b

    def multiply(self, a, b, col):
        if isinstance(a, Derivation) and isinstance(b, Derivation):
            raise self.error("type error: cannot multiply two derivations", col)
        if isinstance(a, Derivation):
            return a * b
        return b * a if isinstance(b, Derivation) else a * b


class _Scope:
    def __init__(self, names: tuple):
        self.variables = names
        self.index = {v: i for i, v in enumerate(names)}
        self.definitions: dict = {}

    @property
    def nvars(self):
        return len(self.variables)

    def resolve(self, name, line, col):
        if name in self.index:
            return Polynomial.variable(self.nvars, self.index[name])
        if name in self.definitions:
            return self.definitions[name]
        if name.startswith("d") and len(name) > 1:
            var = name[1:]
            if var in self.index:
                return Derivation.partial(self.nvars, self.index[var])
            raise ParseError(f"name error: unknown variable {var}", line, col)
        raise ParseError(f"name error: undefined name {name}", line, col)

    def is_reserved(self, name):
        return name in self.index or (name.startswith("d") and name[1:] in self.index)


def parse_script(text: str | bytes) -> SessionScript:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"script is not valid UTF-8: {exc}") from None
    scope = None
    commands = []
    definitions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        words = line.split()
        if words[0] == "vars":
            if scope is not None:
                raise ParseError("duplicate variable declaration", lineno, indent + 1)
            names = words[1:]
            if not names:
                raise ParseError("vars needs at least one identifier", lineno, indent + 5)
            for name in names:
                if not re.fullmatch(IDENT, name) or name == "vars":
                    raise ParseError(f"invalid variable name {name!r}", lineno, line.index(name) + 1)
            if len(set(names)) != len(names):
                raise ParseError("duplicate variable name", lineno, indent + 1)
            scope = _Scope(tuple(names))
            continue
        if scope is None:
            raise ParseError("script must start with a vars declaration", lineno, indent + 1)
        m = re.match(rf"\s*({IDENT})\s*=", line)
        if m:
            name = m.group(1)
            if name in COMMANDS or name == "vars":
                raise ParseError(f"{name!r} is a reserved word", lineno, m.start(1) + 1)
            if scope.is_reserved(name):
                raise ParseError(f"name error: {name!r} clashes with a variable or derivation atom",
                                 lineno, m.start(1) + 1)
            if name in scope.definitions:
                raise ParseError(f"name error: {name!r} is already defined", lineno, m.start(1) + 1)
            rhs = line[m.end():]
            if not rhs.strip():
                raise ParseError("empty definition", lineno, m.end() + 1)
            value = _ExprParser(_tokenize(rhs, lineno, m.end()), lineno, scope).parse()
            scope.definitions[name] = value
            definitions.append((name, value))
            continue
        commands.append(_parse_command(words, line, lineno, scope))
    if scope is None:
        raise ParseError("script has no vars declaration", 1, 1)
    return SessionScript(scope.variables, tuple(definitions), tuple(commands))


def _parse_command(words, line, lineno, scope) -> Command:
    name = words[0]
    col = line.index(name) + 1
    if name not in COMMANDS:
        raise ParseError(f"unknown command {name!r}", lineno, col)
    low, high, allowed = COMMANDS[name]
    operands = []
    options = {}
    i = 1
    search_from = col
    while i < len(words):
        word = words[i]
        wcol = line.index(word, search_from) + 1
        search_from = wcol + len(word) - 1
        if word.startswith("--"):
            if word not in allowed:
                raise ParseError(f"command {name} does not accept {word}", lineno, wcol)
            if i + 1 >= len(words) or not words[i + 1].isdigit():
                raise ParseError(f"{word} needs a non-negative integer", lineno, wcol)
            options[word] = int(words[i + 1])
            search_from = line.index(words[i + 1], search_from) + len(words[i + 1])
            i += 2
            continue
        if word not in scope.definitions:
            raise ParseError(f"name error: undefined name {word}", lineno, wcol)
        if not isinstance(scope.definitions[word], Derivation):
            raise ParseError(f"type error: {word} is not a derivation", lineno, wcol)
        operands.append(word)
        i += 1
    if len(operands) < low or (high is not None and len(operands) > high):
        expected = str(low) if low == high else f"at least {low}" if high is None else f"{low}..{high}"
        raise ParseError(f"{name} takes {expected} operand(s), got {len(operands)}", lineno, col)
    return Command(name, tuple(operands), tuple(sorted(options.items())), lineno)


def format_value(value, names) -> str:
    return value.to_string(list(names))


def print_script(script: SessionScript) -> str:
    """Render a script that parses back to an equal :class:`SessionScript`."""
    lines = ["vars " + " ".join(script.variables)]
    for name, value in script.definitions:
        lines.append(f"{name} = {format_value(value, script.variables)}")
    for cmd in script.commands:
        parts = [cmd.name]
        for flag, value in cmd.options:
            parts += [flag, str(value)]
        parts += list(cmd.operands)
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"
