import functools
import os
from typing import List, Optional

from lark import Lark, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken
from lark.lark import PostLex


class ScenarioParseError(ValueError):
    r"""Located syntax error in scenario text.

    Args:
        line: 1-based line of the offending token
        column: 1-based column of the offending token
        expected: sorted names of the tokens that would have been accepted
    """

    def __init__(self, line: int, column: int, expected: Optional[List[str]] = None, message: str = ""):
        self.line = line
        self.column = column
        self.expected = sorted(expected or [])
        if not message:
            message = "unexpected input"
            if self.expected:
                message += ", expected one of: " + ", ".join(self.expected)
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class _BraceNewlines(PostLex):
    """Drop newline tokens between braces so blocks may span lines."""

    always_accept = ("_NL",)

    def process(self, stream):
        depth = 0
        for token in stream:
            if token.type == "_LBRACE":
                depth += 1
            elif token.type == "_RBRACE":
                depth = max(depth - 1, 0)
            elif token.type == "_NL" and depth > 0:
                continue
            yield token


def read_grammar() -> str:
    script_dir = os.path.dirname(os.path.realpath(__file__))
    with open(os.path.join(script_dir, "scenario.lark"), "r") as grammar_file:
        return grammar_file.read()


@functools.lru_cache(maxsize=None)
def get_parser() -> Lark:
    return Lark(
        read_grammar(),
        parser="lalr",
        lexer="contextual",
        postlex=_BraceNewlines(),
        start=["start", "term"],
        propagate_positions=True,
    )


def parse_tree(text: str, start: str = "start") -> Tree:
    """Parse text into a lark tree, raising :class:`ScenarioParseError` on any syntax error."""
    if not text.endswith("\n") and start == "start":
        text = text + "\n"
    try:
        return get_parser().parse(text, start=start)
    except UnexpectedInput as e:
        raise _located(e, text) from None


def _located(e: UnexpectedInput, text: str) -> ScenarioParseError:
    if isinstance(e, UnexpectedToken):
        expected = list(e.expected)
        if e.token.type == "$END":
            line, column = _end_position(text)
            return ScenarioParseError(line, column, expected, "unexpected end of input")
        return ScenarioParseError(e.line, e.column, expected, f"unexpected token {str(e.token)!r}")
    if isinstance(e, UnexpectedCharacters):
        char = text[e.pos_in_stream] if e.pos_in_stream < len(text) else ""
        return ScenarioParseError(e.line, e.column, sorted(e.allowed or []), f"unexpected character {char!r}")
    if isinstance(e, UnexpectedEOF):
        line, column = _end_position(text)
        return ScenarioParseError(line, column, list(e.expected), "unexpected end of input")
    line = getattr(e, "line", None) or 1
    column = getattr(e, "column", None) or 1
    return ScenarioParseError(line, column, [], str(e))


def _end_position(text: str):
    lines = text.split("\n")
    if len(lines) > 1 and lines[-1] == "":
        lines = lines[:-1]
    return len(lines), len(lines[-1]) + 1
