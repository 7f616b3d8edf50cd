"""JSON loading that remembers where every value and key sits in the text.

Syntax checking is left to :func:`json.loads`; a second pass built on the
stdlib string and number scanners records ``(line, column)`` for each path.
A path is a tuple of object keys and array indices.
"""

from __future__ import annotations

import json
import re
from json.decoder import scanstring
from json.scanner import NUMBER_RE

_WS = re.compile(r"[ \t\n\r]*")


class Located:
    """Parsed document plus position tables."""

    def __init__(self, text: str):
        self.text = text
        self.value = json.loads(text)
        self.values: dict[tuple, int] = {}
        self.keys: dict[tuple, int] = {}
        end = self._walk(_skip(text, 0), ())
        assert _skip(text, end) == len(text)

    def _walk(self, i: int, path: tuple) -> int:
        s = self.text
        self.values[path] = i
        ch = s[i]
        if ch == "{":
            i = _skip(s, i + 1)
            if s[i] == "}":
                return i + 1
            while True:
                kpos = i
                key, i = scanstring(s, i + 1)
                self.keys[path + (key,)] = kpos
                i = _skip(s, i) + 1  # colon
                i = self._walk(_skip(s, i), path + (key,))
                i = _skip(s, i)
                if s[i] == "}":
                    return i + 1
                i = _skip(s, i + 1)
        if ch == "[":
            i = _skip(s, i + 1)
            if s[i] == "]":
                return i + 1
            n = 0
            while True:
                i = self._walk(i, path + (n,))
                n += 1
                i = _skip(s, i)
                if s[i] == "]":
                    return i + 1
                i = _skip(s, i + 1)
        if ch == '"':
            return scanstring(s, i + 1)[1]
        for lit in ("true", "false", "null"):
            if s.startswith(lit, i):
                return i + len(lit)
        m = NUMBER_RE.match(s, i)
        return m.end()

    def line_col(self, index: int) -> tuple[int, int]:
        line = self.text.count("\n", 0, index) + 1
        col = index - (self.text.rfind("\n", 0, index) + 1) + 1
        return line, col

    def where(self, path: tuple, key: bool = False) -> tuple[int, int]:
        """Position of the value at ``path`` (or of its key), falling back to
        the nearest enclosing value."""
        table = self.keys if key else self.values
        p = tuple(path)
        while p:
            if p in table:
                return self.line_col(table[p])
            if p in self.values:
                return self.line_col(self.values[p])
            p = p[:-1]
        return self.line_col(self.values.get((), 0))


def _skip(s: str, i: int) -> int:
    return _WS.match(s, i).end()
