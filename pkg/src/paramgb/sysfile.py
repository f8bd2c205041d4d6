"""Line-oriented system definition files.

    # comment
    vars: x, y
    params: a, b
    order_vars: lex
    order_params: lex
    poly: a*x + y
    poly: x^2 - b

Orders default to lex.  Polynomials are stored in canonical printed form,
so printing and re-parsing a system is the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .polycore import PolyParseError, VariableContext, order_from_name

__all__ = ["SystemFile", "SystemFileError", "parse_system", "load_system", "format_system"]

_NAME = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")
_KEYS = ("vars", "params", "order_vars", "order_params", "poly")


class SystemFileError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class SystemFile:
    vars: tuple
    params: tuple
    order_vars: str
    order_params: str
    polys: tuple
    name: str = ""

    def context(self) -> VariableContext:
        return VariableContext(self.vars, self.params, order_from_name(self.order_vars),
                               order_from_name(self.order_params))

    def polynomials(self, ctx: VariableContext | None = None) -> list:
        ctx = ctx or self.context()
        return [ctx.parse(p) for p in self.polys]

    def __eq__(self, other):
        if not isinstance(other, SystemFile):
            return NotImplemented
        return (self.vars, self.params, self.order_vars, self.order_params, self.polys) == (
            other.vars, other.params, other.order_vars, other.order_params, other.polys)

    def __hash__(self):
        return hash((self.vars, self.params, self.order_vars, self.order_params, self.polys))


def _names(value: str, lineno: int, col0: int, source: str) -> tuple:
    if not value.strip():
        return ()
    out = []
    pos = 0
    for part in value.split(","):
        name = part.strip()
        col = col0 + pos + (len(part) - len(part.lstrip())) + 1
        if not _NAME.match(name):
            raise SystemFileError(f"bad name {name!r}", lineno, col, source)
        out.append(name)
        pos += len(part) + 1
    return tuple(out)


def parse_system(text: str, source: str = "<input>", name: str = "") -> SystemFile:
    fields = {"vars": None, "params": (), "order_vars": "lex", "order_params": "lex"}
    seen = set()
    raw_polys = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.split("#", 1)[0]
        if not stripped.strip():
            continue
        if ":" not in stripped:
            col = len(stripped) - len(stripped.lstrip()) + 1
            raise SystemFileError("expected 'key: value'", lineno, col, source)
        key, value = stripped.split(":", 1)
        k = key.strip()
        col0 = len(key) + 1
        if k not in _KEYS:
            raise SystemFileError(f"unknown key {k!r}", lineno, len(key) - len(key.lstrip()) + 1, source)
        if k == "poly":
            raw_polys.append((value, lineno, col0))
            continue
        if k in seen:
            raise SystemFileError(f"duplicate key {k!r}", lineno, 1, source)
        seen.add(k)
        if k in ("vars", "params"):
            fields[k] = _names(value, lineno, col0, source)
        else:
            v = value.strip()
            try:
                order_from_name(v)
            except ValueError:
                raise SystemFileError(f"unknown order {v!r}", lineno, col0 + 2, source) from None
            fields[k] = v
    if not fields["vars"]:
        raise SystemFileError("no variables declared", 1, 1, source)
    allnames = fields["vars"] + fields["params"]
    dup = sorted({n for n in allnames if allnames.count(n) > 1})
    if dup:
        raise SystemFileError(f"duplicate name {dup[0]!r}", 1, 1, source)
    if not raw_polys:
        raise SystemFileError("no polynomials", 1, 1, source)
    ctx = VariableContext(fields["vars"], fields["params"], order_from_name(fields["order_vars"]),
                          order_from_name(fields["order_params"]))
    polys = []
    for value, lineno, col0 in raw_polys:
        lead = len(value) - len(value.lstrip())
        try:
            p = ctx.parse(value.strip())
        except PolyParseError as e:
            raise SystemFileError(e.message, lineno, col0 + lead + e.pos + 1, source) from None
        polys.append(str(p))
    return SystemFile(fields["vars"], fields["params"], fields["order_vars"],
                      fields["order_params"], tuple(polys), name)


def load_system(path) -> SystemFile:
    path = Path(path)
    return parse_system(path.read_text(encoding="utf-8"), str(path), path.stem)


def format_system(sysf: SystemFile) -> str:
    lines = [
        f"vars: {', '.join(sysf.vars)}",
        f"params: {', '.join(sysf.params)}",
        f"order_vars: {sysf.order_vars}",
        f"order_params: {sysf.order_params}",
    ]
    lines += [f"poly: {p}" for p in sysf.polys]
    return "\n".join(lines) + "\n"


def fixture_dir() -> Path:
    return Path(__file__).parent / "fixtures"


def fixture(name: str) -> SystemFile:
    """Load a bundled fixture by stem, e.g. ``"s10_robot"``."""
    return load_system(fixture_dir() / f"{name}.sys")
