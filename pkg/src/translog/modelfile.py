"""Reading and writing the plain-text model format, and team literals.

Example::

    # M2: two elements, f swaps them
    domain 2
    vars x y
    relation R 1
    1

    function f 1
    0 -> 1
    1 -> 0

    constant c 0

Block bodies end at a blank line or at the next declaration. A block can
also be written inline: ``relation S 2: 0 1, 1 0`` or
``function f 1: 0 -> 1, 1 -> 0``.
"""

from __future__ import annotations

import re

import numpy as np

from translog.errors import ModelError
from translog.model import Model, format_team

_DECLS = ("domain", "vars", "relation", "function", "constant")


class ModelFormatError(ModelError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _ints(words, lineno):
    try:
        return [int(w) for w in words]
    except ValueError:
        raise ModelFormatError(f"expected integers, found {' '.join(words)!r}", lineno) from None


def parse_model(text: str) -> Model:
    domain = None
    team_vars = None
    relations, functions, constants = {}, {}, {}
    block = None  # (kind, name, arity, rows, start line)

    def close():
        nonlocal block
        if block is None:
            return
        kind, name, arity, rows, _ = block
        if kind == "relation":
            relations[name] = (arity, rows)
        else:
            functions[name] = (arity, rows)
        block = None

    def body_line(words, lineno):
        kind, name, arity, rows, _ = block
        if kind == "relation":
            tup = tuple(_ints(words, lineno))
            if len(tup) != arity:
                raise ModelFormatError(f"relation {name} expects {arity} elements per tuple", lineno)
            rows.append(tup)
        else:
            if "->" not in words:
                raise ModelFormatError(f"function {name}: expected 'a1 ... ak -> b'", lineno)
            k = words.index("->")
            args = tuple(_ints(words[:k], lineno))
            out = _ints(words[k + 1:], lineno)
            if len(args) != arity or len(out) != 1:
                raise ModelFormatError(f"function {name} expects {arity} arguments and one value", lineno)
            if args in rows:
                raise ModelFormatError(f"function {name}: duplicate entry for {args}", lineno)
            rows[args] = out[0]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            close()
            continue
        words = line.replace(":", " : ").split()
        head = words[0]
        if head not in _DECLS:
            if block is None:
                raise ModelFormatError(f"unknown declaration {head!r}", lineno)
            body_line(words, lineno)
            continue
        close()
        if head == "domain":
            vals = _ints(words[1:], lineno)
            if len(vals) != 1:
                raise ModelFormatError("usage: domain N", lineno)
            if vals[0] < 1:
                raise ModelFormatError("domain must be nonempty", lineno)
            domain = vals[0]
        elif head == "vars":
            if len(words) < 2:
                raise ModelFormatError("vars needs at least one variable", lineno)
            team_vars = words[1:]
        elif head == "constant":
            if len(words) != 3:
                raise ModelFormatError("usage: constant NAME ELEMENT", lineno)
            constants[words[1]] = _ints(words[2:], lineno)[0]
        else:
            if len(words) < 3:
                raise ModelFormatError(f"usage: {head} NAME ARITY", lineno)
            name = words[1]
            arity = _ints(words[2:3], lineno)[0]
            block = (head, name, arity, [] if head == "relation" else {}, lineno)
            if len(words) > 3:
                if words[3] != ":":
                    raise ModelFormatError(f"unexpected {words[3]!r}", lineno)
                inline = line.split(":", 1)[1]
                for entry in inline.split(","):
                    if entry.strip():
                        body_line(entry.split(), lineno)
                close()
    close()

    if domain is None:
        raise ModelFormatError("missing 'domain' declaration")
    if team_vars is None:
        raise ModelFormatError("missing 'vars' declaration")
    for name, (arity, table) in functions.items():
        if len(table) != domain**arity:
            raise ModelFormatError(f"function {name} not total")
    try:
        return Model(domain, team_vars, relations, functions, constants)
    except ModelFormatError:
        raise
    except ModelError as e:
        raise ModelFormatError(str(e)) from None


def load_model(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def dump_model(M: Model) -> str:
    lines = [f"domain {M.domain_size}", "vars " + " ".join(M.team_vars)]
    for name in sorted(M.relations):
        arity, rows = M.relations[name]
        lines.append(f"relation {name} {arity}")
        lines += [" ".join(map(str, r)) for r in sorted(rows)]
        lines.append("")
    for name in sorted(M.functions):
        arity, table = M.functions[name]
        lines.append(f"function {name} {arity}")
        for idx in np.ndindex(*table.shape):
            lines.append(" ".join(map(str, idx)) + f" -> {table[idx]}")
        lines.append("")
    for name in sorted(M.constants):
        lines.append(f"constant {name} {M.constants[name]}")
    return "\n".join(lines) + "\n"


_BINDING = re.compile(r"^([A-Za-z_][A-Za-z0-9_']*)=(\d+)$")


def parse_team(text: str, M: Model) -> frozenset:
    """Parse ``{x=0 y=0; x=1 y=1}`` (``{}`` is the empty team)."""
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ModelFormatError(f"team must be written in braces: {text!r}")
    body = text[1:-1].strip()
    rows = []
    if body:
        for chunk in body.split(";"):
            binding = {}
            for word in chunk.split():
                m = _BINDING.match(word)
                if not m:
                    raise ModelFormatError(f"bad binding {word!r} in team")
                if m.group(1) in binding:
                    raise ModelFormatError(f"variable {m.group(1)} bound twice in {chunk.strip()!r}")
                binding[m.group(1)] = int(m.group(2))
            rows.append(M.assignment(binding))
    return frozenset(rows)


__all__ = ["ModelFormatError", "parse_model", "load_model", "dump_model", "parse_team", "format_team"]
