"""Plain-text reaction network format (``.crn``).

Grammar::

    document  := statement ((";" | NEWLINE) statement)*
    statement := "" | directive | reaction
    directive := "@name" TEXT | "@species" IDENT ("," IDENT)*
    reaction  := complex ("->" | "<->") ["{" rates "}"] complex
    rates     := RATE | RATE "," RATE          (two rates only after "<->")
    complex   := "0" | term ("+" term)*
    term      := [INT] IDENT

``#`` starts a comment running to the end of the line.  ``A + A`` is
rejected (write ``2A``) so every complex has one spelling.  Either every
reaction carries a rate or none does.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .network import Complex, MassActionSystem, Reaction, ReactionNetwork, Species, validate

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_INT = re.compile(r"[0-9]+")
_RATE = re.compile(r"[+]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][+-]?[0-9]+)?")
_WS = re.compile(r"[ \t\r]+")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class NetworkSource:
    """A parsed document: the network plus its optional name and rates."""

    network: ReactionNetwork
    rates: tuple[float, ...] | None = None
    name: str | None = None

    @property
    def system(self) -> Union[MassActionSystem, ReactionNetwork]:
        if self.rates is None:
            return self.network
        return MassActionSystem(self.network, self.rates)


class _Scanner:
    def __init__(self, text: str, line: int, offset: int):
        self.text = text
        self.pos = 0
        self.line = line
        self.offset = offset

    def error(self, message: str, pos: int | None = None) -> ParseError:
        p = self.pos if pos is None else pos
        return ParseError(message, self.line, self.offset + p + 1)

    def skip_ws(self) -> None:
        m = _WS.match(self.text, self.pos)
        if m:
            self.pos = m.end()

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self, s: str) -> bool:
        self.skip_ws()
        return self.text.startswith(s, self.pos)

    def expect(self, s: str) -> None:
        if not self.peek(s):
            raise self.error(f"expected {s!r}")
        self.pos += len(s)

    def match(self, pattern: re.Pattern):
        self.skip_ws()
        m = pattern.match(self.text, self.pos)
        if m:
            self.pos = m.end()
        return m


def _parse_complex(sc: _Scanner, names: list[str]) -> dict[str, int]:
    sc.skip_ws()
    start = sc.pos
    m = sc.match(_INT)
    if m and m.group() == "0" and not _IDENT.match(sc.text, sc.pos) and not sc.peek("+"):
        # "0" alone is the zero complex
        return {}
    sc.pos = start
    terms: dict[str, int] = {}
    while True:
        sc.skip_ws()
        tpos = sc.pos
        coeff = 1
        m = sc.match(_INT)
        if m:
            coeff = int(m.group())
            if coeff == 0:
                raise sc.error("zero coefficient", tpos)
        ident = sc.match(_IDENT)
        if not ident:
            raise sc.error("expected species name")
        name = ident.group()
        if name in terms:
            raise sc.error(f"species {name} repeated in complex; write {terms[name] + coeff}{name}", tpos)
        terms[name] = coeff
        if name not in names:
            names.append(name)
        if not sc.peek("+"):
            return terms
        sc.expect("+")


def _parse_rates(sc: _Scanner) -> list[float]:
    out = []
    while True:
        sc.skip_ws()
        rpos = sc.pos
        m = sc.match(_RATE)
        if not m:
            raise sc.error("expected a rate constant")
        value = float(m.group())
        if not value > 0 or value == float("inf"):
            raise sc.error("rate constants must be positive and finite", rpos)
        out.append(value)
        if sc.peek(","):
            sc.expect(",")
            continue
        sc.expect("}")
        return out


def _statements(text: str):
    """Yield ``(line_no, column_offset, statement_text)``."""
    for lineno, raw in enumerate(text.replace("\r\n", "\n").split("\n"), start=1):
        line = raw.split("#", 1)[0]
        offset = 0
        for part in line.split(";"):
            yield lineno, offset, part
            offset += len(part) + 1


def parse_document(text: str) -> NetworkSource:
    """Parse ``.crn`` text into a :class:`NetworkSource`.

    Raises:
        ParseError: on syntax errors, mixed rated/unrated reactions,
            nonpositive rates, or networks violating the network axioms.
    """
    names: list[str] = []
    declared: list[str] | None = None
    name = None
    reactions: list[tuple[dict, dict]] = []
    rates: list[float] = []
    rated_flags: list[bool] = []
    first_pos: dict[tuple, tuple[int, int]] = {}

    for lineno, offset, stmt in _statements(text):
        sc = _Scanner(stmt, lineno, offset)
        if sc.at_end():
            continue
        if sc.peek("@"):
            sc.skip_ws()
            if stmt[sc.pos:].startswith("@name"):
                sc.pos += len("@name")
                name = stmt[sc.pos:].strip()
                if not name:
                    raise sc.error("@name needs a value")
                continue
            if stmt[sc.pos:].startswith("@species"):
                sc.pos += len("@species")
                declared = []
                while True:
                    m = sc.match(_IDENT)
                    if not m:
                        raise sc.error("expected species name")
                    if m.group() in declared:
                        raise sc.error(f"species {m.group()} declared twice")
                    declared.append(m.group())
                    if sc.at_end():
                        break
                    sc.expect(",")
                continue
            raise sc.error("unknown directive")

        spos = sc.pos
        src = _parse_complex(sc, names)
        if sc.peek("<->"):
            sc.expect("<->")
            reversible = True
        elif sc.peek("->"):
            sc.expect("->")
            reversible = False
        else:
            raise sc.error("expected '->' or '<->'")
        rs: list[float] = []
        if sc.peek("{"):
            bpos = sc.pos
            sc.expect("{")
            rs = _parse_rates(sc)
            want = 2 if reversible else 1
            if len(rs) != want:
                raise sc.error(f"expected {want} rate constant(s), got {len(rs)}", bpos)
        prod = _parse_complex(sc, names)
        if not sc.at_end():
            raise sc.error("unexpected text after reaction")
        pairs = [(src, prod)] + ([(prod, src)] if reversible else [])
        for k, (a, b) in enumerate(pairs):
            key = (tuple(sorted(a.items())), tuple(sorted(b.items())))
            if a == b:
                raise sc.error("reaction has a zero reaction vector", spos)
            if key in first_pos:
                ln, col = first_pos[key]
                raise sc.error(f"duplicate reaction (first given at line {ln}, column {col})", spos)
            first_pos[key] = (lineno, offset + spos + 1)
            reactions.append((a, b))
            rated_flags.append(bool(rs))
            if rs:
                rates.append(rs[k])

    if not reactions:
        raise ParseError("no reactions", 1, 1)
    if any(rated_flags) and not all(rated_flags):
        raise ParseError("either every reaction carries a rate constant or none does", 1, 1)

    if declared is not None:
        missing = [n for n in names if n not in declared]
        if missing:
            raise ParseError(f"species {', '.join(missing)} not in @species", 1, 1)
        order = declared
    else:
        order = names
    net = ReactionNetwork.from_names(reactions, species=order)
    problems = validate(net)
    if problems:
        v = problems[0]
        raise ParseError(f"invalid network ({v.kind}: {v.detail})", 1, 1)
    return NetworkSource(net, tuple(rates) if rates else None, name)


def parse_network(text: str) -> Union[MassActionSystem, ReactionNetwork]:
    """``MassActionSystem`` when every reaction is rated, else ``ReactionNetwork``."""
    return parse_document(text).system


def format_rate(k: float) -> str:
    k = float(k)
    if k.is_integer() and abs(k) < 1e15:
        return str(int(k))
    return repr(k)


def _natural_order(net: ReactionNetwork) -> list[str]:
    """Species order that reparsing the canonical text would produce."""
    seen: list[str] = []
    for rx in net.reactions:
        for c in (rx.source, rx.product):
            for nm in sorted(net.species[s].name for s, _ in c.coeffs):
                if nm not in seen:
                    seen.append(nm)
    return seen


def format_network(obj, name: str | None = None) -> str:
    """Canonical ``.crn`` text; ``parse_document(format_network(x))`` rebuilds ``x``.

    Complexes list species alphabetically, reactions keep their order, and
    ``@species`` is emitted only when reparsing would otherwise reorder them.
    """
    if isinstance(obj, NetworkSource):
        name = obj.name if name is None else name
        obj = obj.system
    if isinstance(obj, MassActionSystem):
        net, rates = obj.network, obj.rates
    else:
        net, rates = obj, None
    lines = []
    if name:
        lines.append(f"@name {name}")
    if list(net.species_names) != _natural_order(net):
        lines.append("@species " + ", ".join(net.species_names))
    body = []
    for r, rx in enumerate(net.reactions):
        arrow = "->" if rates is None else "->{" + format_rate(rates[r]) + "}"
        body.append(f"{net.complex_label(rx.source)} {arrow} {net.complex_label(rx.product)}")
    lines.append(";\n".join(body))
    return "\n".join(lines)
