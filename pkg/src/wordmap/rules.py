"""Substitution rule tables, their validity conditions, and the rule-number codec.

A rule over the alphabet ``{0, ..., p-1}`` replaces each symbol ``k`` by a
fixed block of symbols, written here the way it is displayed: leftmost
character first. Constant-length rules are interchangeable with a single
natural number (a Wolfram-style code) obtained by reading the flattened
block vector as a radix-``p`` numeral.

Two validity conditions make the natural-number view of words faithful:

1. symbol 0 maps to a block consisting only of zeros;
2. every nonzero symbol maps to a block whose leftmost (most
   significant) character is nonzero.

Rules that break them are still legal objects here -- the symbol-array
engine runs them happily (the classic Thue-Morse table breaks condition 1)
-- but the number engine refuses them, since a leading zero is
unrepresentable in a bare natural. :func:`validate` reports, it never
raises.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .numtheory import from_digits, num_digits, to_digits

__all__ = [
    "RuleTable",
    "RuleViolation",
    "WolframCode",
    "RuleFormatError",
    "validate",
    "is_constant_length",
    "is_reversible",
    "rule_vector",
    "encode_wolfram",
    "decode_wolfram",
    "f_number",
    "parse_rule_file",
    "format_rule_file",
    "THUE_MORSE",
    "CANTOR",
    "FIBONACCI_WORD",
]


@dataclass(frozen=True)
class RuleTable:
    """Alphabet size ``p`` plus one replacement block per symbol.

    ``blocks[k]`` is the block replacing symbol ``k``, leftmost
    character first. Construction only enforces shape (``p >= 2``, one
    block per symbol, non-negative entries); the validity conditions are
    the business of :func:`validate`.
    """

    p: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"alphabet size must be >= 2, got {self.p}")
        blocks = tuple(tuple(int(c) for c in block) for block in self.blocks)
        if len(blocks) != self.p:
            raise ValueError(
                f"need one block per symbol: expected {self.p}, got {len(blocks)}"
            )
        for k, block in enumerate(blocks):
            for c in block:
                if c < 0:
                    raise ValueError(f"block {k} contains negative symbol {c}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def lengths(self) -> tuple[int, ...]:
        """Per-symbol block lengths."""
        return tuple(len(b) for b in self.blocks)

    @staticmethod
    def from_mapping(p: int, mapping: Mapping[int, Sequence[int]]) -> "RuleTable":
        """Build a table from a partial ``symbol -> block`` mapping.

        Symbols absent from the mapping map to themselves.
        """
        for k in mapping:
            if not 0 <= k < p:
                raise ValueError(f"mapped symbol {k} outside alphabet of size {p}")
        blocks = tuple(
            tuple(int(c) for c in mapping.get(k, (k,))) for k in range(p)
        )
        return RuleTable(p, blocks)

    def describe(self) -> str:
        return "; ".join(
            f"{k} -> {''.join(map(str, b)) if b else '(empty)'}"
            for k, b in enumerate(self.blocks)
        )


# The three classic tables used throughout the tests and demos.
THUE_MORSE = RuleTable(2, ((0, 1), (1, 0)))
CANTOR = RuleTable(2, ((0, 0, 0), (1, 0, 1)))
FIBONACCI_WORD = RuleTable(3, ((0,), (1, 2), (1,)))


@dataclass(frozen=True)
class RuleViolation:
    """One broken rule invariant, tied to the offending symbol."""

    symbol: int
    kind: str  # "symbol-range" | "empty-block" | "zero-block" | "leading-zero"
    message: str


# Violations that already break the symbol-array engine, not just the
# number representation.
STRUCTURAL_KINDS = frozenset({"symbol-range", "empty-block"})


@lru_cache(maxsize=None)
def validate(rule: RuleTable) -> tuple[RuleViolation, ...]:
    """Report every violated invariant of ``rule``; empty means usable everywhere.

    Never raises: a broken table is data, and the caller decides which
    engine (if any) can still run it.
    """
    out: list[RuleViolation] = []
    for k, block in enumerate(rule.blocks):
        if not block:
            out.append(
                RuleViolation(k, "empty-block", f"block {k} is empty (erasing rules are not supported)")
            )
            continue
        bad = [c for c in block if c >= rule.p]
        if bad:
            out.append(
                RuleViolation(
                    k,
                    "symbol-range",
                    f"block {k} contains symbol(s) {sorted(set(bad))} outside [0, {rule.p - 1}]",
                )
            )
    block0 = rule.blocks[0]
    if block0 and any(c != 0 for c in block0):
        out.append(
            RuleViolation(0, "zero-block", "block 0 must consist only of zeros")
        )
    for k in range(1, rule.p):
        block = rule.blocks[k]
        if block and block[0] == 0:
            out.append(
                RuleViolation(
                    k, "leading-zero", f"block {k} starts with 0 (leftmost symbol must be nonzero)"
                )
            )
    return tuple(out)


def structural_violations(rule: RuleTable) -> tuple[RuleViolation, ...]:
    """The subset of violations that break even the symbol-array engine."""
    return tuple(v for v in validate(rule) if v.kind in STRUCTURAL_KINDS)


def is_constant_length(rule: RuleTable) -> int | None:
    """The common block length ``N``, or ``None`` if lengths differ."""
    lengths = set(rule.lengths)
    if len(lengths) == 1:
        return lengths.pop()
    return None


def is_reversible(rule: RuleTable) -> bool:
    """True iff every block has length 1 and the symbol map is a bijection."""
    if any(len(b) != 1 for b in rule.blocks):
        return False
    return sorted(b[0] for b in rule.blocks) == list(range(rule.p))


def rule_vector(rule: RuleTable, N: int | None = None) -> tuple[int, ...]:
    """Flatten a constant-length table into its code vector.

    Entry ``m + n*N`` is the character at displayed position ``m``
    (``m = 0`` leftmost) of the block replacing symbol ``n``.
    """
    found = is_constant_length(rule)
    if found is None:
        raise ValueError("rule vector requires a constant-length rule")
    if N is not None and N != found:
        raise ValueError(f"rule has block length {found}, not {N}")
    return tuple(c for block in rule.blocks for c in block)


@dataclass(frozen=True)
class WolframCode:
    """The triple ``(code, N, p)`` uniquely naming a constant-length rule.

    There are ``p**(p*N)`` rules of block length ``N`` over ``p``
    symbols, so the code must be below that bound.
    """

    code: int
    N: int
    p: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"alphabet size must be >= 2, got {self.p}")
        if self.N < 1:
            raise ValueError(f"block length must be >= 1, got {self.N}")
        if not 0 <= self.code < self.p ** (self.p * self.N):
            raise ValueError(
                f"code {self.code} out of range for p={self.p}, N={self.N} "
                f"(must be < {self.p}^{self.p * self.N})"
            )

    def __str__(self) -> str:
        return f"{self.code}_{{{self.N};{self.p}}}"


def encode_wolfram(rule: RuleTable, N: int | None = None) -> WolframCode:
    """Code of a constant-length rule: the flattened block vector read as a radix-``p`` numeral."""
    vec = rule_vector(rule, N)
    bad = [c for c in vec if c >= rule.p]
    if bad:
        raise ValueError(f"rule contains symbol(s) {sorted(set(bad))} outside the alphabet")
    n = len(vec) // rule.p
    return WolframCode(from_digits(rule.p, vec), n, rule.p)


def decode_wolfram(wc: WolframCode) -> RuleTable:
    """Rebuild the rule table from its code.

    Digit ``k`` of the code is vector entry ``k``; block ``n`` is the
    slice ``[n*N, (n+1)*N)``, displayed leftmost character first.
    """
    total = wc.p * wc.N
    vec = to_digits(wc.p, wc.code)
    vec += [0] * (total - len(vec))
    blocks = tuple(tuple(vec[n * wc.N : (n + 1) * wc.N]) for n in range(wc.p))
    return RuleTable(wc.p, blocks)


def f_number(rule: RuleTable, k: int) -> tuple[int, int]:
    """The replacement word for symbol ``k`` as a ``(numeral, length)`` pair.

    The numeral is the natural number whose radix-``p`` digit string,
    read most significant first, spells the block leftmost first. The
    length is carried explicitly because blocks of zeros (symbol 0's)
    have value 0 regardless of length. Requires a fully valid rule.
    """
    if not 0 <= k < rule.p:
        raise ValueError(f"symbol {k} outside alphabet of size {rule.p}")
    violations = validate(rule)
    if violations:
        raise ValueError(f"invalid rule: {violations[0].message}")
    block = rule.blocks[k]
    value = from_digits(rule.p, block[::-1])
    if k >= 1 and num_digits(rule.p, value) != len(block):
        raise AssertionError("leading-nonzero block lost digits")  # unreachable on valid rules
    return value, len(block)


class RuleFormatError(ValueError):
    """A malformed rule file, with the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def parse_rule_file(text: str) -> RuleTable:
    """Parse the line-oriented rule file format.

    Format: ``#`` comment lines; a ``p <integer>`` header; then one
    ``<k> -> <s0> <s1> ...`` line per symbol (decimal values, leftmost
    first). Symbols without a line map to themselves.
    """
    p: int | None = None
    mapping: dict[int, tuple[int, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if p is None:
            if parts[0] != "p" or len(parts) != 2:
                raise RuleFormatError(lineno, f"expected header 'p <integer>', got {line!r}")
            try:
                p = int(parts[1])
            except ValueError:
                raise RuleFormatError(lineno, f"alphabet size {parts[1]!r} is not an integer") from None
            if p < 2:
                raise RuleFormatError(lineno, f"alphabet size must be >= 2, got {p}")
            continue
        if len(parts) < 2 or parts[1] != "->":
            raise RuleFormatError(lineno, f"expected '<k> -> <symbols...>', got {line!r}")
        try:
            k = int(parts[0])
            block = tuple(int(s) for s in parts[2:])
        except ValueError:
            raise RuleFormatError(lineno, f"non-integer symbol in {line!r}") from None
        if not 0 <= k < p:
            raise RuleFormatError(lineno, f"symbol {k} outside alphabet [0, {p - 1}]")
        if k in mapping:
            raise RuleFormatError(lineno, f"symbol {k} mapped twice")
        if any(c < 0 for c in block):
            raise RuleFormatError(lineno, f"negative symbol in block for {k}")
        mapping[k] = block
    if p is None:
        raise RuleFormatError(1, "missing 'p <integer>' header")
    return RuleTable.from_mapping(p, mapping)


def format_rule_file(rule: RuleTable) -> str:
    """Render a table in the rule file format (one line per symbol)."""
    lines = [f"p {rule.p}"]
    for k, block in enumerate(rule.blocks):
        lines.append(f"{k} -> " + " ".join(str(c) for c in block))
    return "\n".join(lines) + "\n"
