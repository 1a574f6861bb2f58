"""Trajectory generation for substitution systems, in two representations.

The *array path* stores a word as an explicit symbol sequence and steps
it by block concatenation -- linear in the output length, and the one to
use when speed matters. The *numeral path* stores a word as the natural
number whose radix-``p`` digits spell it (leftmost symbol most
significant) and steps it by exact integer arithmetic. The two are
provably equivalent on valid rules, and `mode="both"` recomputes every
step along each path independently and fails loudly on any divergence.

Number-path bookkeeping uses the explicit per-symbol block lengths, not
digit counts of the block values: a block of zeros has value 0, whose
digit count says nothing about how many cells it occupies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .numtheory import digit, from_digits, ilog, num_digits, to_digits
from .rules import (
    RuleTable,
    WolframCode,
    decode_wolfram,
    f_number,
    is_constant_length,
    rule_vector,
    structural_violations,
    validate,
)

__all__ = [
    "Word",
    "Trajectory",
    "GrowthStep",
    "CrossCheckError",
    "DEFAULT_MAX_WORD_LEN",
    "parse_word",
    "step_string",
    "step_string_reference",
    "step_number",
    "step_constant_number",
    "run",
    "growth_ratios",
]

DEFAULT_MAX_WORD_LEN = 100_000_000


class CrossCheckError(RuntimeError):
    """The two word representations disagreed. This is a bug, not bad input."""


def _symbol_dtype(p: int):
    return np.min_scalar_type(p - 1)


class Word:
    """A substitution-system state over the alphabet ``{0, ..., p-1}``.

    Holds whichever view it was built from -- symbol array or numeral --
    and derives the other lazily, caching it. The two views are kept
    synchronized through the explicit ``length``: a numeral alone cannot
    represent leading zeros, so ``length`` may exceed its digit count.
    """

    __slots__ = ("p", "_length", "_symbols", "_numeral")

    def __init__(self, p, length, symbols, numeral):
        self.p = p
        self._length = length
        self._symbols = symbols
        self._numeral = numeral

    @classmethod
    def from_symbols(cls, p: int, symbols: Iterable[int]) -> "Word":
        arr = np.asarray(symbols, dtype=_symbol_dtype(p))
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("a word needs at least one symbol")
        if arr.max() >= p or np.asarray(symbols).min() < 0:
            raise ValueError(f"word contains symbols outside [0, {p - 1}]")
        arr.setflags(write=False)
        return cls(p, int(arr.size), arr, None)

    @classmethod
    def from_numeral(cls, p: int, numeral: int, length: int | None = None) -> "Word":
        if numeral < 0:
            raise ValueError(f"word numeral must be non-negative, got {numeral}")
        digits = num_digits(p, numeral)
        if length is None:
            length = digits
        elif length < digits:
            raise ValueError(
                f"declared length {length} below digit count {digits} of {numeral}"
            )
        return cls(p, length, None, int(numeral))

    @classmethod
    def from_text(cls, p: int, text: str) -> "Word":
        return cls.from_symbols(p, parse_word(p, text))

    @property
    def length(self) -> int:
        return self._length

    @property
    def symbols(self) -> np.ndarray:
        """Symbols leftmost-first, as a read-only array."""
        if self._symbols is None:
            ds = to_digits(self.p, self._numeral)
            ds += [0] * (self._length - len(ds))
            arr = np.asarray(ds[::-1], dtype=_symbol_dtype(self.p))
            arr.setflags(write=False)
            self._symbols = arr
        return self._symbols

    @property
    def numeral(self) -> int:
        """The word read as a radix-``p`` numeral, leftmost symbol most significant."""
        if self._numeral is None:
            self._numeral = from_digits(self.p, self._symbols[::-1].tolist())
        return self._numeral

    @property
    def leading(self) -> int:
        """The leftmost (most significant) symbol."""
        if self._symbols is not None:
            return int(self._symbols[0])
        return digit(self.p, self._length - 1, self._numeral)

    def text(self) -> str:
        """Compact display: one character per symbol for ``p <= 10``, else comma-separated."""
        syms = self.symbols
        if self.p <= 10:
            return "".join(chr(ord("0") + s) for s in syms.tolist())
        return ",".join(str(s) for s in syms.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return (
            self.p == other.p
            and self._length == other._length
            and self.numeral == other.numeral
        )

    def __repr__(self) -> str:
        shown = self.text() if self._length <= 40 else self.text()[:37] + "..."
        return f"Word(p={self.p}, len={self._length}, {shown!r})"


def parse_word(p: int, text: str) -> list[int]:
    """Parse a seed word: per-character digits, or comma/space-separated values."""
    text = text.strip()
    if not text:
        raise ValueError("empty word")
    if "," in text or " " in text:
        parts = text.replace(",", " ").split()
    else:
        parts = list(text)
    try:
        symbols = [int(c) for c in parts]
    except ValueError:
        raise ValueError(f"cannot parse word {text!r}") from None
    for s in symbols:
        if not 0 <= s < p:
            raise ValueError(f"symbol {s} outside [0, {p - 1}]")
    return symbols


@dataclass
class _Compiled:
    """Per-rule lookup tables; built once per table, cached."""

    lens: np.ndarray  # per-symbol block length
    starts: np.ndarray  # offset of each block in `flat`
    flat: np.ndarray  # all blocks concatenated
    blocks2d: np.ndarray | None  # (p, N) view for constant-length rules
    f_vals: tuple[int, ...] | None  # block numerals (valid rules only)
    f_lens: tuple[int, ...] | None


@lru_cache(maxsize=256)
def _compiled(rule: RuleTable) -> _Compiled:
    bad = structural_violations(rule)
    if bad:
        raise ValueError(f"rule not runnable: {bad[0].message}")
    dtype = _symbol_dtype(rule.p)
    lens = np.array(rule.lengths, dtype=np.int64)
    starts = np.concatenate(([0], np.cumsum(lens)[:-1]))
    flat = np.array([c for b in rule.blocks for c in b], dtype=dtype)
    N = is_constant_length(rule)
    blocks2d = flat.reshape(rule.p, N) if N is not None else None
    if validate(rule):
        f_vals = f_lens = None
    else:
        pairs = [f_number(rule, k) for k in range(rule.p)]
        f_vals = tuple(v for v, _ in pairs)
        f_lens = tuple(n for _, n in pairs)
    return _Compiled(lens, starts, flat, blocks2d, f_vals, f_lens)


def _step_symbols(comp: _Compiled, symbols: np.ndarray) -> np.ndarray:
    if comp.blocks2d is not None:
        return comp.blocks2d[symbols].reshape(-1)
    lens_w = comp.lens[symbols]
    total = int(lens_w.sum())
    out_starts = np.cumsum(lens_w) - lens_w
    idx = (
        np.arange(total, dtype=np.int64)
        - np.repeat(out_starts, lens_w)
        + np.repeat(comp.starts[symbols], lens_w)
    )
    return comp.flat[idx]


def step_string(rule: RuleTable, w: Word) -> Word:
    """One substitution step on the symbol array: each symbol becomes its block."""
    if w.p != rule.p:
        raise ValueError(f"word alphabet {w.p} does not match rule alphabet {rule.p}")
    comp = _compiled(rule)
    out = _step_symbols(comp, w.symbols)
    out.setflags(write=False)
    return Word(rule.p, int(out.size), out, None)


def step_string_reference(rule: RuleTable, w: Word) -> Word:
    """Selection-function form of the constant-length step.

    Every output symbol is picked by a double sum of Kronecker windows
    over the rule vector instead of by direct indexing. Quadratic in
    alphabet and block size; exists purely so the production lookup has
    something independent to be checked against.
    """
    from .numtheory import bfunc

    N = is_constant_length(rule)
    if N is None:
        raise ValueError("reference step requires a constant-length rule")
    a = rule_vector(rule, N)
    p = rule.p
    syms = w.symbols.tolist()
    out = []
    for x in syms:
        for h in range(N):
            acc = 0.0
            for n in range(p):
                for m in range(N):
                    acc += a[m + n * N] * bfunc(h - m, 0.5) * bfunc(n - x, 0.5)
            out.append(int(acc))
    return Word.from_symbols(p, out)


def _require_number_ready(rule: RuleTable, A: int, length: int) -> _Compiled:
    violations = validate(rule)
    if violations:
        raise ValueError(f"number path requires a valid rule: {violations[0].message}")
    if A < 1:
        raise ValueError("number path requires a nonzero word (leftmost symbol nonzero)")
    digits = num_digits(rule.p, A)
    if digits > length:
        raise ValueError(f"numeral {A} has {digits} digits, more than declared length {length}")
    if digits < length:
        raise ValueError(
            "leftmost symbol is zero: leading zeros are unrepresentable on the number path"
        )
    return _compiled(rule)


def step_number(rule: RuleTable, A: int, length: int) -> tuple[int, int]:
    """One substitution step on the numeral: ``(A', length')``.

    Each digit's replacement numeral is shifted past the blocks of all
    lower digits; the shift uses the explicit block lengths, so blocks
    of zeros occupy their cells even though their value is 0. Evaluated
    most-significant-digit first, Horner style.
    """
    comp = _require_number_ready(rule, A, length)
    p = rule.p
    f_vals, f_lens = comp.f_vals, comp.f_lens
    out = 0
    total = 0
    for d in reversed(to_digits(p, A)):
        out = out * p ** f_lens[d] + f_vals[d]
        total += f_lens[d]
    return out, total


@lru_cache(maxsize=256)
def _decoded(wc: WolframCode) -> RuleTable:
    return decode_wolfram(wc)


def step_constant_number(wc: WolframCode, A: int, length: int) -> tuple[int, int]:
    """Constant-length specialization of :func:`step_number`.

    With every block the same length ``N``, digit ``m`` of the input
    owns digits ``[N*m, N*(m+1))`` of the output, so the whole step is a
    single Horner pass with stride ``p**N``.
    """
    rule = _decoded(wc)
    comp = _require_number_ready(rule, A, length)
    p, N = wc.p, wc.N
    stride = p**N
    f_vals = comp.f_vals
    out = 0
    for d in reversed(to_digits(p, A)):
        out = out * stride + f_vals[d]
    return out, N * length


@dataclass
class Trajectory:
    """Words ``w_0 ... w_T`` produced by iterating one rule.

    ``truncated`` marks a run cut short by the word-length cap; the
    words that were produced are still present and correct.
    """

    rule: RuleTable
    words: list[Word] = field(default_factory=list)
    truncated: bool = False

    @property
    def lengths(self) -> list[int]:
        return [w.length for w in self.words]

    @property
    def steps(self) -> int:
        return len(self.words) - 1


def run(
    rule: RuleTable,
    seed: Word,
    steps: int,
    mode: str = "strings",
    max_len: int = DEFAULT_MAX_WORD_LEN,
) -> Trajectory:
    """Iterate ``rule`` from ``seed`` for ``steps`` steps.

    mode:
        ``"strings"``  array path only (any structurally sound rule);
        ``"numbers"``  numeral path only (valid rules, nonzero leading symbol);
        ``"both"``     both paths independently, asserted equal at every step.

    If producing the next word would exceed ``max_len`` symbols, the
    trajectory is returned as computed so far with ``truncated=True``.
    """
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    if mode not in ("strings", "numbers", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    if seed.p != rule.p:
        raise ValueError(f"seed alphabet {seed.p} does not match rule alphabet {rule.p}")
    comp = _compiled(rule)

    number_mode = mode in ("numbers", "both")
    if number_mode:
        _require_number_ready(rule, seed.numeral, seed.length)

    traj = Trajectory(rule, [seed])
    lens = comp.lens
    w = seed
    A, length = (seed.numeral, seed.length) if number_mode else (None, None)
    for _ in range(steps):
        if mode == "numbers":
            next_len = sum(comp.f_lens[d] for d in to_digits(rule.p, A))
            # digits above num_digits are leading zeros; impossible here (leading nonzero)
        else:
            next_len = int(lens[w.symbols].sum())
        if next_len > max_len:
            traj.truncated = True
            break
        if mode != "numbers":
            w = step_string(rule, w)
        if number_mode:
            A, length = step_number(rule, A, length)
            if length != next_len:
                raise CrossCheckError(
                    f"length mismatch at step {traj.steps + 1}: array {next_len}, numeral {length}"
                )
        if mode == "both":
            if w.numeral != A:
                raise CrossCheckError(
                    f"representation mismatch at step {traj.steps + 1}: "
                    f"array word gives {w.numeral}, numeral path gives {A}"
                )
            traj.words.append(w)
        elif mode == "strings":
            traj.words.append(w)
        else:
            traj.words.append(Word.from_numeral(rule.p, A, length))
    return traj


@dataclass(frozen=True)
class GrowthStep:
    """Exact growth of the word numeral over one step."""

    ratio: Fraction
    floor_log: int  # exact floor(log_p(ratio))
    length_increase: int


def growth_ratios(traj: Trajectory) -> list[GrowthStep]:
    """Per-step numeral ratios ``A_{t+1}/A_t`` as exact rationals.

    Also carries the exact integer ``floor(log_p ratio)`` and the plain
    length difference. The two coincide whenever a step preserves the
    leading symbol's magnitude (they do on every bundled example rule),
    but the log is computed exactly rather than assumed equal.
    """
    p = traj.rule.p
    numerals = [w.numeral for w in traj.words]
    if any(a < 1 for a in numerals):
        raise ValueError("growth ratios require nonzero numerals at every step")
    out = []
    for (prev_w, next_w), (prev, nxt) in zip(
        zip(traj.words, traj.words[1:]), zip(numerals, numerals[1:])
    ):
        if nxt >= prev:
            e = ilog(p, nxt // prev)
        else:
            # ratio < 1: floor(log) = -(smallest m with nxt * p^m >= prev)
            m, v = 0, nxt
            while v < prev:
                v *= p
                m += 1
            e = -m
        out.append(
            GrowthStep(Fraction(nxt, prev), e, next_w.length - prev_w.length)
        )
    return out
