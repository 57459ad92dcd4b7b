"""Terms over a finitary signature and their s-expression syntax.

Terms are immutable and carry a precomputed ordering key so that "least
term" comparisons (size first, then variables before applications, then
symbol name, then arguments) are cheap.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence, Union


class TermSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Var:
    index: int
    key: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"variable index must be nonnegative, got {self.index}")
        object.__setattr__(self, "key", (1, (0, self.index)))

    @property
    def size(self) -> int:
        return 1

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple = ()
    key: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        args = tuple(self.args)
        object.__setattr__(self, "args", args)
        size = 1 + sum(a.size for a in args)
        object.__setattr__(self, "key", (size, (1, self.symbol, tuple(a.key for a in args))))

    @property
    def size(self) -> int:
        return self.key[0]

    def __str__(self):
        if not self.args:
            return self.symbol
        return "(" + " ".join([self.symbol] + [str(a) for a in self.args]) + ")"


Term = Union[Var, App]


def variables(t: Term) -> set:
    if isinstance(t, Var):
        return {t.index}
    out = set()
    for a in t.args:
        out |= variables(a)
    return out


def max_var(t: Term) -> int:
    """Largest variable index in ``t``, or -1 for a ground term."""
    vs = variables(t)
    return max(vs) if vs else -1


def depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(depth(a) for a in t.args)


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


def substitute(t: Term, mapping: Mapping[int, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.index, t)
    return App(t.symbol, tuple(substitute(a, mapping) for a in t.args))


def shift(t: Term, offset: int) -> Term:
    """Rename every variable ``x<k>`` to ``x<k+offset>``."""
    if isinstance(t, Var):
        return Var(t.index + offset)
    return App(t.symbol, tuple(shift(a, offset) for a in t.args))


def check_well_formed(t: Term, arities: Mapping[str, int]) -> None:
    if isinstance(t, Var):
        return
    if t.symbol not in arities:
        raise ValueError(f"unknown operation symbol {t.symbol!r}")
    if arities[t.symbol] != len(t.args):
        raise ValueError(
            f"{t.symbol!r} has arity {arities[t.symbol]} but was applied to {len(t.args)} arguments"
        )
    for a in t.args:
        check_well_formed(a, arities)


_TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")
_VAR = re.compile(r"x(\d+)\Z")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise TermSyntaxError(f"cannot tokenize {text!r} at offset {pos}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def parse_term(text: str, arities: Mapping[str, int] | None = None) -> Term:
    """Parse a prefix s-expression such as ``"(mul x0 (add one x1))"``.

    Variables are written ``x<k>``; nullary operations are bare symbols.
    When ``arities`` is given the result is checked for well-formedness.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise TermSyntaxError("empty term")
    pos = 0

    def parse() -> Term:
        nonlocal pos
        if pos >= len(tokens):
            raise TermSyntaxError(f"unexpected end of term in {text!r}")
        tok = tokens[pos]
        pos += 1
        if tok == ")":
            raise TermSyntaxError(f"unexpected ')' in {text!r}")
        if tok == "(":
            if pos >= len(tokens) or tokens[pos] in "()":
                raise TermSyntaxError(f"expected an operation symbol in {text!r}")
            sym = tokens[pos]
            pos += 1
            args = []
            while pos < len(tokens) and tokens[pos] != ")":
                args.append(parse())
            if pos >= len(tokens):
                raise TermSyntaxError(f"unbalanced parentheses in {text!r}")
            pos += 1
            return App(sym, tuple(args))
        m = _VAR.match(tok)
        if m:
            return Var(int(m.group(1)))
        return App(tok, ())

    t = parse()
    if pos != len(tokens):
        raise TermSyntaxError(f"trailing tokens in {text!r}")
    if arities is not None:
        check_well_formed(t, arities)
    return t


def numeral(n: int, add: str = "add", one: str = "one", zero: str = "zero") -> Term:
    """The ground term n·1 built as a balanced sum, e.g. for ``n = 0`` in rings."""
    if n < 0:
        raise ValueError("numeral expects n >= 0")
    if n == 0:
        return App(zero)
    if n == 1:
        return App(one)
    half = n // 2
    return App(add, (numeral(half, add, one, zero), numeral(n - half, add, one, zero)))


def format_terms(ts: Sequence[Term]) -> list:
    return [str(t) for t in ts]
