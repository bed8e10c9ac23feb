"""Describable sets of rational primes, with norms for field-degree selectors.

Selectors are pure predicates over primes, vectorized over numpy arrays.
Ramified primes (dividing a defining modulus) are always excluded.  A
selector whose membership depends only on a congruence class can report an
exact analytic density; arbitrary combinations fall back to None.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ParseError
from .fields import FieldSpec


class PrimeSelector:
    """Base selector: membership plus optional norm/density structure."""

    #: uniform exponent j with norm(p) = p**j, or None if not uniform
    norm_exponent: int | None = 1
    excluded: frozenset[int] = frozenset()

    def contains(self, p: int) -> bool:
        return bool(self.mask(np.array([p], dtype=np.int64))[0])

    def mask(self, primes: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def norms(self, primes: np.ndarray) -> np.ndarray:
        j = self.norm_exponent or 1
        return primes.astype(np.float64) ** j

    def place_multiplicity(self, primes: np.ndarray) -> np.ndarray:
        return np.ones(len(primes), dtype=np.int64)

    def max_prime_for_norm(self, norm_cutoff: float) -> int:
        j = self.norm_exponent or 1
        return int(math.floor(norm_cutoff ** (1.0 / j) + 1e-9))

    def as_congruence(self) -> tuple[int, frozenset[int]] | None:
        """(modulus, residue set) description if one exists, else None."""
        return None

    def analytic_density(self) -> Fraction | None:
        cong = self.as_congruence()
        if cong is None:
            return None
        N, residues = cong
        units = [r for r in range(N) if math.gcd(r, N) == 1] if N > 1 else [0]
        hits = sum(1 for r in units if r in residues)
        return Fraction(hits, len(units))

    def describe(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"<selector {self.describe()}>"


@dataclass(frozen=True)
class AllPrimes(PrimeSelector):
    def mask(self, primes: np.ndarray) -> np.ndarray:
        return np.ones(len(primes), dtype=bool)

    def as_congruence(self):
        return (1, frozenset({0}))

    def describe(self) -> str:
        return "all"


@dataclass(frozen=True)
class NoPrimes(PrimeSelector):
    def mask(self, primes: np.ndarray) -> np.ndarray:
        return np.zeros(len(primes), dtype=bool)

    def as_congruence(self):
        return (1, frozenset())

    def describe(self) -> str:
        return "none"


@dataclass(frozen=True)
class CongruenceSelector(PrimeSelector):
    """Primes p with p mod N in a fixed residue set (non-units dropped)."""

    modulus: int
    residues: frozenset[int]

    def __post_init__(self):
        units = {r % self.modulus for r in self.residues
                 if math.gcd(r, self.modulus) == 1}
        object.__setattr__(self, "residues", frozenset(units))
        object.__setattr__(self, "excluded", _prime_divisors(self.modulus))

    def mask(self, primes: np.ndarray) -> np.ndarray:
        allowed = np.zeros(self.modulus, dtype=bool)
        for r in self.residues:
            allowed[r] = True
        return allowed[primes % self.modulus]

    def as_congruence(self):
        return (self.modulus, self.residues)

    def describe(self) -> str:
        return f"mod:{self.modulus}:{','.join(str(r) for r in sorted(self.residues))}"


@dataclass(frozen=True)
class DegreeSelector(PrimeSelector):
    """Unramified primes of residue degree exactly j; norms are p**j.

    Each selected prime carries deg/j places of norm p**j, so sums over the
    selector weighted by ``place_multiplicity`` run over places of the field.
    """

    fieldspec: FieldSpec
    j: int

    def __post_init__(self):
        if self.j < 1 or self.fieldspec.degree % self.j:
            raise ParseError(
                f"residue degree {self.j} must divide the field degree {self.fieldspec.degree}")
        object.__setattr__(self, "norm_exponent", self.j)
        object.__setattr__(self, "excluded", self.fieldspec.ramified_primes())

    def mask(self, primes: np.ndarray) -> np.ndarray:
        table = self.fieldspec._degree_table
        return table[primes % self.fieldspec.modulus] == self.j

    def place_multiplicity(self, primes: np.ndarray) -> np.ndarray:
        return np.full(len(primes), self.fieldspec.degree // self.j, dtype=np.int64)

    def as_congruence(self):
        return (self.fieldspec.modulus, self.fieldspec.residues_with_degree(self.j))

    def describe(self) -> str:
        return f"degree:{self.fieldspec.label}:{self.j}"


@dataclass(frozen=True)
class ExplicitList(PrimeSelector):
    primes: tuple[int, ...]
    _sorted: np.ndarray = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_sorted", np.array(sorted(set(self.primes)), dtype=np.int64))

    def mask(self, primes: np.ndarray) -> np.ndarray:
        return np.isin(primes, self._sorted)

    def analytic_density(self) -> Fraction:
        return Fraction(0)

    def describe(self) -> str:
        return f"list:[{len(self.primes)} primes]"


def _prime_divisors(n: int) -> frozenset[int]:
    out, d = set(), 2
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.add(n)
    return frozenset(out)


def _lift_congruence(cong: tuple[int, frozenset[int]], modulus: int) -> frozenset[int]:
    N, residues = cong
    return frozenset(r for r in range(modulus)
                     if math.gcd(r, modulus) == 1 and (r % N) in residues)


def _combine(a: PrimeSelector, b: PrimeSelector, op) -> tuple[int, frozenset[int]] | None:
    ca, cb = a.as_congruence(), b.as_congruence()
    if ca is None or cb is None:
        return None
    modulus = math.lcm(ca[0], cb[0])
    return (modulus, frozenset(op(_lift_congruence(ca, modulus), _lift_congruence(cb, modulus))))


@dataclass(frozen=True)
class Complement(PrimeSelector):
    inner: PrimeSelector

    def __post_init__(self):
        object.__setattr__(self, "excluded", self.inner.excluded)

    def mask(self, primes: np.ndarray) -> np.ndarray:
        keep = ~self.inner.mask(primes)
        for p in self.inner.excluded:
            keep &= primes != p
        return keep

    def as_congruence(self):
        c = self.inner.as_congruence()
        if c is None:
            return None
        N, residues = c
        units = frozenset(r for r in range(N) if math.gcd(r, N) == 1) if N > 1 else frozenset({0})
        return (N, units - residues)

    def describe(self) -> str:
        return f"not {self.inner.describe()}"


@dataclass(frozen=True)
class Intersection(PrimeSelector):
    left: PrimeSelector
    right: PrimeSelector

    def __post_init__(self):
        object.__setattr__(self, "excluded", self.left.excluded | self.right.excluded)
        if self.left.norm_exponent == self.right.norm_exponent:
            object.__setattr__(self, "norm_exponent", self.left.norm_exponent)
        else:
            object.__setattr__(self, "norm_exponent", None)

    def mask(self, primes: np.ndarray) -> np.ndarray:
        keep = self.left.mask(primes) & self.right.mask(primes)
        for p in self.excluded:
            keep &= primes != p
        return keep

    def as_congruence(self):
        return _combine(self.left, self.right, frozenset.intersection)

    def describe(self) -> str:
        return f"({self.left.describe()} and {self.right.describe()})"


@dataclass(frozen=True)
class Union(PrimeSelector):
    left: PrimeSelector
    right: PrimeSelector

    def __post_init__(self):
        object.__setattr__(self, "excluded", self.left.excluded | self.right.excluded)
        if self.left.norm_exponent == self.right.norm_exponent:
            object.__setattr__(self, "norm_exponent", self.left.norm_exponent)
        else:
            object.__setattr__(self, "norm_exponent", None)

    def mask(self, primes: np.ndarray) -> np.ndarray:
        keep = self.left.mask(primes) | self.right.mask(primes)
        for p in self.excluded:
            keep &= primes != p
        return keep

    def as_congruence(self):
        return _combine(self.left, self.right, frozenset.union)

    def describe(self) -> str:
        return f"({self.left.describe()} or {self.right.describe()})"


# -- command-line mini-language ---------------------------------------------
#
#   all | mod:N:r1,r2 | degree:<fieldspec path>:j | list:<path>
#   combinable with 'and' / 'or' / 'not'; 'or' binds loosest.


def parse_selector(expr: str, base_dir: str | Path = ".") -> PrimeSelector:
    tokens = expr.replace("(", " ( ").replace(")", " ) ").split()
    if not tokens:
        raise ParseError("empty selector expression")
    pos = 0

    def peek() -> str | None:
        return tokens[pos] if pos < len(tokens) else None

    def take() -> str:
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def parse_or() -> PrimeSelector:
        node = parse_and()
        while peek() == "or":
            take()
            node = Union(node, parse_and())
        return node

    def parse_and() -> PrimeSelector:
        node = parse_not()
        while peek() == "and":
            take()
            node = Intersection(node, parse_not())
        return node

    def parse_not() -> PrimeSelector:
        if peek() == "not":
            take()
            return Complement(parse_not())
        return parse_atom()

    def parse_atom() -> PrimeSelector:
        tok = peek()
        if tok is None:
            raise ParseError(f"unterminated selector expression {expr!r}")
        if tok == "(":
            take()
            node = parse_or()
            if peek() != ")":
                raise ParseError(f"missing ')' in {expr!r}")
            take()
            return node
        return atom_from_token(take())

    def atom_from_token(tok: str) -> PrimeSelector:
        if tok == "all":
            return AllPrimes()
        if tok == "none":
            return NoPrimes()
        parts = tok.split(":")
        if parts[0] == "mod" and len(parts) == 3:
            try:
                modulus = int(parts[1])
                residues = frozenset(int(r) for r in parts[2].split(","))
            except ValueError:
                raise ParseError(f"bad congruence selector {tok!r}")
            return CongruenceSelector(modulus, residues)
        if parts[0] == "degree" and len(parts) == 3:
            from .fields import parse_fieldspec
            path = Path(base_dir) / parts[1]
            try:
                text = path.read_text()
            except OSError as exc:
                raise ParseError(f"cannot read field spec {path}: {exc}")
            try:
                j = int(parts[2])
            except ValueError:
                raise ParseError(f"bad degree in selector {tok!r}")
            return DegreeSelector(parse_fieldspec(text, label=parts[1]), j)
        if parts[0] == "list" and len(parts) == 2:
            path = Path(base_dir) / parts[1]
            try:
                primes = tuple(int(line) for line in path.read_text().split())
            except OSError as exc:
                raise ParseError(f"cannot read prime list {path}: {exc}")
            except ValueError:
                raise ParseError(f"non-integer entry in prime list {path}")
            return ExplicitList(primes)
        raise ParseError(f"unknown selector token {tok!r}")

    node = parse_or()
    if pos != len(tokens):
        raise ParseError(f"trailing tokens in selector {expr!r}")
    return node
