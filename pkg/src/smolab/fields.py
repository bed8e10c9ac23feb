"""Abelian number fields described by congruence data.

A field is the fixed field of a subgroup H of (Z/N)* inside the N-th
cyclotomic field; the class of an unramified prime in (Z/N)*/H plays the
role of its Frobenius, and its residue degree is the order of that class.
Primes dividing N are ramified and always excluded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ParseError, Ramified


def _unit_residues(N: int) -> list[int]:
    return [r for r in range(1, N + 1) if math.gcd(r, N) == 1] if N > 1 else [0]


def _close_subgroup(N: int, generators: tuple[int, ...]) -> frozenset[int]:
    H = {1 % N}
    frontier = [1 % N]
    gens = [g % N for g in generators]
    for g in gens:
        if math.gcd(g, N) != 1:
            raise ParseError(f"subgroup generator {g} is not a unit mod {N}")
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = (x * g) % N
            if y not in H:
                H.add(y)
                frontier.append(y)
    return frozenset(H)


@dataclass(frozen=True)
class FieldSpec:
    """Congruence description (N, H) of an abelian field of degree [(Z/N)*:H]."""

    modulus: int
    subgroup_generators: tuple[int, ...] = ()
    label: str = ""

    def __post_init__(self):
        if self.modulus < 1:
            raise ParseError("modulus must be positive")
        if not self.label:
            gens = ",".join(str(g) for g in self.subgroup_generators) or "1"
            object.__setattr__(self, "label", f"N={self.modulus};H=<{gens}>")

    @cached_property
    def subgroup(self) -> frozenset[int]:
        return _close_subgroup(self.modulus, self.subgroup_generators)

    @cached_property
    def unit_order(self) -> int:
        return len(_unit_residues(self.modulus))

    @cached_property
    def degree(self) -> int:
        d, rem = divmod(self.unit_order, len(self.subgroup))
        if rem:
            raise ParseError("subgroup size does not divide the unit group order")
        return d

    @cached_property
    def _coset_table(self) -> tuple[np.ndarray, tuple[int, ...]]:
        """residue -> coset index (or -1), plus canonical coset representatives."""
        N = self.modulus
        table = np.full(max(N, 1), -1, dtype=np.int64)
        reps: list[int] = []
        H = self.subgroup
        for r in _unit_residues(N):
            if table[r % N] != -1:
                continue
            coset = sorted((r * h) % N for h in H)
            idx = len(reps)
            reps.append(coset[0])
            for c in coset:
                table[c] = idx
        return table, tuple(reps)

    @cached_property
    def _degree_table(self) -> np.ndarray:
        """residue -> residue degree of primes in that class (0 if ramified)."""
        N = self.modulus
        out = np.zeros(max(N, 1), dtype=np.int64)
        H = self.subgroup
        for r in _unit_residues(N):
            x, f = r % N, 1
            while x not in H:
                x = (x * r) % N
                f += 1
            out[r % N] = f
        return out

    @property
    def coset_representatives(self) -> tuple[int, ...]:
        return self._coset_table[1]

    def coset_index(self, p: int) -> int:
        idx = int(self._coset_table[0][p % self.modulus]) if self.modulus > 1 else 0
        if idx < 0:
            raise Ramified(f"prime {p} divides modulus {self.modulus}")
        return idx

    def residue_degree(self, p: int) -> int:
        if self.modulus == 1:
            return 1
        f = int(self._degree_table[p % self.modulus])
        if f == 0:
            raise Ramified(f"prime {p} divides modulus {self.modulus}")
        return f

    def places(self, p: int) -> tuple[int, int]:
        """(residue degree f, number of places above p) for unramified p."""
        f = self.residue_degree(p)
        return f, self.degree // f

    def residues_with_degree(self, j: int) -> frozenset[int]:
        table = self._degree_table
        return frozenset(int(r) for r in np.flatnonzero(table == j))

    def ramified_primes(self) -> frozenset[int]:
        N, out = self.modulus, set()
        for p in range(2, N + 1):
            if N % p == 0 and all(p % q for q in out):
                out.add(p)
        return frozenset(out)


@dataclass(frozen=True)
class PrimeItem:
    """A place above a rational prime: norm q = p**f."""

    p: int
    f: int

    @property
    def q(self) -> int:
        return self.p**self.f


def residue_degree(fs: FieldSpec, p: int) -> int:
    return fs.residue_degree(p)


def parse_fieldspec(text: str, label: str = "") -> FieldSpec:
    """Parse ``N=<int>`` / ``H=<comma list of generators>`` lines."""
    N = None
    gens: tuple[int, ...] = ()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().upper()
        if key == "N":
            try:
                N = int(value.strip())
            except ValueError:
                raise ParseError(f"bad modulus {value!r}")
        elif key == "H":
            items = [v.strip() for v in value.split(",") if v.strip()]
            try:
                gens = tuple(int(v) for v in items)
            except ValueError:
                raise ParseError(f"bad subgroup generator list {value!r}")
        else:
            raise ParseError(f"unknown field-spec key {key!r}")
    if N is None:
        raise ParseError("field spec is missing N=<int>")
    fs = FieldSpec(modulus=N, subgroup_generators=gens, label=label)
    fs.subgroup  # validate generators eagerly
    return fs
