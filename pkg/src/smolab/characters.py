"""Ordinary character tables and the same-degree distinguishing bound.

Tables are computed by the class-algebra eigenvector method: the integer
structure constants of the class sums are assembled exactly, a seeded random
integer combination of the class matrices is diagonalized in double
precision, and the common eigenvectors are normalized through the
orthogonality relations.  Values within 1e-7 of a Gaussian rational with
denominator <= |G| are snapped to the exact grid point.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import ClassMismatch, DegreeMismatch, LemmaViolation, NumericalDegeneracy
from .groups import ConjugacyClassPartition, FiniteGroup

VALUE_EQ_TOL = 1e-9
SNAP_TOL = 1e-7
EIG_SEPARATION_TOL = 1e-8
ORTHOGONALITY_TOL = 1e-6
_MAX_ATTEMPTS = 8


@dataclass(frozen=True)
class Character:
    """One irreducible character: degree plus a value per conjugacy class."""

    degree: int
    values: tuple[complex, ...]
    partition: ConjugacyClassPartition
    group_label: str
    integer_values: tuple[int, ...] | None = None

    @property
    def is_integral(self) -> bool:
        return self.integer_values is not None

    def sort_key(self):
        # descending value order puts the trivial character first per degree
        return (self.degree, tuple((-v.real, -v.imag) for v in self.values))


@dataclass(frozen=True)
class CharacterTable:
    group: FiniteGroup
    partition: ConjugacyClassPartition
    rows: tuple[Character, ...]

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(r.degree for r in self.rows)

    def rows_of_degree(self, n: int) -> list[int]:
        return [i for i, r in enumerate(self.rows) if r.degree == n]


class Verdict(enum.Enum):
    FORCED_EQUAL = "ForcedEqual"
    BELOW_THRESHOLD = "BelowThreshold"


def distinguishing_threshold(n: int) -> Fraction:
    """Agreement fraction above which two degree-n irreducibles must coincide."""
    return 1 - Fraction(1, 2 * n * n)


def _structure_constants(G: FiniteGroup) -> tuple[np.ndarray, ConjugacyClassPartition]:
    part = G.conjugacy_classes()
    r = part.num_classes
    members: list[list[int]] = [[] for _ in range(r)]
    for x, c in enumerate(part.class_of):
        members[c].append(x)
    T = G.table
    inv = G._inverses
    class_of = np.array(part.class_of)
    reps = np.array(part.representatives, dtype=np.intp)
    # mats[i, j, k] = #{(x, y) in C_i x C_j : x*y = rep_k}, exact integers;
    # counted as #{x in C_i : x^{-1} * rep_k in C_j}
    mats = np.zeros((r, r, r), dtype=np.int64)
    for i in range(r):
        for x in members[i]:
            j_of_k = class_of[T[int(inv[x]), reps]]
            for k in range(r):
                mats[i, int(j_of_k[k]), k] += 1
    return mats, part


def _snap_value(z: complex, max_denominator: int) -> complex:
    re = Fraction(z.real).limit_denominator(max_denominator)
    im = Fraction(z.imag).limit_denominator(max_denominator)
    nr = float(re) if abs(z.real - re) <= SNAP_TOL else z.real
    ni = float(im) if abs(z.imag - im) <= SNAP_TOL else z.imag
    return complex(nr, ni)


def _try_table(G: FiniteGroup, mats: np.ndarray, part: ConjugacyClassPartition,
               attempt: int) -> CharacterTable | None:
    r = part.num_classes
    order = G.order
    sizes = np.array(part.class_sizes, dtype=float)
    rng = random.Random(f"class-algebra:{order}:{r}:{attempt}")
    coeffs = np.array([rng.randrange(1, 1000) for _ in range(r)], dtype=float)
    M = np.tensordot(coeffs, mats.astype(float), axes=(0, 0))
    eigvals, eigvecs = np.linalg.eig(M)
    scale = max(1.0, float(np.max(np.abs(eigvals))))
    order_idx = np.lexsort((eigvals.imag, eigvals.real))
    eigvals = eigvals[order_idx]
    eigvecs = eigvecs[:, order_idx]
    for a, b in combinations(range(r), 2):
        if abs(eigvals[a] - eigvals[b]) <= EIG_SEPARATION_TOL * scale:
            return None  # coincident eigenvalues: combination failed to split

    rows: list[Character] = []
    sum_sq = 0
    for t in range(r):
        v = eigvecs[:, t]
        if abs(v[0]) < 1e-12:
            return None
        omega = v / v[0]  # identity-class entry of the eigenvector is 1
        norm = float(np.sum(np.abs(omega) ** 2 / sizes))
        deg_f = (order / norm) ** 0.5
        degree = int(round(deg_f))
        if degree < 1 or abs(deg_f - degree) > 1e-6:
            return None
        sum_sq += degree * degree
        values = omega * degree / sizes
        snapped = tuple(_snap_value(complex(z), order) for z in values)
        if abs(snapped[0] - degree) > VALUE_EQ_TOL:
            return None
        if any(abs(z) > degree + 1e-6 for z in snapped):
            return None
        ints: tuple[int, ...] | None = tuple(int(round(z.real)) for z in snapped)
        for z, iz in zip(snapped, ints):
            if abs(z.imag) > VALUE_EQ_TOL or abs(z.real - iz) > VALUE_EQ_TOL:
                ints = None
                break
        rows.append(Character(degree=degree, values=snapped, partition=part,
                              group_label=G.label, integer_values=ints))
    if sum_sq != order:
        return None
    rows.sort(key=Character.sort_key)
    table = CharacterTable(group=G, partition=part, rows=tuple(rows))
    if not _orthogonality_ok(table):
        return None
    return table


def _orthogonality_ok(table: CharacterTable) -> bool:
    order = table.group.order
    sizes = np.array(table.partition.class_sizes, dtype=float)
    vals = np.array([r.values for r in table.rows])
    gram = (vals * sizes) @ vals.conj().T
    target = order * np.eye(len(table.rows))
    return bool(np.max(np.abs(gram - target)) <= ORTHOGONALITY_TOL * order)


def character_table(G: FiniteGroup) -> CharacterTable:
    """Full table of irreducible characters, deterministic across runs."""
    cached = G._cache.get("character_table")
    if cached is not None:
        return cached
    mats, part = _structure_constants(G)
    for attempt in range(_MAX_ATTEMPTS):
        table = _try_table(G, mats, part, attempt)
        if table is not None:
            G._cache["character_table"] = table
            return table
    raise NumericalDegeneracy(
        f"eigenvector separation failed for {G.label} after {_MAX_ATTEMPTS} attempts")


def _check_compatible(chi: Character, chi2: Character, G: FiniteGroup) -> None:
    part = G.conjugacy_classes()
    if chi.partition is not part and chi.partition != part:
        raise ClassMismatch(f"{chi.group_label} character used with group {G.label}")
    if chi2.partition is not part and chi2.partition != part:
        raise ClassMismatch(f"{chi2.group_label} character used with group {G.label}")


def inner_product(chi: Character, chi2: Character, G: FiniteGroup) -> complex:
    """(1/|G|) sum_g chi(g) conj(chi2(g)), evaluated classwise."""
    _check_compatible(chi, chi2, G)
    sizes = G.conjugacy_classes().class_sizes
    total = sum(s * a * b.conjugate() for s, a, b in zip(sizes, chi.values, chi2.values))
    return total / G.order


def agreement_fraction(chi: Character, chi2: Character, G: FiniteGroup) -> Fraction:
    """Exact fraction of group elements on which the two characters agree."""
    _check_compatible(chi, chi2, G)
    sizes = G.conjugacy_classes().class_sizes
    if chi.is_integral and chi2.is_integral:
        agree = sum(s for s, a, b in zip(sizes, chi.integer_values, chi2.integer_values)
                    if a == b)
    else:
        agree = sum(s for s, a, b in zip(sizes, chi.values, chi2.values)
                    if abs(a - b) <= VALUE_EQ_TOL)
    return Fraction(agree, G.order)


def characters_equal(chi: Character, chi2: Character) -> bool:
    return (chi.degree == chi2.degree
            and len(chi.values) == len(chi2.values)
            and all(abs(a - b) <= VALUE_EQ_TOL for a, b in zip(chi.values, chi2.values)))


def lemma_check(chi: Character, chi2: Character, G: FiniteGroup) -> Verdict:
    """Classify an irreducible pair of equal degree by its agreement fraction.

    Agreement strictly above 1 - 1/(2 n^2) forces equality; if the values
    disagree anyway, something is broken and LemmaViolation is raised.
    """
    if chi.degree != chi2.degree:
        raise DegreeMismatch(f"degrees {chi.degree} != {chi2.degree}")
    frac = agreement_fraction(chi, chi2, G)
    if frac > distinguishing_threshold(chi.degree):
        if not characters_equal(chi, chi2):
            raise LemmaViolation(
                f"agreement {frac} above threshold yet characters differ on {G.label}")
        return Verdict.FORCED_EQUAL
    return Verdict.BELOW_THRESHOLD


@dataclass(frozen=True)
class ExtremalResult:
    fraction: Fraction
    pair: tuple[int, int]
    degree: int


def extremal_search(G: FiniteGroup, n: int) -> ExtremalResult | None:
    """Maximum agreement over unordered pairs of distinct degree-n irreducibles.

    Returns None when the table has fewer than two rows of degree n.  Ties
    are broken toward the lexicographically first row-index pair.
    """
    table = character_table(G)
    rows = table.rows_of_degree(n)
    if len(rows) < 2:
        return None
    best: ExtremalResult | None = None
    for i, j in combinations(rows, 2):
        frac = agreement_fraction(table.rows[i], table.rows[j], G)
        if best is None or frac > best.fraction:
            best = ExtremalResult(fraction=frac, pair=(i, j), degree=n)
    return best
