"""Local Euler factors from Satake-type parameters and their finite products.

A local factor at norm q with parameters (a_1, ..., a_k) is the function
prod_i (1 - a_i q^-s)^-1.  Its poles lie on vertical lines, the rightmost at
Re(s) = max_i log|a_i| / log q.  Products over prime selectors are handled
strictly at truncation level: log-expansions are indexed by exact integer
prime powers and every report carries its cutoff.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .errors import (LimitExceeded, NormMismatch, NotPositiveType, PoleHit,
                     UnknownProfile)
from .selectors import PrimeSelector
from .sieve import iter_prime_segments

TEMPERED_TOL = 1e-9
POSITIVITY_TOL = 1e-9
LOG_INDEX_LIMIT = 10**8
STABILIZE_TOL = 1e-6


@dataclass(frozen=True)
class LocalFactor:
    """Reciprocal-polynomial data of one local factor: k parameters at norm q."""

    q: int
    alphas: tuple[complex, ...]
    degree: int

    def __post_init__(self):
        if self.q < 2:
            raise ValueError(f"norm must be >= 2, got {self.q}")
        if len(self.alphas) > self.degree:
            raise ValueError(f"{len(self.alphas)} parameters exceed degree {self.degree}")
        if any(a == 0 for a in self.alphas):
            raise ValueError("local parameters must be nonzero")
        object.__setattr__(self, "alphas", tuple(complex(a) for a in self.alphas))

    @property
    def k(self) -> int:
        return len(self.alphas)

    @property
    def is_tempered(self) -> bool:
        return all(abs(abs(a) - 1.0) <= TEMPERED_TOL for a in self.alphas)

    def power_sum(self, m: int) -> complex:
        return sum(a**m for a in self.alphas)


def eval_local(f: LocalFactor, s: complex) -> complex:
    """Evaluate the factor at s; raises PoleHit if q^s equals some parameter."""
    qs = complex(f.q) ** (-complex(s))
    value = 1.0 + 0.0j
    for i, a in enumerate(f.alphas):
        d = 1.0 - a * qs
        if abs(d) < 1e-12:
            raise PoleHit(i)
        value /= d
    return value


def first_pole_line(f: LocalFactor) -> float | None:
    """Real part of the rightmost pole line, or None for the constant factor 1."""
    if f.k == 0:
        return None
    return max(math.log(abs(a)) for a in f.alphas) / math.log(f.q)


def rankin_selberg_local(f: LocalFactor, g: LocalFactor,
                         conjugate_second: bool = True) -> LocalFactor:
    """Pairwise-product parameters {a_i * c(b_j)}; c conjugates iff flagged."""
    if f.q != g.q:
        raise NormMismatch(f"norms differ: {f.q} != {g.q}")
    betas = [b.conjugate() if conjugate_second else b for b in g.alphas]
    params = tuple(a * b for a in f.alphas for b in betas)
    return LocalFactor(q=f.q, alphas=params, degree=f.degree * g.degree)


@dataclass(frozen=True)
class RankinSelbergCoefficient:
    """Degree-2 leading coefficient of the paired local factor, both conventions."""

    conjugated: complex   # sum_ij a_i conj(a_j) = |sum_i a_i|^2
    unconjugated: complex  # sum_ij a_i a_j = (sum_i a_i)^2
    primary: complex

    def payload(self) -> dict:
        return {"conjugated": _c2d(self.conjugated),
                "unconjugated": _c2d(self.unconjugated),
                "primary": _c2d(self.primary)}


def _c2d(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def rs_leading_coefficient(f: LocalFactor, conjugated: bool = True) -> RankinSelbergCoefficient:
    if f.k < 1:
        raise ValueError("need at least one local parameter")
    total = sum(f.alphas)
    conj_val = sum(a * b.conjugate() for a in f.alphas for b in f.alphas)
    unconj_val = total * total
    return RankinSelbergCoefficient(
        conjugated=conj_val, unconjugated=unconj_val,
        primary=conj_val if conjugated else unconj_val)


# -- global (truncated) products -------------------------------------------------

FactorSource = Callable[[int], "LocalFactor | tuple[LocalFactor, ...]"]


@dataclass(frozen=True)
class EulerProduct:
    """A pure map from primes to local factors over a universe of primes."""

    degree: int
    factor_source: FactorSource = field(compare=False)
    universe: PrimeSelector
    ramified: frozenset[int] = frozenset()
    label: str = ""
    support_limit: int | None = None  # largest prime with data, if finite

    def factors_at(self, p: int) -> tuple[LocalFactor, ...]:
        got = self.factor_source(int(p))
        return got if isinstance(got, tuple) else (got,)

    def primes(self, max_prime: int) -> Iterable[int]:
        limit = max_prime
        if self.support_limit is not None:
            limit = min(limit, self.support_limit)
        for seg in iter_prime_segments(limit):
            mask = self.universe.mask(seg)
            for p in seg[mask]:
                if int(p) not in self.ramified:
                    yield int(p)


def zeta_product() -> EulerProduct:
    """Model with a single parameter 1 at every prime (the zeta shape)."""
    from .selectors import AllPrimes
    return EulerProduct(degree=1,
                        factor_source=lambda p: LocalFactor(q=p, alphas=(1.0,), degree=1),
                        universe=AllPrimes(), label="zeta-model")


def dedekind_product(fs) -> EulerProduct:
    """Abelian-field zeta model: one degree-1 factor of norm p^f per place."""
    from .selectors import AllPrimes

    def source(p: int):
        f, g = fs.places(p)
        return tuple(LocalFactor(q=p**f, alphas=(1.0,), degree=1) for _ in range(g))

    return EulerProduct(degree=fs.degree, factor_source=source, universe=AllPrimes(),
                        ramified=fs.ramified_primes(), label=f"dedekind({fs.label})")


@dataclass(frozen=True)
class LogExpansion:
    """Coefficients of the log of a truncated product, keyed by prime power."""

    cutoff: int
    coefficients: dict[int, complex]

    def real_items(self) -> list[tuple[int, float, float]]:
        return [(m, z.real, z.imag) for m, z in sorted(self.coefficients.items())]

    def dirichlet_value(self, sigma: float) -> float:
        return float(sum(z.real * m ** (-sigma) for m, z in self.coefficients.items()))


def log_expansion(ep: EulerProduct, selector: PrimeSelector, max_index: int) -> LogExpansion:
    """Exact prime-power coefficients of log of the selected partial product.

    The coefficient at q**m is (sum_i a_i**m) / m for each local factor of
    norm q; contributions from different places at the same integer add.
    """
    if max_index > LOG_INDEX_LIMIT:
        raise LimitExceeded(f"log-expansion index capped at {LOG_INDEX_LIMIT}")
    coeffs: dict[int, complex] = {}
    for p in ep.primes(max_index):
        if not selector.contains(p):
            continue
        for f in ep.factors_at(p):
            if f.k == 0:
                continue
            power = f.q
            m = 1
            while power <= max_index:
                coeffs[power] = coeffs.get(power, 0j) + f.power_sum(m) / m
                m += 1
                power *= f.q
    return LogExpansion(cutoff=max_index, coefficients=coeffs)


def positive_type_check(ep: EulerProduct, selector: PrimeSelector,
                        max_index: int) -> tuple[bool, int | None]:
    """True iff every log coefficient is >= -1e-9 (and essentially real)."""
    le = log_expansion(ep, selector, max_index)
    for m in sorted(le.coefficients):
        z = le.coefficients[m]
        if z.real < -POSITIVITY_TOL or abs(z.imag) > POSITIVITY_TOL:
            return False, m
    return True, None


@dataclass(frozen=True)
class LandauReport:
    sigmas: tuple[float, ...]
    log_values: tuple[float, ...]
    values: tuple[float, ...]
    cutoff: int

    def payload(self) -> dict:
        return {"sigmas": list(self.sigmas), "log_values": list(self.log_values),
                "values": list(self.values), "cutoff": self.cutoff,
                "nonvanishing": all(v >= 1.0 for v in self.values)}


def landau_region_check(ep: EulerProduct, selector: PrimeSelector,
                        sigmas, max_index: int) -> LandauReport:
    """Witness that a positive-type truncation stays >= 1 on real points.

    Nonnegative log coefficients force exp(sum c_m m^-sigma) >= 1, which is
    the truncation-level certificate that no zero can occur there.
    """
    ok, first_bad = positive_type_check(ep, selector, max_index)
    if not ok:
        raise NotPositiveType(f"log coefficient at index {first_bad} is negative")
    le = log_expansion(ep, selector, max_index)
    logs = tuple(le.dirichlet_value(float(s)) for s in sigmas)
    return LandauReport(sigmas=tuple(float(s) for s in sigmas),
                        log_values=logs,
                        values=tuple(math.exp(v) for v in logs),
                        cutoff=max_index)


# -- abscissa arithmetic ---------------------------------------------------------


def key_observation_abscissa(delta, j: int):
    """delta + 1/j: absolute-convergence edge for degree-j products with |a| <= q^delta."""
    if j < 1:
        raise ValueError("degree j must be >= 1")
    if isinstance(delta, (int, Fraction)):
        return Fraction(delta) + Fraction(1, j)
    return float(delta) + 1.0 / j


@dataclass(frozen=True)
class ConvergenceProbe:
    sigmas: tuple[float, ...]
    cutoffs: tuple[int, ...]
    partial_sums: dict[float, tuple[float, ...]]
    classifications: dict[float, str]  # "stabilized" | "growing"
    delta: float
    norm_exponent: int | None
    analytic_abscissa: float | None

    def payload(self) -> dict:
        return {
            "sigmas": list(self.sigmas),
            "cutoffs": list(self.cutoffs),
            "partial_sums": {str(s): list(v) for s, v in self.partial_sums.items()},
            "classifications": {str(s): v for s, v in self.classifications.items()},
            "delta": self.delta,
            "norm_exponent": self.norm_exponent,
            "analytic_abscissa": self.analytic_abscissa,
        }


def convergence_probe(selector: PrimeSelector, delta: float, sigmas,
                      cutoffs) -> ConvergenceProbe:
    """Worst-case partial log-sums sum_q sum_m q^(-(sigma-delta)m)/m.

    Every selected place is given the extremal parameter size q^delta.  A
    sigma is classified "stabilized" when the last two cutoffs differ by
    less than 1e-6 and "growing" otherwise; the analytic convergence edge
    delta + 1/j is reported alongside for comparison.
    """
    sig = tuple(float(s) for s in sigmas)
    cuts = tuple(int(c) for c in sorted(cutoffs))
    if not cuts:
        raise ValueError("need at least one cutoff")
    max_p = selector.max_prime_for_norm(cuts[-1])
    partials: dict[float, list[float]] = {s: [] for s in sig}
    # accumulate per sigma in ascending cutoff order, one sieve pass
    running = {s: 0.0 for s in sig}
    cut_idx = {s: 0 for s in sig}
    pending: dict[float, list[float]] = {s: [] for s in sig}
    for seg in iter_prime_segments(max_p):
        mask = selector.mask(seg)
        chosen = seg[mask]
        if len(chosen) == 0:
            continue
        norms = selector.norms(chosen)
        mult = selector.place_multiplicity(chosen).astype(np.float64)
        for s in sig:
            x = norms ** (-(s - delta))
            finite = x < 1.0
            term = np.where(finite, -np.log1p(-np.clip(x, None, 1.0 - 1e-15)), np.inf)
            # flush cutoffs that end inside this segment
            while cut_idx[s] < len(cuts) and cuts[cut_idx[s]] < norms[-1]:
                c = cuts[cut_idx[s]]
                inside = norms <= c
                pending[s].append(running[s] + float((mult[inside] * term[inside]).sum()))
                cut_idx[s] += 1
            running[s] += float((mult * term).sum())
    for s in sig:
        while cut_idx[s] < len(cuts):
            pending[s].append(running[s])
            cut_idx[s] += 1
    classifications = {}
    for s in sig:
        vals = pending[s]
        if len(vals) >= 2 and math.isfinite(vals[-1]):
            classifications[s] = ("stabilized" if abs(vals[-1] - vals[-2]) < STABILIZE_TOL
                                  else "growing")
        else:
            classifications[s] = "growing"
    j = selector.norm_exponent
    return ConvergenceProbe(
        sigmas=sig, cutoffs=cuts,
        partial_sums={s: tuple(pending[s]) for s in sig},
        classifications=classifications,
        delta=float(delta),
        norm_exponent=j,
        analytic_abscissa=(float(delta) + 1.0 / j) if j else None,
    )


# -- bound profiles ----------------------------------------------------------------

_PROFILE_EXPONENTS = {
    "JS": Fraction(1, 2),
    "GJ": Fraction(1, 4),
    "KSh": Fraction(1, 9),
    "KSa-BB": Fraction(7, 64),
}


@dataclass(frozen=True)
class GRCBoundProfile:
    """Named bound |a| < q^exponent toward temperedness."""

    name: str
    exponent: Fraction

    def payload(self) -> dict:
        return {"name": self.name, "exponent": str(self.exponent),
                "exponent_float": float(self.exponent)}


def grc_profile(name: str, n: int | None = None) -> GRCBoundProfile:
    """Look up a parameter-size bound profile; LRS(n) depends on the degree."""
    if name in _PROFILE_EXPONENTS:
        return GRCBoundProfile(name=name, exponent=_PROFILE_EXPONENTS[name])
    if name == "LRS":
        if n is None or n < 1:
            raise UnknownProfile("LRS profile needs the degree n")
        return GRCBoundProfile(name=f"LRS({n})",
                               exponent=Fraction(1, 2) - Fraction(1, n * n + 1))
    if name.startswith("LRS(") and name.endswith(")"):
        try:
            return grc_profile("LRS", int(name[4:-1]))
        except ValueError:
            pass
    raise UnknownProfile(f"unknown profile {name!r}; choose from "
                         f"{sorted(_PROFILE_EXPONENTS)} or LRS(n)")
