"""Experiment drivers: coefficient comparison, pole-order proxies, ratio
consistency, sparse-set summability, and abscissa arithmetic for inert towers.

None of these compute limits; each measures a documented finite proxy (a
slope over coupled cutoffs, a truncated product, a congruence scan) and
reports the proxy together with its parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .density import natural_density_estimate
from .errors import (DegreeMismatch, InfeasibleEpsilon, NotNested,
                     NotPrimeDegree, NotTempered)
from .euler import (GRCBoundProfile, ConvergenceProbe, convergence_probe,
                    eval_local, log_expansion, rankin_selberg_local)
from .fields import FieldSpec
from .hecke import RepresentationData, require_size_bound
from .selectors import DegreeSelector, ExplicitList, PrimeSelector
from .sieve import iter_prime_segments, prime_array, segment_map

COEFF_EQ_TOL = 1e-9
DEFAULT_EPS_GRID = (Fraction(1, 12), Fraction(1, 10), Fraction(1, 8))
CUTOFF_COUPLING = 1.5
CUTOFF_CAP = 10**8

# annotation thresholds quoted in every comparison report
REFINED_SMO_DENSITY = Fraction(1, 8)
NON_DIHEDRAL_DENSITY = Fraction(1, 4)


def conjectural_density_threshold(n: int) -> Fraction:
    return Fraction(1, 2 * n * n)


# -- local comparison -------------------------------------------------------------


@dataclass(frozen=True)
class AgreementReport:
    labels: tuple[str, str]
    scan_limit: int
    compared: int
    disagreement_primes: tuple[int, ...]
    first_disagreement: int | None
    disagreement_density: float
    annotations: dict = field(default_factory=dict)

    def payload(self) -> dict:
        return {
            "labels": list(self.labels),
            "scan_limit": self.scan_limit,
            "compared": self.compared,
            "disagreements": len(self.disagreement_primes),
            "disagreement_primes": list(self.disagreement_primes[:200]),
            "first_disagreement": self.first_disagreement,
            "disagreement_density": self.disagreement_density,
            "annotations": {k: str(v) for k, v in self.annotations.items()},
        }


def compare_local(A: RepresentationData, B: RepresentationData,
                  scan_limit: int) -> AgreementReport:
    """Scan the common unramified support for unequal normalized coefficients."""
    if A.degree != B.degree:
        raise DegreeMismatch(f"degrees {A.degree} != {B.degree}")
    bad: list[int] = []
    compared = 0
    skip = A.ramified | B.ramified
    limit = scan_limit
    for rep in (A, B):
        if rep.support_limit is not None:
            limit = min(limit, rep.support_limit)
    support: set[int] | None = None
    for rep in (A, B):
        if rep.support is not None:
            s = set(rep.support)
            support = s if support is None else (support & s)
    for seg in iter_prime_segments(limit):
        for p in (int(x) for x in seg):
            if p in skip or (support is not None and p not in support):
                continue
            compared += 1
            if abs(complex(A.coefficient(p)) - complex(B.coefficient(p))) > COEFF_EQ_TOL:
                bad.append(p)
    n = A.degree
    return AgreementReport(
        labels=(A.label, B.label),
        scan_limit=limit,
        compared=compared,
        disagreement_primes=tuple(bad),
        first_disagreement=bad[0] if bad else None,
        disagreement_density=(len(bad) / compared) if compared else 0.0,
        annotations={
            "refined_density_threshold": REFINED_SMO_DENSITY,
            "non_dihedral_density_threshold": NON_DIHEDRAL_DENSITY,
            "general_degree_threshold": conjectural_density_threshold(n),
        },
    )


# -- pole-order proxy ---------------------------------------------------------------


@dataclass(frozen=True)
class PoleOrderEstimate:
    eps_grid: tuple[float, ...]
    cutoffs: tuple[int, ...]
    values: tuple[float, ...]  # truncated log-sums at s = 1 + eps
    slope: float
    slope_interval: tuple[float, float]
    data_limited: bool
    diagnostics: dict = field(default_factory=dict)

    def payload(self) -> dict:
        return {
            "eps_grid": list(self.eps_grid),
            "cutoffs": list(self.cutoffs),
            "values": list(self.values),
            "slope": self.slope,
            "slope_interval": list(self.slope_interval),
            "data_limited": self.data_limited,
            "diagnostics": self.diagnostics,
        }


def _coupled_cutoff(eps: float) -> int:
    return min(CUTOFF_CAP, math.ceil(math.exp(CUTOFF_COUPLING / eps)))


def pole_order_estimate(coefficient_fn, selector: PrimeSelector, eps_grid=None,
                        data_limit: int | None = None,
                        workers: int | None = None) -> PoleOrderEstimate:
    """Slope of truncated sums sum_{p in S} c_p p^-(1+eps) against log(1/eps).

    Cutoffs are coupled to eps as min(10^8, exp(1.5/eps)); an eps whose
    minimal honest cutoff exp(1/eps) cannot fit under the 10^9 sieve wall is
    rejected.  A first-order pole shows up as slope ~ density of S.
    ``coefficient_fn`` maps a prime array to a weight array (1 for the plain
    zeta shape, |coefficient|^2 for self-pairings).
    """
    eps_values = sorted((float(e) for e in (eps_grid or DEFAULT_EPS_GRID)), reverse=True)
    if len(eps_values) < 3:
        raise ValueError("slope fit needs at least 3 epsilon points")
    for eps in eps_values:
        if eps <= 0 or math.exp(1.0 / eps) > 10**9:
            raise InfeasibleEpsilon(
                f"eps={eps}: coupled cutoff exp(1/eps) exceeds the sieve limit")
    cutoffs = [_coupled_cutoff(e) for e in eps_values]
    data_limited = False
    if data_limit is not None:
        data_limited = any(c > data_limit for c in cutoffs)
        cutoffs = [min(c, data_limit) for c in cutoffs]
    exponents = np.array([1.0 + e for e in eps_values])

    def per_segment(seg: np.ndarray) -> np.ndarray:
        part = np.zeros(len(eps_values))
        chosen = seg[selector.mask(seg)]
        if len(chosen) == 0:
            return part
        weights = np.asarray(coefficient_fn(chosen), dtype=np.float64)
        pf = chosen.astype(np.float64)
        for i, cut in enumerate(cutoffs):
            inside = chosen <= cut
            if inside.any():
                part[i] = float((weights[inside] * pf[inside] ** (-exponents[i])).sum())
        return part

    sums = np.zeros(len(eps_values))
    for part in segment_map(max(cutoffs), per_segment, workers=workers):
        sums += part
    L = np.array([math.log(1.0 / e) for e in eps_values])
    V = sums
    slope, stderr = _least_squares_slope(L, V)
    return PoleOrderEstimate(
        eps_grid=tuple(eps_values),
        cutoffs=tuple(int(c) for c in cutoffs),
        values=tuple(float(v) for v in V),
        slope=slope,
        slope_interval=(slope - 2.0 * stderr, slope + 2.0 * stderr),
        data_limited=data_limited,
        diagnostics={"selector": selector.describe(),
                     "coupling": CUTOFF_COUPLING, "cap": CUTOFF_CAP},
    )


def _least_squares_slope(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    n = len(x)
    xm, ym = x.mean(), y.mean()
    sxx = float(((x - xm) ** 2).sum())
    slope = float(((x - xm) * (y - ym)).sum() / sxx)
    resid = y - (ym + slope * (x - xm))
    dof = max(n - 2, 1)
    stderr = math.sqrt(float((resid**2).sum()) / dof / sxx)
    return slope, stderr


# -- tempered self-pairing bound -------------------------------------------------------


@dataclass(frozen=True)
class TemperedBoundReport:
    label: str
    selector: str
    density: Fraction
    bound: float
    estimate: PoleOrderEstimate
    passed: bool
    tempered_excess: float
    warnings: tuple[str, ...]
    annotations: dict = field(default_factory=dict)

    def payload(self) -> dict:
        return {
            "label": self.label,
            "selector": self.selector,
            "density": str(self.density),
            "bound": self.bound,
            "slope": self.estimate.slope,
            "passed": self.passed,
            "tempered_excess": self.tempered_excess,
            "warnings": list(self.warnings),
            "annotations": {k: str(v) for k, v in self.annotations.items()},
            "estimate": self.estimate.payload(),
        }


def tempered_bound_check(A: RepresentationData, selector: PrimeSelector,
                         eps_grid=None, slope_margin: float = 0.1,
                         workers: int | None = None) -> TemperedBoundReport:
    """Measure the self-pairing log growth over S against n^2 * density(S).

    The leading coefficient of the self-pairing at p is |coefficient(p)|^2
    (conjugated convention), so the slope of its restricted log-sums should
    not exceed n^2 d(S); temperedness failures demote to warnings unless a
    parameter breaks the square-root wall.
    """
    density = selector.analytic_density()
    if density is None:
        raise ValueError("selector needs an exact analytic density for the bound")
    probe_primes = [p for p in (2, 3, 5, 7, 11, 101, 1009) if _in_support(A, p)]
    require_size_bound(A, probe_primes)
    excess = A.max_parameter_excess(probe_primes)
    warnings = list(A.warnings)
    if excess > 1e-6:
        warnings.append(f"parameters off the unit circle by {excess:.3g}")

    def weights(primes: np.ndarray) -> np.ndarray:
        return np.array([abs(complex(A.coefficient(int(p)))) ** 2 for p in primes])

    selector_in_support = _restrict_to_support(A, selector)
    estimate = pole_order_estimate(weights, selector_in_support, eps_grid=eps_grid,
                                   data_limit=A.support_limit, workers=workers)
    n = A.degree
    bound = float(n * n * density)
    return TemperedBoundReport(
        label=A.label,
        selector=selector.describe(),
        density=density,
        bound=bound,
        estimate=estimate,
        passed=estimate.slope <= bound + slope_margin,
        tempered_excess=excess,
        warnings=tuple(warnings),
        annotations={
            "refined_density_threshold": REFINED_SMO_DENSITY,
            "non_dihedral_density_threshold": NON_DIHEDRAL_DENSITY,
            "general_degree_threshold": conjectural_density_threshold(n),
        },
    )


def _in_support(rep: RepresentationData, p: int) -> bool:
    if rep.support is not None and p not in rep.support:
        return False
    return p not in rep.ramified


def _restrict_to_support(rep: RepresentationData, selector: PrimeSelector) -> PrimeSelector:
    from .selectors import Intersection
    if rep.support is None:
        return selector
    return Intersection(selector, ExplicitList(rep.support))


# -- ratio consistency ------------------------------------------------------------------


@dataclass(frozen=True)
class ZRatioReport:
    labels: tuple[str, str]
    selector: str
    s_grid: tuple[float, ...]
    direct_values: tuple[float, ...]
    log_values: tuple[float, ...]
    max_discrepancy: float
    positive_type_combined: bool
    primes_used: int

    def payload(self) -> dict:
        return {
            "labels": list(self.labels),
            "selector": self.selector,
            "s_grid": list(self.s_grid),
            "direct_values": list(self.direct_values),
            "log_values": list(self.log_values),
            "max_discrepancy": self.max_discrepancy,
            "positive_type_combined": self.positive_type_combined,
            "primes_used": self.primes_used,
        }


def z_ratio(A: RepresentationData, B: RepresentationData, selector: PrimeSelector,
            s_grid, scan_limit: int | None = None, m_cap: int = 40) -> ZRatioReport:
    """Truncated four-way ratio over the selected primes, computed two ways.

    Direct path: product over p in S of
    eval(AxconjA) * eval(BxconjB) / (eval(AxconjB) * eval(BxconjA)).
    Log path: exponential of the corresponding signed power-sum series.
    The two must agree to high precision; their combined (all product)
    series is also checked for nonnegative log coefficients.
    """
    if A.degree != B.degree:
        raise DegreeMismatch(f"degrees {A.degree} != {B.degree}")
    s_values = [float(s) for s in s_grid]
    if any(s <= 1.0 for s in s_values):
        raise ValueError("ratio grid must have s > 1")
    limit = scan_limit or 10**4
    for rep in (A, B):
        if rep.support_limit is not None:
            limit = min(limit, rep.support_limit)
    primes: list[int] = []
    for seg in iter_prime_segments(limit):
        mask = selector.mask(seg)
        for p in (int(x) for x in seg[mask]):
            if _in_support(A, p) and _in_support(B, p):
                primes.append(p)

    direct = []
    logs = []
    combined_min_coeff = 0.0
    for s in s_values:
        prod = 1.0 + 0.0j
        log_sum = 0.0 + 0.0j
        for p in primes:
            fa = A.local_factor(p)
            fb = B.local_factor(p)
            aa = rankin_selberg_local(fa, fa)
            bb = rankin_selberg_local(fb, fb)
            ab = rankin_selberg_local(fa, fb)
            ba = rankin_selberg_local(fb, fa)
            prod *= (eval_local(aa, s) * eval_local(bb, s)
                     / (eval_local(ab, s) * eval_local(ba, s)))
            for m in range(1, m_cap + 1):
                signed = (aa.power_sum(m) + bb.power_sum(m)
                          - ab.power_sum(m) - ba.power_sum(m))
                combined = (aa.power_sum(m) + bb.power_sum(m)
                            + ab.power_sum(m) + ba.power_sum(m))
                combined_min_coeff = min(combined_min_coeff, combined.real / m)
                log_sum += signed / m * (p ** (-s * m))
        direct.append(prod)
        logs.append(np.exp(log_sum))
    discrepancy = max((abs(d - l) for d, l in zip(direct, logs)), default=0.0)
    return ZRatioReport(
        labels=(A.label, B.label),
        selector=selector.describe(),
        s_grid=tuple(s_values),
        direct_values=tuple(float(d.real) for d in direct),
        log_values=tuple(float(l.real) for l in logs),
        max_discrepancy=float(discrepancy),
        positive_type_combined=combined_min_coeff >= -1e-9,
        primes_used=len(primes),
    )


# -- sparse-set summability --------------------------------------------------------------


@dataclass(frozen=True)
class SummabilityReport:
    verdict: str  # "summable" | "divergent" | "undecidable"
    exponent: Fraction | None
    test_exponent: Fraction | None  # 2j/(n^2+1), compared against 1
    cutoffs: tuple[int, ...]
    partial_sums: tuple[float, ...]
    selector: str

    def payload(self) -> dict:
        return {
            "verdict": self.verdict,
            "exponent": str(self.exponent) if self.exponent is not None else None,
            "test_exponent": str(self.test_exponent) if self.test_exponent else None,
            "cutoffs": list(self.cutoffs),
            "partial_sums": list(self.partial_sums),
            "selector": self.selector,
        }


def rajan_criterion(selector: PrimeSelector, n: int,
                    cutoffs=(10**4, 10**5, 10**6, 10**7)) -> SummabilityReport:
    """Decide sum over S of q^(-2/(n^2+1)) by the exponent test, with evidence.

    For degree-structured selectors (norms q = p^j) the sum converges iff
    2j/(n^2+1) > 1; explicit lists are trivially summable.  Arbitrary
    predicates get partial sums only and an "undecidable" verdict.
    """
    exponent = Fraction(2, n * n + 1)
    cuts = tuple(int(c) for c in sorted(cutoffs))
    j = selector.norm_exponent
    partials: list[float] = []
    total = 0.0
    prev_p = 0
    for cut in cuts:
        max_p = selector.max_prime_for_norm(cut)
        if max_p > prev_p:
            for seg in iter_prime_segments(max_p):
                block = seg[(seg > prev_p) & selector.mask(seg)]
                if len(block):
                    norms = selector.norms(block)
                    keep = norms <= cut
                    total += float((selector.place_multiplicity(block)[keep]
                                    * norms[keep] ** (-float(exponent))).sum())
            prev_p = max_p
        partials.append(total)
    if isinstance(selector, ExplicitList):
        verdict = "summable"
        test = None
    elif j is not None:
        test = exponent * j
        verdict = "summable" if test > 1 else "divergent"
    else:
        test = None
        verdict = "undecidable"
    return SummabilityReport(verdict=verdict, exponent=exponent, test_exponent=test,
                             cutoffs=cuts, partial_sums=tuple(partials),
                             selector=selector.describe())


# -- inert-prime abscissa arithmetic --------------------------------------------------------


@dataclass(frozen=True)
class InertExperimentReport:
    fieldspec: str
    n: int
    p: int
    profile: GRCBoundProfile
    pair_bound: Fraction          # 1 - 2/(n^2+1) + 1/p style bound: 2*delta + 1/p
    pair_bound_clears_one: bool
    variant_delta: Fraction | None
    variant_bound: Fraction | None  # 2*delta + 1/p for a supplied delta
    variant_clears_half: bool | None
    probe: ConvergenceProbe

    def payload(self) -> dict:
        return {
            "fieldspec": self.fieldspec,
            "n": self.n,
            "p": self.p,
            "profile": self.profile.payload(),
            "pair_bound": str(self.pair_bound),
            "pair_bound_float": float(self.pair_bound),
            "sufficient": self.pair_bound_clears_one,
            "variant_delta": str(self.variant_delta) if self.variant_delta is not None else None,
            "variant_bound": str(self.variant_bound) if self.variant_bound is not None else None,
            "variant_bound_float": (float(self.variant_bound)
                                    if self.variant_bound is not None else None),
            "variant_sufficient": self.variant_clears_half,
            "probe": self.probe.payload(),
        }


def inert_experiment(fs: FieldSpec, n: int, profile: GRCBoundProfile,
                     variant_delta: Fraction | None = None,
                     probe_sigmas=None,
                     probe_cutoffs=(10**5, 10**6, 10**7)) -> InertExperimentReport:
    """Abscissa bookkeeping for the inert primes of a prime-degree cyclic field.

    The self-pairing of a degree-n source with parameters below q^delta has
    local poles left of 2*delta, so its product over the inert primes
    (degree p, norms p^p) converges for Re(s) > 2*delta + 1/p.  The report
    states whether that bound clears Re(s) = 1, optionally the analogous
    half-plane check 2*delta' + 1/p vs 1/2 for a supplied delta', and runs
    the worst-case probe on the actual inert selector as corroboration.
    """
    p = fs.degree
    if not _is_prime_int(p):
        raise NotPrimeDegree(f"field degree {p} is not prime")
    delta = profile.exponent
    pair_bound = 2 * delta + Fraction(1, p)
    variant_bound = None
    variant_ok = None
    if variant_delta is not None:
        variant_delta = Fraction(variant_delta)
        variant_bound = 2 * variant_delta + Fraction(1, p)
        variant_ok = variant_bound < Fraction(1, 2)
    inert = DegreeSelector(fs, p)
    two_delta = float(2 * delta)
    if probe_sigmas is None:
        edge = two_delta + 1.0 / p
        probe_sigmas = (round(edge + 0.05, 6), round(max(edge - 0.05, two_delta + 1e-3), 6))
    probe = convergence_probe(inert, two_delta, probe_sigmas, probe_cutoffs)
    return InertExperimentReport(
        fieldspec=fs.label, n=n, p=p, profile=profile,
        pair_bound=pair_bound,
        pair_bound_clears_one=pair_bound < 1,
        variant_delta=variant_delta,
        variant_bound=variant_bound,
        variant_clears_half=variant_ok,
        probe=probe,
    )


def _is_prime_int(n: int) -> bool:
    from .sieve import is_prime
    return is_prime(n)


# -- tower residue degrees ---------------------------------------------------------------------


@dataclass(frozen=True)
class TowerReport:
    subfield: str
    field: str
    p: int
    m: int
    scan_limit: int
    checked: int
    counterexamples: tuple[int, ...]
    examples: tuple[tuple[int, int, int], ...]  # (prime, degree below, degree above)

    def payload(self) -> dict:
        return {
            "subfield": self.subfield,
            "field": self.field,
            "p": self.p,
            "m": self.m,
            "scan_limit": self.scan_limit,
            "checked": self.checked,
            "counterexamples": list(self.counterexamples[:50]),
            "examples": [list(e) for e in self.examples],
        }


def tower_degree_check(F: FieldSpec, K: FieldSpec, scan_limit: int = 10**5) -> TowerReport:
    """Verify that degree-p primes of the subfield have degree p^m above.

    F and K are congruence data over the rationals with F inside K; the
    chain must be cyclic of prime-power degree p^m with [F:Q] = p.  Every
    unramified prime up to the scan limit whose residue degree in F equals
    p must have residue degree p^m in K.
    """
    modulus = math.lcm(F.modulus, K.modulus)
    HF = _lift_subgroup(F, modulus)
    HK = _lift_subgroup(K, modulus)
    if not HK <= HF:
        raise NotNested(f"{K.label} does not contain {F.label}")
    p = F.degree
    if not _is_prime_int(p):
        raise NotPrimeDegree(f"subfield degree {p} is not prime")
    step = K.degree // F.degree
    if F.degree * step != K.degree or step < 1:
        raise NotNested("field degrees are not nested")
    m = 1
    total = p
    while total < K.degree:
        total *= p
        m += 1
    if total != K.degree:
        raise NotNested(f"extension degree {K.degree} is not a power of {p}")
    if not _quotient_cyclic(K):
        raise NotNested(f"{K.label} is not cyclic over the rationals")
    expected = p**m
    checked = 0
    bad: list[int] = []
    samples: list[tuple[int, int, int]] = []
    ram = F.ramified_primes() | K.ramified_primes()
    for seg in iter_prime_segments(scan_limit):
        for q in (int(x) for x in seg):
            if q in ram:
                continue
            if F.residue_degree(q) != p:
                continue
            checked += 1
            fk = K.residue_degree(q)
            if fk != expected:
                bad.append(q)
            elif len(samples) < 5:
                samples.append((q, p, fk))
    return TowerReport(subfield=F.label, field=K.label, p=p, m=m,
                       scan_limit=scan_limit, checked=checked,
                       counterexamples=tuple(bad), examples=tuple(samples))


def _lift_subgroup(fs: FieldSpec, modulus: int) -> frozenset[int]:
    return frozenset(r for r in range(modulus)
                     if math.gcd(r, modulus) == 1 and (r % fs.modulus) in fs.subgroup)


def _quotient_cyclic(fs: FieldSpec) -> bool:
    # cyclic iff some class generates the quotient
    d = fs.degree
    table = fs._degree_table
    return bool((table == d).any()) or d == 1
