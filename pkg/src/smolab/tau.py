"""Exact integer q-expansion of the weight-12 discriminant cusp form.

The coefficient array is built from the pentagonal-number expansion of the
infinite product prod (1 - q^n), raised to the 24th power by repeated
squaring.  Polynomial products use Kronecker substitution: coefficients are
packed into one big integer per polynomial so Python's subquadratic integer
multiplication does the convolution exactly.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .errors import LimitExceeded
from .sieve import prime_array

try:  # GMP multiplication is much faster on multi-megabit operands
    from gmpy2 import mpz
except ImportError:  # pragma: no cover - exercised only without gmpy2
    def mpz(x):
        return x

TAU_LIMIT = 10**5


def eta_block_coefficients(order: int) -> list[int]:
    """Coefficients of prod_{n>=1} (1 - q^n) up to q^order (pentagonal numbers)."""
    coeffs = [0] * (order + 1)
    coeffs[0] = 1
    k = 1
    while True:
        p1 = k * (3 * k - 1) // 2
        p2 = k * (3 * k + 1) // 2
        if p1 > order and p2 > order:
            break
        sign = -1 if k % 2 else 1
        if p1 <= order:
            coeffs[p1] = sign
        if p2 <= order:
            coeffs[p2] = sign
        k += 1
    return coeffs


def _pack(coeffs: list[int], width: int):
    # fixed-width little-endian slots; linear-time via one bytes conversion
    buf = bytearray(width * len(coeffs))
    for i, c in enumerate(coeffs):
        if c:
            buf[i * width:(i + 1) * width] = c.to_bytes(width, "little")
    return mpz(int.from_bytes(buf, "little"))


def _unpack(packed, width: int, count: int) -> list[int]:
    packed = int(packed)
    nbytes = max((packed.bit_length() + 7) // 8, width * count)
    raw = packed.to_bytes(nbytes, "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little")
            for i in range(count)]


def poly_mul_trunc(a: list[int], b: list[int], order: int) -> list[int]:
    """Exact truncated product of integer polynomials via Kronecker packing.

    Signed inputs are split into positive and negative parts so all four
    packed products stay nonnegative.
    """
    a = a[: order + 1]
    b = b[: order + 1]
    max_a = max((abs(c) for c in a), default=0)
    max_b = max((abs(c) for c in b), default=0)
    if max_a == 0 or max_b == 0:
        return [0] * (order + 1)
    bound = 2 * max_a * max_b * min(len(a), len(b))
    width = (bound.bit_length() + 8) // 8
    ap = [c if c > 0 else 0 for c in a]
    am = [-c if c < 0 else 0 for c in a]
    bp = [c if c > 0 else 0 for c in b]
    bm = [-c if c < 0 else 0 for c in b]
    pos = _pack(ap, width) * _pack(bp, width) + _pack(am, width) * _pack(bm, width)
    neg = _pack(ap, width) * _pack(bm, width) + _pack(am, width) * _pack(bp, width)
    pos_c = _unpack(pos, width, order + 1)
    neg_c = _unpack(neg, width, order + 1)
    return [p - n for p, n in zip(pos_c, neg_c)]


def discriminant_coefficients(limit: int) -> list[int]:
    """tau(1..limit) as exact integers (tau(n) at index n-1)."""
    if limit > TAU_LIMIT:
        raise LimitExceeded(f"tau generation capped at {TAU_LIMIT}")
    if limit < 1:
        return []
    order = limit - 1  # the leading q shifts everything by one
    e1 = eta_block_coefficients(order)
    e2 = poly_mul_trunc(e1, e1, order)
    e4 = poly_mul_trunc(e2, e2, order)
    e8 = poly_mul_trunc(e4, e4, order)
    e16 = poly_mul_trunc(e8, e8, order)
    e24 = poly_mul_trunc(e16, e8, order)
    return e24


def generate_tau(limit: int) -> dict[int, int]:
    """tau(p) for every prime p <= limit."""
    coeffs = discriminant_coefficients(limit)
    return {int(p): coeffs[int(p) - 1] for p in prime_array(limit)}


def tau_csv_text(limit: int) -> str:
    """Coefficient file body with header ``p,a_p`` for primes up to limit."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p", "a_p"])
    for p, value in sorted(generate_tau(limit).items()):
        writer.writerow([p, value])
    return buf.getvalue()


def write_tau_csv(limit: int, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(tau_csv_text(limit))
    return path
