"""Brute-force uniformity norms of order k and an inequality scanner.

The k-th uniformity norm averages, over all base points x and shift
tuples (h_1, ..., h_k), the product of f over the 2^k cube vertices
x + w . h for w in {0,1}^k, conjugating at vertices with an odd number of
ones. The full sum is evaluated literally (vectorized over x, looping
over the shift tuples), so the cost is N^{d(k+1)} terms; a capacity guard
keeps that at desk scale and k is capped at 3.

For k = 2 the norm encodes additive energy:
N^{3d} * ||1_A||^4 equals energy(A) exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import CapacityError
from .lattice import GroupParams
from .spectral import Signal, dft, indicator, support_of

GOWERS_TERM_LIMIT = 2**26
MAX_ORDER = 3


@dataclass(frozen=True)
class GowersReport:
    """Norm of one signal at one order, with the raw power sum exposed.

    ``raw_sum`` is the cube-average sum before normalization and root;
    it is real and nonnegative up to roundoff. ``exponent_form`` is the
    norm raised to 2^k / (k+1), the power appearing in coset identities.
    """

    k: int
    norm_value: float
    raw_sum: float
    exponent_form: float

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "norm_value": self.norm_value,
            "raw_sum": self.raw_sum,
            "exponent_form": self.exponent_form,
        }


def gowers_norm(f: Signal, k: int) -> GowersReport:
    """Evaluate the order-k uniformity norm of a signal by the full sum."""
    if not 2 <= k <= MAX_ORDER:
        raise ValueError(f"order must lie in [2, {MAX_ORDER}], got {k}")
    params = f.params
    n, d = params.modulus, params.dimension
    terms = params.size ** (k + 1)
    if terms > GOWERS_TERM_LIMIT:
        raise CapacityError(
            f"norm of order {k} on this group sums {terms} terms"
            f" (limit {GOWERS_TERM_LIMIT})"
        )

    grid = f.values.reshape((n,) * d)
    conj_grid = np.conj(grid)
    axes = tuple(range(d))
    vertices = list(product((0, 1), repeat=k))

    total = 0.0 + 0.0j
    for shifts in product(product(range(n), repeat=d), repeat=k):
        prod_grid = np.ones((n,) * d, dtype=np.complex128)
        for w in vertices:
            offset = tuple(
                -sum(wi * h[axis] for wi, h in zip(w, shifts)) % n for axis in axes
            )
            base = conj_grid if sum(w) % 2 else grid
            prod_grid = prod_grid * np.roll(base, shift=offset, axis=axes)
        total += prod_grid.sum()

    magnitude = abs(total)
    if magnitude > 0 and abs(total.imag) > 1e-9 * magnitude:
        raise ArithmeticError(
            f"cube-average sum is not real: {total!r}"
        )
    raw = total.real
    normalized = max(raw, 0.0) / params.size ** (k + 1)
    norm_value = normalized ** (1.0 / 2**k)
    return GowersReport(
        k=k,
        norm_value=norm_value,
        raw_sum=raw,
        exponent_form=norm_value ** (2**k / (k + 1)),
    )


@dataclass(frozen=True)
class ScanWitness:
    """The signal behind one scanned product value."""

    product: float
    support_size: int
    spectrum_support_size: int
    support: list[list[int]]
    spectrum_support: list[list[int]]
    direction: str  # which side's support size multiplied which indicator norm

    def to_json_dict(self) -> dict:
        return {
            "product": self.product,
            "support_size": self.support_size,
            "spectrum_support_size": self.spectrum_support_size,
            "support": self.support,
            "spectrum_support": self.spectrum_support,
            "direction": self.direction,
        }


@dataclass
class ConjectureScanReport:
    """Outcome of scanning 1 <= |E| * ||1_Sigma||^{2^k/(k+1)} empirically.

    The scan gathers evidence only; it asserts nothing about the general
    statement. Violations (product < 1 - 1e-9) are collected with full
    witness data and must be surfaced by callers, never suppressed.
    """

    params: GroupParams
    k: int
    sampler: str
    trials: int
    seed: int
    min_product: float = float("inf")
    min_witness: ScanWitness | None = None
    violations: list[ScanWitness] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "N": self.params.modulus,
            "d": self.params.dimension,
            "k": self.k,
            "sampler": self.sampler,
            "trials": self.trials,
            "seed": self.seed,
            "min_product": self.min_product,
            "min_witness": self.min_witness.to_json_dict() if self.min_witness else None,
            "violation_count": len(self.violations),
            "violations": [w.to_json_dict() for w in self.violations],
        }


VIOLATION_TOL = 1e-9


def _scan_one(report: ConjectureScanReport, f: Signal) -> None:
    e = support_of(f)
    sigma = support_of(dft(f))
    if len(e) == 0 or len(sigma) == 0:
        return
    k = report.k
    pairs = (
        (len(e), sigma, "support-times-spectrum-norm"),
        (len(sigma), e, "spectrum-times-support-norm"),
    )
    for size, other, direction in pairs:
        value = size * gowers_norm(indicator(other), k).exponent_form
        witness = ScanWitness(
            product=value,
            support_size=len(e),
            spectrum_support_size=len(sigma),
            support=[list(v.coords) for v in e],
            spectrum_support=[list(v.coords) for v in sigma],
            direction=direction,
        )
        if value < report.min_product:
            report.min_product = value
            report.min_witness = witness
        if value < 1.0 - VIOLATION_TOL:
            report.violations.append(witness)


def conjecture_scan(
    params: GroupParams,
    k: int,
    sampler: str = "random",
    trials: int = 500,
    seed: int = 0,
) -> ConjectureScanReport:
    """Scan signals for the product |E| * ||1_Sigma||^{2^k/(k+1)} >= 1.

    Samplers: "exhaustive-small" enumerates every nonzero signal with
    values in {0, 1, -1} (one-dimensional groups with N <= 6 only);
    "random" draws complex Gaussian values on uniformly random supports.
    Both directions of each sampled signal are scanned.
    """
    report = ConjectureScanReport(params, k, sampler, trials, seed)
    if sampler == "exhaustive-small":
        if params.dimension != 1 or params.modulus > 6:
            raise ValueError("exhaustive-small requires d = 1 and N <= 6")
        count = 0
        for values in product((0.0, 1.0, -1.0), repeat=params.size):
            if not any(values):
                continue
            _scan_one(report, Signal(params, np.array(values, dtype=np.complex128)))
            count += 1
        report.trials = count
        return report

    if sampler == "random":
        rng = np.random.default_rng(seed)
        for _ in range(trials):
            size = int(rng.integers(1, params.size + 1))
            idx = rng.choice(params.size, size=size, replace=False)
            values = np.zeros(params.size, dtype=np.complex128)
            values[idx] = rng.normal(size=size) + 1j * rng.normal(size=size)
            _scan_one(report, Signal(params, values))
        return report

    raise ValueError(f"unknown sampler {sampler!r}")
