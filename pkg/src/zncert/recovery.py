"""Signal reconstruction from partially observed spectra.

Three tools: an equality-constrained l1 minimizer (basis pursuit over the
complex field), a support-constrained least-squares solver, and the
classical sufficient predicate for uniqueness. The l1 solver is a
Douglas-Rachford operator splitting that alternates the proximal map of
the l1 norm (complex soft-thresholding, which shrinks magnitudes and
preserves phases) with the exact Euclidean projection onto the affine set
of signals whose spectra match the observations. The projection is one
transform round trip with the observed coordinates overwritten; it is
performed in the unitary convention, to which the solver converts
internally regardless of the problem's own convention.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .lattice import GroupParams, RingVector, SupportSet
from .spectral import (
    FREQUENCY,
    TIME,
    Convention,
    Signal,
    UNITARY_MINUS,
    _apply_axis_transform,
    dft,
    signal_from_json_dict,
    signal_to_json_dict,
    support_of,
)

CONVERGED = "converged"
MAX_ITER = "max-iter"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances for the l1 solver; all are artifact choices, not claims."""

    feas_tol: float = 1e-8
    obj_tol: float = 1e-8
    max_iter: int = 50000
    tau: float | None = None  # prox step; default 0.25 * peak of the zero-fill signal


@dataclass(frozen=True)
class RecoveryProblem:
    """Observed spectrum values for every frequency outside the missing set."""

    params: GroupParams
    observed: dict[RingVector, complex]
    missing: SupportSet
    convention: Convention = UNITARY_MINUS

    def __post_init__(self) -> None:
        if self.missing.params != self.params:
            raise ValueError("missing set lives in a different group")
        n_expected = self.params.size - len(self.missing)
        if len(self.observed) != n_expected:
            raise ValueError(
                f"observed must cover exactly the complement of the missing set:"
                f" expected {n_expected} entries, got {len(self.observed)}"
            )
        for m in self.observed:
            if m.modulus != self.params.modulus or m.dimension != self.params.dimension:
                raise ValueError(f"frequency {m.coords} is outside the group")
            if m in self.missing:
                raise ValueError(f"frequency {m.coords} is both observed and missing")

    @classmethod
    def from_spectrum(cls, spectrum: Signal, missing: SupportSet) -> RecoveryProblem:
        """Build a problem from a full spectrum by erasing the missing entries."""
        observed = {
            m: spectrum.value_at(m)
            for m in spectrum.params.points()
            if m not in missing
        }
        return cls(spectrum.params, observed, missing, spectrum.convention)

    @classmethod
    def from_signal(cls, f: Signal, missing: SupportSet) -> RecoveryProblem:
        """Transform a time-side signal and erase the missing frequencies."""
        return cls.from_spectrum(dft(f), missing)

    def target_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(values, observed_mask) in row-major order, problem convention."""
        target = np.zeros(self.params.size, dtype=np.complex128)
        mask = np.ones(self.params.size, dtype=bool)
        mask[self.missing.flat_indices()] = False
        for m, v in self.observed.items():
            target[self.params.flat_index(m)] = v
        return target, mask


@dataclass(frozen=True)
class RecoverySolution:
    """Reconstructed signal plus solver diagnostics."""

    signal: Signal
    objective: float
    feasibility_residual: float
    iterations: int
    status: str
    diagnostics: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "objective": self.objective,
            "feasibility_residual": self.feasibility_residual,
            "iterations": self.iterations,
            "diagnostics": dict(self.diagnostics),
            "signal": signal_to_json_dict(self.signal),
        }


def _unitary_constraints(problem: RecoveryProblem) -> tuple[np.ndarray, np.ndarray]:
    """Re-express the constraints in the unitary minus-forward convention.

    A spectrum value v at frequency m under a convention with forward
    scale s and exponent sign sigma pins the unitary spectrum to
    v / (s * N^{d/2}) at m (sigma = -1) or at -m (sigma = +1).
    """
    params = problem.params
    factor = problem.convention.forward_scale(params) * math.sqrt(params.size)
    target = np.zeros(params.size, dtype=np.complex128)
    mask = np.zeros(params.size, dtype=bool)
    flip = problem.convention.forward_sign == 1
    for m, v in problem.observed.items():
        mu = -m if flip else m
        idx = params.flat_index(mu)
        target[idx] = v / factor
        mask[idx] = True
    return target, mask


def _soft_threshold(values: np.ndarray, tau: float) -> np.ndarray:
    mag = np.abs(values)
    shrink = np.maximum(mag - tau, 0.0)
    return values * np.divide(shrink, mag, out=np.zeros_like(mag), where=mag > 0)


def _feasibility_residual(problem: RecoveryProblem, candidate: Signal) -> float:
    spectrum = dft(candidate)
    worst = 0.0
    for m, v in problem.observed.items():
        worst = max(worst, abs(spectrum.value_at(m) - v))
    return worst


def l1_recover(
    problem: RecoveryProblem, cfg: SolverConfig | None = None
) -> RecoverySolution:
    """Minimize the l1 norm subject to matching all observed spectrum values.

    Douglas-Rachford iteration: y = prox_{tau * l1}(x), z = project(2y - x),
    x <- x + z - y, where project overwrites the observed unitary spectrum
    coordinates (the exact Euclidean projection). Every z is feasible; the
    iteration stops when the prox point and the projected point coincide to
    within feas_tol relative to the problem scale and the objective has
    stabilized to within obj_tol.
    """
    cfg = cfg or SolverConfig()
    params = problem.params
    params.require_dense("l1 recovery")
    target, observed_mask = _unitary_constraints(problem)
    scale = params.size**-0.5

    def forward(v: np.ndarray) -> np.ndarray:
        return _apply_axis_transform(v, params, -1) * scale

    def inverse(v: np.ndarray) -> np.ndarray:
        return _apply_axis_transform(v, params, 1) * scale

    def project(g: np.ndarray) -> np.ndarray:
        spec = forward(g)
        spec[observed_mask] = target[observed_mask]
        return inverse(spec)

    def finish(z: np.ndarray, iterations: int, status: str, **extra) -> RecoverySolution:
        sig = Signal(params, z, problem.convention, side=TIME)
        return RecoverySolution(
            signal=sig,
            objective=float(np.sum(np.abs(z))),
            feasibility_residual=_feasibility_residual(problem, sig),
            iterations=iterations,
            status=status,
            diagnostics=extra,
        )

    zero_fill = project(np.zeros(params.size, dtype=np.complex128))
    problem_scale = float(np.max(np.abs(zero_fill)))
    if len(problem.missing) == 0:
        return finish(zero_fill, 1, CONVERGED, method="direct-inverse")
    if problem_scale == 0.0:
        # All observed values vanish, so the zero signal is feasible and optimal.
        return finish(np.zeros(params.size, dtype=np.complex128), 0, CONVERGED)

    tau = cfg.tau if cfg.tau is not None else 0.25 * problem_scale
    gap_tol = cfg.feas_tol * problem_scale

    x = zero_fill.copy()
    z = zero_fill
    gap = math.inf
    previous_objective = math.inf
    for iteration in range(1, cfg.max_iter + 1):
        y = _soft_threshold(x, tau)
        z = project(2.0 * y - x)
        x += z - y
        gap = float(np.max(np.abs(y - z)))
        objective = float(np.sum(np.abs(z)))
        if gap <= gap_tol and abs(objective - previous_objective) <= cfg.obj_tol * max(
            1.0, objective
        ):
            return finish(z, iteration, CONVERGED, gap=gap, tau=tau)
        previous_objective = objective

    prox_objective = float(np.sum(np.abs(_soft_threshold(x, tau))))
    near_degenerate = abs(prox_objective - previous_objective) < 10.0 * cfg.obj_tol
    return finish(
        z,
        cfg.max_iter,
        MAX_ITER,
        gap=gap,
        tau=tau,
        near_degenerate=near_degenerate,
    )


def l1_objective_profile(
    problem: RecoveryProblem,
    direction: Signal,
    steps: list[complex],
    base: Signal | None = None,
) -> list[float]:
    """l1 norms along a feasible line: ||base + s * direction||_1 per step.

    The direction must lie in the feasible null space, meaning its spectrum
    vanishes on every observed frequency (checked to 1e-10 relative to its
    spectral peak). When no base point is supplied the l1 minimizer is used.
    """
    if direction.params != problem.params:
        raise ValueError("direction lives in a different group")
    spec = dft(
        Signal(problem.params, direction.values, problem.convention, side=TIME)
    )
    peak = float(np.max(np.abs(spec.values)))
    limit = 1e-10 * max(1.0, peak)
    worst = max(
        (abs(spec.value_at(m)) for m in problem.observed), default=0.0
    )
    if worst > limit:
        raise ValueError(
            f"direction is not in the feasible null space: residual {worst:.3e}"
            f" on observed frequencies"
        )
    if base is None:
        base = l1_recover(problem).signal
    return [
        float(np.sum(np.abs(base.values + s * direction.values))) for s in steps
    ]


def least_squares_recover(
    problem: RecoveryProblem, support: SupportSet
) -> RecoverySolution:
    """Solve for a signal on a candidate support matching the observations.

    Sets up the linear system ghat(m) = observed(m) over the unknowns
    {g(x) : x in support} and solves it in the least-squares sense.
    Status is "converged" only for a full-column-rank system whose
    least-squares residual actually vanishes (a consistent system); rank
    deficiency (including more unknowns than observations) or a large
    residual (wrong support candidate) yields "infeasible" with the rank
    and reason recorded. The least-squares minimizer is returned either way.
    """
    if support.params != problem.params:
        raise ValueError("support lives in a different group")
    params = problem.params
    frequencies = sorted(problem.observed, key=params.flat_index)
    n_obs, n_unknown = len(frequencies), len(support)

    sign = problem.convention.forward_sign
    fscale = problem.convention.forward_scale(params)
    matrix = np.empty((n_obs, n_unknown), dtype=np.complex128)
    for i, m in enumerate(frequencies):
        for j, x in enumerate(support):
            matrix[i, j] = fscale * np.exp(
                sign * 2j * np.pi * m.dot(x) / params.modulus
            )
    rhs = np.array([problem.observed[m] for m in frequencies], dtype=np.complex128)

    coeffs, _, rank, _ = np.linalg.lstsq(matrix, rhs, rcond=None)
    values = np.zeros(params.size, dtype=np.complex128)
    values[support.flat_indices()] = coeffs
    signal = Signal(params, values, problem.convention, side=TIME)
    residual = float(np.max(np.abs(matrix @ coeffs - rhs))) if n_obs else 0.0

    consistent = residual <= 1e-10 * max(1.0, float(np.max(np.abs(rhs))) if n_obs else 0.0)
    diagnostics = {"rank": int(rank), "unknowns": n_unknown, "observations": n_obs}
    if rank < n_unknown:
        status = INFEASIBLE
        diagnostics["reason"] = "non-unique"
    elif not consistent:
        status = INFEASIBLE
        diagnostics["reason"] = "inconsistent"
    else:
        status = CONVERGED
    return RecoverySolution(
        signal=signal,
        objective=float(np.sum(np.abs(values))),
        feasibility_residual=residual,
        iterations=1,
        status=status,
        diagnostics=diagnostics,
    )


def uniqueness_check(e_size: int, s: SupportSet, params: GroupParams) -> bool:
    """Classical sufficient predicate: 2 |E| |S| < N^d guarantees uniqueness.

    Sufficient, not necessary: recovery can succeed when this fails.
    """
    if e_size < 0:
        raise ValueError("support size must be >= 0")
    return 2 * e_size * len(s) < params.size


class ConcentrationResult(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def concentration_check(
    h: Signal, e: SupportSet, s: SupportSet
) -> ConcentrationResult:
    """Check the mass concentration bound for a signal with spectrum in S.

    For supp(hhat) inside S:  sum_{x in E} |h(x)| <= (|E||S| / N^d) ||h||_1.
    Raises if the spectrum support (at the default threshold) leaks out of S.
    """
    if e.params != h.params or s.params != h.params:
        raise ValueError("sets live in a different group")
    spectrum_support = support_of(dft(h))
    leaked = [m for m in spectrum_support if m not in s]
    if leaked:
        raise ValueError(
            f"spectrum is not supported inside S: {len(leaked)} stray frequencies"
        )
    total = h.l1_norm()
    lhs = float(sum(abs(h.values[i]) for i in e.flat_indices()))
    rhs = (len(e) * len(s) / h.params.size) * total
    return ConcentrationResult(lhs, rhs, lhs <= rhs + 1e-9 * rhs)


def problem_to_json_dict(problem: RecoveryProblem) -> dict:
    target, _ = problem.target_arrays()
    spectrum = Signal(problem.params, target, problem.convention, side=FREQUENCY)
    data = signal_to_json_dict(spectrum)
    data["missing"] = [list(m.coords) for m in problem.missing]
    return data


def problem_from_json_dict(data: dict) -> RecoveryProblem:
    payload = dict(data)
    missing_coords = payload.pop("missing", [])
    payload.setdefault("side", FREQUENCY)
    spectrum = signal_from_json_dict(payload)
    missing = SupportSet.from_coords(spectrum.params, missing_coords)
    return RecoveryProblem.from_spectrum(spectrum, missing)


def save_problem(problem: RecoveryProblem, path: str | Path) -> None:
    Path(path).write_text(json.dumps(problem_to_json_dict(problem), indent=2) + "\n")


def load_problem(path: str | Path) -> RecoveryProblem:
    return problem_from_json_dict(json.loads(Path(path).read_text()))
