"""Dense signals on Z_N^d and their discrete Fourier transforms.

Two normalization conventions are supported (unitary: N^{-d/2} in both
directions; analyst: 1 forward and N^{-d} inverse) together with either
exponent sign in the forward transform. The transform itself is a direct
per-axis application of the N x N character matrix, which is the defining
sums evaluated exactly (up to floating point) rather than an FFT: at desk
scale correctness is the contract, not asymptotics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

import numpy as np

from .lattice import GroupParams, RingVector, SupportSet

TIME = "time"
FREQUENCY = "frequency"

_NORMALIZATIONS = ("unitary", "analyst")
_SIGNS = ("minus-forward", "plus-forward")


@dataclass(frozen=True)
class Convention:
    """Transform convention: normalization pair plus forward exponent sign."""

    normalization: str = "unitary"
    exponent_sign: str = "minus-forward"

    def __post_init__(self) -> None:
        if self.normalization not in _NORMALIZATIONS:
            raise ValueError(f"unknown normalization {self.normalization!r}")
        if self.exponent_sign not in _SIGNS:
            raise ValueError(f"unknown exponent sign {self.exponent_sign!r}")

    @property
    def forward_sign(self) -> int:
        return -1 if self.exponent_sign == "minus-forward" else 1

    def forward_scale(self, params: GroupParams) -> float:
        if self.normalization == "unitary":
            return params.size ** -0.5
        return 1.0

    def inverse_scale(self, params: GroupParams) -> float:
        if self.normalization == "unitary":
            return params.size ** -0.5
        return 1.0 / params.size


#: Default convention: unitary normalization, minus sign in the forward sum.
UNITARY_MINUS = Convention("unitary", "minus-forward")
#: The convention that reproduces the four-point walkthrough's spectrum list.
ANALYST_PLUS = Convention("analyst", "plus-forward")


@dataclass(frozen=True)
class Signal:
    """A complex-valued function on Z_N^d stored densely in row-major order.

    ``side`` records whether the values are point-side ("time") or
    frequency-side ("frequency"); conversion between conventions depends
    on it. Values are immutable after construction.
    """

    params: GroupParams
    values: np.ndarray
    convention: Convention = UNITARY_MINUS
    side: str = TIME

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.complex128).reshape(-1)
        if vals.size != self.params.size:
            raise ValueError(
                f"expected {self.params.size} values, got {vals.size}"
            )
        if self.side not in (TIME, FREQUENCY):
            raise ValueError(f"unknown side {self.side!r}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def value_at(self, v: RingVector) -> complex:
        return complex(self.values[self.params.flat_index(v)])

    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.values)))

    def l2_norm_sq(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2))


def _apply_axis_transform(values: np.ndarray, params: GroupParams, sign: int) -> np.ndarray:
    """Apply the character matrix W[m, x] = exp(sign*2*pi*i*m*x/N) per axis."""
    n, d = params.modulus, params.dimension
    w = np.exp(sign * 2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n)
    t = values.reshape((n,) * d)
    for axis in range(d):
        t = np.moveaxis(np.tensordot(w, np.moveaxis(t, axis, 0), axes=(1, 0)), 0, axis)
    return t.reshape(-1)


def dft(f: Signal) -> Signal:
    """Forward transform under the signal's own convention."""
    out = _apply_axis_transform(f.values, f.params, f.convention.forward_sign)
    out *= f.convention.forward_scale(f.params)
    return Signal(f.params, out, f.convention, side=FREQUENCY)


def idft(spectrum: Signal) -> Signal:
    """Inverse transform; idft(dft(f)) reproduces f up to roundoff."""
    out = _apply_axis_transform(
        spectrum.values, spectrum.params, -spectrum.convention.forward_sign
    )
    out *= spectrum.convention.inverse_scale(spectrum.params)
    return Signal(spectrum.params, out, spectrum.convention, side=TIME)


def default_threshold(values: np.ndarray) -> float:
    peak = float(np.max(np.abs(values))) if values.size else 0.0
    return 1e-9 * peak


def support_of(f: Signal, tau: float | None = None) -> SupportSet:
    """The set {x : |f(x)| > tau}; tau defaults to 1e-9 * max|f|."""
    if tau is None:
        tau = default_threshold(f.values)
    if tau < 0:
        raise ValueError(f"threshold must be nonnegative, got {tau}")
    idx = np.nonzero(np.abs(f.values) > tau)[0]
    return SupportSet(f.params, tuple(f.params.from_flat(int(i)) for i in idx))


def indicator(a: SupportSet, convention: Convention = UNITARY_MINUS) -> Signal:
    """The 0/1 indicator of a set, as a time-side signal."""
    vals = np.zeros(a.params.size, dtype=np.complex128)
    vals[a.flat_indices()] = 1.0
    return Signal(a.params, vals, convention, side=TIME)


def indicator_spectrum(a: SupportSet) -> Signal:
    """Unitary transform of the 0/1 indicator (the set's exponential sums)."""
    if len(a) == 0:
        raise ValueError("indicator spectrum of the empty set is not defined")
    return dft(indicator(a, UNITARY_MINUS))


def negation_permutation(params: GroupParams) -> np.ndarray:
    """Index permutation sending the value at m to the slot of -m."""
    perm = np.empty(params.size, dtype=np.int64)
    for i in range(params.size):
        perm[i] = params.flat_index(-params.from_flat(i))
    return perm


def convert_convention(sig: Signal, convention: Convention) -> Signal:
    """Re-express a signal under another convention.

    Point-side values are convention-independent, so only the tag changes.
    Frequency-side values rescale by the ratio of forward scales and are
    re-indexed m -> -m when the exponent sign flips.
    """
    if convention == sig.convention:
        return sig
    if sig.side == TIME:
        return replace(sig, convention=convention)
    vals = np.array(sig.values)
    if convention.forward_sign != sig.convention.forward_sign:
        vals = vals[negation_permutation(sig.params)]
    ratio = convention.forward_scale(sig.params) / sig.convention.forward_scale(sig.params)
    return Signal(sig.params, vals * ratio, convention, side=FREQUENCY)


def signal_to_json_dict(sig: Signal) -> dict:
    return {
        "N": sig.params.modulus,
        "d": sig.params.dimension,
        "convention": {
            "normalization": sig.convention.normalization,
            "exponent_sign": sig.convention.exponent_sign,
        },
        "side": sig.side,
        "values": [[float(v.real), float(v.imag)] for v in sig.values],
    }


def signal_from_json_dict(data: dict) -> Signal:
    params = GroupParams(int(data["N"]), int(data["d"]))
    conv_data = data.get("convention", {})
    convention = Convention(
        conv_data.get("normalization", "unitary"),
        conv_data.get("exponent_sign", "minus-forward"),
    )
    values = np.array([complex(re, im) for re, im in data["values"]])
    return Signal(params, values, convention, side=data.get("side", TIME))


def save_signal(sig: Signal, path: str | Path) -> None:
    Path(path).write_text(json.dumps(signal_to_json_dict(sig), indent=2) + "\n")


def load_signal(path: str | Path) -> Signal:
    return signal_from_json_dict(json.loads(Path(path).read_text()))


def signal_from_values(
    params: GroupParams,
    values: Iterable[complex],
    convention: Convention = UNITARY_MINUS,
    side: str = TIME,
) -> Signal:
    return Signal(params, np.array(list(values), dtype=np.complex128), convention, side)
