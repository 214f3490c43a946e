"""Two-mode squeezer and type-II down-conversion acting on sparse states.

The production path applies the squeezer in its exact disentangled form
(raising exponential x diagonal factor x lowering exponential), which is
triangular on the truncated space: every output amplitude below the cutoff
is exact, and the weight pushed past the cutoff is charged to the state's
leaked-norm ledger.  A slow series-exponential oracle is provided for
cross-validation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .states import FockError, ModeLabel, ModeMismatchError, PureState

_SQRT: list[float] = [0.0]


def _sqrt(n: int) -> float:
    # memoized integer square roots; grows on demand
    while len(_SQRT) <= n:
        _SQRT.append(math.sqrt(len(_SQRT)))
    return _SQRT[n]


@dataclass(frozen=True, slots=True)
class SqueezerSpec:
    """Non-degenerate two-mode squeezer with coupling gamma = tanh^2(theta)."""

    mode_a: ModeLabel
    mode_b: ModeLabel
    gamma: float

    def __post_init__(self):
        if self.mode_a == self.mode_b:
            raise FockError("squeezer requires two distinct modes")
        if not 0.0 <= self.gamma < 1.0:
            raise FockError(f"gamma must lie in [0, 1), got {self.gamma}")

    @property
    def theta(self) -> float:
        return math.atanh(math.sqrt(self.gamma))


@dataclass(frozen=True, slots=True)
class PdcSpec:
    """Type-II down-conversion between two polarized paths."""

    path_a: int
    path_b: int
    gamma: float

    def __post_init__(self):
        if self.path_a == self.path_b:
            raise FockError("PDC requires two distinct paths")
        if not 0.0 <= self.gamma < 1.0:
            raise FockError(f"gamma must lie in [0, 1), got {self.gamma}")


def apply_two_mode_squeezer(state: PureState, spec: SqueezerSpec) -> PureState:
    """Apply exp(s a†b†) (1-g)^((n_a+n_b+1)/2) exp(-s ab), s = sqrt(g).

    Photon-number difference on the mode pair is preserved term by term.
    Amplitude raised past the cutoff is added to leaked_norm exactly
    (the operator is unitary, so the lost weight is the norm deficit).
    """
    ia = state.index_of(spec.mode_a)
    ib = state.index_of(spec.mode_b)
    g = spec.gamma
    s = math.sqrt(g)
    cutoff = state.cutoff
    log1mg = math.log1p(-g) if g > 0.0 else 0.0

    out: dict[tuple[int, ...], complex] = {}
    in_norm_sq = 0.0
    for occ, amp in state.sorted_terms():
        in_norm_sq += amp.real * amp.real + amp.imag * amp.imag
        m, n = occ[ia], occ[ib]
        occ_list = list(occ)
        low = 1.0  # lowering-series coefficient, k = 0
        for k in range(min(m, n) + 1):
            if k > 0:
                low *= -s / k * (_sqrt(m - k + 1) * _sqrt(n - k + 1))
            mp, np_ = m - k, n - k
            base = amp * low * math.exp(0.5 * (mp + np_ + 1) * log1mg)
            raise_cap = cutoff - max(mp, np_)
            r = 1.0  # raising-series coefficient, j = 0
            for j in range(raise_cap + 1):
                if j > 0:
                    r *= s / j * (_sqrt(mp + j) * _sqrt(np_ + j))
                occ_list[ia] = mp + j
                occ_list[ib] = np_ + j
                key = tuple(occ_list)
                out[key] = out.get(key, 0j) + base * r
        occ_list[ia], occ_list[ib] = m, n

    out_norm_sq = sum(a.real * a.real + a.imag * a.imag for a in out.values())
    leaked = state.leaked_norm + max(0.0, in_norm_sq - out_norm_sq)
    return PureState(state.modes, out, cutoff, leaked)


def squeezer_matrix_element(m: int, n: int, mp: int, np_: int, gamma: float) -> complex:
    """<mp, np_| S |m, n> for the disentangled squeezer; 0 unless mp-np_ = m-n.

    Real under the phase convention theta >= 0; returned as complex for
    interface uniformity with state amplitudes.
    """
    if min(m, n, mp, np_) < 0:
        raise FockError("occupations must be nonnegative")
    if mp - np_ != m - n:
        return 0j
    s = math.sqrt(gamma)
    log1mg = math.log1p(-gamma) if gamma > 0.0 else 0.0
    total = 0.0
    low = 1.0
    for k in range(min(m, n) + 1):
        if k > 0:
            low *= -s / k * (_sqrt(m - k + 1) * _sqrt(n - k + 1))
        j = mp - (m - k)
        if j < 0:
            continue
        if j > 0 and s == 0.0:
            continue
        r = 1.0
        for i in range(1, j + 1):
            r *= s / i * (_sqrt(m - k + i) * _sqrt(n - k + i))
        total += low * r * math.exp(0.5 * (m - k + n - k + 1) * log1mg)
    return complex(total)


def apply_type2_pdc(state: PureState, spec: PdcSpec) -> PureState:
    """Type-II PDC: two commuting squeezers on crossed polarization pairs."""
    pairs = (
        (ModeLabel(spec.path_a, "H"), ModeLabel(spec.path_b, "V")),
        (ModeLabel(spec.path_a, "V"), ModeLabel(spec.path_b, "H")),
    )
    for ma, mb in pairs:
        if ma not in state.modes or mb not in state.modes:
            raise ModeMismatchError(f"PDC requires polarized modes {ma}, {mb}")
    for ma, mb in pairs:
        state = apply_two_mode_squeezer(state, SqueezerSpec(ma, mb, spec.gamma))
    return state


def apply_squeezer_taylor_oracle(
    state: PureState,
    spec: SqueezerSpec,
    theta_terms: int = 80,
    substeps: int | None = None,
    headroom: int = 80,
    tail_warn: float = 1e-12,
) -> PureState:
    """Series-exponential reference path for the two-mode squeezer.

    Applies exp[theta (a†b† - ab)] by Taylor series.  To keep the series
    numerically stable at strong coupling the exponential is split into
    substeps, exp(theta A) = exp(theta A / r)^r, each summed to
    ``theta_terms`` orders; a single step suffices for small theta.  The
    pair subspace is carried up to cutoff + headroom internally so that
    truncation at the boundary does not contaminate amplitudes below the
    cutoff.  Intended for cross-validation at small cutoffs only.
    """
    if theta_terms < 1:
        raise FockError("theta_terms must be >= 1")
    ia = state.index_of(spec.mode_a)
    ib = state.index_of(spec.mode_b)
    theta = spec.theta
    if substeps is None:
        substeps = max(1, math.ceil(theta / 0.01))
    th = theta / substeps
    cap = state.cutoff + headroom
    dim = cap + 1

    # group terms by spectator occupation; each group is a dense pair block
    groups: dict[tuple[int, ...], np.ndarray] = {}
    in_norm_sq = 0.0
    for occ, amp in state.sorted_terms():
        in_norm_sq += abs(amp) ** 2
        spect = tuple(v for i, v in enumerate(occ) if i not in (ia, ib))
        block = groups.setdefault(spect, np.zeros((dim, dim), dtype=complex))
        block[occ[ia], occ[ib]] += amp

    idx = np.arange(dim, dtype=float)
    up = np.sqrt(np.outer(idx[:-1] + 1.0, idx[:-1] + 1.0))  # sqrt((m+1)(n+1))
    tail = 0.0

    def apply_gen(v: np.ndarray) -> np.ndarray:
        # A v with A = a†b† - ab on the pair block
        w = np.zeros_like(v)
        w[1:, 1:] += up * v[:-1, :-1]
        w[:-1, :-1] -= up * v[1:, 1:]
        return w

    for spect, block in groups.items():
        v = block
        for _ in range(substeps):
            acc = v.copy()
            t = v
            for k in range(1, theta_terms + 1):
                t = apply_gen(t) * (th / k)
                acc += t
                if float(np.abs(t).max()) < 1e-20:
                    break
            last = float(np.linalg.norm(t))
            ratio = th * 2.0 * dim / (theta_terms + 1)  # crude next-term ratio
            tail = max(tail, last / max(1e-300, 1.0 - min(ratio, 0.5)) if ratio < 1.0 else last)
            v = acc
        groups[spect] = v

    if tail > tail_warn:
        warnings.warn(
            f"taylor oracle series tail estimate {tail:.2e} exceeds {tail_warn:.0e};"
            " increase theta_terms",
            stacklevel=2,
        )

    spectator_idx = [i for i in range(len(state.modes)) if i not in (ia, ib)]
    out: dict[tuple[int, ...], complex] = {}
    c = state.cutoff
    for spect, v in groups.items():
        occ_list = [0] * len(state.modes)
        for pos, val in zip(spectator_idx, spect):
            occ_list[pos] = val
        mm, nn = np.nonzero(np.abs(v[: c + 1, : c + 1]) ** 2 >= 1e-34)
        for m, n in zip(mm.tolist(), nn.tolist()):
            occ_list[ia] = m
            occ_list[ib] = n
            key = tuple(occ_list)
            out[key] = out.get(key, 0j) + v[m, n]

    out_norm_sq = sum(abs(a) ** 2 for a in out.values())
    leaked = state.leaked_norm + max(0.0, in_norm_sq - out_norm_sq)
    return PureState(state.modes, out, c, leaked)
