"""Photon-number heralding: projection onto detection patterns.

A detection pattern fixes exact photon counts on a subset of modes.
Projection keeps the matching terms, strips the detected modes from the
surviving state, and reports the herald probability separately from the
(normalized) conditional state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .states import (
    EPS_ZERO,
    FockError,
    ModeLabel,
    ModeMismatchError,
    PureState,
    normalize,
)


@dataclass(frozen=True)
class DetectionPattern:
    """Exact photon counts on a strict subset of a state's modes."""

    assignments: dict[ModeLabel, int] = field(default_factory=dict)

    def __post_init__(self):
        for mode, count in self.assignments.items():
            if count < 0:
                raise FockError(f"negative photon count {count} for mode {mode}")

    def sorted_items(self) -> list[tuple[ModeLabel, int]]:
        return sorted(self.assignments.items(), key=lambda kv: kv[0].sort_key())


@dataclass(frozen=True)
class HeraldOutcome:
    """Normalized conditional state plus the herald probability."""

    conditional_state: PureState
    probability: float


def _detected_indices(state: PureState, modes) -> list[int]:
    idx = []
    for mode in modes:
        if mode not in state.modes:
            raise ModeMismatchError(f"detected mode {mode} not in state")
        idx.append(state.index_of(mode))
    if len(idx) >= len(state.modes):
        raise ModeMismatchError("detected modes must be a strict subset")
    return idx


def project(state: PureState, pattern: DetectionPattern) -> HeraldOutcome:
    """Condition on the pattern; zero-probability heralds are a value."""
    items = pattern.sorted_items()
    idx = _detected_indices(state, [m for m, _ in items])
    wanted = {i: c for i, (_, c) in zip(idx, items)}
    for (mode, count) in items:
        if count > state.cutoff:
            raise FockError(f"pattern count {count} on {mode} exceeds cutoff")
    keep_idx = [i for i in range(len(state.modes)) if i not in wanted]
    kept_modes = [state.modes[i] for i in keep_idx]

    terms: dict[tuple[int, ...], complex] = {}
    prob = 0.0
    for occ, amp in state.sorted_terms():
        if any(occ[i] != c for i, c in wanted.items()):
            continue
        prob += amp.real * amp.real + amp.imag * amp.imag
        terms[tuple(occ[i] for i in keep_idx)] = amp

    if prob <= EPS_ZERO:
        empty = PureState(kept_modes, {}, state.cutoff, state.leaked_norm)
        return HeraldOutcome(empty, prob)
    unnorm = PureState(kept_modes, terms, state.cutoff, state.leaked_norm)
    conditional, _ = normalize(unnorm)
    return HeraldOutcome(conditional, prob)


def outcome_distribution(
    state: PureState, detected: list[ModeLabel]
) -> list[tuple[DetectionPattern, float]]:
    """All herald patterns with nonzero weight, in lexicographic order.

    Probabilities sum to the state's squared norm (up to the leaked tail).
    """
    idx = _detected_indices(state, detected)
    weights: dict[tuple[int, ...], float] = {}
    for occ, amp in state.sorted_terms():
        key = tuple(occ[i] for i in idx)
        weights[key] = weights.get(key, 0.0) + (
            amp.real * amp.real + amp.imag * amp.imag
        )
    return [
        (DetectionPattern(dict(zip(detected, counts))), weights[counts])
        for counts in sorted(weights)
    ]
