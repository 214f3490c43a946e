"""Sparse pure-state algebra over labeled bosonic modes with a hard cutoff.

States are stored as a sparse map from occupation vectors to complex
amplitudes.  Every mode carries the same per-mode photon-number cutoff;
amplitude that any operation pushes past the cutoff (or that pruning
discards) is accumulated in ``leaked_norm`` so the truncation error stays
auditable end to end.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

EPS_DROP = 1e-16   # squared-amplitude pruning threshold
EPS_ZERO = 1e-12   # below this a norm counts as zero
EPS_NUM = 1e-10    # accumulated floating tolerance per protocol run

_POL_ORDER = {None: "", "H": "H", "V": "V"}


class FockError(ValueError):
    """Base class for contract violations in the state algebra."""


class ModeMismatchError(FockError):
    """Mode sets of the operands are incompatible."""


class CutoffExceededError(FockError):
    """An occupation number violates the per-mode cutoff."""


class ZeroNormError(FockError):
    """Operation requires a state with nonzero norm."""


@dataclass(frozen=True, slots=True)
class ModeLabel:
    """Spatial path index plus optional polarization ('H' or 'V')."""

    path: int
    pol: str | None = None

    def __post_init__(self):
        if self.path < 0:
            raise FockError(f"path index must be nonnegative, got {self.path}")
        if self.pol not in (None, "H", "V"):
            raise FockError(f"polarization must be 'H', 'V' or None, got {self.pol!r}")

    def sort_key(self) -> tuple[int, str]:
        return (self.path, _POL_ORDER[self.pol])

    def __str__(self):
        return f"{self.pol}{self.path}" if self.pol else str(self.path)


def canonical_modes(modes: Iterable[ModeLabel]) -> tuple[ModeLabel, ...]:
    """Sort mode labels by (path, polarization) with H before V."""
    return tuple(sorted(modes, key=ModeLabel.sort_key))


def _validate_modes(modes: Sequence[ModeLabel]) -> None:
    if len(set(modes)) != len(modes):
        raise ModeMismatchError(f"duplicate mode labels in {modes}")
    by_path: dict[int, set[bool]] = {}
    for m in modes:
        by_path.setdefault(m.path, set()).add(m.pol is not None)
    for path, kinds in by_path.items():
        if len(kinds) > 1:
            raise ModeMismatchError(
                f"path {path} mixes polarized and unpolarized modes"
            )


class PureState:
    """Sparse superposition of occupation-number basis states.

    Instances are immutable by convention: no method mutates ``self`` and
    all operations return fresh states, so values can be shared freely
    between threads.
    """

    __slots__ = ("modes", "terms", "cutoff", "leaked_norm")

    def __init__(
        self,
        modes: Sequence[ModeLabel],
        terms: Mapping[tuple[int, ...], complex],
        cutoff: int,
        leaked_norm: float = 0.0,
        eps_drop: float = EPS_DROP,
    ):
        modes = tuple(modes)
        _validate_modes(modes)
        order = canonical_modes(modes)
        if order != modes:
            perm = [modes.index(m) for m in order]
            terms = {tuple(occ[p] for p in perm): a for occ, a in terms.items()}
            modes = order
        if cutoff < 0:
            raise FockError(f"cutoff must be nonnegative, got {cutoff}")
        kept: dict[tuple[int, ...], complex] = {}
        leaked = float(leaked_norm)
        for occ, amp in terms.items():
            occ = tuple(occ)
            if len(occ) != len(modes):
                raise ModeMismatchError(
                    f"occupation {occ} has length {len(occ)}, expected {len(modes)}"
                )
            for n in occ:
                if n < 0:
                    raise FockError(f"negative occupation in {occ}")
                if n > cutoff:
                    raise CutoffExceededError(
                        f"occupation {occ} exceeds cutoff {cutoff}"
                    )
            amp = complex(amp)
            mag2 = amp.real * amp.real + amp.imag * amp.imag
            if mag2 < eps_drop:
                leaked += mag2
            else:
                kept[occ] = amp
        self.modes = modes
        self.terms = kept
        self.cutoff = int(cutoff)
        self.leaked_norm = leaked

    # -- queries ---------------------------------------------------------

    def index_of(self, mode: ModeLabel) -> int:
        try:
            return self.modes.index(mode)
        except ValueError:
            raise ModeMismatchError(f"mode {mode} not in state modes {self.modes}")

    def amplitude(self, occ: Sequence[int]) -> complex:
        return self.terms.get(tuple(occ), 0j)

    def norm_sq(self) -> float:
        return sum(a.real * a.real + a.imag * a.imag for a in self.terms.values())

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def sorted_terms(self) -> list[tuple[tuple[int, ...], complex]]:
        """Terms in lexicographic occupation order (deterministic)."""
        return sorted(self.terms.items())

    def __repr__(self):
        parts = [
            f"({a:.4g})|{','.join(map(str, occ))}>"
            for occ, a in self.sorted_terms()[:4]
        ]
        more = "..." if len(self.terms) > 4 else ""
        return (
            f"PureState[{'+'.join(str(m) for m in self.modes)}; cutoff={self.cutoff}; "
            f"{' + '.join(parts)}{more}]"
        )

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "modes": [{"path": m.path, "pol": m.pol} for m in self.modes],
            "cutoff": self.cutoff,
            "leaked_norm": self.leaked_norm,
            "terms": [
                {"occ": list(occ), "re": a.real, "im": a.imag}
                for occ, a in self.sorted_terms()
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "PureState":
        modes = [ModeLabel(m["path"], m.get("pol")) for m in data["modes"]]
        terms = {
            tuple(t["occ"]): complex(t["re"], t["im"]) for t in data["terms"]
        }
        return cls(modes, terms, data["cutoff"], data.get("leaked_norm", 0.0))

    @classmethod
    def from_json(cls, text: str) -> "PureState":
        return cls.from_dict(json.loads(text))


# -- constructors and algebra ---------------------------------------------


def make_basis_state(
    modes: Sequence[ModeLabel], occ: Sequence[int], cutoff: int
) -> PureState:
    """Single occupation-number basis state with amplitude 1."""
    occ = tuple(occ)
    if len(occ) != len(modes):
        raise ModeMismatchError(
            f"occupation length {len(occ)} does not match {len(modes)} modes"
        )
    return PureState(modes, {occ: 1.0 + 0j}, cutoff)


def vacuum_state(modes: Sequence[ModeLabel], cutoff: int) -> PureState:
    return make_basis_state(modes, (0,) * len(modes), cutoff)


def superpose(terms: Sequence[tuple[complex, PureState]]) -> PureState:
    """Linear combination; duplicate occupation vectors merge by addition."""
    if not terms:
        raise FockError("superpose requires at least one term")
    _, first = terms[0]
    for _, st in terms[1:]:
        if st.modes != first.modes:
            raise ModeMismatchError("superpose operands have different mode sets")
        if st.cutoff != first.cutoff:
            raise FockError("superpose operands have different cutoffs")
    acc: dict[tuple[int, ...], complex] = {}
    leaked = 0.0
    for coeff, st in terms:
        coeff = complex(coeff)
        mag2 = coeff.real * coeff.real + coeff.imag * coeff.imag
        leaked += mag2 * st.leaked_norm
        for occ, amp in st.sorted_terms():
            acc[occ] = acc.get(occ, 0j) + coeff * amp
    return PureState(first.modes, acc, first.cutoff, leaked)


def tensor(a: PureState, b: PureState) -> PureState:
    """Tensor product over disjoint mode sets (canonically reordered)."""
    if set(a.modes) & set(b.modes):
        raise ModeMismatchError(
            f"tensor operands share modes: {set(a.modes) & set(b.modes)}"
        )
    if a.cutoff != b.cutoff:
        raise FockError("tensor operands have different cutoffs")
    modes = a.modes + b.modes
    terms: dict[tuple[int, ...], complex] = {}
    for occ_a, amp_a in a.sorted_terms():
        for occ_b, amp_b in b.sorted_terms():
            terms[occ_a + occ_b] = amp_a * amp_b
    return PureState(modes, terms, a.cutoff, a.leaked_norm + b.leaked_norm)


def inner_product(a: PureState, b: PureState) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.modes != b.modes:
        raise ModeMismatchError("inner_product requires identical mode sets")
    small, large = (a, b) if len(a.terms) <= len(b.terms) else (b, a)
    total = 0j
    for occ, _ in small.sorted_terms():
        if occ in large.terms:
            total += a.terms[occ].conjugate() * b.terms[occ]
    return total


def normalize(a: PureState, eps_zero: float = EPS_ZERO) -> tuple[PureState, float]:
    """Rescale to unit norm; returns (normalized state, original norm)."""
    n = a.norm()
    if n <= eps_zero:
        raise ZeroNormError(f"cannot normalize state with norm {n:.3e}")
    if abs(n - 1.0) < 1e-15:
        return a, n
    inv = 1.0 / n
    terms = {occ: amp * inv for occ, amp in a.terms.items()}
    leaked = min(1.0, a.leaked_norm * inv * inv)
    return PureState(a.modes, terms, a.cutoff, leaked), n
