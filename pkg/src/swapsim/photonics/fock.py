"""Sparse bosonic Fock states over labeled optical modes.

States live on a truncated few-photon space and are stored as a dict
mapping occupation tuples to complex amplitudes.  All optical elements
(beam splitters, path interferometers, spectral-slot embeddings, loss
channels) are linear-optics isometries applied exactly on that space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EARLY = 0
LATE = 1

NORM_ATOL = 1e-9


@dataclass(frozen=True, order=True)
class ModeLabel:
    """Identity of one bosonic mode.

    wavelength in nm; spatial is the path name; temporal is the time-bin
    index (0 = early); slot distinguishes spectral wavepacket components
    used to express partial indistinguishability.
    """

    wavelength: int
    spatial: str
    temporal: int
    slot: str = "common"


class FockState:
    """Pure (possibly sub-normalized) state over a fixed labeled mode set.

    truncation bounds the total photon number across all modes; loss maps
    keep the state pure by moving photons into explicit environment modes.
    """

    __slots__ = ("modes", "amplitudes", "truncation")

    def __init__(
        self,
        modes: tuple[ModeLabel, ...],
        amplitudes: dict[tuple[int, ...], complex],
        truncation: int,
    ):
        modes = tuple(modes)
        if len(set(modes)) != len(modes):
            raise ValueError("duplicate mode labels")
        if truncation < 0:
            raise ValueError("truncation must be nonnegative")
        clean: dict[tuple[int, ...], complex] = {}
        norm2 = 0.0
        for occ, amp in amplitudes.items():
            occ = tuple(int(n) for n in occ)
            if len(occ) != len(modes):
                raise ValueError(
                    f"occupation tuple {occ} does not match {len(modes)} modes"
                )
            if any(n < 0 for n in occ):
                raise ValueError(f"negative occupation in {occ}")
            if sum(occ) > truncation:
                raise ValueError(
                    f"occupation {occ} exceeds truncation {truncation}"
                )
            clean[occ] = complex(amp)
            norm2 += abs(amp) ** 2
        if norm2 > 1.0 + 1e-6:
            raise ValueError(f"squared norm {norm2} exceeds 1")
        self.modes = modes
        self.amplitudes = clean
        self.truncation = truncation

    @classmethod
    def vacuum(cls, modes: tuple[ModeLabel, ...], truncation: int) -> "FockState":
        return cls(modes, {(0,) * len(modes): 1.0}, truncation)

    def mode_index(self, mode: ModeLabel) -> int:
        return self.modes.index(mode)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def normalized(self) -> "FockState":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero state")
        return FockState(
            self.modes, {o: a / n for o, a in self.amplitudes.items()}, self.truncation
        )

    def prune(self, atol: float = 0.0) -> "FockState":
        """Drop amplitudes with magnitude <= atol (exact zeros by default)."""
        return FockState(
            self.modes,
            {o: a for o, a in self.amplitudes.items() if abs(a) > atol},
            self.truncation,
        )

    def tensor(self, other: "FockState") -> "FockState":
        if set(self.modes) & set(other.modes):
            raise ValueError("tensor factors share mode labels")
        amps: dict[tuple[int, ...], complex] = {}
        for oa, aa in self.amplitudes.items():
            for ob, ab in other.amplitudes.items():
                amps[oa + ob] = aa * ab
        return FockState(
            self.modes + other.modes, amps, self.truncation + other.truncation
        )

    def _aligned_amplitudes(self, other: "FockState") -> dict[tuple[int, ...], complex]:
        """other's amplitudes re-indexed to this state's mode order."""
        if set(self.modes) != set(other.modes):
            raise ValueError("states are defined on different mode sets")
        perm = [other.modes.index(m) for m in self.modes]
        return {
            tuple(occ[p] for p in perm): amp for occ, amp in other.amplitudes.items()
        }

    def inner(self, other: "FockState") -> complex:
        """<self|other>, aligning mode order automatically."""
        theirs = self._aligned_amplitudes(other)
        return sum(
            self.amplitudes[occ].conjugate() * amp
            for occ, amp in theirs.items()
            if occ in self.amplitudes
        )

    def photon_expectation(self, mode: ModeLabel) -> float:
        i = self.mode_index(mode)
        return sum(abs(a) ** 2 * occ[i] for occ, a in self.amplitudes.items())


def _validate_isometry(
    mapping: dict[ModeLabel, tuple[tuple[complex, ModeLabel], ...]],
) -> None:
    cols = {
        src: {tgt: complex(c) for c, tgt in terms} for src, terms in mapping.items()
    }
    for src, col in cols.items():
        if len(col) != len(mapping[src]):
            raise ValueError(f"mapping for {src} repeats a target mode")
        norm2 = sum(abs(c) ** 2 for c in col.values())
        if abs(norm2 - 1.0) > NORM_ATOL:
            raise ValueError(f"mapping column for {src} has norm^2 {norm2}, not 1")
    keys = list(cols)
    for i, a in enumerate(keys):
        for b in keys[i + 1 :]:
            ov = sum(
                cols[a][t].conjugate() * cols[b][t] for t in cols[a] if t in cols[b]
            )
            if abs(ov) > NORM_ATOL:
                raise ValueError(f"mapping columns for {a} and {b} are not orthogonal")


def _power_terms(
    column: tuple[tuple[complex, ModeLabel], ...],
    n: int,
    out_index: dict[ModeLabel, int],
    width: int,
) -> dict[tuple[int, ...], complex]:
    """Multinomial expansion of (sum_j c_j a_j^dag)^n as occupation deltas."""
    terms: dict[tuple[int, ...], complex] = {(0,) * width: 1.0}
    for _ in range(n):
        nxt: dict[tuple[int, ...], complex] = {}
        for occ, coeff in terms.items():
            for c, tgt in column:
                j = out_index[tgt]
                new = list(occ)
                new[j] += 1
                key = tuple(new)
                nxt[key] = nxt.get(key, 0.0) + coeff * c
        terms = nxt
    return terms


def apply_isometry(
    state: FockState,
    mapping: dict[ModeLabel, tuple[tuple[complex, ModeLabel], ...]],
) -> FockState:
    """Apply a mode-space isometry given per-source-mode target columns.

    Modes absent from the mapping pass through unchanged.  Columns must be
    orthonormal so the transform preserves norm and photon number exactly.
    """
    missing = [m for m in mapping if m not in state.modes]
    if missing:
        raise ValueError(f"mapping references modes not in the state: {missing}")
    _validate_isometry(mapping)

    untouched = [m for m in state.modes if m not in mapping]
    new_modes: list[ModeLabel] = []
    for src in state.modes:
        if src in mapping:
            for _, tgt in mapping[src]:
                if tgt not in new_modes:
                    new_modes.append(tgt)
    clash = set(untouched) & set(new_modes)
    if clash:
        raise ValueError(f"mapping targets collide with untouched modes: {clash}")
    out_modes = tuple(untouched + new_modes)
    out_index = {m: i for i, m in enumerate(out_modes)}
    width = len(out_modes)
    n_untouched = len(untouched)

    out_amps: dict[tuple[int, ...], complex] = {}
    power_cache: dict[tuple[ModeLabel, int], dict[tuple[int, ...], complex]] = {}
    for occ, amp in state.amplitudes.items():
        base = [0] * width
        denom = 1.0
        partial: dict[tuple[int, ...], complex] | None = None
        for m, n in zip(state.modes, occ):
            if n == 0:
                continue
            if m not in mapping:
                base[out_index[m]] = n
                continue
            denom *= math.factorial(n)
            key = (m, n)
            if key not in power_cache:
                power_cache[key] = _power_terms(mapping[m], n, out_index, width)
            terms = power_cache[key]
            if partial is None:
                partial = dict(terms)
            else:
                nxt: dict[tuple[int, ...], complex] = {}
                for o1, c1 in partial.items():
                    for o2, c2 in terms.items():
                        key2 = tuple(a + b for a, b in zip(o1, o2))
                        nxt[key2] = nxt.get(key2, 0.0) + c1 * c2
                partial = nxt
        if partial is None:
            partial = {(0,) * width: 1.0}
        scale = amp / math.sqrt(denom)
        for delta, coeff in partial.items():
            occ_out = tuple(
                b + d for b, d in zip(base, delta)
            )
            # sqrt(p!) restores normalized kets on the mapped targets only
            fact = 1.0
            for j in range(n_untouched, width):
                if occ_out[j] > 1:
                    fact *= math.factorial(occ_out[j])
            val = scale * coeff * math.sqrt(fact)
            if val != 0.0:
                out_amps[occ_out] = out_amps.get(occ_out, 0.0) + val
    result = FockState(out_modes, out_amps, state.truncation)
    return result.prune(0.0)


def beam_splitter(
    state: FockState,
    mode_a: ModeLabel,
    mode_b: ModeLabel,
    transmissivity: float = 0.5,
    out_a: ModeLabel | None = None,
    out_b: ModeLabel | None = None,
) -> FockState:
    """Two-mode beam splitter a -> sqrt(t) a' + sqrt(1-t) b',
    b -> sqrt(1-t) a' - sqrt(t) b'.

    Interfering modes must agree in wavelength, temporal bin, and slot;
    output labels default to the input labels.
    """
    if not 0.0 <= transmissivity <= 1.0:
        raise ValueError("transmissivity must be within [0, 1]")
    if (
        mode_a.wavelength != mode_b.wavelength
        or mode_a.temporal != mode_b.temporal
        or mode_a.slot != mode_b.slot
    ):
        raise ValueError(
            f"beam splitter inputs {mode_a} and {mode_b} are distinguishable"
        )
    out_a = out_a if out_a is not None else mode_a
    out_b = out_b if out_b is not None else mode_b
    st = math.sqrt(transmissivity)
    sr = math.sqrt(1.0 - transmissivity)
    mapping = {
        mode_a: ((st, out_a), (sr, out_b)),
        mode_b: ((sr, out_a), (-st, out_b)),
    }
    return apply_isometry(state, mapping)


def _env_label(state: FockState, mode: ModeLabel) -> ModeLabel:
    name = f"env({mode.spatial}.{mode.temporal}.{mode.slot})"
    label = ModeLabel(mode.wavelength, name, mode.temporal, mode.slot)
    while label in state.modes:
        name += "'"
        label = ModeLabel(mode.wavelength, name, mode.temporal, mode.slot)
    return label


def apply_loss(state: FockState, mode: ModeLabel, transmission: float) -> FockState:
    """Photon loss on one mode as a beam splitter into a fresh environment mode.

    The returned state stays pure: lost photons sit in the environment
    mode, which detection and analysis ignore.  Tracing it out (see
    trace_out_branches) recovers binomial per-photon thinning.
    """
    if not 0.0 <= transmission <= 1.0:
        raise ValueError("transmission must be within [0, 1]")
    env = _env_label(state, mode)
    st = math.sqrt(transmission)
    sr = math.sqrt(1.0 - transmission)
    mapping = {mode: ((st, mode), (sr, env))}
    return apply_isometry(state, mapping)


def trace_out_branches(
    state: FockState, drop: tuple[ModeLabel, ...]
) -> list[tuple[float, FockState]]:
    """Trace out modes, returning the exact pure-branch decomposition.

    Branches are grouped by the occupation pattern of the dropped modes;
    each comes back normalized with its probability weight.
    """
    drop_idx = [state.mode_index(m) for m in drop]
    keep_idx = [i for i in range(len(state.modes)) if i not in drop_idx]
    keep_modes = tuple(state.modes[i] for i in keep_idx)
    groups: dict[tuple[int, ...], dict[tuple[int, ...], complex]] = {}
    for occ, amp in state.amplitudes.items():
        key = tuple(occ[i] for i in drop_idx)
        sub = tuple(occ[i] for i in keep_idx)
        groups.setdefault(key, {})[sub] = amp
    branches: list[tuple[float, FockState]] = []
    for key in sorted(groups):
        amps = groups[key]
        weight = sum(abs(a) ** 2 for a in amps.values())
        if weight == 0.0:
            continue
        w = math.sqrt(weight)
        branches.append(
            (
                weight,
                FockState(
                    keep_modes,
                    {o: a / w for o, a in amps.items()},
                    state.truncation,
                ),
            )
        )
    return branches


def fock_basis(n_modes: int, n_max: int) -> list[tuple[int, ...]]:
    """All occupation tuples with total photon number <= n_max, in a
    deterministic order (by total, then lexicographic)."""

    def exact(total: int, slots: int) -> list[tuple[int, ...]]:
        if slots == 1:
            return [(total,)]
        out: list[tuple[int, ...]] = []
        for n in range(total + 1):
            out.extend((n,) + rest for rest in exact(total - n, slots - 1))
        return out

    basis: list[tuple[int, ...]] = []
    for total in range(n_max + 1):
        basis.extend(sorted(exact(total, n_modes)))
    return basis
