"""No-bunching postselection and the partial-distinguishability trace.

Identical particles can still be told apart by degrees of freedom the
detectors never resolve: arrival time, frequency, which source fired. Those
hidden degrees of freedom enter only through their mutual overlaps, collected
in a Gram matrix G with G[i, j] = <d_i|d_j> for the hidden states of input
particles i and j. G is Hermitian with unit diagonal and positive
semidefinite; G = all-ones means fully indistinguishable particles, G = I
means fully distinguishable ones.

The pipeline is: keep only expansion terms in which every detector fires
exactly once (a coincidence across all detectors), reorder each survivor by
detector, then trace the hidden labels out against G. The trace pairs bra and
ket survivors entry by entry: the weight of |spins_t><spins_u| picks up the
product over detectors of G[label_u(det), label_t(det)], so outcomes whose
label patterns overlap poorly lose their mutual coherence. The trace of the
unnormalized result is the postselection success probability.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .density import DensityMatrix, spin_pattern_index
from .errors import (
    PostselectionImpossibleError,
    UnsupportedConfigurationError,
    ValidationError,
)
from .expansion import ExpandedState, apply_transform, initial_state
from .transform import Spin, TransformSpec

__all__ = [
    "GRAM_HERMITIAN_TOL",
    "GRAM_PSD_TOL",
    "SUCCESS_FLOOR",
    "GramMatrix",
    "gram_from_labels",
    "DelayModel",
    "gram_from_delays",
    "DetectorTerm",
    "PostselectedState",
    "postselect_no_bunching",
    "trace_distinguishability",
    "density_matrix_from_spec",
]

GRAM_HERMITIAN_TOL = 1e-12
GRAM_PSD_TOL = 1e-9
# Success probabilities at or below this are treated as exact destructive
# interference rather than a usable postselection.
SUCCESS_FLOOR = 1e-15


@dataclass(frozen=True)
class GramMatrix:
    """Validated matrix of pairwise overlaps between hidden particle states."""

    overlaps: np.ndarray

    def __post_init__(self):
        g = np.array(self.overlaps, dtype=complex)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] < 1:
            raise ValidationError(f"Gram matrix must be square, got shape {g.shape}")
        herm_defect = float(np.max(np.abs(g - g.conj().T)))
        if herm_defect > GRAM_HERMITIAN_TOL:
            raise ValidationError(
                f"Gram matrix is not Hermitian (defect {herm_defect:.3e})"
            )
        diag_defect = float(np.max(np.abs(np.diag(g) - 1.0)))
        if diag_defect > GRAM_HERMITIAN_TOL:
            raise ValidationError(
                "Gram matrix diagonal must be all ones (a state overlaps itself "
                f"perfectly); max defect {diag_defect:.3e}"
            )
        min_eig = float(np.linalg.eigvalsh(g).min())
        if min_eig < -GRAM_PSD_TOL:
            raise ValidationError(
                f"Gram matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})"
            )
        if (np.abs(g) > 1.0 + 1e-9).any():
            raise ValidationError("Gram matrix entries must have magnitude at most 1")
        g.setflags(write=False)
        object.__setattr__(self, "overlaps", g)

    @property
    def num_particles(self) -> int:
        return self.overlaps.shape[0]

    @classmethod
    def fully_indistinguishable(cls, n: int) -> "GramMatrix":
        """All pairwise overlaps equal to 1."""
        return cls(np.ones((n, n)))

    @classmethod
    def fully_distinguishable(cls, n: int) -> "GramMatrix":
        """All off-diagonal overlaps equal to 0."""
        return cls(np.eye(n))

    @classmethod
    def uniform(cls, n: int, overlap: float) -> "GramMatrix":
        """Every pair of particles shares the same real overlap."""
        g = np.full((n, n), complex(overlap))
        np.fill_diagonal(g, 1.0)
        return cls(g)


def gram_from_labels(labels: Sequence) -> GramMatrix:
    """Gram matrix of particles that are pairwise identical or orthogonal.

    Particles with equal labels overlap perfectly, particles with different
    labels not at all. ``gram_from_labels(("a", "b", "a"))`` says particles
    0 and 2 are clones while particle 1 is distinguishable from both.
    """
    n = len(labels)
    if n == 0:
        raise ValidationError("need at least one label")
    g = np.array(
        [[1.0 if labels[i] == labels[j] else 0.0 for j in range(n)] for i in range(n)]
    )
    return GramMatrix(g)


@dataclass(frozen=True)
class DelayModel:
    """Relative path delays mapped to overlaps by a Gaussian envelope.

    Two wave packets separated by delay difference dL out of coherence length
    Lc overlap by exp(-(dL/Lc)^2). Delays are in the same length unit as the
    coherence length.
    """

    coherence_length: float
    delays: tuple[float, ...]

    def __post_init__(self):
        if not (self.coherence_length > 0.0):
            raise ValidationError(
                f"coherence length must be positive, got {self.coherence_length}"
            )
        delays = tuple(float(d) for d in self.delays)
        if len(delays) == 0:
            raise ValidationError("need at least one delay")
        object.__setattr__(self, "delays", delays)


def gram_from_delays(model: DelayModel) -> GramMatrix:
    """Overlap matrix G[i, j] = exp(-((L_i - L_j) / L_c)^2)."""
    delays = np.asarray(model.delays, dtype=float)
    diff = delays[:, None] - delays[None, :]
    return GramMatrix(np.exp(-((diff / model.coherence_length) ** 2)))


class DetectorTerm(NamedTuple):
    """A surviving outcome, reordered by detector.

    ``spins[d]`` and ``labels[d]`` are the spin and the input-particle label
    of the particle sitting at detector d.
    """

    amplitude: complex
    spins: tuple[int, ...]
    labels: tuple[int, ...]


@dataclass(frozen=True)
class PostselectedState:
    """Expansion terms in which every detector fired exactly once.

    ``raw_weight`` is the sum of |amplitude|^2 over the surviving terms; it
    equals the postselection success probability in the special case of fully
    distinguishable particles, where no two survivors interfere.
    """

    terms: tuple[DetectorTerm, ...]
    num_particles: int
    raw_weight: float


def postselect_no_bunching(state: ExpandedState) -> PostselectedState:
    """Keep terms where the detector assignment is a bijection.

    Amplitudes are carried over unchanged; the particle list of each survivor
    is reordered so that position d holds the particle at detector d. Terms
    that would share both spin and label patterns are merged, though for
    bijective assignments the label pattern already pins down the term.
    """
    if not state.is_transformed:
        raise ValidationError("state must be transformed before postselection")
    if state.num_modes != state.num_particles:
        raise UnsupportedConfigurationError(
            "no-bunching postselection needs as many detectors as particles, got "
            f"{state.num_particles} particles over {state.num_modes} detectors"
        )
    n = state.num_particles
    expected = list(range(n))
    merged: dict[tuple[tuple[int, ...], tuple[int, ...]], complex] = {}
    for term in state.terms:
        detectors = sorted(p.detector for p in term.particles)
        if detectors != expected:
            continue
        by_detector = sorted(term.particles, key=lambda p: p.detector)
        spins = tuple(p.spin for p in by_detector)
        labels = tuple(p.label for p in by_detector)
        key = (spins, labels)
        merged[key] = merged.get(key, complex(0.0)) + term.amplitude
    terms = tuple(
        DetectorTerm(amplitude, spins, labels)
        for (spins, labels), amplitude in merged.items()
    )
    raw_weight = float(sum(abs(t.amplitude) ** 2 for t in terms))
    return PostselectedState(terms=terms, num_particles=n, raw_weight=raw_weight)


def trace_distinguishability(
    survivors: PostselectedState, gram: GramMatrix
) -> tuple[DensityMatrix, float]:
    """Trace the hidden labels out of the surviving outcomes.

    Returns the normalized spin-register density matrix and the postselection
    success probability. Raises PostselectionImpossibleError when the success
    probability vanishes (fully destructive interference).
    """
    n = survivors.num_particles
    if gram.num_particles != n:
        raise ValidationError(
            f"Gram matrix is {gram.num_particles}x{gram.num_particles} but the "
            f"state has {n} particles"
        )
    g = gram.overlaps
    dim = 2**n
    raw = np.zeros((dim, dim), dtype=complex)
    for ket in survivors.terms:
        i = spin_pattern_index(ket.spins)
        for bra in survivors.terms:
            j = spin_pattern_index(bra.spins)
            overlap = complex(1.0)
            for d in range(n):
                overlap *= g[bra.labels[d], ket.labels[d]]
            raw[i, j] += ket.amplitude * bra.amplitude.conjugate() * overlap
    p_success = float(np.trace(raw).real)
    if p_success <= SUCCESS_FLOOR:
        raise PostselectionImpossibleError(
            "the all-detectors coincidence has probability "
            f"{p_success:.3e}; nothing survives postselection"
        )
    return DensityMatrix(raw / p_success), p_success


def density_matrix_from_spec(
    spec: TransformSpec, gram: GramMatrix
) -> tuple[DensityMatrix, float]:
    """Full pipeline: expand, postselect, trace. Convenience wrapper.

    Input spins are taken from the transformation's spin matrix where a row
    is uniform (every preset here is), falling back to DOWN; they are
    overwritten on the way through anyway.
    """
    spins = []
    for row in range(spec.num_particles):
        used = spec.spins[row][spec.spins[row] != -1]
        spins.append(int(used[0]) if used.size else int(Spin.DOWN))
    state = apply_transform(initial_state(spins), spec)
    return trace_distinguishability(postselect_no_bunching(state), gram)
