"""Distributive expansion of transformed multi-particle states.

Sending particle i through a transformation turns its creation operator into
sum_j t[i, j] * (creation at detector j with spin s[i, j]). The joint state
of N particles is the product of those sums, and expanding the product gives
one term per way of choosing a destination detector for every particle: up to
M^N terms, each with amplitude prod_k t[k, j_k].

Amplitudes here are the raw products of matrix entries. No occupation-number
factors (sqrt(n!) for multiply occupied detectors) are folded in, so terms
where several particles land on the same detector are bookkeeping entries
rather than normalized physical amplitudes. That is deliberate: downstream
processing keeps only the no-bunching terms, where every detector holds one
particle and the raw products are exactly the physical amplitudes.

Each particle in a term remembers three things: which detector it sits at,
its spin, and its label, the index of the input particle it came from. Labels
are what make partial distinguishability possible to track later.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import AlreadyTransformedError, ValidationError
from .transform import Spin, TransformSpec

__all__ = [
    "UNROUTED",
    "SingleParticleKet",
    "ProductTerm",
    "ExpandedState",
    "initial_state",
    "apply_transform",
    "term_count",
    "amplitude_of",
]

# Detector value of a particle that has not been through a transformation yet.
UNROUTED = -1


class SingleParticleKet(NamedTuple):
    detector: int
    spin: int
    label: int


class ProductTerm(NamedTuple):
    amplitude: complex
    particles: tuple[SingleParticleKet, ...]


@dataclass(frozen=True)
class ExpandedState:
    """Sum of product terms for N particles over M detector modes.

    ``num_modes`` is 0 until a transformation has been applied.
    """

    terms: tuple[ProductTerm, ...]
    num_particles: int
    num_modes: int

    @property
    def is_transformed(self) -> bool:
        return self.num_modes > 0


def initial_state(spins: Sequence[Spin | int]) -> ExpandedState:
    """State of N input particles before any transformation.

    One term with amplitude 1; particle k carries label k and the given spin,
    and sits at the UNROUTED sentinel detector.
    """
    if len(spins) == 0:
        raise ValidationError("need at least one particle")
    particles = []
    for k, spin in enumerate(spins):
        spin = int(spin)
        if spin not in (int(Spin.DOWN), int(Spin.UP)):
            raise ValidationError(f"particle {k}: spin must be Spin.DOWN or Spin.UP")
        particles.append(SingleParticleKet(UNROUTED, spin, k))
    term = ProductTerm(complex(1.0), tuple(particles))
    return ExpandedState(terms=(term,), num_particles=len(particles), num_modes=0)


def apply_transform(state: ExpandedState, spec: TransformSpec) -> ExpandedState:
    """Expand the product over all per-particle detector choices.

    Terms come out in lexicographic order of the choice tuple (particle 0's
    detector varies slowest), which keeps results reproducible run to run.
    The input spins are superseded by the transformation's spin matrix; the
    labels survive untouched.
    """
    if state.is_transformed:
        raise AlreadyTransformedError(
            "state already went through a transformation; expansion is single-shot"
        )
    if spec.num_particles != state.num_particles:
        raise ValidationError(
            f"transformation has {spec.num_particles} input rows but the state "
            f"has {state.num_particles} particles"
        )
    t = spec.amplitudes
    s = spec.spins
    n, m = t.shape
    # Zero-amplitude paths cannot be taken, so skip them at the source.
    choices = [[j for j in range(m) if t[k, j] != 0] for k in range(n)]
    terms = []
    for combo in itertools.product(*choices):
        amplitude = complex(1.0)
        particles = []
        for k, j in enumerate(combo):
            amplitude *= complex(t[k, j])
            particles.append(SingleParticleKet(j, int(s[k, j]), k))
        terms.append(ProductTerm(amplitude, tuple(particles)))
    return ExpandedState(terms=tuple(terms), num_particles=n, num_modes=m)


def term_count(state: ExpandedState) -> int:
    return len(state.terms)


def amplitude_of(
    state: ExpandedState, assignment: Sequence[tuple[int, Spin | int]]
) -> complex:
    """Amplitude of the term assigning particle k to (detector, spin) pair k.

    Returns 0 when no term matches. Assignments are matched positionally
    against particle labels 0..N-1.
    """
    if len(assignment) != state.num_particles:
        raise ValidationError(
            f"assignment lists {len(assignment)} particles, state has "
            f"{state.num_particles}"
        )
    wanted = tuple((int(det), int(spin)) for det, spin in assignment)
    for term in state.terms:
        key = tuple((p.detector, p.spin) for p in term.particles)
        if key == wanted:
            return term.amplitude
    return complex(0.0)
