"""Simulated Pauli tomography: counts, linear inversion, iterative MLE.

Measurement settings are Pauli strings like ``"XYZ"``, one axis per qubit.
For every axis the eigenbasis is listed +1 eigenvector first, so outcome bit
0 always means the +1 eigenvalue; in the Z basis bit 0 is spin DOWN. Outcome
bitstrings follow the same detector-major order as the density-matrix basis.

Counts are drawn per setting from the Born-rule multinomial with an RNG
stream derived from (seed, setting index), which makes runs reproducible and
settings independent of each other. Estimators:

* linear inversion, which averages Pauli expectation values and can return a
  slightly non-positive matrix on finite statistics, and
* a diluted iterative RrhoR maximum-likelihood fit, which always returns a
  proper density matrix and never decreases the log-likelihood between
  iterations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .density import DensityMatrix
from .errors import CountsParseError, IncompleteSettingsError, ValidationError

__all__ = [
    "PAULI_AXES",
    "MeasurementSetting",
    "all_pauli_settings",
    "axis_eigenvectors",
    "born_probabilities",
    "CountRow",
    "CountsTable",
    "simulate_counts",
    "exact_counts",
    "reconstruct_linear",
    "reconstruct_mle",
    "log_likelihood",
    "write_counts",
    "read_counts",
]

PAULI_AXES = "XYZ"

# A measurement setting is a Pauli string, one character per qubit.
MeasurementSetting = str

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

# Eigenbases, +1 eigenvector first. Z's +1 eigenvector is DOWN (bit 0).
_AXIS_VECTORS = {
    "X": np.array([[_INV_SQRT2, _INV_SQRT2], [_INV_SQRT2, -_INV_SQRT2]], dtype=complex),
    "Y": np.array([[_INV_SQRT2, 1j * _INV_SQRT2], [_INV_SQRT2, -1j * _INV_SQRT2]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, 1.0]], dtype=complex),
}

_PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1j], [1j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def axis_eigenvectors(axis: str) -> np.ndarray:
    """2x2 array whose rows are the measurement eigenvectors of one axis."""
    if axis not in _AXIS_VECTORS:
        raise ValidationError(f"unknown measurement axis {axis!r}, expected one of XYZ")
    return _AXIS_VECTORS[axis].copy()


def all_pauli_settings(num_qubits: int) -> list[str]:
    """All 3^N Pauli strings in lexicographic order: informationally complete."""
    if num_qubits < 1:
        raise ValidationError("need at least one qubit")
    return ["".join(axes) for axes in itertools.product(PAULI_AXES, repeat=num_qubits)]


def _validate_setting(setting: str, num_qubits: int | None = None) -> str:
    if not setting or any(axis not in PAULI_AXES for axis in setting):
        raise ValidationError(
            f"setting {setting!r} must be a nonempty string over the axes XYZ"
        )
    if num_qubits is not None and len(setting) != num_qubits:
        raise ValidationError(
            f"setting {setting!r} has {len(setting)} axes, expected {num_qubits}"
        )
    return setting


def _setting_vectors(setting: str) -> np.ndarray:
    """Rows = outcome eigenvectors of the full setting, outcome-index order."""
    rows = np.array([[1.0]], dtype=complex)
    for axis in setting:
        rows = np.kron(rows, _AXIS_VECTORS[axis])
    return rows


def born_probabilities(rho: DensityMatrix, setting: str) -> np.ndarray:
    """Outcome distribution of one setting, clipped and renormalized."""
    _validate_setting(setting, rho.num_qubits)
    vectors = _setting_vectors(setting)
    probs = np.einsum("oi,ij,oj->o", vectors.conj(), rho.matrix, vectors).real
    probs = np.clip(probs, 0.0, None)
    total = probs.sum()
    if not math.isclose(total, 1.0, rel_tol=0.0, abs_tol=1e-9):
        raise ValidationError(f"outcome probabilities sum to {total!r}, expected 1")
    return probs / total


class CountRow(NamedTuple):
    setting: str
    outcome: str
    count: float


@dataclass(frozen=True)
class CountsTable:
    """Tomography outcomes grouped by measurement setting.

    Counts are usually integers from a simulated run; float counts are
    accepted so that infinite-statistics tables (exact probabilities times
    shots) flow through the same estimators. Per-setting totals must match
    ``shots_per_setting``.
    """

    rows: tuple[CountRow, ...]
    shots_per_setting: float
    seed: int | None = None

    def __post_init__(self):
        if not self.rows:
            raise ValidationError("counts table has no rows")
        if not (self.shots_per_setting > 0):
            raise ValidationError("shots_per_setting must be positive")
        rows = tuple(CountRow(str(s), str(o), float(c)) for s, o, c in self.rows)
        width = len(rows[0].setting)
        totals: dict[str, float] = {}
        for row in rows:
            _validate_setting(row.setting, width)
            if len(row.outcome) != width or any(b not in "01" for b in row.outcome):
                raise ValidationError(
                    f"outcome {row.outcome!r} must be a {width}-bit string of 0s and 1s"
                )
            if row.count < 0:
                raise ValidationError(f"negative count in row {row}")
            totals[row.setting] = totals.get(row.setting, 0.0) + row.count
        tol = 1e-6 * max(1.0, float(self.shots_per_setting))
        for setting, total in totals.items():
            if abs(total - float(self.shots_per_setting)) > tol:
                raise ValidationError(
                    f"setting {setting}: counts sum to {total!r}, expected "
                    f"{self.shots_per_setting}"
                )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "shots_per_setting", float(self.shots_per_setting))

    @property
    def num_qubits(self) -> int:
        return len(self.rows[0].setting)

    def settings(self) -> list[str]:
        seen: dict[str, None] = {}
        for row in self.rows:
            seen.setdefault(row.setting, None)
        return list(seen)

    def counts_for(self, setting: str) -> np.ndarray:
        """Counts of one setting as a vector indexed by outcome index."""
        counts = np.zeros(2**self.num_qubits)
        for row in self.rows:
            if row.setting == setting:
                counts[int(row.outcome, 2)] += row.count
        return counts


def _outcome_strings(num_qubits: int) -> list[str]:
    return [format(o, f"0{num_qubits}b") for o in range(2**num_qubits)]


def simulate_counts(
    rho: DensityMatrix,
    settings: Sequence[str] | None = None,
    shots: int = 1000,
    seed: int = 0,
) -> CountsTable:
    """Draw multinomial counts for every setting from the Born distribution.

    Each setting uses its own RNG stream derived from (seed, setting index),
    so the same seed always reproduces the same table regardless of how the
    settings are processed.
    """
    if settings is None:
        settings = all_pauli_settings(rho.num_qubits)
    if not settings:
        raise ValidationError("need at least one measurement setting")
    if shots < 1 or int(shots) != shots:
        raise ValidationError(f"shots must be a positive integer, got {shots!r}")
    if seed < 0 or int(seed) != seed:
        raise ValidationError(f"seed must be a nonnegative integer, got {seed!r}")
    outcomes = _outcome_strings(rho.num_qubits)
    rows = []
    for index, setting in enumerate(settings):
        probs = born_probabilities(rho, setting)
        rng = np.random.default_rng((int(seed), index))
        counts = rng.multinomial(int(shots), probs)
        rows.extend(
            CountRow(setting, outcomes[o], int(c)) for o, c in enumerate(counts)
        )
    return CountsTable(rows=tuple(rows), shots_per_setting=int(shots), seed=int(seed))


def exact_counts(
    rho: DensityMatrix,
    settings: Sequence[str] | None = None,
    shots: float = 1.0,
) -> CountsTable:
    """Infinite-statistics table: exact Born probabilities times shots."""
    if settings is None:
        settings = all_pauli_settings(rho.num_qubits)
    outcomes = _outcome_strings(rho.num_qubits)
    rows = []
    for setting in settings:
        probs = born_probabilities(rho, setting)
        rows.extend(
            CountRow(setting, outcomes[o], float(p * shots))
            for o, p in enumerate(probs)
        )
    return CountsTable(rows=tuple(rows), shots_per_setting=float(shots), seed=None)


def _require_complete(table: CountsTable) -> list[str]:
    """Informational completeness check: every Pauli string must be present."""
    present = set(table.settings())
    required = all_pauli_settings(table.num_qubits)
    missing = [s for s in required if s not in present]
    if missing:
        shown = ", ".join(missing[:6])
        more = "" if len(missing) <= 6 else f" and {len(missing) - 6} more"
        raise IncompleteSettingsError(
            f"settings are not informationally complete; missing {shown}{more}"
        )
    return required


def _support_signs(num_qubits: int, support: tuple[int, ...]) -> np.ndarray:
    """Eigenvalue product over the support qubits for every outcome index."""
    signs = np.ones(2**num_qubits)
    for o in range(2**num_qubits):
        for qubit in support:
            if o >> (num_qubits - 1 - qubit) & 1:
                signs[o] = -signs[o]
    return signs


def reconstruct_linear(table: CountsTable) -> np.ndarray:
    """Linear-inversion estimate from averaged Pauli expectation values.

    Hermitian with unit trace by construction, but finite statistics can push
    eigenvalues slightly negative, so the result is a raw matrix rather than
    a DensityMatrix.
    """
    n = table.num_qubits
    _require_complete(table)
    freq = {}
    for setting in table.settings():
        counts = table.counts_for(setting)
        total = counts.sum()
        if total <= 0:
            raise ValidationError(f"setting {setting} has no counts")
        freq[setting] = counts / total

    dim = 2**n
    estimate = np.eye(dim, dtype=complex)
    for pauli in itertools.product("I" + PAULI_AXES, repeat=n):
        support = tuple(i for i, axis in enumerate(pauli) if axis != "I")
        if not support:
            continue
        signs = _support_signs(n, support)
        values = [
            float(freq[setting] @ signs)
            for setting in freq
            if all(setting[i] == pauli[i] for i in support)
        ]
        expectation = float(np.mean(values))
        op = np.array([[1.0]], dtype=complex)
        for axis in pauli:
            op = np.kron(op, _PAULI_MATRICES[axis])
        estimate += expectation * op
    return estimate / dim


def _stacked_vectors(table: CountsTable) -> tuple[np.ndarray, np.ndarray]:
    """All outcome eigenvectors and aligned counts across the table."""
    blocks = []
    counts = []
    for setting in table.settings():
        blocks.append(_setting_vectors(setting))
        counts.append(table.counts_for(setting))
    return np.vstack(blocks), np.concatenate(counts)


def log_likelihood(matrix: np.ndarray, table: CountsTable) -> float:
    """Multinomial log-likelihood of a candidate state given the counts."""
    vectors, counts = _stacked_vectors(table)
    probs = np.einsum("ki,ij,kj->k", vectors.conj(), matrix, vectors).real
    probs = np.clip(probs, 1e-12, None)
    mask = counts > 0
    return float(np.sum(counts[mask] * np.log(probs[mask])))


def reconstruct_mle(
    table: CountsTable,
    max_iters: int = 1000,
    tol: float = 1e-11,
    dilution: float = 0.5,
) -> DensityMatrix:
    """Diluted iterative RrhoR maximum-likelihood reconstruction.

    Starting from the maximally mixed state, each iteration applies
    rho -> A rho A / tr(...) with A = (1 - lam) I + lam R, where R is the
    likelihood-gradient operator and lam starts at ``dilution``. If a step
    would lower the log-likelihood, lam is halved for that step, so the
    likelihood never decreases. Stops when the per-iteration gain falls
    below ``tol`` or after ``max_iters`` iterations.
    """
    if not (0.0 < dilution <= 1.0):
        raise ValidationError(f"dilution must be in (0, 1], got {dilution}")
    _require_complete(table)
    vectors, counts = _stacked_vectors(table)
    total = counts.sum()
    if total <= 0:
        raise ValidationError("counts table is all zeros")
    frequencies = counts / total

    dim = 2**table.num_qubits
    identity = np.eye(dim, dtype=complex)
    rho = identity / dim

    def likelihood(matrix: np.ndarray) -> float:
        probs = np.einsum("ki,ij,kj->k", vectors.conj(), matrix, vectors).real
        probs = np.clip(probs, 1e-12, None)
        mask = counts > 0
        return float(np.sum(counts[mask] * np.log(probs[mask])))

    current = likelihood(rho)
    for _ in range(max_iters):
        probs = np.einsum("ki,ij,kj->k", vectors.conj(), rho, vectors).real
        probs = np.clip(probs, 1e-12, None)
        ratio = frequencies / probs
        r_op = (vectors * ratio[:, None]).T @ vectors.conj()
        r_op = (r_op + r_op.conj().T) / 2.0

        lam = dilution
        accepted = None
        while lam >= 1e-8:
            step = (1.0 - lam) * identity + lam * r_op
            candidate = step @ rho @ step
            candidate = (candidate + candidate.conj().T) / 2.0
            candidate /= np.trace(candidate).real
            value = likelihood(candidate)
            if value >= current - 1e-12:
                accepted = (candidate, value)
                break
            lam /= 2.0
        if accepted is None:
            break
        gain = accepted[1] - current
        rho, current = accepted
        if gain < tol:
            break
    return DensityMatrix(rho)


def write_counts(table: CountsTable, path) -> None:
    """Persist a counts table as delimited text with a descriptive header."""
    lines = [
        "# identangle tomography counts",
        f"# qubits: {table.num_qubits}",
        f"# shots_per_setting: {_format_count(table.shots_per_setting)}",
        f"# seed: {'none' if table.seed is None else table.seed}",
        "# columns: setting outcome count",
    ]
    for row in table.rows:
        lines.append(f"{row.setting} {row.outcome} {_format_count(row.count)}")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


def _format_count(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def read_counts(path) -> CountsTable:
    """Parse a counts file written by :func:`write_counts`.

    Raises CountsParseError with the 1-based line number of the first
    malformed line; missing headers are reported too.
    """
    shots: float | None = None
    seed: int | None = None
    rows: list[CountRow] = []
    lineno = 0
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw_line in enumerate(handle, start=1):
            line = raw_line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if body.startswith("shots_per_setting:"):
                    value = body.split(":", 1)[1].strip()
                    try:
                        shots = float(value)
                    except ValueError:
                        raise CountsParseError(
                            f"bad shots_per_setting value {value!r}", lineno
                        ) from None
                elif body.startswith("seed:"):
                    value = body.split(":", 1)[1].strip()
                    if value != "none":
                        try:
                            seed = int(value)
                        except ValueError:
                            raise CountsParseError(
                                f"bad seed value {value!r}", lineno
                            ) from None
                continue
            fields = line.split()
            if len(fields) != 3:
                raise CountsParseError(
                    f"expected 'setting outcome count', got {line!r}", lineno
                )
            setting, outcome, count_text = fields
            if any(axis not in PAULI_AXES for axis in setting):
                raise CountsParseError(f"bad setting {setting!r}", lineno)
            if any(bit not in "01" for bit in outcome):
                raise CountsParseError(f"bad outcome bitstring {outcome!r}", lineno)
            try:
                count = float(count_text)
            except ValueError:
                raise CountsParseError(f"bad count {count_text!r}", lineno) from None
            rows.append(CountRow(setting, outcome, count))
    if shots is None:
        raise CountsParseError("missing 'shots_per_setting' header", max(lineno, 1))
    if not rows:
        raise CountsParseError("file contains no count rows", max(lineno, 1))
    try:
        return CountsTable(rows=tuple(rows), shots_per_setting=shots, seed=seed)
    except ValidationError as exc:
        # Per-setting totals off usually means the file was cut short.
        raise CountsParseError(str(exc), lineno) from exc
