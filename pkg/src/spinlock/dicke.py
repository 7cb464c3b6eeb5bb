"""Exact collective-spin machinery on the symmetric (Dicke) subspace.

An ensemble of ``n_atoms`` spin-1/2 particles restricted to the fully
symmetric subspace is a single spin J = n_atoms/2 living in n_atoms + 1
dimensions.  Everything here is dense and exact up to rounding, so it can
serve as ground truth for closed-form expressions.

Basis convention: amplitudes are indexed by m descending from +J, i.e.
index 0 is m = +J and index n_atoms is m = -J.  Jz is diagonal in this
order.  One fixed convention prevents silent sign errors in Jy.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy.special import gammaln

from .errors import (
    ConfigError,
    DimensionMismatchError,
    NonHermitianError,
    NumericsError,
)

HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-12
IMAG_TOL = 1e-10
VARIANCE_FLOOR = -1e-10
MAX_ATOMS = 10_000

GENERATOR_NAMES = ("jx", "jy", "jz", "jz2")


@dataclass(frozen=True)
class CollectiveOperator:
    """Dense operator on a collective-spin (or joint) Hilbert space.

    Parameters
    ----------
    entries : complex ndarray, shape (dim, dim)
    hermitian : bool
        If set, Hermiticity is checked at construction to 1e-12.
    """

    entries: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionMismatchError(
                f"operator entries must be square, got shape {entries.shape}"
            )
        if self.hermitian:
            defect = np.max(np.abs(entries - entries.conj().T))
            if defect >= HERMITIAN_TOL:
                raise NonHermitianError(
                    f"operator flagged hermitian but max |A - A^dag| = {defect:.3e}"
                )
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class DickeState:
    """Pure state of the symmetric subspace: one complex amplitude per m."""

    n_atoms: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_atoms < 1:
            raise ConfigError(f"n_atoms must be positive, got {self.n_atoms}")
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size != self.n_atoms + 1:
            raise DimensionMismatchError(
                f"expected {self.n_atoms + 1} amplitudes, got shape {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) >= NORM_TOL:
            raise NumericsError(f"state norm {norm!r} deviates from 1 beyond 1e-12")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def j(self) -> float:
        return self.n_atoms / 2

    @property
    def m_values(self) -> np.ndarray:
        return self.j - np.arange(self.n_atoms + 1)


@dataclass(frozen=True)
class PhaseTriple:
    """Accumulated phases of one interrogation cycle.

    alpha is the twisting phase chi*t, beta the signal/noise phase, gamma the
    drive phase; all in radians.
    """

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ConfigError(f"phase {name} must be finite, got {value!r}")


@dataclass(frozen=True)
class PulseStep:
    """One instantaneous rotation or twisting segment: exp(-i*angle*G)."""

    generator: str
    angle: float

    def __post_init__(self):
        if self.generator not in GENERATOR_NAMES:
            raise ConfigError(
                f"unknown generator {self.generator!r}; expected one of {GENERATOR_NAMES}"
            )


PulseSchedule = Sequence[PulseStep]


@dataclass(frozen=True)
class CollectiveOps:
    """The J = n_atoms/2 angular-momentum matrices plus Jz^2."""

    n_atoms: int
    jx: CollectiveOperator
    jy: CollectiveOperator
    jz: CollectiveOperator
    jz2: CollectiveOperator

    def by_name(self, name: str) -> CollectiveOperator:
        if name not in GENERATOR_NAMES:
            raise ConfigError(f"unknown generator {name!r}")
        return getattr(self, name)


def spin_matrices(dim: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Raw (jx, jy, jz) matrices for the spin-(dim-1)/2 irrep, m descending."""
    j = (dim - 1) / 2
    m = j - np.arange(dim)
    ladder = np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    jplus = np.zeros((dim, dim), dtype=complex)
    jplus[np.arange(dim - 1), np.arange(1, dim)] = ladder
    jminus = jplus.conj().T
    jx = (jplus + jminus) / 2
    jy = (jplus - jminus) / 2j
    jz = np.diag(m.astype(complex))
    return jx, jy, jz


def build_collective_ops(n_atoms: int) -> CollectiveOps:
    """Angular-momentum matrices for J = n_atoms/2 in the m-descending basis.

    Raises
    ------
    ConfigError
        If n_atoms is outside [1, 10_000] (dense storage would not fit).
    """
    if not isinstance(n_atoms, (int, np.integer)) or isinstance(n_atoms, bool):
        raise ConfigError(f"n_atoms must be an integer, got {n_atoms!r}")
    if not 1 <= n_atoms <= MAX_ATOMS:
        raise ConfigError(
            f"n_atoms={n_atoms} outside [1, {MAX_ATOMS}]: dense (n+1)^2 storage infeasible"
        )
    jx, jy, jz = spin_matrices(n_atoms + 1)
    return CollectiveOps(
        n_atoms=n_atoms,
        jx=CollectiveOperator(jx, hermitian=True),
        jy=CollectiveOperator(jy, hermitian=True),
        jz=CollectiveOperator(jz, hermitian=True),
        jz2=CollectiveOperator(jz @ jz, hermitian=True),
    )


def css_state(n_atoms: int, theta: float, phi: float) -> DickeState:
    """Coherent spin state |theta, phi⟩ in the Dicke basis.

    The amplitude at m = J - k is
    sqrt(C(n_atoms, k)) * cos(theta/2)^(n_atoms-k) * (e^{i phi} sin(theta/2))^k.
    Binomial weights are assembled in log space so large ensembles do not
    overflow, then normalized.
    """
    if not 1 <= n_atoms <= MAX_ATOMS:
        raise ConfigError(f"n_atoms={n_atoms} outside [1, {MAX_ATOMS}]")
    k = np.arange(n_atoms + 1)
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    with np.errstate(divide="ignore"):
        log_c = np.log(abs(c)) if c != 0 else -np.inf
        log_s = np.log(abs(s)) if s != 0 else -np.inf
    log_w = 0.5 * (gammaln(n_atoms + 1) - gammaln(k + 1) - gammaln(n_atoms - k + 1))
    log_w[:n_atoms] += (n_atoms - k[:n_atoms]) * log_c  # k = n has no cos factor
    log_w[1:] += k[1:] * log_s  # k = 0 has no sin factor
    signs = np.sign(c) ** (n_atoms - k) * np.sign(s) ** k if (c < 0 or s < 0) else 1.0
    amps = signs * np.exp(log_w - log_w.max()) * np.exp(1j * phi * k)
    amps /= np.linalg.norm(amps)
    return DickeState(n_atoms=n_atoms, amplitudes=amps)


def x_css(n_atoms: int) -> DickeState:
    """The x-polarized CSS (theta = pi/2, phi = 0) every sequence starts from."""
    return css_state(n_atoms, np.pi / 2, 0.0)


def _propagate(generator: np.ndarray, angle: float, vec: np.ndarray) -> np.ndarray:
    """exp(-i*angle*G) @ vec for Hermitian G, via eigendecomposition.

    Diagonal generators (Jz, Jz^2) short-circuit to exact phase factors.
    """
    off_diag = generator - np.diag(np.diag(generator))
    if not off_diag.any():
        return np.exp(-1j * angle * np.diag(generator).real) * vec
    w, v = np.linalg.eigh(generator)
    return v @ (np.exp(-1j * angle * w) * (v.conj().T @ vec))


def evolve_unitary(
    state: DickeState, generator: CollectiveOperator, duration_phase: float
) -> DickeState:
    """Apply exp(-i * duration_phase * generator) to a Dicke state.

    The generator must carry the hermitian flag; evolution is then unitary up
    to rounding with no step-size tuning.
    """
    if not generator.hermitian:
        raise NonHermitianError("evolution generator must be flagged hermitian")
    if generator.dim != state.n_atoms + 1:
        raise DimensionMismatchError(
            f"generator dim {generator.dim} != state dim {state.n_atoms + 1}"
        )
    amps = _propagate(generator.entries, duration_phase, state.amplitudes)
    return DickeState(n_atoms=state.n_atoms, amplitudes=amps)


def expect(state: DickeState, op: CollectiveOperator) -> float:
    """⟨psi|op|psi⟩ for a Hermitian op; the (tiny) imaginary part is discarded."""
    if op.dim != state.n_atoms + 1:
        raise DimensionMismatchError(
            f"operator dim {op.dim} != state dim {state.n_atoms + 1}"
        )
    if not op.hermitian:
        raise NonHermitianError("expect() requires a hermitian-flagged operator")
    value = np.vdot(state.amplitudes, op.entries @ state.amplitudes)
    if abs(value.imag) >= IMAG_TOL:
        raise NumericsError(
            f"expectation has imaginary part {value.imag:.3e} beyond 1e-10"
        )
    return float(value.real)


def variance(state: DickeState, op: CollectiveOperator) -> float:
    """⟨op^2⟩ - ⟨op⟩^2, clamping rounding-level negatives to zero."""
    if op.dim != state.n_atoms + 1:
        raise DimensionMismatchError(
            f"operator dim {op.dim} != state dim {state.n_atoms + 1}"
        )
    if not op.hermitian:
        raise NonHermitianError("variance() requires a hermitian-flagged operator")
    vec = op.entries @ state.amplitudes
    second = np.vdot(vec, vec).real  # ⟨psi|op^2|psi⟩ with op hermitian
    first = np.vdot(state.amplitudes, vec).real
    var = second - first * first
    if var < 0:
        if var <= VARIANCE_FLOOR:
            raise NumericsError(f"variance {var:.3e} below -1e-10: not mere rounding")
        var = 0.0
    return float(var)


def apply_schedule(
    state: DickeState, ops: CollectiveOps, schedule: PulseSchedule
) -> DickeState:
    """Run a pulse schedule (ordered rotations/twists) on a Dicke state."""
    for step in schedule:
        state = evolve_unitary(state, ops.by_name(step.generator), step.angle)
    return state


def schedule_expectations(n_atoms: int, schedule: PulseSchedule) -> dict[str, float]:
    """Dicke-basis expectations {Jx, Jy, Jz, Jz^2} of a schedule run on the x-CSS."""
    ops = build_collective_ops(n_atoms)
    state = apply_schedule(x_css(n_atoms), ops, schedule)
    return {name: expect(state, ops.by_name(name)) for name in GENERATOR_NAMES}


def full_space_oracle(n_atoms: int, schedule: PulseSchedule) -> dict[str, float]:
    """Expectations from an independent 2^n product-space simulation.

    Builds the collective operators as Kronecker sums of single-spin Paulis,
    starts from the product |+x⟩^n, and propagates with scipy's expm (a
    different algorithm from the Dicke path on purpose).  Only feasible for
    n_atoms <= 4; used to validate the symmetric-subspace code.
    """
    if not 1 <= n_atoms <= 4:
        raise ConfigError(f"full-space oracle limited to n_atoms <= 4, got {n_atoms}")
    sx = np.array([[0, 1], [1, 0]], dtype=complex) / 2
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex) / 2
    sz = np.array([[1, 0], [0, -1]], dtype=complex) / 2
    eye = np.eye(2, dtype=complex)

    def collective(single: np.ndarray) -> np.ndarray:
        total = np.zeros((2**n_atoms, 2**n_atoms), dtype=complex)
        for site in range(n_atoms):
            factors = [eye] * n_atoms
            factors[site] = single
            term = factors[0]
            for f in factors[1:]:
                term = np.kron(term, f)
            total += term
        return total

    ops = {"jx": collective(sx), "jy": collective(sy), "jz": collective(sz)}
    ops["jz2"] = ops["jz"] @ ops["jz"]

    psi = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2)
    full = psi
    for _ in range(n_atoms - 1):
        full = np.kron(full, psi)
    for step in schedule:
        full = scipy.linalg.expm(-1j * step.angle * ops[step.generator]) @ full

    return {name: float(np.vdot(full, ops[name] @ full).real) for name in GENERATOR_NAMES}
