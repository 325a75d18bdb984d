"""Initial two-qubit state family, density-matrix validation, Bloch form,
and JSON interchange.

The family is the one-parameter Bell mixture

    rho(0; theta) = 2*xi |psi-><psi-| + 2*eta |phi+><phi+|,

with eta = sin^2(theta)/4 and xi = (3 + cos 2*theta)/8, so eta + xi = 1/2
exactly.  It is an X state with maximally mixed marginals for every theta.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import PAULI_I, PAULIS, dag, hermitian_eigen, tensor

__all__ = [
    "StateParams",
    "make_params",
    "initial_state",
    "BlochForm",
    "bloch_decompose",
    "bloch_compose",
    "InvalidStateError",
    "validate_density_matrix",
    "x_structure_defect",
    "state_to_json",
    "state_from_json",
]

_BELL_PSI_MINUS = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
_BELL_PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


class InvalidStateError(ValueError):
    """A matrix claimed to be a density matrix fails validation."""


@dataclass(frozen=True)
class StateParams:
    """Angle and the two derived mixture weights (eta + xi = 1/2)."""

    theta: float
    eta: float
    xi: float


def make_params(theta: float) -> StateParams:
    """Build StateParams from an angle in radians.

    Any finite angle is accepted; eta and xi depend on theta only through
    sin^2 and cos 2*theta, so theta and pi - theta label the same state.
    """
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError(f"theta must be finite, got {theta}")
    eta = math.sin(theta) ** 2 / 4.0
    xi = (3.0 + math.cos(2.0 * theta)) / 8.0
    return StateParams(theta=theta, eta=eta, xi=xi)


def initial_state(params: StateParams | float) -> np.ndarray:
    """Density matrix of the initial family member."""
    if not isinstance(params, StateParams):
        params = make_params(params)
    rho = 2.0 * params.xi * np.outer(_BELL_PSI_MINUS, _BELL_PSI_MINUS.conj()) + \
        2.0 * params.eta * np.outer(_BELL_PHI_PLUS, _BELL_PHI_PLUS.conj())
    return validate_density_matrix(rho)


@dataclass(frozen=True)
class BlochForm:
    """Local Bloch vectors x (qubit A), y (qubit B) and correlation matrix T."""

    x: np.ndarray
    y: np.ndarray
    T: np.ndarray


def bloch_decompose(rho: np.ndarray) -> BlochForm:
    """Extract x_i = tr(rho sigma_i x I), y_i = tr(rho I x sigma_i),
    t_ij = tr(rho sigma_i x sigma_j)."""
    rho = validate_density_matrix(rho)
    axes = "xyz"
    x = np.empty(3)
    y = np.empty(3)
    T = np.empty((3, 3))
    for i, a in enumerate(axes):
        x[i] = np.trace(rho @ tensor(PAULIS[a], PAULI_I)).real
        y[i] = np.trace(rho @ tensor(PAULI_I, PAULIS[a])).real
        for j, b in enumerate(axes):
            T[i, j] = np.trace(rho @ tensor(PAULIS[a], PAULIS[b])).real
    return BlochForm(x=x, y=y, T=T)


def bloch_compose(form: BlochForm) -> np.ndarray:
    """Rebuild the density matrix from Bloch data."""
    rho = tensor(PAULI_I, PAULI_I).astype(complex)
    for i, a in enumerate("xyz"):
        rho += form.x[i] * tensor(PAULIS[a], PAULI_I)
        rho += form.y[i] * tensor(PAULI_I, PAULIS[a])
        for j, b in enumerate("xyz"):
            rho += form.T[i, j] * tensor(PAULIS[a], PAULIS[b])
    return rho / 4.0


def validate_density_matrix(
    rho: np.ndarray,
    trace_tol: float = 1e-12,
    herm_tol: float = 1e-12,
    eig_floor: float = -1e-10,
) -> np.ndarray:
    """Check trace one, Hermiticity, and positivity; return rho as complex array.

    Raises InvalidStateError with a description of the first violated
    property.  The eigenvalue floor tolerates integrator-sized dust on the
    family's exact zero eigenvalues.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidStateError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho.view(float))):
        raise InvalidStateError("density matrix contains non-finite entries")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise InvalidStateError(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
    herm = np.abs(rho - dag(rho)).max()
    if herm > herm_tol:
        raise InvalidStateError(f"Hermiticity defect {herm:.3e} exceeds {herm_tol}")
    w, _ = hermitian_eigen(rho, tol=herm_tol * 10)
    if w.min() < eig_floor:
        raise InvalidStateError(f"negative eigenvalue {w.min():.3e} below floor {eig_floor}")
    return rho


_NON_X_ENTRIES = [(0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)]


def x_structure_defect(rho: np.ndarray) -> float:
    """Largest magnitude among the eight entries an X state must keep at zero."""
    rho = np.asarray(rho)
    return float(max(abs(rho[i, j]) for i, j in _NON_X_ENTRIES))


def state_to_json(rho: np.ndarray) -> dict:
    """Row-major split-real serialization: {"dim": 4, "re": [...], "im": [...]}."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    return {
        "dim": 4,
        "re": [float(v) for v in rho.real.ravel()],
        "im": [float(v) for v in rho.imag.ravel()],
    }


def state_from_json(data: dict) -> np.ndarray:
    """Inverse of state_to_json (validates the result as a density matrix)."""
    dim = data.get("dim")
    if dim != 4:
        raise ValueError(f"expected dim 4, got {dim!r}")
    re = np.asarray(data["re"], dtype=float)
    im = np.asarray(data["im"], dtype=float)
    if re.size != 16 or im.size != 16:
        raise ValueError("re and im must each hold 16 entries")
    rho = (re + 1j * im).reshape(4, 4)
    return validate_density_matrix(rho)
