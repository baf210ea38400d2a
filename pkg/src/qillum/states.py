"""Background noise, probe states, and received states for both illumination kinds.

The background is a mixed state written in its own eigenbasis,
``rho_E = sum_i lambda_i |i><i|`` with the lambda_i ascending.  Working in
that basis costs no generality: every construction below depends only on the
spectrum, so matrices here are real diagonals plus rank-one probe projectors.

A target with reflectivity R mixes the probe into the return with ratio
``eta = R^2 / (R^2 + (1-R)^2)``:

* target absent  -> the receiver sees pure background,
* target present -> ``eta * probe + (1 - eta) * background``,

and in the entangled case the channel acts on the signal half only, with the
idler kept intact at the receiver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import partial_trace_first, projector, tensor

CONVENTIONAL = "conventional"
QUANTUM = "quantum"
KINDS = (CONVENTIONAL, QUANTUM)

SPECTRUM_SUM_TOL = 1e-10
MU_NORM_TOL = 1e-10


def eta_from_reflectivity(r: float) -> float:
    """Mixing ratio eta = R^2 / (R^2 + (1-R)^2), monotone on [0, 1]."""
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"reflectivity must lie in [0, 1], got {r!r}")
    return r * r / (r * r + (1.0 - r) * (1.0 - r))


def noise_spectrum(lambdas) -> np.ndarray:
    """Validate a background spectrum: positive, ascending, summing to 1."""
    lam = np.asarray(lambdas, dtype=float).reshape(-1)
    if lam.size < 2:
        raise ValueError("noise spectrum needs dimension >= 2 for a nontrivial detection problem")
    if np.any(lam <= 0.0):
        raise ValueError("noise eigenvalues must be strictly positive")
    if abs(lam.sum() - 1.0) > SPECTRUM_SUM_TOL:
        raise ValueError(f"noise eigenvalues must sum to 1, got {lam.sum()!r}")
    if np.any(np.diff(lam) < 0.0):
        raise ValueError("noise eigenvalues must be in ascending order")
    return lam


def noise_state(lambdas) -> np.ndarray:
    """Background density matrix, diagonal in its eigenbasis."""
    return np.diag(noise_spectrum(lambdas)).astype(complex)


@dataclass(frozen=True)
class ProbeState:
    """Probe description: kind, its density matrix, and the Schmidt amplitudes
    (entangled kind only; None for the single-photon probe)."""

    kind: str
    state: np.ndarray
    mus: np.ndarray | None = None


def conventional_probe(lambdas) -> ProbeState:
    """Single-photon probe: the noise eigenstate with the smallest eigenvalue.

    Ascending order puts that eigenstate at index 0; degenerate minima
    tie-break to index 0 as well.
    """
    lam = noise_spectrum(lambdas)
    d = lam.size
    state = np.zeros((d, d), dtype=complex)
    state[0, 0] = 1.0
    return ProbeState(CONVENTIONAL, state)


def quantum_probe_amplitudes(lambdas) -> np.ndarray:
    """Schmidt amplitudes mu_i = sqrt((1/lambda_i) / sum_j (1/lambda_j)).

    They weight the probe toward the weakly occupied noise directions;
    mu_i^2 * lambda_i is constant in i.
    """
    lam = noise_spectrum(lambdas)
    inv = 1.0 / lam
    mus = np.sqrt(inv / inv.sum())
    if abs(mus @ mus - 1.0) > MU_NORM_TOL:
        raise ValueError("probe amplitudes failed normalization")
    return mus


def quantum_probe(lambdas) -> ProbeState:
    """Entangled signal-idler probe sum_i mu_i |i>|i>, as a d^2 density matrix."""
    mus = quantum_probe_amplitudes(lambdas)
    d = mus.size
    vec = np.zeros(d * d, dtype=complex)
    vec[np.arange(d) * d + np.arange(d)] = mus
    return ProbeState(QUANTUM, projector(vec), mus)


def bell_projector() -> np.ndarray:
    """Projector onto (|00> + |11>)/sqrt(2)."""
    vec = np.zeros(4, dtype=complex)
    vec[0] = vec[3] = 1.0 / np.sqrt(2.0)
    return projector(vec)


def visibility_from_fidelity(fidelity: float) -> float:
    """Invert F = v + (1 - v)/4 for the isotropic mixture weight v.

    Only F in [0.25, 1] maps to a physical v in [0, 1].
    """
    if not 0.25 <= fidelity <= 1.0:
        raise ValueError(f"fidelity must lie in [0.25, 1] for the isotropic model, got {fidelity!r}")
    return (4.0 * fidelity - 1.0) / 3.0


def werner_probe(visibility: float, d: int = 2) -> ProbeState:
    """Imperfect entangled probe v*|Bell><Bell| + (1-v)*I/4 (qubit pairs only).

    The mixture's overlap with the Bell state is v + (1-v)/4, so a source
    characterized by its Bell-state fidelity F maps to v = (4F - 1)/3.
    """
    if d != 2:
        raise ValueError("the isotropic imperfect-probe model is defined for d = 2")
    if not 0.0 <= visibility <= 1.0:
        raise ValueError(f"visibility must lie in [0, 1], got {visibility!r}")
    state = visibility * bell_projector() + (1.0 - visibility) * np.eye(4, dtype=complex) / 4.0
    return ProbeState(QUANTUM, state)


@dataclass(frozen=True)
class Scenario:
    """One point of the detection problem.

    p0 is the prior probability that the target is absent.  Exactly one of
    reflectivity/eta is required at build time (see make_scenario); both are
    stored, with reflectivity None when eta was given directly.
    """

    p0: float
    eta: float
    lambdas: np.ndarray
    probe: ProbeState
    reflectivity: float | None = None
    werner_visibility: float | None = None

    @property
    def p1(self) -> float:
        return 1.0 - self.p0

    @property
    def kind(self) -> str:
        return self.probe.kind

    def record(self) -> dict:
        """Flat key-value form used by the file outputs."""
        return {
            "p0": self.p0,
            "reflectivity": self.reflectivity,
            "eta": self.eta,
            "lambdas": ",".join(repr(x) for x in self.lambdas),
            "kind": self.kind,
            "werner_visibility": self.werner_visibility,
        }


def make_scenario(
    p0: float,
    *,
    reflectivity: float | None = None,
    eta: float | None = None,
    lambdas=(0.5, 0.5),
    kind: str = QUANTUM,
    werner_visibility: float | None = None,
) -> Scenario:
    """Assemble a Scenario, deriving eta from R when R is given.

    werner_visibility switches the quantum probe to the isotropic imperfect
    model (uniform qubit noise only); it is rejected for the conventional kind.
    """
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"p0 must lie in [0, 1], got {p0!r}")
    if (reflectivity is None) == (eta is None):
        raise ValueError("exactly one of reflectivity or eta is required")
    if eta is None:
        eta = eta_from_reflectivity(reflectivity)
    elif not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta!r}")
    lam = noise_spectrum(lambdas)
    if kind == CONVENTIONAL:
        if werner_visibility is not None:
            raise ValueError("werner_visibility applies to the quantum kind only")
        probe = conventional_probe(lam)
    elif kind == QUANTUM:
        if werner_visibility is None:
            probe = quantum_probe(lam)
        else:
            if lam.size != 2 or abs(lam[0] - 0.5) > 1e-12:
                raise ValueError("the imperfect probe model requires uniform qubit noise (0.5, 0.5)")
            probe = werner_probe(werner_visibility)
    else:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    return Scenario(
        p0=p0,
        eta=eta,
        lambdas=lam,
        probe=probe,
        reflectivity=reflectivity,
        werner_visibility=werner_visibility,
    )


def received_states(s: Scenario) -> tuple[np.ndarray, np.ndarray]:
    """Received state pair (rho_absent, rho_present) for a scenario.

    Conventional: (rho_E, eta*rho_probe + (1-eta)*rho_E).
    Quantum: the channel hits the signal factor only, so the absent state is
    rho_E (x) rho_idler with rho_idler the probe's signal-traced marginal, and
    the present state mixes the intact probe in with weight eta.

    Both outputs are convex mixtures of density matrices, hence densities by
    construction.
    """
    rho_e = noise_state(s.lambdas)
    if s.kind == CONVENTIONAL:
        rho0 = rho_e
        rho1 = s.eta * s.probe.state + (1.0 - s.eta) * rho_e
    else:
        d = s.lambdas.size
        rho_idler = partial_trace_first(s.probe.state, d, d)
        rho0 = tensor(rho_e, rho_idler)
        rho1 = s.eta * s.probe.state + (1.0 - s.eta) * rho0
    return rho0, rho1
