"""Single-shot discrimination of the received state pair.

The whole decision problem is encoded in the weighted difference
``Omega = p0 * rho_absent - p1 * rho_present``:

* its trace norm gives the minimum error probability
  ``P_err = (1 - ||Omega||) / 2``,
* its eigenvalue signs split the parameter space.  When Omega carries both
  positive and negative eigenvalues a nontrivial measurement helps
  ("illuminable", region III); when it is semidefinite the best strategy is
  to announce the likelier hypothesis without measuring ("forbidden",
  regions I and II).

For uniform qubit noise the sign structure collapses to closed-form bands in
(p0, eta); those bands and the general eigenvalue test must agree cell by
cell, which pins down the boundary tie-breaking used below.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import as_hermitian, eigh, projector, trace_inner, trace_norm
from .states import (
    CONVENTIONAL,
    QUANTUM,
    Scenario,
    bell_projector,
    conventional_probe,
    quantum_probe,
    received_states,
)

POVM_TOL = 1e-10
ZERO_EIGENVALUE_TOL = 1e-12

GUESS_PRESENT = "guess_present"
GUESS_ABSENT = "guess_absent"
MEASURE = "measure"


class Region(Enum):
    """Phase-diagram region label.

    I:   absent-prior at or below the lower band edge; guessing "present"
         is already optimal.
    II:  absent-prior at or above the upper band edge; guessing "absent"
         is already optimal.
    III: in between; the optimal measurement beats any direct guess.
    """

    I = "I"
    II = "II"
    III = "III"

    @property
    def direct_guess(self) -> str:
        if self is Region.I:
            return GUESS_PRESENT
        if self is Region.II:
            return GUESS_ABSENT
        return MEASURE

    @property
    def forbidden(self) -> bool:
        return self is not Region.III


@dataclass(frozen=True)
class TwoOutcomePovm:
    """Two-outcome measurement {Pi_absent, Pi_present}: PSD parts of identity."""

    pi_absent: np.ndarray
    pi_present: np.ndarray

    def __post_init__(self):
        pa = as_hermitian(self.pi_absent, tol=POVM_TOL)
        pp = as_hermitian(self.pi_present, tol=POVM_TOL)
        if pa.shape != pp.shape:
            raise ValueError("POVM elements must share a dimension")
        for name, el in (("pi_absent", pa), ("pi_present", pp)):
            lo = eigh(el).eigenvalues[0]
            if lo < -POVM_TOL:
                raise ValueError(f"{name} is not positive semidefinite (min eigenvalue {lo:.3e})")
        gap = np.max(np.abs(pa + pp - np.eye(pa.shape[0])))
        if gap > POVM_TOL:
            raise ValueError(f"POVM elements do not sum to identity (max deviation {gap:.3e})")
        object.__setattr__(self, "pi_absent", pa)
        object.__setattr__(self, "pi_present", pp)

    @property
    def dim(self) -> int:
        return self.pi_absent.shape[0]


def omega(p0: float, rho0, rho1) -> np.ndarray:
    """Decision operator p0 * rho0 - (1 - p0) * rho1."""
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"p0 must lie in [0, 1], got {p0!r}")
    r0 = as_hermitian(rho0)
    r1 = as_hermitian(rho1)
    if r0.shape != r1.shape:
        raise ValueError(f"dimension mismatch: {r0.shape[0]} vs {r1.shape[0]}")
    return p0 * r0 - (1.0 - p0) * r1


def helstrom_error(p0: float, rho0, rho1) -> float:
    """Minimum single-shot error probability (1 - ||p0 rho0 - p1 rho1||) / 2."""
    return 0.5 * (1.0 - trace_norm(omega(p0, rho0, rho1)))


def optimal_povm(kind: str, lambdas) -> TwoOutcomePovm:
    """Optimal two-outcome measurement for the given illumination kind.

    The present-outcome projector is rank one: the minimum-eigenvalue noise
    eigenstate for the conventional kind, the entangled probe vector (the
    Bell projector for uniform qubit noise, i.e. a Bell-state-measurement
    click) for the quantum kind.
    """
    if kind == CONVENTIONAL:
        pi_present = conventional_probe(lambdas).state
    elif kind == QUANTUM:
        pi_present = quantum_probe(lambdas).state
    else:
        raise ValueError(f"unknown kind {kind!r}")
    eye = np.eye(pi_present.shape[0], dtype=complex)
    return TwoOutcomePovm(pi_absent=eye - pi_present, pi_present=pi_present)


def sign_split_povm(om, zero_tol: float = ZERO_EIGENVALUE_TOL) -> TwoOutcomePovm:
    """Measurement that projects onto the strictly positive eigenspace of Omega.

    Guessing "absent" exactly on positive eigendirections attains the
    Helstrom error for any state pair.  Eigenvalues within zero_tol of zero
    carry no risk difference; they are assigned to the present outcome.
    """
    dec = eigh(om)
    d = dec.eigenvalues.size
    pi_absent = np.zeros((d, d), dtype=complex)
    for w, vec in zip(dec.eigenvalues, dec.eigenvectors.T):
        if w > zero_tol:
            pi_absent += projector(vec)
    return TwoOutcomePovm(pi_absent=pi_absent, pi_present=np.eye(d, dtype=complex) - pi_absent)


def povm_error(p0: float, rho0, rho1, m: TwoOutcomePovm) -> float:
    """Average error p0 * tr(Pi_present rho0) + p1 * tr(Pi_absent rho1)."""
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"p0 must lie in [0, 1], got {p0!r}")
    return p0 * trace_inner(m.pi_present, rho0) + (1.0 - p0) * trace_inner(m.pi_absent, rho1)


def _region_from_signs(has_positive: bool, has_negative: bool) -> Region:
    if has_positive and has_negative:
        return Region.III
    if has_negative:
        return Region.I
    # Omega PSD, or numerically zero: direct guess "absent" (ties included)
    return Region.II


def classify_region_from_omega(om, zero_tol: float = ZERO_EIGENVALUE_TOL) -> Region:
    """Region label from the eigenvalue signs of an explicit Omega operator."""
    w = eigh(om).eigenvalues
    return _region_from_signs(bool(w[-1] > zero_tol), bool(w[0] < -zero_tol))


def classify_region(kind: str, p0: float, eta: float, zero_tol: float = ZERO_EIGENVALUE_TOL) -> Region:
    """Closed-form region label for uniform qubit noise.

    The extreme Omega eigenvalues are (p0 - p1(1 + k*eta)) / D and
    (p0 - p1(1 - eta)) / D with (k, D) = (1, 2) conventional, (3, 4) quantum;
    the same sign rule as the general eigenvalue test is applied to them, so
    the two classifiers agree including on band edges.
    """
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"p0 must lie in [0, 1], got {p0!r}")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta!r}")
    if kind == CONVENTIONAL:
        k, dim_total = 1.0, 2.0
    elif kind == QUANTUM:
        k, dim_total = 3.0, 4.0
    else:
        raise ValueError(f"unknown kind {kind!r}")
    p1 = 1.0 - p0
    lo = (p0 - p1 * (1.0 + k * eta)) / dim_total
    hi = (p0 - p1 * (1.0 - eta)) / dim_total
    return _region_from_signs(bool(hi > zero_tol), bool(lo < -zero_tol))


def region_minimum_error(region: Region, p0: float, helstrom: float) -> float:
    """Minimum attainable error: the direct guess in regions I/II, else Helstrom."""
    if region.forbidden:
        return min(p0, 1.0 - p0)
    return helstrom


def closed_form_minimum_error(kind: str, p0: float, eta: float) -> float:
    """Minimum error for uniform qubit noise without an eigensolve.

    Inside region III the optimum is p0/2 + p1(1-eta)/2 for the conventional
    kind and p0/4 + 3 p1 (1-eta)/4 for the quantum kind; outside it is
    min(p0, p1).
    """
    region = classify_region(kind, p0, eta)
    if region.forbidden:
        return min(p0, 1.0 - p0)
    p1 = 1.0 - p0
    if kind == CONVENTIONAL:
        return p0 / 2.0 + p1 * (1.0 - eta) / 2.0
    return p0 / 4.0 + 3.0 * p1 * (1.0 - eta) / 4.0


@dataclass(frozen=True)
class DetectionReport:
    """Analytic summary of one scenario under a fixed measurement."""

    scenario: Scenario
    helstrom_error: float
    povm_error: float
    region: Region
    omega_eigenvalues: np.ndarray

    def record(self) -> dict:
        return {
            "kind": self.scenario.kind,
            "p0": self.scenario.p0,
            "reflectivity": self.scenario.reflectivity,
            "eta": self.scenario.eta,
            "region": self.region.value,
            "helstrom_error": self.helstrom_error,
            "povm_error": self.povm_error,
            "omega_eigenvalues": ";".join(repr(w) for w in self.omega_eigenvalues),
        }


def scenario_povm(s: Scenario) -> TwoOutcomePovm:
    """Measurement the receiver implements for a scenario.

    Imperfect-probe scenarios keep the ideal Bell-state measurement (that is
    what the apparatus realizes); otherwise the kind's optimal projector pair.
    """
    if s.werner_visibility is not None:
        pi_present = bell_projector()
        return TwoOutcomePovm(np.eye(4, dtype=complex) - pi_present, pi_present)
    return optimal_povm(s.kind, s.lambdas)


def detection_report(s: Scenario, m: TwoOutcomePovm | None = None) -> DetectionReport:
    """Evaluate a scenario: Helstrom limit, region, and the POVM's actual error.

    A single eigendecomposition of Omega feeds the trace norm, the sign
    classification, and (through the returned spectrum) any caller-side
    diagnostics.
    """
    rho0, rho1 = received_states(s)
    if m is None:
        m = scenario_povm(s)
    w = eigh(omega(s.p0, rho0, rho1)).eigenvalues
    hel = 0.5 * (1.0 - float(np.abs(w).sum()))
    region = _region_from_signs(
        bool(w[-1] > ZERO_EIGENVALUE_TOL), bool(w[0] < -ZERO_EIGENVALUE_TOL)
    )
    return DetectionReport(
        scenario=s,
        helstrom_error=hel,
        povm_error=povm_error(s.p0, rho0, rho1, m),
        region=region,
        omega_eigenvalues=w,
    )
