"""Transfer-matrix model of the two- and three-branch Zeno gates.

The target photon lives on 2 or 3 spatial branches.  One gate segment is a
weak beam splitter (rotation by a small angle) combined with an absorber
that damps the branch shared with the control photon by exp(-xi).  The
whole gate is the N-th matrix power of the segment.  Two-photon absorption
(control photon present, decay exponent xi_2gamma) freezes the target in
its input branch via the Zeno effect; without the control photon
(xi_1gamma) the target is meant to tunnel to the opposite branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import mat_power

SQRT2 = math.sqrt(2.0)


class DegenerateRootsError(ValueError):
    """Closed-form roots coincide; caller should fall back to mat_power."""


def default_angle(branches: int, segments: int) -> float:
    """Beam-splitter angle that completes the branch transfer in N segments."""
    if branches == 2:
        return math.pi / (2.0 * segments)
    return math.pi / (SQRT2 * segments)


@dataclass(frozen=True)
class GateGeometry:
    """Branch count, segment count N and beam-splitter angle epsilon."""

    branches: int
    segments: int
    angle: float | None = None

    def __post_init__(self):
        if self.branches not in (2, 3):
            raise ValueError("branches must be 2 or 3")
        if self.segments < 1:
            raise ValueError("segments must be a positive integer")
        if self.angle is None:
            object.__setattr__(self, "angle", default_angle(self.branches, self.segments))
        # pi/2 is the N=1 two-branch default and pi/sqrt(2) the N=1
        # three-branch default, so the physical-beam-splitter range (0, pi/2)
        # is widened to (0, pi); the matrix algebra is valid throughout.
        if not 0.0 < self.angle < math.pi:
            raise ValueError("beam-splitter angle must lie in (0, pi)")


@dataclass(frozen=True)
class AbsorberRates:
    """Per-segment amplitude decay exponents; kappa = two_photon/one_photon."""

    one_photon: float
    two_photon: float
    control: float = 0.0

    def __post_init__(self):
        for name in ("one_photon", "two_photon", "control"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} decay exponent must be >= 0")

    @property
    def kappa(self) -> float:
        return self.two_photon / self.one_photon


@dataclass(frozen=True)
class PhotonState:
    """Complex branch amplitudes of the target photon."""

    amplitudes: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def segment_matrix(geometry: GateGeometry, decay: float) -> np.ndarray:
    """One absorber-plus-beam-splitter segment acting on the branch amplitudes.

    `decay` is the amplitude decay exponent xi of the absorber branch; +inf is
    accepted and maps to transmission exp(-xi) = 0 exactly.
    """
    if decay < 0.0:
        raise ValueError("decay exponent must be >= 0")
    e = math.exp(-decay)  # exp(-inf) == 0.0, no overflow involved
    c, s = math.cos(geometry.angle), math.sin(geometry.angle)
    if geometry.branches == 2:
        return np.array([[c, s], [-e * s, e * c]], dtype=complex)
    # lower splitter, absorber on the middle branch, upper splitter
    b_top = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]], dtype=complex)
    b_bot = np.array([[1, 0, 0], [0, c, -s], [0, s, c]], dtype=complex)
    damp = np.diag([1.0, e, 1.0]).astype(complex)
    return b_bot @ damp @ b_top


def gate_matrix(geometry: GateGeometry, decay: float) -> np.ndarray:
    """Full N-segment transfer matrix."""
    return mat_power(segment_matrix(geometry, decay), geometry.segments)


def propagate(
    geometry: GateGeometry,
    rates: AbsorberRates,
    control_present: bool,
    state: PhotonState | np.ndarray,
) -> PhotonState:
    """Send the target photon through the gate.

    The absorber acts with xi_2gamma when the control photon is present and
    with xi_1gamma otherwise.
    """
    amps = state.amplitudes if isinstance(state, PhotonState) else np.asarray(state, dtype=complex)
    if amps.shape != (geometry.branches,):
        raise ValueError("input state dimension does not match the geometry")
    decay = rates.two_photon if control_present else rates.one_photon
    return PhotonState(gate_matrix(geometry, decay) @ amps)


def exact_errors(
    geometry: GateGeometry,
    rates: AbsorberRates,
    input_branch: int = 0,
) -> tuple[float, float]:
    """Exact (P_error_1gamma, P_error_2gamma) from the transfer matrices.

    Without the control photon the gate fails when the target is not found in
    the branch opposite its input; with the control photon it fails when the
    target is not found back in its input branch.

    For the three-branch gate `input_branch` may be 2 (photon entering the
    bottom branch).  Mirroring the gate swaps the branch labels 1<->3 and the
    order of the two splitters inside a segment, which conjugates the segment
    by the index reversal; the mirrored amplitudes are therefore the same
    matrix-power entries read with reversed indices, making the mirror
    symmetry hold bit-exactly.
    """
    m1 = gate_matrix(geometry, rates.one_photon)
    m2 = gate_matrix(geometry, rates.two_photon)
    if geometry.branches == 2:
        if input_branch != 0:
            raise ValueError("two-branch gate input is the upper branch")
        amp1, amp2 = m1[1, 0], m2[0, 0]
    elif input_branch == 0:
        amp1, amp2 = m1[2, 0], m2[0, 0]
    elif input_branch == 2:
        amp1, amp2 = m1[2, 0], m2[0, 0]  # reversal maps (0,2)->(2,0), (2,2)->(0,0)
    else:
        raise ValueError("input_branch must be 0 (top) or 2 (bottom)")
    p1 = 1.0 - abs(amp1) ** 2
    p2 = 1.0 - abs(amp2) ** 2
    return p1, p2


@dataclass(frozen=True)
class ClosedFormFactors:
    """Quadratic-root abbreviations of the closed-form N-segment product."""

    r: complex
    alpha_plus: complex
    alpha_minus: complex
    beta_plus: complex
    beta_minus: complex


def closed_form_factors(angle: float, decay: float) -> ClosedFormFactors:
    e = math.exp(-decay)
    c = math.cos(angle)
    r = complex((e + 1.0) ** 2 * c * c - 4.0 * e) ** 0.5
    return ClosedFormFactors(
        r=r,
        alpha_plus=(e + 1.0) * c + r,
        alpha_minus=(e + 1.0) * c - r,
        beta_plus=(e - 1.0) * c + r,
        beta_minus=(e - 1.0) * c - r,
    )


def closed_form_two_branch(angle: float, decay: float, segments: int) -> np.ndarray:
    """Closed-form N-th power of the two-branch segment matrix.

    Evaluates the eigenvalue form of the segment product; raises
    DegenerateRootsError near coincident roots (|r| < 1e-9), where the
    caller should use mat_power instead.
    """
    f = closed_form_factors(angle, decay)
    if abs(f.r) < 1e-9:
        raise DegenerateRootsError(
            "closed-form roots are degenerate; use mat_power on the segment matrix"
        )
    e = math.exp(-decay)
    s = math.sin(angle)
    # alpha_pm/2 are the segment eigenvalues; powers of the halves avoid
    # overflow of alpha^N and 2^N at large N.
    p = (f.alpha_plus / 2.0) ** segments
    q = (f.alpha_minus / 2.0) ** segments
    return np.array(
        [
            [(f.beta_plus * q - f.beta_minus * p) / (2.0 * f.r), (p - q) * s / f.r],
            [(q - p) * e * s / f.r, (f.beta_plus * p - f.beta_minus * q) / (2.0 * f.r)],
        ],
        dtype=complex,
    )


def first_order_output_two_branch(angle: float, decay: float, segments: int) -> np.ndarray:
    """Output amplitudes for input (1,0), expanded to first order in xi_1gamma."""
    n = segments
    ne = n * angle
    # cos(Ne)*(1 - xi*(N - cot(e)*tan(Ne))/2) written without the tan(Ne)
    # singularity at Ne = pi/2
    upper = math.cos(ne) * (1.0 - decay * n / 2.0) + 0.5 * decay * math.sin(ne) / math.tan(angle)
    lower = -math.sin(ne) * (1.0 - decay * (n + 1.0) / 2.0)
    return np.array([upper, lower], dtype=complex)


def asymptotic_errors(
    geometry: GateGeometry,
    rates: AbsorberRates,
    order: str = "leading",
) -> tuple[float, float]:
    """Large-N truncations of the error probabilities.

    order='leading' keeps the N*xi_1gamma (resp. N*xi_1gamma/2) and
    pi^2/(2 N xi_2gamma) (resp. pi^2/(N xi_2gamma)) terms; order='first' adds
    the first sub-leading corrections.  Intended regime:
    N*xi_2gamma >> 1 >> N*xi_1gamma (not enforced).  A perfect absorber
    (xi_2gamma = inf) keeps only the finite-N discretization term.
    """
    if order not in ("leading", "first"):
        raise ValueError("order must be 'leading' or 'first'")
    n = geometry.segments
    x1, x2 = rates.one_photon, rates.two_photon
    pi2 = math.pi**2
    if math.isinf(x2):
        inv_x2 = 0.0
    elif x2 == 0.0:
        inv_x2 = math.inf  # truncation diverges without any absorber
    else:
        inv_x2 = 1.0 / x2
    if geometry.branches == 2:
        p1 = n * x1
        p2 = pi2 / (2.0 * n) * inv_x2
        if order == "first":
            p1 += x1
            p2 += (2.0 * pi2 - math.pi**4) / (48.0 * n**2)
            p2 += (4.0 * math.pi**4 + math.pi**6) / (192.0 * n**3) * inv_x2
            p2 += pi2 * (x1 + (0.0 if math.isinf(x2) else x2)) / (24.0 * n)
    else:
        p1 = n * x1 / 2.0
        p2 = pi2 / n * inv_x2
        if order == "first":
            p1 += x1
            p2 += (4.0 * pi2 - 3.0 * math.pi**4) / (48.0 * n**2)
            p2 += (2.0 * math.pi**4 + math.pi**6) / (24.0 * n**3) * inv_x2
            p2 += pi2 * (x1 + (0.0 if math.isinf(x2) else x2)) / (12.0 * n)
    return p1, p2


def optimal_rates(kappa: float, segments: int, branches: int = 3) -> tuple[AbsorberRates, float]:
    """Error-balancing decay rates at fixed kappa, and the overall error.

    The two error probabilities trade off against the common absorber scale;
    the large-N balance point gives xi_1gamma = pi/(sqrt(2*kappa)*N) and
    xi_2gamma = kappa*xi_1gamma for two branches (sqrt(2)*pi/(sqrt(kappa)*N)
    for three), with overall error pi/sqrt(2*kappa).
    """
    if kappa <= 0.0:
        raise ValueError("kappa must be positive")
    if branches == 2:
        x1 = math.pi / (math.sqrt(kappa) * SQRT2 * segments)
    elif branches == 3:
        x1 = SQRT2 * math.pi / (math.sqrt(kappa) * segments)
    else:
        raise ValueError("branches must be 2 or 3")
    rates = AbsorberRates(one_photon=x1, two_photon=kappa * x1)
    return rates, overall_error(kappa)


def overall_error(kappa: float) -> float:
    """Balanced large-N error pi/sqrt(2*kappa), both gate variants."""
    return math.pi / math.sqrt(2.0 * kappa)


def required_kappa(p_error: float) -> float:
    """Absorber quality kappa needed for a target error: pi^2/(2*P^2)."""
    if not 0.0 < p_error < 1.0:
        raise ValueError("p_error must lie in (0, 1)")
    return math.pi**2 / (2.0 * p_error**2)


def franson_errors(rates: AbsorberRates, segments: int) -> tuple[float, float]:
    """Large-N error probabilities of the symmetric reference gate.

    That design places absorbers on both photon paths, so the one-photon loss
    enters the two-photon mode as well: P1 = 2*N*xi_1gamma and
    P2 = 4*N*xi_1gamma + 2*pi^2/(N*xi_2gamma).
    """
    n = segments
    p1 = 2.0 * n * rates.one_photon
    inv_x2 = 0.0 if math.isinf(rates.two_photon) else 1.0 / rates.two_photon
    p2 = 4.0 * n * rates.one_photon + 2.0 * math.pi**2 / n * inv_x2
    return p1, p2


def franson_optimal_rates(kappa: float, segments: int) -> AbsorberRates:
    """Rates minimizing the dominant two-photon error of the reference gate."""
    if kappa <= 0.0:
        raise ValueError("kappa must be positive")
    x1 = math.pi / (math.sqrt(kappa) * SQRT2 * segments)
    return AbsorberRates(one_photon=x1, two_photon=kappa * x1)


def franson_overall_error(kappa: float) -> float:
    """Optimized overall error 4*sqrt(2)*pi/sqrt(kappa) of the reference gate."""
    return 4.0 * SQRT2 * math.pi / math.sqrt(kappa)


def franson_required_kappa(p_error: float) -> float:
    """kappa the reference gate needs for a target error: 32*pi^2/P^2."""
    if not 0.0 < p_error < 1.0:
        raise ValueError("p_error must lie in (0, 1)")
    return 32.0 * math.pi**2 / p_error**2


def control_loss_adjusted(kappa: float, segments: int, control_rate: float) -> float:
    """Overall error including control-photon loss: pi/sqrt(2k) + 2*N*xi_c.

    With xi_c as large as the balanced three-branch xi_1gamma the total is
    five times the lossless-control value.
    """
    if control_rate < 0.0:
        raise ValueError("control loss rate must be >= 0")
    return overall_error(kappa) + 2.0 * segments * control_rate


def zeno_demo_survival(segments: int) -> float:
    """Double-well demo: probability cos(pi/2N)**2N of staying put under N measurements."""
    if segments < 1:
        raise ValueError("segments must be a positive integer")
    return math.cos(math.pi / (2.0 * segments)) ** (2 * segments)


def _golden_minimize(f, lo: float, hi: float, tol: float) -> float:
    """Golden-section minimum of a unimodal scalar function on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def optimal_angle(branches: int, segments: int, one_photon_rate: float) -> float:
    """Numerically re-optimized beam-splitter angle at non-zero one-photon loss.

    Minimizes the exact no-control error over epsilon; stays very close to the
    lossless default, which the first-order expansion predicts to remain
    optimal.
    """
    nominal = default_angle(branches, segments)

    def p1_of(angle):
        geom = GateGeometry(branches, segments, angle)
        rates = AbsorberRates(one_photon=one_photon_rate, two_photon=one_photon_rate)
        return exact_errors(geom, rates)[0]

    return _golden_minimize(p1_of, 0.5 * nominal, min(1.5 * nominal, math.pi - 1e-9), 1e-10 * nominal)
