"""
Mode-count-agnostic Gaussian-state primitives.

Covariance matrices use the quadrature ordering (q1, p1, q2, p2, ...) with
q = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)), so the vacuum is
0.5 * Identity.  Entropic quantities are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError, SingularSystemError, UnphysicalStateError

SYMMETRY_TOL = 1e-12
PHYSICAL_TOL = 1e-9
SNAP_TOL = 1e-12
CLAMP_TOL = 1e-10
WIGNER_MAX_COND = 1e12


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Real symmetric 2M x 2M second-moment matrix."""

    entries: NDArray[np.float64]

    def __post_init__(self):
        v = np.array(self.entries, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] % 2 or v.shape[0] == 0:
            raise DomainError(f"covariance matrix must be 2M x 2M, got shape {v.shape}")
        scale = max(1.0, float(np.max(np.abs(v))))
        if np.max(np.abs(v - v.T)) > SYMMETRY_TOL * scale:
            raise DomainError("covariance matrix is not symmetric")
        v = 0.5 * (v + v.T)
        v.setflags(write=False)
        object.__setattr__(self, "entries", v)

    @property
    def mode_count(self) -> int:
        return self.entries.shape[0] // 2

    @classmethod
    def vacuum(cls, mode_count: int) -> "CovarianceMatrix":
        return cls(0.5 * np.eye(2 * mode_count))

    def to_json_dict(self) -> dict:
        return {"mode_count": self.mode_count, "entries": self.entries.tolist()}

    @classmethod
    def from_json_dict(cls, data: dict) -> "CovarianceMatrix":
        cm = cls(np.asarray(data["entries"], dtype=float))
        if cm.mode_count != int(data["mode_count"]):
            raise DomainError("mode_count does not match entries")
        return cm

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, CovarianceMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(np.all(self.entries == other.entries))


@dataclass(frozen=True)
class SqueezingResult:
    dq_minus: float
    dq_plus: float
    theta: float  # degrees, (-90, 90], direction of the squeezed axis


@dataclass(frozen=True)
class SymplecticPair:
    d_minus: float
    d_plus: float
    d_tilde_minus: float


def _matrix(cm: CovarianceMatrix | ArrayLike) -> NDArray[np.float64]:
    if isinstance(cm, CovarianceMatrix):
        return cm.entries
    return CovarianceMatrix(np.asarray(cm, dtype=float)).entries


def symplectic_form(mode_count: int) -> NDArray[np.float64]:
    return np.kron(np.eye(mode_count), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def reduce(cm: CovarianceMatrix | ArrayLike, modes: Sequence[int]) -> CovarianceMatrix:
    """Marginal covariance matrix of ``modes``, in the order given."""
    v = _matrix(cm)
    m = v.shape[0] // 2
    modes = [int(k) for k in modes]
    if not modes:
        raise DomainError("at least one mode is required")
    if len(set(modes)) != len(modes):
        raise DomainError(f"mode indices must be distinct: {modes}")
    for k in modes:
        if not 0 <= k < m:
            raise IndexError(f"mode index {k} out of range for {m} modes")
    idx = np.array([[2 * k, 2 * k + 1] for k in modes]).ravel()
    return CovarianceMatrix(v[np.ix_(idx, idx)])


def partial_transpose(cm: CovarianceMatrix | ArrayLike, mode: int) -> CovarianceMatrix:
    """Covariance matrix after time reversal (p -> -p) of one mode."""
    v = np.array(_matrix(cm))
    flip = np.ones(v.shape[0])
    flip[2 * mode + 1] = -1.0
    return CovarianceMatrix(v * np.outer(flip, flip))


def symplectic_eigenvalues(cm: CovarianceMatrix | ArrayLike) -> NDArray[np.float64]:
    """Symplectic spectrum (ascending).

    Uses the Hermitian matrix i V^1/2 Sigma V^1/2, whose eigenvalues are
    +/- the symplectic eigenvalues; unlike the roots of the characteristic
    invariants this stays accurate when the spectrum is degenerate (pure states).
    """
    v = _matrix(cm)
    m = v.shape[0] // 2
    lam, u = np.linalg.eigh(v)
    if lam[0] <= 0.0:
        raise UnphysicalStateError("covariance matrix is not positive definite")
    root = (u * np.sqrt(lam)) @ u.T
    ev = np.linalg.eigvalsh(1j * (root @ symplectic_form(m) @ root))
    return np.sort(np.abs(ev))[::2]


def _two_mode_blocks(v):
    a, b, c = v[0:2, 0:2], v[2:4, 2:4], v[0:2, 2:4]
    return np.linalg.det(a), np.linalg.det(b), np.linalg.det(c), np.linalg.det(v)


def _sym_pair_from_invariants(delta: float, det: float) -> tuple[float, float]:
    disc = delta * delta - 4.0 * det
    if disc < 0.0:
        if disc < -CLAMP_TOL * max(1.0, delta * delta):
            raise UnphysicalStateError(f"negative discriminant {disc:.3e} in symplectic spectrum")
        disc = 0.0
    s = np.sqrt(disc)
    big = 0.5 * (delta + s)
    # small root via the product to avoid cancellation
    small = det / big if big > 0 else 0.0
    if small < 0.0:
        if small < -CLAMP_TOL * max(1.0, big):
            raise UnphysicalStateError("negative squared symplectic eigenvalue")
        small = 0.0
    return float(np.sqrt(small)), float(np.sqrt(big))


def symplectic_pair_invariants(cm2: CovarianceMatrix | ArrayLike) -> SymplecticPair:
    """Two-mode symplectic eigenvalues from the Seralian invariants.

    d-/+^2 = (Delta -/+ sqrt(Delta^2 - 4 det V)) / 2 with Delta = det A + det B
    + 2 det C, and Delta~ with -2 det C for the partial transpose.  Kept as an
    independent route; near a degenerate spectrum it loses about half the
    significant digits.
    """
    v = _matrix(cm2)
    if v.shape != (4, 4):
        raise DomainError("symplectic_pair needs a two-mode covariance matrix")
    det_a, det_b, det_c, det_v = _two_mode_blocks(v)
    d_minus, d_plus = _sym_pair_from_invariants(det_a + det_b + 2.0 * det_c, det_v)
    dt_minus, _ = _sym_pair_from_invariants(det_a + det_b - 2.0 * det_c, det_v)
    return SymplecticPair(d_minus, d_plus, dt_minus)


def symplectic_pair(cm2: CovarianceMatrix | ArrayLike) -> SymplecticPair:
    """Symplectic eigenvalues of a two-mode CM and the smallest one after partial transposition."""
    v = _matrix(cm2)
    if v.shape != (4, 4):
        raise DomainError("symplectic_pair needs a two-mode covariance matrix")
    d_minus, d_plus = symplectic_eigenvalues(v)
    if d_minus < 0.5 - PHYSICAL_TOL * max(1.0, float(np.max(np.abs(v)))):
        raise UnphysicalStateError(f"smallest symplectic eigenvalue {d_minus:.12g} < 0.5")
    d_minus, d_plus = (_snap_vacuum(x) for x in (max(float(d_minus), 0.5), float(d_plus)))
    dt_minus = _snap_vacuum(float(symplectic_eigenvalues(partial_transpose(v, 1))[0]))
    return SymplecticPair(d_minus, d_plus, dt_minus)


def _snap_vacuum(d: float) -> float:
    # eigen-solver roundoff around the vacuum value would leak into entropies
    return 0.5 if abs(d - 0.5) < SNAP_TOL else d


def is_physical(cm: CovarianceMatrix | ArrayLike, tol: float = PHYSICAL_TOL) -> bool:
    """Uncertainty relation V + (i/2) Sigma >= 0."""
    v = _matrix(cm)
    herm = v + 0.5j * symplectic_form(v.shape[0] // 2)
    return bool(np.linalg.eigvalsh(herm)[0] >= -tol * max(1.0, float(np.max(np.abs(v)))))


def q_block(cm: CovarianceMatrix | ArrayLike, l: int, k: int) -> NDArray[np.float64]:
    v = _matrix(cm)
    i, j = 2 * l, 2 * k
    return np.array([[v[i, i], v[i, j]], [v[j, i], v[j, j]]])


def squeezing_ellipse(cm: CovarianceMatrix | ArrayLike, l: int, k: int) -> SqueezingResult:
    """Cross-quadrature squeezing of the (q_l, q_k) plane.

    The squeezed and anti-squeezed standard deviations are the square roots
    of the eigenvalues of the 2x2 q-block; ``theta`` is the direction of the
    squeezed axis measured from q_l towards q_k.
    """
    if l == k:
        raise DomainError("squeezing needs two distinct modes")
    (a, c), (_, b) = q_block(cm, l, k)
    half_diff = 0.5 * (a - b)
    rad = float(np.hypot(half_diff, c))
    lam_plus = 0.5 * (a + b) + rad
    det = a * b - c * c
    lam_minus = det / lam_plus if lam_plus > 0 else 0.0
    if lam_minus < 0.0:
        if lam_minus < -CLAMP_TOL * max(1.0, lam_plus):
            raise UnphysicalStateError("q-block is not positive semidefinite")
        lam_minus = 0.0
    if rad <= 1e-15 * max(1.0, abs(a) + abs(b)):
        theta = 0.0
    else:
        theta = np.degrees(0.5 * np.arctan2(2.0 * c, a - b)) + 90.0
        if theta > 90.0:
            theta -= 180.0
    return SqueezingResult(float(np.sqrt(lam_minus)), float(np.sqrt(lam_plus)), float(theta))


def rotated_variance(cm: CovarianceMatrix | ArrayLike, l: int, k: int, theta_deg: float) -> float:
    """Variance of cos(theta) q_l + sin(theta) q_k."""
    (a, c), (_, b) = q_block(cm, l, k)
    t = np.radians(theta_deg)
    return float(a * np.cos(t) ** 2 + b * np.sin(t) ** 2 + c * np.sin(2 * t))


def gaussian_density(cov: ArrayLike, x: ArrayLike) -> float | NDArray[np.float64]:
    """Zero-mean normal density; ``x`` may carry leading batch dimensions."""
    cov = np.asarray(cov, dtype=float)
    n = cov.shape[0]
    if np.linalg.cond(cov) > WIGNER_MAX_COND:
        raise SingularSystemError("covariance matrix is numerically singular")
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != n:
        raise DomainError(f"point must have {n} components, got {x.shape[-1]}")
    chol = np.linalg.cholesky(cov)
    z = np.linalg.solve(chol, x.reshape(-1, n).T)
    quad = np.sum(z * z, axis=0)
    norm = (2.0 * np.pi) ** (n / 2) * np.prod(np.diag(chol))
    out = np.exp(-0.5 * quad) / norm
    return float(out[0]) if x.ndim == 1 else out.reshape(x.shape[:-1])


def wigner_density(cm: CovarianceMatrix | ArrayLike, x: ArrayLike) -> float | NDArray[np.float64]:
    """Wigner function exp(-x.V^-1.x/2) / ((2 pi)^M sqrt(det V)) of a zero-mean Gaussian state."""
    return gaussian_density(_matrix(cm), x)


def wigner_marginal(cm: CovarianceMatrix | ArrayLike, quadratures: Sequence[int], x: ArrayLike):
    """Wigner function integrated over every quadrature not listed (indices into the 2M vector)."""
    v = _matrix(cm)
    idx = np.asarray(quadratures, dtype=int)
    return gaussian_density(v[np.ix_(idx, idx)], x)


def purity(cm2: CovarianceMatrix | ArrayLike, l: int = 0, k: int = 1) -> float:
    sq = squeezing_ellipse(cm2, l, k)
    return 1.0 / (2.0 * sq.dq_minus * sq.dq_plus)


def entropy_h(x: float) -> float:
    """Von Neumann entropy (bits) of a thermal mode with symplectic eigenvalue ``x``."""
    x = float(x)
    if x < 0.5 - PHYSICAL_TOL:
        raise DomainError(f"entropy_h needs x >= 0.5, got {x}")
    if x <= 0.5:
        return 0.0
    lo = x - 0.5
    return float((x + 0.5) * np.log2(x + 0.5) - lo * np.log2(lo))
